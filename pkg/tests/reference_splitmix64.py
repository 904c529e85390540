"""Independent reference SplitMix64, used as the known-answer oracle.

Written directly from the published SplitMix64 algorithm (mix64 "variant 13"
finalizer, golden-ratio gamma, DotMix-style gamma mixing with the low-entropy
fixup), deliberately kept separate from the library under test.  Tests compare
library output against this module; do not import library code here.
"""

MASK64 = (1 << 64) - 1

GOLDEN_GAMMA = 0x9E3779B97F4A7C15

_MIX13_MUL1 = 0xBF58476D1CE4E5B9
_MIX13_MUL2 = 0x94D049BB133111EB

_MURMUR3_MUL1 = 0xFF51AFD7ED558CCD
_MURMUR3_MUL2 = 0xC4CEB9FE1A85EC53


def mix64(z):
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX13_MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX13_MUL2) & MASK64
    return z ^ (z >> 31)


def mix_gamma(z):
    z &= MASK64
    z = ((z ^ (z >> 33)) * _MURMUR3_MUL1) & MASK64
    z = ((z ^ (z >> 33)) * _MURMUR3_MUL2) & MASK64
    z = (z ^ (z >> 33)) | 1
    # Low-entropy fixup: require >= 24 bit transitions in the gamma word.
    if bin(z ^ (z >> 1)).count("1") < 24:
        z ^= 0xAAAAAAAAAAAAAAAA
    return z


class ReferenceSplitMix64:
    """Minimal sequential/splittable SplitMix64 state machine."""

    def __init__(self, state, gamma=GOLDEN_GAMMA):
        self.state = state & MASK64
        self.gamma = gamma & MASK64

    def _next_state(self):
        self.state = (self.state + self.gamma) & MASK64
        return self.state

    def next_u64(self):
        return mix64(self._next_state())

    def split(self):
        child_state = mix64(self._next_state())
        child_gamma = mix_gamma(self._next_state())
        return ReferenceSplitMix64(child_state, child_gamma)

    def int_in_range(self, lo, hi):
        """Bitmask-rejection draw, uniform over [lo, hi] inclusive."""
        if lo > hi:
            raise ValueError("lo > hi")
        span = (hi - lo + 1) & MASK64
        if span == 0:  # full 64-bit range: reinterpret raw word as signed
            raw = self.next_u64()
            return raw - (1 << 64) if raw >= (1 << 63) else raw
        mask = span - 1
        mask |= mask >> 1
        mask |= mask >> 2
        mask |= mask >> 4
        mask |= mask >> 8
        mask |= mask >> 16
        mask |= mask >> 32
        while True:
            draw = self.next_u64() & mask
            if draw < span:
                return lo + draw


def stream(seed_value, count):
    rng = ReferenceSplitMix64(seed_value)
    return [rng.next_u64() for _ in range(count)]
