"""Pure-Python SplitMix64 seed implementations.

Two classes live here:

* ``FastSeedPy`` -- the flat fallback used when the compiled core is not
  available.  Same algorithm and bit-exact output as the compiled core.
* ``IndirectSeed`` -- the deliberately indirected variant: every 64-bit
  intermediate of the output mix is stored in a freshly allocated
  single-cell record and read back through one level of indirection,
  nine allocations per call.  It models a randomness library whose
  integer arithmetic is boxed, and is the slow arm of the controlled
  randomness experiment.  It is never compiled; its cost is the point.
"""

from .errors import ContractError

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

_MIX_MUL1 = 0xBF58476D1CE4E5B9
_MIX_MUL2 = 0x94D049BB133111EB
_GAMMA_MUL1 = 0xFF51AFD7ED558CCD
_GAMMA_MUL2 = 0xC4CEB9FE1A85EC53


def mix64(z):
    """SplitMix64 output mix (the variant-13 shift-xor-multiply finalizer)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX_MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_MUL2) & MASK64
    return z ^ (z >> 31)


def mix_gamma(z):
    """Derive an odd gamma word, with the low-entropy fixup."""
    z &= MASK64
    z = ((z ^ (z >> 33)) * _GAMMA_MUL1) & MASK64
    z = ((z ^ (z >> 33)) * _GAMMA_MUL2) & MASK64
    z = (z ^ (z >> 33)) | 1
    if bin(z ^ (z >> 1)).count("1") < 24:
        z ^= 0xAAAAAAAAAAAAAAAA
    return z


class _PySeedBase:
    """State, splitting, range sampling and counters shared by both
    pure-Python variants.  Subclasses provide next_u64."""

    __slots__ = ("_state", "_gamma", "_instr", "_samples", "_binds")

    variant = None  # overridden

    def __init__(self, state, gamma=GOLDEN_GAMMA, instrument=False):
        gamma = gamma & MASK64
        if gamma % 2 == 0:
            raise ContractError("gamma must be odd")
        self._state = state & MASK64
        self._gamma = gamma
        self._instr = bool(instrument)
        self._samples = 0
        self._binds = 0

    # -- state and counters ------------------------------------------------

    @property
    def state(self):
        return self._state

    @property
    def gamma(self):
        return self._gamma

    @property
    def instrumented(self):
        return self._instr

    @property
    def sample_count(self):
        return self._samples

    @property
    def bind_count(self):
        return self._binds

    def reset_counters(self):
        self._samples = 0
        self._binds = 0

    def count_bind(self):
        if self._instr:
            self._binds += 1

    # -- sampling ----------------------------------------------------------

    def next_u64(self):  # pragma: no cover - abstract
        raise NotImplementedError

    def split(self):
        """Advance twice; child gets (mix64(advance1), mix_gamma(advance2))."""
        s = (self._state + self._gamma) & MASK64
        child_state = mix64(s)
        s = (s + self._gamma) & MASK64
        self._state = s
        return type(self)(child_state, mix_gamma(s), self._instr)

    def int_in_range(self, lo, hi):
        """Uniform over [lo, hi] inclusive, by bitmask rejection."""
        if lo > hi:
            raise ContractError("int_in_range: lo > hi (%d > %d)" % (lo, hi))
        span = (hi - lo + 1) & MASK64
        if span == 0:  # the full 2^64 range: raw word reinterpreted as signed
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

    def block(self, n):
        """List of the next n raw outputs (bulk helper for KAT runs)."""
        nxt = self.next_u64
        return [nxt() for _ in range(n)]


class FastSeedPy(_PySeedBase):
    """Flat pure-Python fast variant; bit-exact twin of the compiled core."""

    __slots__ = ()

    variant = "fast"

    def next_u64(self):
        s = (self._state + self._gamma) & MASK64
        self._state = s
        z = ((s ^ (s >> 30)) * _MIX_MUL1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX_MUL2) & MASK64
        z ^= z >> 31
        if self._instr:
            self._samples += 1
        return z


class IndirectSeed(_PySeedBase):
    """Deliberately indirected variant.

    The nine arithmetic steps of advance-and-mix each store their result in
    a fresh one-element list cell, read back by indexing.  Output stream is
    bit-for-bit identical to the fast variant.
    """

    __slots__ = ()

    variant = "slow"

    def next_u64(self):
        c1 = [(self._state + self._gamma) & MASK64]  # advance
        self._state = c1[0]
        c2 = [c1[0] >> 30]
        c3 = [c1[0] ^ c2[0]]
        c4 = [(c3[0] * _MIX_MUL1) & MASK64]
        c5 = [c4[0] >> 27]
        c6 = [c4[0] ^ c5[0]]
        c7 = [(c6[0] * _MIX_MUL2) & MASK64]
        c8 = [c7[0] >> 31]
        c9 = [c7[0] ^ c8[0]]
        if self._instr:
            self._samples += 1
        return c9[0]
