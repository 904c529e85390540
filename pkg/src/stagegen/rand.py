"""Splittable SplitMix64 randomness core.

A seed is single-owner mutable state: the sole source of run-time
nondeterminism for every generator in this package.  Two observationally
identical variants exist:

* ``fast`` -- flat arithmetic.  Backed by the compiled extension when it is
  importable, otherwise by a pure-Python twin (selection happens at import;
  set STAGEGEN_PURE_PYTHON=1 to force the fallback).
* ``slow`` -- the deliberately indirected implementation (nine single-cell
  allocations per output word), always pure Python.

Both produce bit-for-bit identical streams for equal (state, gamma)
histories, which is what makes the fast-vs-slow randomness experiment a
controlled one.
"""

import os

from ._purerand import (
    GOLDEN_GAMMA,
    MASK64,
    FastSeedPy,
    IndirectSeed,
    mix64,
    mix_gamma,
)

VARIANT_FAST = "fast"
VARIANT_SLOW = "slow"
VARIANTS = (VARIANT_FAST, VARIANT_SLOW)

_force_pure = os.environ.get("STAGEGEN_PURE_PYTHON", "") not in ("", "0")

if not _force_pure:
    try:
        from ._fastrand import FastSeed as _FastImpl

        COMPILED_CORE = True
    except ImportError:  # source tree without a built extension
        _FastImpl = FastSeedPy
        COMPILED_CORE = False
else:
    _FastImpl = FastSeedPy
    COMPILED_CORE = False

FastSeed = _FastImpl


def seed_of_u64(value, variant=VARIANT_FAST, instrument=False):
    """Deterministic seed construction: state = value, gamma = golden gamma."""
    return seed_from_state(int(value) & MASK64, GOLDEN_GAMMA,
                           variant=variant, instrument=instrument)


def seed_from_state(state, gamma, variant=VARIANT_FAST, instrument=False):
    if variant == VARIANT_FAST:
        return _FastImpl(state, gamma, instrument)
    if variant == VARIANT_SLOW:
        return IndirectSeed(state, gamma, instrument)
    raise ValueError("unknown seed variant: %r" % (variant,))


def end_state(seed):
    """The (state, gamma) pair, for end-state equality checks."""
    return (seed.state, seed.gamma)


def kat_words(seed_value, count, variant=VARIANT_FAST):
    """The first `count` raw outputs from seed_of_u64(seed_value)."""
    return seed_of_u64(seed_value, variant).block(count)


def format_kat(words):
    """KAT vector file format: one lowercase hex 64-bit word per line."""
    return "".join("%016x\n" % w for w in words)


def parse_kat(text):
    return [int(line, 16) for line in text.split() if line.strip()]
