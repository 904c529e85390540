# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled SplitMix64 core: the flat fast-variant seed.

Bit-exact twin of stagegen._purerand.FastSeedPy with all arithmetic on C
uint64 words; Python integers are boxed only at the call boundary.
"""

from libc.stdint cimport uint64_t, int64_t

from .errors import ContractError

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15u
cdef uint64_t MIX_MUL1 = 0xBF58476D1CE4E5B9u
cdef uint64_t MIX_MUL2 = 0x94D049BB133111EBu
cdef uint64_t GAMMA_MUL1 = 0xFF51AFD7ED558CCDu
cdef uint64_t GAMMA_MUL2 = 0xC4CEB9FE1A85EC53u

GOLDEN_GAMMA = GOLDEN


cdef inline uint64_t _mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * MIX_MUL1
    z = (z ^ (z >> 27)) * MIX_MUL2
    return z ^ (z >> 31)


cdef inline int _popcount64(uint64_t x) noexcept nogil:
    x = x - ((x >> 1) & 0x5555555555555555u)
    x = (x & 0x3333333333333333u) + ((x >> 2) & 0x3333333333333333u)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0Fu
    return <int>((x * 0x0101010101010101u) >> 56)


cdef inline uint64_t _mix_gamma(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 33)) * GAMMA_MUL1
    z = (z ^ (z >> 33)) * GAMMA_MUL2
    z = (z ^ (z >> 33)) | 1u
    if _popcount64(z ^ (z >> 1)) < 24:
        z ^= 0xAAAAAAAAAAAAAAAAu
    return z


cdef class FastSeed:
    cdef uint64_t _state
    cdef uint64_t _gamma
    cdef uint64_t _samples
    cdef uint64_t _binds
    cdef bint _instr

    variant = "fast"

    def __init__(self, state, gamma=GOLDEN, instrument=False):
        cdef uint64_t g = <uint64_t>(int(gamma) & 0xFFFFFFFFFFFFFFFF)
        if g % 2 == 0:
            raise ContractError("gamma must be odd")
        self._state = <uint64_t>(int(state) & 0xFFFFFFFFFFFFFFFF)
        self._gamma = g
        self._instr = bool(instrument)
        self._samples = 0
        self._binds = 0

    cdef inline uint64_t _next(self):
        self._state += self._gamma
        if self._instr:
            self._samples += 1
        return _mix64(self._state)

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

    def next_u64(self):
        return self._next()

    def split(self):
        self._state += self._gamma
        cdef uint64_t child_state = _mix64(self._state)
        self._state += self._gamma
        cdef uint64_t child_gamma = _mix_gamma(self._state)
        cdef FastSeed child = FastSeed.__new__(FastSeed)
        child._state = child_state
        child._gamma = child_gamma
        child._instr = self._instr
        child._samples = 0
        child._binds = 0
        return child

    def int_in_range(self, long long lo, long long hi):
        if lo > hi:
            raise ContractError(
                "int_in_range: lo > hi (%d > %d)" % (lo, hi))
        cdef uint64_t span = (<uint64_t>hi) - (<uint64_t>lo) + 1u
        cdef uint64_t mask, draw
        if span == 0:  # full 2^64 range: raw word reinterpreted as signed
            return <int64_t>self._next()
        mask = span - 1
        mask |= mask >> 1
        mask |= mask >> 2
        mask |= mask >> 4
        mask |= mask >> 8
        mask |= mask >> 16
        mask |= mask >> 32
        while True:
            draw = self._next() & mask
            if draw < span:
                return <int64_t>((<uint64_t>lo) + draw)

    def block(self, Py_ssize_t n):
        cdef Py_ssize_t i
        out = []
        for i in range(n):
            out.append(self._next())
        return out
