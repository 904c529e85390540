"""The naive monadic generator backend.

A generator is a sampling procedure run(size, seed) stored as a dynamically
dispatched callable.  This backend deliberately keeps the abstraction costs
of the classic combinator style -- every bind execution allocates a fresh
continuation generator, every weighted choice materializes its cumulative
table -- because it is the experimental control the staging backend is
measured against.  Do not optimize it.

Determinism contract: equal (size, seed state) give equal output values and
equal numbers of raw PRNG draws; all randomness flows through the seed
argument.
"""

from .errors import ContractError, EmptyDistributionError


class BaselineGen:
    """A composable sampling procedure from (size, seed) to a value."""

    __slots__ = ("run",)

    def __init__(self, run):
        self.run = run


def b_return(x):
    """Constant generator; consumes no randomness."""
    def run(size, seed):
        return x
    return BaselineGen(run)


def b_bind(g, k):
    """Run g, pass its result to k, run the generator k builds.

    Every execution counts one bind and constructs the continuation
    generator afresh (k(a) below): the allocation behavior under study.
    """
    def run(size, seed):
        seed.count_bind()
        a = g.run(size, seed)
        return k(a).run(size, seed)
    return BaselineGen(run)


def b_int(lo, hi):
    """Uniform integer in [lo, hi]; delegates exactly to the seed's
    range sampler and ignores size."""
    def run(size, seed):
        return seed.int_in_range(lo, hi)
    return BaselineGen(run)


def b_size():
    """Read the ambient size parameter; consumes no randomness."""
    def run(size, seed):
        return size
    return BaselineGen(run)


def b_with_size(n, g):
    """Run g with the size parameter replaced by n."""
    if n < 0:
        raise ContractError("with_size: negative size %d" % n)
    def run(size, seed):
        return g.run(n, seed)
    return BaselineGen(run)


def b_weighted_union(choices):
    """Weighted choice among (weight, generator) pairs.

    Draws r in [0, S-1] and takes the first branch whose cumulative weight
    exceeds r (see stagegen.selection).  The cumulative table is built per
    execution, on purpose.
    """
    choices = list(choices)
    if not choices:
        raise ContractError("weighted_union: empty choice list")
    def run(size, seed):
        cum = []
        total = 0
        for w, _ in choices:
            total += w
            cum.append(total)
        if total <= 0:
            raise EmptyDistributionError(
                "weighted choice: total weight is zero")
        r = seed.int_in_range(0, total - 1)
        for i, c in enumerate(cum):
            if c > r:
                return choices[i][1].run(size, seed)
        raise AssertionError("unreachable weighted choice")
    return BaselineGen(run)


def b_fixed_point(f):
    """Tie a recursive knot: returns g with g = f(g) by lazy self-reference.

    f runs exactly once, against a handle whose run defers to the finished
    generator; recursion depth is bounded only by the generator's own size
    or stopping logic.
    """
    def run_handle(size, seed):
        return result.run(size, seed)
    result = f(BaselineGen(run_handle))
    return result


def b_run(g, size, seed):
    """Execute a generator, mutating the seed."""
    if size < 0:
        raise ContractError("run: negative size %d" % size)
    return g.run(size, seed)
