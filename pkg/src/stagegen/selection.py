"""Canonical weighted-choice selection semantics, shared by both backends.

A weighted choice over weights [w0..wn] draws r uniform on [0, S-1] where
S = sum of weights, then selects the first index i whose cumulative weight
exceeds r (half-open scan).  Branch i is therefore chosen with probability
exactly w_i / S.  Both the naive backend's table scan and the staging
backend's emitted comparison chain implement this function.
"""

from .errors import EmptyDistributionError


def select_index(r, weights):
    """First index i with w0 + ... + wi > r."""
    cum = 0
    for i, w in enumerate(weights):
        cum += w
        if cum > r:
            return i
    raise EmptyDistributionError(
        "selection draw %d not covered by weights %r" % (r, list(weights)))
