"""Adaptive truncation of eigenfunction series.

A series sum_{n>=0} t_n is cut off at the first level N (at least
MIN_LEVEL) where the next term and the sum of the next two terms are both
small relative to everything accumulated so far:

    |t_{N+1}| <= eps |S_N|   and   |t_{N+1} + t_{N+2}| <= eps |S_N|,

with S_N = sum_{n<=N} t_n.  The two-term look-ahead guards against the
near-cancellation of consecutive terms of alternating-sign expansions.
The alternative single-term reading (first condition only) is kept behind
``rule="single_term"``.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError

__all__ = ["MIN_LEVEL", "stop_level", "truncate_terms", "weight_cutoff"]

MIN_LEVEL = 2  # always keep at least levels 0..2 (three terms)

TWO_TERM = "two_term"
SINGLE_TERM = "single_term"


def stop_level(terms: np.ndarray, eps: float, rule: str = TWO_TERM) -> tuple[int, bool]:
    """First admissible truncation level for the given term sequence.

    Returns ``(level, converged)``.  When the rule never fires within the
    supplied terms (the last two entries are needed as look-ahead and can
    never themselves be stopping levels), the level is the last index and
    ``converged`` is False: with a capped coefficient supply the caller
    simply uses every available term.
    """
    terms = np.asarray(terms, dtype=float)
    n_terms = terms.size
    if n_terms == 0:
        raise ValueError("empty term sequence")
    last = n_terms - 1
    if n_terms < MIN_LEVEL + 3:
        return last, False
    partial = np.cumsum(terms)
    scale = eps * np.abs(partial[MIN_LEVEL:-2])
    look1 = np.abs(terms[MIN_LEVEL + 1 : -1])
    look2 = np.abs(terms[MIN_LEVEL + 1 : -1] + terms[MIN_LEVEL + 2 :])
    if rule == TWO_TERM:
        ok = (look1 <= scale) & (look2 <= scale)
    elif rule == SINGLE_TERM:
        ok = look1 <= scale
    else:
        raise ValueError(f"unknown truncation rule {rule!r}")
    hits = np.nonzero(ok)[0]
    if hits.size == 0:
        return last, False
    return int(hits[0]) + MIN_LEVEL, True


def truncate_terms(
    terms: np.ndarray, eps: float, rule: str = TWO_TERM
) -> tuple[float, int, bool]:
    """Truncated value, stop level, and convergence flag for a term sequence."""
    level, converged = stop_level(terms, eps, rule)
    return float(np.sum(terms[: level + 1])), level, converged


def weight_cutoff(
    weight_fn,
    eps: float,
    rule: str = TWO_TERM,
    block: int = 32,
    hard_cap: int = 2000,
) -> int:
    """Truncation level for a sum dominated termwise by the weights.

    ``weight_fn(n_hi)`` must return the nonnegative majorant weights for
    indices 0..n_hi.  Used for the inner sums of expansion-route strike
    projections, where the overlap factors are bounded by one and the
    weights p_m e^{-phi(lambda_m) delta} carry all the decay.
    """
    n_hi = block
    while True:
        weights = np.abs(weight_fn(n_hi))
        level, converged = stop_level(weights, eps, rule)
        if converged:
            return level
        if n_hi >= hard_cap:
            raise ConvergenceError(
                f"inner-series weights did not satisfy the truncation rule by n={hard_cap}"
            )
        n_hi = min(2 * n_hi, hard_cap)
