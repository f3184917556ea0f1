"""The q-ary entropy function and its inverse on ``[0, 1 - 1/q]``."""

from __future__ import annotations

import math

from covrad.errors import InvalidInputError

INVERSE_ATOL = 1e-12


def entropy_hq(q: int, x: float) -> float:
    """``H_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x)``, with ``H_q(0) = 0``."""
    if q < 2:
        raise InvalidInputError(f"q must be >= 2, got {q}")
    if not 0.0 <= x <= 1.0:
        raise InvalidInputError(f"x must lie in [0, 1], got {x}")
    lq = math.log(q)
    h = 0.0
    if x > 0.0:
        h += x * math.log(q - 1) - x * math.log(x)
    if x < 1.0:
        h -= (1.0 - x) * math.log1p(-x)
    return h / lq


def entropy_hq_inverse(q: int, y: float) -> float:
    """The unique ``x`` in ``[0, 1 - 1/q]`` with ``H_q(x) = y``, by bisection."""
    if q < 2:
        raise InvalidInputError(f"q must be >= 2, got {q}")
    if not 0.0 <= y <= 1.0:
        raise InvalidInputError(f"y must lie in [0, 1], got {y}")
    lo, hi = 0.0, 1.0 - 1.0 / q
    if y == 0.0:
        return 0.0
    if y >= 1.0:
        return hi
    # H_q is increasing on [0, 1-1/q]
    while hi - lo > INVERSE_ATOL:
        mid = 0.5 * (lo + hi)
        if entropy_hq(q, mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
