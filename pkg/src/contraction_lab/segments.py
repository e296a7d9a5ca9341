"""Circle maxima and segment radii inside the operator unit ball.

For contractions a, b the function eps -> ||(1-eps)a + eps b|| is
subharmonic, so its maximum over a disc |eps| <= r is attained on the
circle |eps| = r and is nondecreasing in r.  Sampling the circle therefore
suffices to certify membership of the whole disc segment in the ball.
"""

from __future__ import annotations

import math

import numpy as np

from .linalg import as_matrix, op_norm

__all__ = ["circle_max_norm", "radius_search"]


def circle_max_norm(center, direction, r: float, samples: int) -> float:
    """max over |eps| = r of ||center + eps * direction|| (batched SVD)."""
    c = as_matrix(center)
    u = as_matrix(direction)
    if c.size == 0:
        return 0.0
    theta = 2.0 * np.pi * np.arange(samples) / samples
    eps = r * np.exp(1j * theta)
    stack = c[None, :, :] + eps[:, None, None] * u[None, :, :]
    vals = np.linalg.svd(stack, compute_uv=False)
    return float(vals[:, 0].max())


def radius_search(center, direction, slack: float, samples: int = 128,
                  r_floor: float = 1e-6, r_cap: float = 1e8,
                  rel_tol: float = 1e-8) -> float:
    """Largest r with the circle |eps| = r staying inside the unit ball.

    Returns 0.0 when even r_floor escapes, math.inf when the direction is
    negligible or the cap is reached (constant or essentially constant
    segments).  Bisection refines to relative accuracy ``rel_tol``.
    """
    c = as_matrix(center)
    u = as_matrix(direction)
    limit = 1.0 + slack
    if op_norm(u) <= 1e-14 * max(1.0, op_norm(c)):
        return math.inf

    def g(r: float) -> float:
        return circle_max_norm(c, u, r, samples)

    if g(r_floor) > limit:
        return 0.0
    lo = r_floor
    hi = r_floor
    while hi < r_cap:
        nxt = hi * 4.0
        if g(nxt) > limit:
            lo, hi = hi, nxt
            break
        hi = nxt
    else:
        return math.inf
    for _ in range(80):
        if hi - lo <= rel_tol * max(1.0, lo):
            break
        mid = 0.5 * (lo + hi)
        if g(mid) <= limit:
            lo = mid
        else:
            hi = mid
    return lo
