"""Asymptotic limits, canonical triangulations, and reducing parts.

The asymptotic limit of a contraction T is the strong limit of T*^n T^n.
Its kernel and fixed space drive the canonical triangulation into a
strongly stable block and a block whose orbits never die, and intersecting
fixed spaces of T and T* yields the reducing unitary part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contraction import Contraction
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerances,
    compress,
    herm,
    op_norm,
)

__all__ = [
    "AsymptoticData",
    "ClassFlags",
    "NoConvergenceError",
    "Triangulation",
    "asymptotic_limit",
    "canonical_triangulation",
    "class_of",
    "PartsData",
    "reducing_isometric_part",
    "reducing_parts",
    "reducing_unitary_part",
    "stability_flags",
]

# Residual threshold for block identities derived from converged limits.
BLOCK_RTOL = 1e-8


class NoConvergenceError(RuntimeError):
    """Fixed-point iteration hit its cap before meeting conv_tol."""

    def __init__(self, residual: float, iterations: int):
        super().__init__(
            f"no convergence after effective power {iterations} "
            f"(residual {residual:.3e})")
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class AsymptoticData:
    """Limit of T*^n T^n together with its kernel and fixed space."""

    s_t: np.ndarray
    null_s: Subspace
    fix_s: Subspace
    iterations: int
    idempotent: bool


def _psd_kernel(s: np.ndarray, tol: Tolerances) -> Subspace:
    """Kernel of a Hermitian PSD matrix at the operator-ball scale.

    Asymptotic limits satisfy 0 <= S <= I, so "zero" means small against
    1, not against the largest eigenvalue (which may itself be round-off).
    """
    d = s.shape[0]
    if d == 0:
        return Subspace(0, np.zeros((0, 0), dtype=complex))
    w, v = np.linalg.eigh(herm(s))
    cut = tol.rank_rtol * max(1.0, float(w[-1]))
    return Subspace(d, v[:, w <= cut])


def asymptotic_limit(c: Contraction, tol: Tolerances = DEFAULT_TOL,
                     max_doublings: int = 60) -> AsymptoticData:
    """Compute S_T = lim T*^n T^n for a square contraction.

    The quadratic forms of A_n = T*^n T^n decrease monotonically, so the
    subsampled sequence at powers 2^k converges; doubling the power keeps
    the iteration faithful to the definition while reaching the limit in
    logarithmically many multiplies even for non-diagonalizable T.
    """
    if not c.is_square:
        raise ValueError("asymptotic_limit expects a square contraction")
    d = c.dim
    if d == 0:
        z = np.zeros((0, 0), dtype=complex)
        empty = Subspace(0, z)
        return AsymptoticData(z, empty, empty, 0, True)
    m = c.mat  # T^(2^k) as k grows
    a_prev = m.conj().T @ m
    power = 1
    for _ in range(max_doublings):
        m = m @ m
        power *= 2
        a = m.conj().T @ m
        resid = op_norm(a - a_prev)
        a_prev = a
        if resid < tol.conv_tol:
            s = 0.5 * (a + a.conj().T)
            idem = op_norm(s @ s - s) <= BLOCK_RTOL * max(1.0, op_norm(s))
            return AsymptoticData(
                s_t=s,
                null_s=_psd_kernel(s, tol),
                fix_s=_psd_kernel(np.eye(d) - s, tol),
                iterations=power,
                idempotent=idem,
            )
    raise NoConvergenceError(op_norm(a - a_prev), power)


@dataclass(frozen=True)
class Triangulation:
    """Block form of T over N(S_T) + closure R(S_T).

    The lower-left block vanishes; the q block is strongly stable and the
    w block admits no orbit decaying to zero.
    """

    split: tuple  # (null_s, range_s)
    q_block: np.ndarray
    r_block: np.ndarray
    w_block: np.ndarray
    zero_residual: float
    q_strongly_stable: bool
    w_injective_limit: bool


def canonical_triangulation(c: Contraction,
                            tol: Tolerances = DEFAULT_TOL) -> Triangulation:
    data = asymptotic_limit(c, tol)
    null_s = data.null_s
    range_s = null_s.complement()
    t = c.mat
    q = compress(t, null_s, null_s)
    r = compress(t, null_s, range_s)
    w = compress(t, range_s, range_s)
    zero = compress(t, range_s, null_s)
    zero_res = op_norm(zero)
    q_stable = True
    if null_s.dim:
        q_stable = op_norm(asymptotic_limit(
            Contraction(q), tol).s_t) <= 10.0 * tol.rank_rtol
    w_c1 = True
    if range_s.dim:
        s_w = asymptotic_limit(Contraction(w), tol).s_t
        w_c1 = _psd_kernel(s_w, tol).dim == 0
    return Triangulation(
        split=(null_s, range_s),
        q_block=q, r_block=r, w_block=w,
        zero_residual=zero_res,
        q_strongly_stable=q_stable,
        w_injective_limit=w_c1,
    )


@dataclass(frozen=True)
class ClassFlags:
    """Strong-stability flags for T and T* with an indeterminacy marker.

    Eigenvalues of the asymptotic limit within a decade of the rank cutoff
    cannot be numerically told apart from zero; such cases set
    ``indeterminate`` instead of silently picking a side.
    """

    stable: bool        # S_T = 0
    injective: bool     # N(S_T) = {0}
    star_stable: bool   # S_T* = 0
    star_injective: bool
    indeterminate: bool


def _eig_split(s: np.ndarray, tol: Tolerances):
    w = np.linalg.eigvalsh(0.5 * (s + s.conj().T)) if s.size else np.zeros(0)
    cut = tol.rank_rtol * max(1.0, float(w[-1]) if w.size else 0.0)
    zero = int(np.sum(w <= cut))
    fuzzy = int(np.sum((w > cut) & (w <= 10.0 * cut)))
    return zero, w.size - zero, fuzzy


def stability_flags(c: Contraction, tol: Tolerances = DEFAULT_TOL) -> ClassFlags:
    s = asymptotic_limit(c, tol)
    s_star = asymptotic_limit(c.adjoint(), tol)
    z, p, f = _eig_split(s.s_t, tol)
    zs, ps, fs = _eig_split(s_star.s_t, tol)
    return ClassFlags(
        stable=(p == 0),
        injective=(z == 0),
        star_stable=(ps == 0),
        star_injective=(zs == 0),
        indeterminate=bool(f or fs),
    )


def class_of(c: Contraction, tol: Tolerances = DEFAULT_TOL) -> str:
    """Stability class label: C00, C01, C10, C11, or mixed."""
    flags = stability_flags(c, tol)
    first = "0" if flags.stable else ("1" if flags.injective else None)
    second = "0" if flags.star_stable else ("1" if flags.star_injective else None)
    if first is None or second is None:
        return "mixed"
    return f"C{first}{second}"


def reducing_isometric_part(c: Contraction,
                            tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Largest reducing subspace on which c acts isometrically.

    Built as the orthogonal complement of span{T^n (I - T*^j T^j) x} for
    n, j up to the dimension; powers beyond that add nothing since they
    are linear combinations of lower ones.
    """
    if not c.is_square:
        raise ValueError("reducing_isometric_part expects a square contraction")
    t = c.mat
    d = c.dim
    if d == 0:
        return Subspace(0, np.zeros((0, 0), dtype=complex))
    eye = np.eye(d, dtype=complex)
    gaps = []
    tj = eye.copy()
    for _ in range(d):
        tj = tj @ t
        gaps.append(eye - tj.conj().T @ tj)
    cols = []
    for g in gaps:
        tn = eye.copy()
        cols.append(g)
        for _ in range(d):
            tn = t @ tn
            cols.append(tn @ g)
    stacked = np.hstack(cols)
    # spans live at the operator-ball scale: an all-round-off stack means
    # the trivial span, not a full-rank one
    u, s, _ = np.linalg.svd(stacked, full_matrices=True)
    k = int(np.sum(s > tol.rank_rtol * max(1.0, float(s[0]) if s.size else 0.0)))
    span = Subspace(d, u[:, :k])
    return span.complement()


def reducing_unitary_part(c: Contraction,
                          tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Intersection of the fixed spaces of S_T and S_T*."""
    if not c.is_square:
        raise ValueError("reducing_unitary_part expects a square contraction")
    fix = asymptotic_limit(c, tol).fix_s
    fix_star = asymptotic_limit(c.adjoint(), tol).fix_s
    return fix.intersect(fix_star)


@dataclass(frozen=True)
class PartsData:
    """Reducing isometric/unitary parts and the stability class label."""

    h_i: Subspace
    h_u: Subspace
    class_label: str
    flags: ClassFlags


def reducing_parts(c: Contraction, tol: Tolerances = DEFAULT_TOL) -> PartsData:
    return PartsData(
        h_i=reducing_isometric_part(c, tol),
        h_u=reducing_unitary_part(c, tol),
        class_label=class_of(c, tol),
        flags=stability_flags(c, tol),
    )
