"""Validated contractions, defect operators, and the unitary/pure split."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerances,
    as_matrix,
    compress,
    herm,
    kernel_of,
    op_norm,
    psd_order_leq,
    psd_sqrt,
    range_of,
)

__all__ = [
    "Contraction",
    "DefectData",
    "NotAContractionError",
    "NotDecomposableError",
    "PowerLimit",
    "UPDecomposition",
    "classify",
    "defect_data",
    "make_contraction",
    "nearest_part_partial_isometry",
    "ttstar_power_limit",
    "up_decompose",
]

# Frobenius residual threshold for the defining identities of the
# classification predicates (polynomial of degree <= 4 in a contraction).
PREDICATE_RTOL = 1e-8


class NotAContractionError(ValueError):
    """Operator norm exceeds 1 + contraction_slack."""

    def __init__(self, norm: float):
        super().__init__(f"operator norm {norm!r} exceeds the unit ball")
        self.norm = norm


class NotDecomposableError(ValueError):
    """The defect kernels do not reduce the operator within tolerance."""


@dataclass(frozen=True)
class DefectData:
    """Defect operators and the four canonical subspaces of a contraction.

    d_t, d_tstar       (I - T*T)^(1/2) and (I - TT*)^(1/2) on the ambient spaces
    defect_space(.star) closures of their ranges
    null_dt(.star)      their kernels (where T acts isometrically)
    """

    d_t: np.ndarray
    d_tstar: np.ndarray
    defect_space: Subspace
    defect_space_star: Subspace
    null_dt: Subspace
    null_dtstar: Subspace


class Contraction:
    """Element of the closed unit ball of complex matrices.

    The matrix is stored read-only; defect data is computed lazily and
    cached per tolerance instance (recompute-equal semantics).
    """

    __slots__ = ("mat", "tags", "_defect_cache")

    def __init__(self, mat: np.ndarray, tags: frozenset = frozenset()):
        m = as_matrix(mat).copy()
        m.setflags(write=False)
        self.mat = m
        self.tags = frozenset(tags)
        self._defect_cache: dict = {}

    @property
    def shape(self):
        return self.mat.shape

    @property
    def dim(self) -> int:
        if self.mat.shape[0] != self.mat.shape[1]:
            raise ValueError("dim is only defined for square contractions")
        return self.mat.shape[0]

    @property
    def is_square(self) -> bool:
        return self.mat.shape[0] == self.mat.shape[1]

    def adjoint(self) -> "Contraction":
        return Contraction(self.mat.conj().T, self.tags)

    def __repr__(self):
        return f"Contraction(shape={self.mat.shape}, norm={op_norm(self.mat):.6f})"


def make_contraction(m, tol: Tolerances = DEFAULT_TOL,
                     tags: frozenset = frozenset()) -> Contraction:
    """Validate m as a contraction.

    Norms inside (1, 1 + contraction_slack] are rescaled back onto the unit
    sphere; anything larger raises :class:`NotAContractionError` carrying
    the computed norm.
    """
    a = as_matrix(m)
    norm = op_norm(a)
    if norm > 1.0 + tol.contraction_slack:
        raise NotAContractionError(norm)
    if norm > 1.0:
        a = a / norm
    return Contraction(a, tags)


def defect_data(c: Contraction, tol: Tolerances = DEFAULT_TOL) -> DefectData:
    """Defect operators D_T, D_T* with their ranges and kernels (cached)."""
    cached = c._defect_cache.get(tol)
    if cached is not None:
        return cached
    t = c.mat
    rows, cols = t.shape
    d_t = psd_sqrt(np.eye(cols) - t.conj().T @ t, tol)
    d_tstar = psd_sqrt(np.eye(rows) - t @ t.conj().T, tol)
    data = DefectData(
        d_t=d_t,
        d_tstar=d_tstar,
        defect_space=range_of(d_t, tol),
        defect_space_star=range_of(d_tstar, tol),
        null_dt=kernel_of(d_t, tol),
        null_dtstar=kernel_of(d_tstar, tol),
    )
    c._defect_cache[tol] = data
    return data


def classify(c: Contraction, tol: Tolerances = DEFAULT_TOL) -> frozenset:
    """Predicates holding for c, each checked by its defining identity.

    Square-only predicates (quasi_normal, quasi_isometry, hyponormal) are
    skipped for rectangular inputs.  In finite dimension several of these
    collapse (pure = strict, quasi-normal = normal); the identities are
    still evaluated directly so the oracles mirror the definitions.
    """
    t = c.mat
    rows, cols = t.shape
    tt = t.conj().T
    bound = PREDICATE_RTOL * max(1.0, op_norm(t) ** 2)

    def small(m) -> bool:
        return op_norm(m) <= bound

    out = set()
    if small(tt @ t - np.eye(cols)):
        out.add("isometry")
    if small(t @ tt - np.eye(rows)):
        out.add("coisometry")
    if "isometry" in out and "coisometry" in out:
        out.add("unitary")
    if small(t @ tt @ t - t):
        out.add("partial_isometry")
    if rows == cols:
        if small(t @ (tt @ t) - (tt @ t) @ t):
            out.add("quasi_normal")
        if small(tt @ t - tt @ tt @ t @ t):
            out.add("quasi_isometry")
        if psd_order_leq(herm(t @ tt), herm(tt @ t), tol):
            out.add("hyponormal")
    if op_norm(t) < 1.0 - tol.contraction_slack:
        out.add("strict")
    if defect_data(c, tol).null_dt.dim == 0:
        out.add("pure")
    return frozenset(out)


@dataclass(frozen=True)
class UPDecomposition:
    """T = U + Q over N(D_T) + D_T -> N(D_T*) + D_T* with U unitary, Q pure."""

    basis_in: tuple  # (null_dt, defect_space)
    basis_out: tuple  # (null_dtstar, defect_space_star)
    u_block: np.ndarray
    q_block: np.ndarray

    def reassemble(self) -> np.ndarray:
        n_in, d_in = self.basis_in
        n_out, d_out = self.basis_out
        return (n_out.basis @ self.u_block @ n_in.basis.conj().T
                + d_out.basis @ self.q_block @ d_in.basis.conj().T)


def up_decompose(c: Contraction, tol: Tolerances = DEFAULT_TOL) -> UPDecomposition:
    """Split c into its unitary and pure parts along the defect kernels.

    For an exact contraction T always maps N(D_T) isometrically onto a
    subspace of N(D_T*) and conversely, so the decomposition exists; the
    NotDecomposable branch only fires on tolerance pathologies.
    """
    dd = defect_data(c, tol)
    t = c.mat
    n_in, d_in = dd.null_dt, dd.defect_space
    n_out, d_out = dd.null_dtstar, dd.defect_space_star

    check_tol = 1e-7
    if n_in.dim != n_out.dim:
        raise NotDecomposableError(
            f"defect kernels have mismatched dimensions {n_in.dim} != {n_out.dim}")
    if n_in.dim:
        leak_fwd = op_norm(t @ n_in.basis - n_out.projector() @ (t @ n_in.basis))
        if leak_fwd > check_tol:
            raise NotDecomposableError(f"T leaks off N(D_T*) by {leak_fwd:.3e}")
    if n_out.dim:
        leak_bwd = op_norm(
            t.conj().T @ n_out.basis - n_in.projector() @ (t.conj().T @ n_out.basis))
        if leak_bwd > check_tol:
            raise NotDecomposableError(f"T* leaks off N(D_T) by {leak_bwd:.3e}")

    u_block = compress(t, n_out, n_in)
    q_block = compress(t, d_out, d_in)
    decomp = UPDecomposition(
        basis_in=(n_in, d_in), basis_out=(n_out, d_out),
        u_block=u_block, q_block=q_block,
    )
    if op_norm(decomp.reassemble() - t) > check_tol:
        raise NotDecomposableError("blocks do not reassemble to T")
    return decomp


def nearest_part_partial_isometry(c: Contraction,
                                  tol: Tolerances = DEFAULT_TOL) -> Contraction:
    """Partial isometry U + 0 in the bases of :func:`up_decompose`.

    The result shares its Shmul'yan (equivalently Harnack) part with c:
    dropping a strictly contractive pure block keeps the class.
    """
    if not c.is_square:
        raise ValueError("nearest_part_partial_isometry expects a square contraction")
    decomp = up_decompose(c, tol)
    n_in, _ = decomp.basis_in
    n_out, _ = decomp.basis_out
    w = n_out.basis @ decomp.u_block @ n_in.basis.conj().T
    return make_contraction(w, tol)


@dataclass(frozen=True)
class PowerLimit:
    """Outcome of iterating (T*T)^n against the kernel projection of D_T."""

    converged: bool
    power: int
    residual: float
    projection: np.ndarray


def ttstar_power_limit(c: Contraction, tol: Tolerances = DEFAULT_TOL,
                       max_doublings: int = 60) -> PowerLimit:
    """Iterate (T*T)^n by repeated squaring until it meets P_{N(D_T)}.

    Every matrix contraction has closed defect range, so the powers
    converge in norm to the orthogonal projection onto N(D_T); the number
    of squarings needed depends on the spectral gap of T*T at 1.
    """
    if not c.is_square:
        raise ValueError("ttstar_power_limit expects a square contraction")
    p = defect_data(c, tol).null_dt.projector()
    a = c.mat.conj().T @ c.mat
    power = 1
    resid = op_norm(a - p)
    for _ in range(max_doublings):
        if resid < tol.conv_tol:
            return PowerLimit(True, power, resid, p)
        a = a @ a
        power *= 2
        resid = op_norm(a - p)
    return PowerLimit(resid < tol.conv_tol, power, resid, p)
