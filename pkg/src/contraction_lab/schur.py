"""Schur-class matrix polynomials and the arc machinery.

Polynomials F(lambda) = sum coeffs[k] lambda^k with contractive values on
the disc connect Shmul'yan-equivalent contractions; chains of such arcs
bound the Kobayashi pseudo-distance from above by summed hyperbolic hop
lengths.  Sup-norms are certified by circle sampling plus a derivative
(Lipschitz) error term, refined around the grid maximum, so every
reported bound is a true upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .contraction import Contraction, classify, defect_data, make_contraction
from .linalg import (
    DEFAULT_TOL,
    ShapeMismatchError,
    Tolerances,
    as_matrix,
    compress,
    op_norm,
)
from .segments import circle_max_norm, radius_search
from .shmulyan import (
    NotPartialIsometryError,
    partial_isometry_part,
    shmulyan_equivalent,
)

__all__ = [
    "ArcCertificate",
    "ArcResult",
    "NotMemberError",
    "SchurMemberVerdict",
    "SchurPoly",
    "connect_arc",
    "kobayashi_upper_bound",
    "partial_isometry_arc",
    "schur_part_member",
    "schur_poly",
    "schur_sup_norm",
    "segment_radius",
    "toeplitz_truncate",
]

ENDPOINT_RTOL = 1e-8
HOP_FRACTION = 0.9
HOP_BUDGET = 64


class NotMemberError(ValueError):
    """Candidate does not belong to the required Shmul'yan part."""


@dataclass(frozen=True)
class SchurPoly:
    """Matrix polynomial with a certified sup-norm over the unit disc."""

    coeffs: tuple
    sup_norm_estimate: float
    method: str

    @property
    def shape(self):
        return self.coeffs[0].shape

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def eval_at(self, lam: complex) -> np.ndarray:
        acc = np.zeros(self.shape, dtype=complex)
        z = 1.0 + 0.0j
        for c in self.coeffs:
            acc = acc + z * c
            z *= lam
        return acc

    def is_schur_class(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        """Grid values stay inside the ball (maximum principle)."""
        return _grid_max(self.coeffs, tol.grid_points) <= 1.0 + tol.contraction_slack


def _boundary_values(coeffs, samples: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(samples) / samples
    lam = np.exp(1j * theta)
    d0 = coeffs[0]
    stack = np.broadcast_to(d0, (samples,) + d0.shape).astype(complex).copy()
    z = lam.copy()
    for c in coeffs[1:]:
        stack += z[:, None, None] * c[None, :, :]
        z = z * lam
    return np.linalg.svd(stack, compute_uv=False)[:, 0]


def _grid_max(coeffs, samples: int) -> float:
    if coeffs[0].size == 0:
        return 0.0
    return float(_boundary_values(coeffs, samples).max())


def _norm_at_angle(coeffs, theta: float) -> float:
    lam = complex(math.cos(theta), math.sin(theta))
    acc = np.zeros(coeffs[0].shape, dtype=complex)
    z = 1.0 + 0.0j
    for c in coeffs:
        acc = acc + z * c
        z *= lam
    return op_norm(acc)


def _certified_sup(coeffs, tol: Tolerances):
    """Certified upper bound of sup_{|lam|=1} ||F(lam)||.

    Each grid arc carries the bound max(end values) + min(L h/2, L2 h^2/8)
    with L = sum k ||c_k|| and L2 = sum k^2 ||c_k||; the norm is a pointwise
    max of smooth branches with those derivative bounds, so the arc bounds
    are true.  Top arcs are bisected until the certificate matches the
    best observed value to ~1e-9 (or the split budget runs out, leaving a
    slightly larger but still valid bound).
    """
    if coeffs[0].size == 0:
        return 0.0, "exact-diagonal"
    if len(coeffs) == 1:
        return op_norm(coeffs[0]), "exact-diagonal"
    samples = tol.grid_points
    lip = sum(k * op_norm(c) for k, c in enumerate(coeffs))
    lip2 = sum(k * k * op_norm(c) for k, c in enumerate(coeffs))
    theta = list(2.0 * np.pi * np.arange(samples) / samples) + [2.0 * np.pi]
    vals = list(_boundary_values(coeffs, samples))
    vals.append(vals[0])
    arcs = [(theta[i], theta[i + 1], vals[i], vals[i + 1]) for i in range(samples)]

    def bound(arc):
        lo, hi, vlo, vhi = arc
        h = hi - lo
        return max(vlo, vhi) + min(0.5 * lip * h, 0.125 * lip2 * h * h)

    best_val = max(vals)
    for _ in range(400):
        top = max(arcs, key=bound)
        if bound(top) - best_val <= 1e-9 * max(1.0, best_val):
            break
        arcs.remove(top)
        lo, hi, vlo, vhi = top
        mid = 0.5 * (lo + hi)
        vmid = _norm_at_angle(coeffs, mid)
        best_val = max(best_val, vmid)
        arcs.append((lo, mid, vlo, vmid))
        arcs.append((mid, hi, vmid, vhi))
    certified = max(bound(a) for a in arcs)
    return float(certified), "grid"


def schur_poly(coeffs, tol: Tolerances = DEFAULT_TOL) -> SchurPoly:
    """Build a SchurPoly with its certified sup-norm estimate."""
    mats = tuple(as_matrix(c) for c in coeffs)
    if not mats:
        raise ValueError("a Schur polynomial needs at least one coefficient")
    shape = mats[0].shape
    for c in mats[1:]:
        if c.shape != shape:
            raise ShapeMismatchError("all coefficients must share one shape")
    est, method = _certified_sup(mats, tol)
    return SchurPoly(coeffs=mats, sup_norm_estimate=est, method=method)


def schur_sup_norm(f: SchurPoly, tol: Tolerances = DEFAULT_TOL) -> float:
    """Certified upper bound of the sup-norm of f over the disc."""
    est, _ = _certified_sup(f.coeffs, tol)
    return est


def toeplitz_truncate(f: SchurPoly, n: int) -> np.ndarray:
    """n x n block lower-triangular Toeplitz section of the symbol f."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    rows, cols = f.shape
    out = np.zeros((n * rows, n * cols), dtype=complex)
    for i in range(n):
        for j in range(i + 1):
            k = i - j
            if k < len(f.coeffs):
                out[i * rows:(i + 1) * rows, j * cols:(j + 1) * cols] = f.coeffs[k]
    return out


def segment_radius(a: Contraction, b: Contraction,
                   tol: Tolerances = DEFAULT_TOL) -> float:
    """Largest r with ||(1-eps)a + eps b|| <= 1 for all sampled |eps| = r.

    Positive exactly when b is Shmul'yan dominated by a; math.inf for
    (essentially) constant segments.  The returned radius is re-verified
    on the full sampling grid.
    """
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shape mismatch {a.shape} vs {b.shape}")
    diff = b.mat - a.mat
    r = radius_search(a.mat, diff, tol.contraction_slack, samples=128)
    if r in (0.0, math.inf):
        return r
    while r > 0 and circle_max_norm(a.mat, diff, r, tol.grid_points) \
            > 1.0 + tol.contraction_slack:
        r *= 0.999
    return r


@dataclass(frozen=True)
class ArcCertificate:
    """Chain of Schur-class arcs joining two contractions.

    Each entry is (F_j, lambda_j) with F_1(0) the start, F_j(lambda_j)
    = F_{j+1}(0), and the last value the end point; the hyperbolic hop
    lengths sum to the Kobayashi upper bound.
    """

    arcs: tuple
    kobayashi_bound: float
    endpoint_residuals: tuple


@dataclass(frozen=True)
class ArcResult:
    status: str  # "connected" | "not_equivalent" | "budget_exhausted"
    certificate: Optional[ArcCertificate]


def _affine_arc(point: np.ndarray, coeff: np.ndarray,
                tol: Tolerances) -> SchurPoly:
    return schur_poly([point, coeff], tol)


def connect_arc(t: Contraction, t_prime: Contraction,
                tol: Tolerances = DEFAULT_TOL) -> ArcResult:
    """Greedy affine chain from t to t_prime inside the unit ball.

    Arcs exist exactly for Shmul'yan-equivalent pairs, so inequivalence
    is reported as proven NotConnected; running out of hop budget is the
    distinct "budget_exhausted" outcome.
    """
    if t.shape != t_prime.shape:
        raise ShapeMismatchError(f"shape mismatch {t.shape} vs {t_prime.shape}")
    u = t_prime.mat - t.mat
    if op_norm(u) <= 1e-12:
        return ArcResult("connected", ArcCertificate((), 0.0, ()))
    if not shmulyan_equivalent(t, t_prime, tol).equivalent:
        return ArcResult("not_equivalent", None)

    arcs = []
    residuals = []
    bound = 0.0
    tau = 0.0
    for _ in range(HOP_BUDGET):
        point = t.mat + tau * u
        s_max = radius_search(point, u, tol.contraction_slack, samples=256)
        if s_max == 0.0:
            return ArcResult("budget_exhausted", None)
        if math.isinf(s_max):
            s_max = max(4.0 * (1.0 - tau), 1.0)
        # the search grid is coarser than the certificate grid; shrink the
        # coefficient until the full-grid circle maximum stays in the ball
        for _ in range(12):
            if circle_max_norm(point, s_max * u, 1.0, tol.grid_points) \
                    <= 1.0 + tol.contraction_slack:
                break
            s_max *= 0.995
        else:
            return ArcResult("budget_exhausted", None)
        coeff = s_max * u
        remaining = 1.0 - tau
        if remaining <= s_max * 0.97:
            lam = remaining / s_max
            arc = _affine_arc(point, coeff, tol)
            arcs.append((arc, complex(lam)))
            residuals.append(op_norm(arc.eval_at(lam) - t_prime.mat))
            bound += math.atanh(min(lam, 1.0 - 1e-15))
            tau = 1.0
            break
        lam = HOP_FRACTION
        arc = _affine_arc(point, coeff, tol)
        arcs.append((arc, complex(lam)))
        residuals.append(0.0)
        bound += math.atanh(lam)
        tau += lam * s_max
    else:
        return ArcResult("budget_exhausted", None)

    residuals.insert(0, op_norm(arcs[0][0].eval_at(0.0) - t.mat))
    return ArcResult("connected", ArcCertificate(
        arcs=tuple(arcs),
        kobayashi_bound=bound,
        endpoint_residuals=tuple(residuals),
    ))


def partial_isometry_arc(w: Contraction, t_prime: Contraction,
                         tol: Tolerances = DEFAULT_TOL) -> ArcCertificate:
    """Single-arc certificate inside the part of a partial isometry.

    With Z the member's pure block and rho = ||Z||, the arc
    F(lambda) = w + lambda * (embedded Z / sqrt(rho)) reaches t_prime at
    lambda = sqrt(rho) and stays contractive since its defect coefficient
    has norm sqrt(rho) < 1; the bound is atanh(sqrt(rho)).
    """
    part = partial_isometry_part(w, tol)
    membership = part.membership_test(t_prime)
    if not membership.member:
        raise NotMemberError("t_prime is not in the part of w")
    z = membership.z_block
    rho = op_norm(z)
    if rho <= tol.contraction_slack:
        return ArcCertificate((), 0.0, ())
    lam0 = math.sqrt(rho)
    embedded = part.null_out.basis @ (z / lam0) @ part.null_in.basis.conj().T
    arc = schur_poly([w.mat, embedded], tol)
    resid = (op_norm(arc.eval_at(0.0) - w.mat),
             op_norm(arc.eval_at(lam0) - t_prime.mat))
    return ArcCertificate(
        arcs=((arc, complex(lam0)),),
        kobayashi_bound=math.atanh(lam0),
        endpoint_residuals=resid,
    )


def kobayashi_upper_bound(t: Contraction, t_prime: Contraction,
                          tol: Tolerances = DEFAULT_TOL) -> float:
    """Upper bound on the Kobayashi pseudo-distance; inf iff inequivalent."""
    if t.shape != t_prime.shape:
        raise ShapeMismatchError(f"shape mismatch {t.shape} vs {t_prime.shape}")
    best = math.inf
    result = connect_arc(t, t_prime, tol)
    if result.status == "not_equivalent":
        return math.inf
    if result.status == "connected":
        best = result.certificate.kobayashi_bound
    if t.is_square and "partial_isometry" in classify(t, tol):
        try:
            cert = partial_isometry_arc(t, t_prime, tol)
            best = min(best, cert.kobayashi_bound)
        except NotMemberError:
            pass
    return best


@dataclass(frozen=True)
class SchurMemberVerdict:
    member: bool
    sup_norm: float
    residual: float
    marginal: bool


def schur_part_member(w: Contraction, f: SchurPoly,
                      tol: Tolerances = DEFAULT_TOL) -> SchurMemberVerdict:
    """Membership of f in the Toeplitz-order part of the constant w.

    For a partial isometry w the part consists exactly of the functions
    w + D_{w*} F0 D_w with F0 mapping defect space to defect space and
    certified sup-norm strictly below one.  The residual measures how far
    f strays from that shape; verdicts within 1e-6 of the unit boundary
    are flagged marginal.
    """
    if "partial_isometry" not in classify(w, tol):
        raise NotPartialIsometryError("constant symbol must be a partial isometry")
    if f.shape != w.shape:
        raise ShapeMismatchError(f"shape mismatch {f.shape} vs {w.shape}")
    dd = defect_data(w, tol)
    d_in, d_out = dd.defect_space, dd.defect_space_star
    residual = 0.0
    f0_coeffs = []
    for k, c in enumerate(f.coeffs):
        base = c - w.mat if k == 0 else c
        inner = compress(base, d_out, d_in)
        back = d_out.basis @ inner @ d_in.basis.conj().T
        residual = max(residual, op_norm(base - back))
        f0_coeffs.append(inner)
    if d_in.dim == 0 or d_out.dim == 0:
        sup = 0.0
    else:
        sup = schur_poly(f0_coeffs, tol).sup_norm_estimate
    member = residual <= ENDPOINT_RTOL and sup < 1.0
    marginal = abs(sup - 1.0) <= 1e-6
    return SchurMemberVerdict(member=member, sup_norm=sup,
                              residual=residual, marginal=marginal)
