"""Structured random contractions for the property suites.

Every generator is deterministic in its seed and satisfies its advertised
hypothesis exactly by construction (commuting pairs are polynomials of a
single matrix, doubly commuting pairs share an eigenbasis, and so on)
rather than by rejection sampling at tolerance level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contraction import Contraction, make_contraction
from .linalg import DEFAULT_TOL, Tolerances, op_norm

__all__ = ["GenSpec", "InvalidSpecError", "KINDS", "generate", "random_unitary"]

KINDS = (
    "generic",
    "strict",
    "unitary",
    "partial_isometry",
    "normal",
    "commuting_pair",
    "doubly_commuting_pair",
    "direct_sum_U_plus_Q",
    "nilpotent_shift",
    "quasi_isometry",
)

PAIR_KINDS = ("commuting_pair", "doubly_commuting_pair")


class InvalidSpecError(ValueError):
    """Generator request is malformed or unsupported."""


@dataclass
class GenSpec:
    """Deterministic generator request: same spec, same output."""

    dim: int
    kind: str
    seed: int
    params: dict = field(default_factory=dict)


def _rng(spec: GenSpec) -> np.random.Generator:
    # str.hash is randomized per process; the kind index is stable
    return np.random.default_rng((KINDS.index(spec.kind), spec.dim, spec.seed))


def _ginibre(rng, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_unitary(rng, d: int) -> np.ndarray:
    """Haar unitary via QR with the phase convention fixed for determinism."""
    if d == 0:
        return np.zeros((0, 0), dtype=complex)
    q, r = np.linalg.qr(_ginibre(rng, d, d))
    phases = np.diag(r).copy()
    phases = phases / np.abs(phases)
    return q * phases[None, :].conj()


def _scaled(rng, d: int, bound: float) -> np.ndarray:
    g = _ginibre(rng, d, d)
    n = op_norm(g)
    return g * (bound / n) if n > 0 else g


def _poly_of(rng, m: np.ndarray, degree: int, bound: float) -> np.ndarray:
    coeffs = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    acc = np.zeros_like(m)
    power = np.eye(m.shape[0], dtype=complex)
    for c in coeffs:
        acc = acc + c * power
        power = power @ m
    n = op_norm(acc)
    return acc * (bound / n) if n > bound else acc


def generate(spec: GenSpec, tol: Tolerances = DEFAULT_TOL):
    """Produce a Contraction, or a pair for the *_pair kinds."""
    if spec.kind not in KINDS:
        raise InvalidSpecError(f"unknown kind {spec.kind!r}")
    if spec.dim < 1:
        raise InvalidSpecError("dim must be at least 1")
    rng = _rng(spec)
    d = spec.dim
    p = spec.params

    if spec.kind == "generic":
        bound = float(p.get("norm_bound", 0.95))
        return make_contraction(_scaled(rng, d, bound), tol)

    if spec.kind == "strict":
        bound = float(p.get("norm_bound", 0.9))
        return make_contraction(_scaled(rng, d, bound), tol)

    if spec.kind == "unitary":
        return make_contraction(random_unitary(rng, d), tol)

    if spec.kind == "partial_isometry":
        rank = int(p.get("rank", 0)) or int(rng.integers(1, d + 1))
        if not 0 <= rank <= d:
            raise InvalidSpecError(f"rank {rank} out of range for dim {d}")
        u = random_unitary(rng, d)
        mask = np.zeros(d)
        mask[rng.permutation(d)[:rank]] = 1.0
        return make_contraction(u @ np.diag(mask), tol)

    if spec.kind == "normal":
        moduli = rng.uniform(0.0, float(p.get("max_modulus", 0.95)), size=d)
        boundary = int(p.get("boundary_count", 0))
        moduli[:boundary] = 1.0
        phases = np.exp(2j * np.pi * rng.uniform(size=d))
        u = random_unitary(rng, d)
        return make_contraction(u @ np.diag(moduli * phases) @ u.conj().T, tol)

    if spec.kind == "commuting_pair":
        bound = float(p.get("norm_bound", 0.9))
        unitary_dim = int(p.get("unitary_dim", 0))
        inner = d - unitary_dim
        if inner < 1 or unitary_dim < 0:
            raise InvalidSpecError("unitary_dim leaves no room for the strict part")
        m = _scaled(rng, inner, 0.9)
        a = _poly_of(rng, m, int(p.get("degree", 3)), bound)
        b = _poly_of(rng, m, int(p.get("degree", 3)), bound)
        if unitary_dim:
            u = random_unitary(rng, unitary_dim)
            a = _direct_sum(u, a)
            b = _direct_sum(u, b)
        return make_contraction(a, tol), make_contraction(b, tol)

    if spec.kind == "doubly_commuting_pair":
        u = random_unitary(rng, d)
        boundary = int(p.get("boundary_count", 0))
        mismatch = bool(p.get("boundary_mismatch", False))
        top = float(p.get("max_modulus", 0.9))
        lam = rng.uniform(0.0, top, size=d) * np.exp(2j * np.pi * rng.uniform(size=d))
        mu = rng.uniform(0.0, top, size=d) * np.exp(2j * np.pi * rng.uniform(size=d))
        for i in range(min(boundary, d)):
            mu[i] = np.exp(2j * np.pi * rng.uniform())
            if mismatch:
                # either a strict entry or a different boundary phase
                if rng.uniform() < 0.5:
                    lam[i] = rng.uniform(0.2, top) * np.exp(2j * np.pi * rng.uniform())
                else:
                    lam[i] = -mu[i]
            else:
                lam[i] = mu[i]
        a = u @ np.diag(lam) @ u.conj().T
        b = u @ np.diag(mu) @ u.conj().T
        return make_contraction(a, tol), make_contraction(b, tol)

    if spec.kind == "direct_sum_U_plus_Q":
        k = int(p.get("unitary_dim", max(1, d // 2)))
        if not 0 < k <= d:
            raise InvalidSpecError(f"unitary_dim {k} out of range")
        u = random_unitary(rng, k)
        bound = float(p.get("norm_bound", 0.9))
        q = _scaled(rng, d - k, bound) if d > k else np.zeros((0, 0), complex)
        return make_contraction(_direct_sum(u, q), tol)

    if spec.kind == "nilpotent_shift":
        lam = complex(p.get("lam", 0.0))
        if abs(lam) > 1.0:
            raise InvalidSpecError("first weight must have modulus at most 1")
        t = np.zeros((d, d), dtype=complex)
        for i in range(d - 1):
            t[i + 1, i] = lam if i == 0 else 1.0
        return make_contraction(t, tol, tags=frozenset({"truncated-infinite-model"}))

    if spec.kind == "quasi_isometry":
        k = int(p.get("isometry_dim", max(1, d // 2)))
        if not 0 < k <= d:
            raise InvalidSpecError(f"isometry_dim {k} out of range")
        v = random_unitary(rng, k)
        t = _direct_sum(v, np.zeros((d - k, d - k), dtype=complex))
        if p.get("rotate", False):
            r = random_unitary(rng, d)
            t = r @ t @ r.conj().T
        return make_contraction(t, tol)

    raise InvalidSpecError(f"unhandled kind {spec.kind!r}")  # pragma: no cover


def _direct_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]),
                   dtype=complex)
    out[:a.shape[0], :a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out
