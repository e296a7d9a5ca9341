"""Asymptotic limits, triangulations, classes, and reducing parts."""

import numpy as np
import pytest
from hypothesis import given, settings

from contraction_lab import (
    asymptotic_limit,
    canonical_triangulation,
    class_of,
    classify,
    defect_data,
    make_contraction,
    reducing_isometric_part,
    reducing_parts,
    reducing_unitary_part,
)
from contraction_lab.corpus import GenSpec, generate
from contraction_lab.linalg import op_norm

from conftest import rng_matrix, square_contractions

J = make_contraction([[0, 1], [0, 0]])


def haar_unitary(seed: int, d: int) -> np.ndarray:
    q, _ = np.linalg.qr(rng_matrix(seed, d, d))
    return q


class TestAsymptoticLimit:
    def test_unitary(self):
        u = make_contraction(haar_unitary(1, 3))
        data = asymptotic_limit(u)
        assert op_norm(data.s_t - np.eye(3)) < 1e-10
        assert data.fix_s.dim == 3
        assert data.idempotent

    def test_strict(self):
        data = asymptotic_limit(make_contraction(np.diag([0.5, 0.3])))
        assert op_norm(data.s_t) < 1e-10
        assert data.null_s.dim == 2

    def test_nilpotent(self):
        data = asymptotic_limit(J)
        assert op_norm(data.s_t) == 0.0

    @settings(max_examples=30, deadline=None)
    @given(square_contractions())
    def test_limit_in_unit_interval(self, c):
        data = asymptotic_limit(c)
        w = np.linalg.eigvalsh(data.s_t)
        assert w[0] >= -1e-10
        assert w[-1] <= 1.0 + 1e-10
        # the norm is exactly one whenever the limit is nonzero
        if op_norm(data.s_t) > 1e-6:
            assert op_norm(data.s_t) == pytest.approx(1.0, abs=1e-8)

    @settings(max_examples=25, deadline=None)
    @given(square_contractions())
    def test_fixed_space_is_invariant_isometric(self, c):
        fix = asymptotic_limit(c).fix_s
        if fix.dim == 0:
            return
        img = c.mat @ fix.basis
        assert op_norm(img - fix.projector() @ img) < 1e-7
        gram = img.conj().T @ img
        assert op_norm(gram - np.eye(fix.dim)) < 1e-7

    def test_quasi_normal_limit_is_defect_kernel_projection(self):
        u = haar_unitary(5, 4)
        c = make_contraction(u @ np.diag([1.0, 0.7, 0.3, 0.0]) @ u.conj().T)
        assert "quasi_normal" in classify(c)
        data = asymptotic_limit(c)
        assert data.idempotent
        p = defect_data(c).null_dt.projector()
        assert op_norm(data.s_t - p) < 1e-8


class TestTriangulation:
    def test_mixed_diagonal(self):
        tri = canonical_triangulation(make_contraction(np.diag([1.0, 0.5])))
        assert tri.split[0].dim == 1  # stable part spanned by e2
        assert tri.q_block[0, 0] == pytest.approx(0.5)
        assert abs(tri.w_block[0, 0]) == pytest.approx(1.0)
        assert tri.zero_residual < 1e-12
        assert op_norm(tri.r_block) < 1e-10

    def test_strict_is_all_stable(self):
        tri = canonical_triangulation(make_contraction(np.diag([0.2, 0.4])))
        assert tri.split[0].dim == 2
        assert tri.w_block.shape == (0, 0)
        assert tri.q_strongly_stable

    def test_direct_sum_blocks(self):
        u = haar_unitary(7, 2)
        q = 0.5 * haar_unitary(8, 2)
        t = np.zeros((4, 4), dtype=complex)
        t[:2, :2] = u
        t[2:, 2:] = q
        tri = canonical_triangulation(make_contraction(t))
        assert tri.split[0].dim == 2
        # the persistent block is the unitary summand up to basis choice
        w_sq = tri.w_block.conj().T @ tri.w_block
        assert op_norm(w_sq - np.eye(2)) < 1e-8
        assert op_norm(tri.r_block) < 1e-8
        assert tri.q_strongly_stable and tri.w_injective_limit

    @settings(max_examples=20, deadline=None)
    @given(square_contractions())
    def test_class_flags_and_zero_block(self, c):
        tri = canonical_triangulation(c)
        assert tri.zero_residual < 1e-8
        assert tri.q_strongly_stable
        assert tri.w_injective_limit


class TestClassOf:
    def test_examples(self):
        assert class_of(make_contraction(np.diag([0.5, 0.2]))) == "C00"
        assert class_of(make_contraction(haar_unitary(9, 3))) == "C11"
        assert class_of(J) == "C00"

    def test_mixed(self):
        assert class_of(make_contraction(np.diag([1.0, 0.5]))) == "mixed"


class TestReducingParts:
    def test_unitary_full(self):
        u = make_contraction(haar_unitary(11, 3))
        assert reducing_isometric_part(u).dim == 3
        assert reducing_unitary_part(u).dim == 3

    def test_nilpotent_trivial(self):
        assert reducing_isometric_part(J).dim == 0
        assert reducing_unitary_part(J).dim == 0

    def test_direct_sum_picks_unitary_summand(self):
        t = generate(GenSpec(dim=4, kind="direct_sum_U_plus_Q", seed=3,
                             params={"unitary_dim": 2}))
        h_i = reducing_isometric_part(t)
        h_u = reducing_unitary_part(t)
        assert h_i.dim == 2
        assert h_u.dim == 2
        # the summand lives on the first two coordinates
        assert op_norm(h_i.basis[2:, :]) < 1e-8

    @settings(max_examples=20, deadline=None)
    @given(square_contractions())
    def test_reduction_and_isometry(self, c):
        h_i = reducing_isometric_part(c)
        if h_i.dim == 0:
            return
        img = c.mat @ h_i.basis
        assert op_norm(img - h_i.projector() @ img) < 1e-7
        img_adj = c.mat.conj().T @ h_i.basis
        assert op_norm(img_adj - h_i.projector() @ img_adj) < 1e-7
        assert op_norm(img.conj().T @ img - np.eye(h_i.dim)) < 1e-7

    def test_parts_nest(self):
        t = generate(GenSpec(dim=5, kind="direct_sum_U_plus_Q", seed=9,
                             params={"unitary_dim": 3}))
        parts = reducing_parts(t)
        fix = asymptotic_limit(t).fix_s
        assert fix.contains(parts.h_i)
        assert parts.h_i.contains(parts.h_u)
