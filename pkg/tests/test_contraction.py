"""Contraction validation, defect data, classification, and the U+Q split."""

import numpy as np
import pytest
from hypothesis import given, settings

from contraction_lab import (
    NotAContractionError,
    classify,
    defect_data,
    make_contraction,
    nearest_part_partial_isometry,
    ttstar_power_limit,
    up_decompose,
)
from contraction_lab.linalg import DEFAULT_TOL, Tolerances, op_norm

from conftest import rng_matrix, square_contractions

J = make_contraction([[0, 1], [0, 0]])


class TestMakeContraction:
    def test_zero_valid(self):
        c = make_contraction(np.zeros((2, 2)))
        assert c.shape == (2, 2)

    def test_norm_one_valid(self):
        assert op_norm(J.mat) == pytest.approx(1.0)

    def test_rejects_expansion(self):
        with pytest.raises(NotAContractionError) as err:
            make_contraction(np.diag([1.5]))
        assert err.value.norm == pytest.approx(1.5)

    def test_rescales_slack_band(self):
        c = make_contraction(np.diag([1.0 + 0.5e-10]))
        assert op_norm(c.mat) <= 1.0

    def test_matrix_read_only(self):
        c = make_contraction(np.diag([0.5]))
        with pytest.raises(ValueError):
            c.mat[0, 0] = 0.0


class TestDefectData:
    def test_unitary_has_no_defect(self):
        u = make_contraction(np.diag([1j, -1.0]))
        dd = defect_data(u)
        assert op_norm(dd.d_t) == 0.0
        assert op_norm(dd.d_tstar) == 0.0
        assert dd.null_dt.dim == 2

    def test_zero_has_full_defect(self):
        dd = defect_data(make_contraction(np.zeros((3, 3))))
        assert np.allclose(dd.d_t, np.eye(3))
        assert dd.defect_space.dim == 3

    def test_nilpotent(self):
        dd = defect_data(J)
        assert np.allclose(dd.d_t, np.diag([1.0, 0.0]))
        assert np.allclose(dd.d_tstar, np.diag([0.0, 1.0]))

    def test_cache_is_per_tolerance(self):
        c = make_contraction(np.diag([0.5]))
        a = defect_data(c)
        b = defect_data(c)
        assert a is b
        other = defect_data(c, Tolerances(rank_rtol=1e-8))
        assert other is not a

    @settings(max_examples=30, deadline=None)
    @given(square_contractions())
    def test_intertwining_identity(self, c):
        dd = defect_data(c)
        resid = op_norm(c.mat @ dd.d_t - dd.d_tstar @ c.mat)
        assert resid <= 10 * DEFAULT_TOL.psd_atol + 1e-12

    @settings(max_examples=20, deadline=None)
    @given(square_contractions())
    def test_defect_space_complements_kernel(self, c):
        dd = defect_data(c)
        assert dd.defect_space.dim + dd.null_dt.dim == c.dim


class TestClassify:
    def test_nilpotent_flags(self):
        flags = classify(J)
        assert "partial_isometry" in flags
        assert "hyponormal" not in flags  # JJ* and J*J are incomparable
        assert "quasi_isometry" not in flags  # J*2 J2 = 0 != J*J

    def test_scaled_identity(self):
        flags = classify(make_contraction(np.diag([0.5, 0.5])))
        assert {"strict", "pure", "quasi_normal", "hyponormal"} <= flags
        assert "quasi_isometry" not in flags

    def test_unitary(self):
        u = rng_matrix(3, 3, 3)
        q, _ = np.linalg.qr(u)
        flags = classify(make_contraction(q))
        assert {"isometry", "coisometry", "unitary", "partial_isometry",
                "quasi_normal", "hyponormal"} <= flags

    def test_partial_isometry_defects_are_projections(self):
        dd = defect_data(J)
        assert np.allclose(dd.d_t @ dd.d_t, dd.d_t)  # projection onto N(J)
        assert np.allclose(dd.d_tstar @ dd.d_tstar, dd.d_tstar)


class TestUpDecompose:
    def test_diagonal(self):
        c = make_contraction(np.diag([1.0, 0.5]))
        d = up_decompose(c)
        assert d.u_block.shape == (1, 1)
        assert d.u_block[0, 0] == pytest.approx(1.0)
        assert d.q_block[0, 0] == pytest.approx(0.5)

    def test_nilpotent(self):
        d = up_decompose(J)
        assert d.u_block.shape == (1, 1)
        assert abs(d.u_block[0, 0]) == pytest.approx(1.0)
        assert op_norm(d.q_block) == pytest.approx(0.0)

    def test_strict_has_empty_unitary_part(self):
        g = rng_matrix(17, 3, 3)
        c = make_contraction(0.5 * g / op_norm(g))
        d = up_decompose(c)
        assert d.u_block.shape == (0, 0)
        # the pure block is all of c, expressed in the defect bases
        n_out, d_out = d.basis_out
        n_in, d_in = d.basis_in
        back = d_out.basis @ d.q_block @ d_in.basis.conj().T
        assert op_norm(back - c.mat) < 1e-9

    @settings(max_examples=30, deadline=None)
    @given(square_contractions())
    def test_always_succeeds_with_pure_block(self, c):
        d = up_decompose(c)
        assert op_norm(d.q_block) < 1.0
        assert op_norm(d.reassemble() - c.mat) < 1e-7
        k = d.u_block.shape[0]
        if k:
            assert op_norm(d.u_block.conj().T @ d.u_block - np.eye(k)) < 1e-7


class TestNearestPartPartialIsometry:
    def test_diagonal(self):
        w = nearest_part_partial_isometry(make_contraction(np.diag([1.0, 0.5])))
        assert np.allclose(w.mat, np.diag([1.0, 0.0]))

    def test_strict_maps_to_zero(self):
        c = make_contraction(np.diag([0.3, 0.2]))
        assert op_norm(nearest_part_partial_isometry(c).mat) == 0.0

    def test_partial_isometry_fixed(self):
        w = nearest_part_partial_isometry(J)
        assert np.allclose(w.mat, J.mat)


class TestPowerLimit:
    @settings(max_examples=30, deadline=None)
    @given(square_contractions(max_norm=0.95))
    def test_converges_to_kernel_projection(self, c):
        limit = ttstar_power_limit(c)
        assert limit.converged
        assert limit.residual < DEFAULT_TOL.conv_tol

    def test_projection_for_mixed_diagonal(self):
        c = make_contraction(np.diag([1.0, 0.5, 0.0]))
        limit = ttstar_power_limit(c)
        assert limit.converged
        assert np.allclose(limit.projection, np.diag([1.0, 0.0, 0.0]))
