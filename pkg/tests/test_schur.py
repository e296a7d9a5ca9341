"""Schur polynomials, certified sup-norms, arcs, and function parts."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contraction_lab import (
    NotMemberError,
    connect_arc,
    kobayashi_upper_bound,
    make_contraction,
    partial_isometry_arc,
    schur_part_member,
    schur_poly,
    schur_sup_norm,
    segment_radius,
    shmulyan_equivalent,
    toeplitz_truncate,
)
from contraction_lab.corpus import GenSpec, generate, random_unitary
from contraction_lab.linalg import op_norm

from conftest import rng_matrix, scaled_contraction

J = make_contraction([[0, 1], [0, 0]])
JZ = make_contraction([[0, 1], [0.5, 0]])


def sc(x):
    return make_contraction([[x]])


def rand_poly(seed, rows, cols, degree, scale=0.4):
    rng = np.random.default_rng(seed)
    coeffs = [scale * (rng.standard_normal((rows, cols)) +
                       1j * rng.standard_normal((rows, cols))) / (k + 1)
              for k in range(degree + 1)]
    return schur_poly(coeffs)


class TestSupNorm:
    def test_constant(self):
        f = schur_poly([np.diag([0.5, 0.2])])
        assert f.sup_norm_estimate == pytest.approx(0.5)
        assert f.method == "exact-diagonal"

    def test_identity_function(self):
        f = schur_poly([np.zeros((1, 1)), np.eye(1)])
        assert f.sup_norm_estimate == pytest.approx(1.0, abs=1e-4)
        assert f.sup_norm_estimate >= 1.0

    def test_positive_scalar_coefficients(self):
        # |0.3 + 0.4 z| is maximal at z = 1 by the triangle equality
        f = schur_poly([np.array([[0.3]]), np.array([[0.4]])])
        assert f.sup_norm_estimate == pytest.approx(0.7, abs=1e-6)

    def test_upper_bound_dominates_samples(self):
        f = rand_poly(3, 2, 2, 4)
        grid = np.exp(2j * np.pi * np.arange(2048) / 2048)
        dense = max(op_norm(f.eval_at(z)) for z in grid)
        assert schur_sup_norm(f) >= dense - 1e-12


class TestToeplitz:
    def test_constant_block_diagonal(self):
        t = scaled_contraction(1, 2, 0.7)
        block = toeplitz_truncate(schur_poly([t.mat]), 3)
        expected = np.kron(np.eye(3), t.mat)
        assert np.allclose(block, expected)

    def test_shift_symbol(self):
        f = schur_poly([np.zeros((1, 1)), np.ones((1, 1))])
        assert np.allclose(toeplitz_truncate(f, 2), [[0, 0], [1, 0]])

    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 10**6), degree=st.integers(0, 3))
    def test_sections_below_certified_norm(self, seed, degree):
        f = rand_poly(seed, 2, 2, degree)
        norms = [op_norm(toeplitz_truncate(f, n)) for n in (1, 2, 4, 6)]
        assert all(norms[i] <= norms[i + 1] + 1e-12 for i in range(len(norms) - 1))
        assert norms[-1] <= f.sup_norm_estimate + 1e-9


class TestSegmentRadius:
    def test_scalar_pair(self):
        assert segment_radius(sc(0.0), sc(0.5)) == pytest.approx(2.0, abs=1e-5)

    def test_constant_segment(self):
        t = sc(0.5)
        assert math.isinf(segment_radius(t, t))

    def test_part_pair_positive(self):
        r = segment_radius(J, JZ)
        assert 0 < r < math.inf
        # verify the endpoints of the certified disc stay contractive
        eps = r * 0.999
        assert op_norm((1 - eps) * J.mat + eps * JZ.mat) <= 1 + 1e-9

    def test_zero_for_inequivalent(self):
        assert segment_radius(sc(1.0), sc(0.5)) == 0.0


class TestConnectArc:
    def test_scalar_schwarz_pick(self):
        result = connect_arc(sc(0.0), sc(0.5))
        assert result.status == "connected"
        assert result.certificate.kobayashi_bound <= math.atanh(0.5) + 1e-6
        assert len(result.certificate.arcs) == 1

    def test_identical_pair_empty_chain(self):
        result = connect_arc(JZ, JZ)
        assert result.status == "connected"
        assert result.certificate.kobayashi_bound == 0.0

    def test_part_pair_connects(self):
        result = connect_arc(J, JZ)
        assert result.status == "connected"
        cert = result.certificate
        assert all(arc.is_schur_class() for arc, _ in cert.arcs)
        assert max(cert.endpoint_residuals) < 1e-8

    def test_inequivalent_pair_proven_disconnected(self):
        assert connect_arc(sc(1.0), sc(0.5)).status == "not_equivalent"

    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(0, 10**5))
    def test_chain_endpoints_compose(self, seed):
        rng = np.random.default_rng(seed)
        a = scaled_contraction(seed, 2, float(rng.uniform(0.2, 0.85)))
        b = scaled_contraction(seed + 1, 2, float(rng.uniform(0.2, 0.85)))
        result = connect_arc(a, b)
        assert result.status == "connected"
        arcs = result.certificate.arcs
        current = a.mat
        for poly, lam in arcs:
            assert op_norm(poly.eval_at(0.0) - current) < 1e-8
            current = poly.eval_at(lam)
        assert op_norm(current - b.mat) < 1e-8


class TestPartialIsometryArc:
    def test_nilpotent_member(self):
        cert = partial_isometry_arc(J, JZ)
        assert cert.kobayashi_bound == pytest.approx(math.atanh(math.sqrt(0.5)))
        assert max(cert.endpoint_residuals) < 1e-10

    def test_self_is_trivial(self):
        cert = partial_isometry_arc(J, J)
        assert cert.kobayashi_bound == 0.0

    def test_boundary_block_rejected(self):
        with pytest.raises(NotMemberError):
            partial_isometry_arc(J, make_contraction([[0, 1], [1, 0]]))


class TestKobayashi:
    def test_scalar_upper_bound(self):
        assert kobayashi_upper_bound(sc(0.0), sc(0.5)) <= math.atanh(0.5) + 1e-6

    def test_identical(self):
        assert kobayashi_upper_bound(JZ, JZ) == 0.0

    def test_infinite_for_inequivalent(self):
        assert math.isinf(kobayashi_upper_bound(sc(1.0), sc(0.5)))

    def test_partial_isometry_uses_single_arc(self):
        bound = kobayashi_upper_bound(J, JZ)
        assert bound <= math.atanh(math.sqrt(0.5)) + 1e-9

    def test_roughly_symmetric(self):
        a = scaled_contraction(3, 2, 0.5)
        b = scaled_contraction(4, 2, 0.7)
        fwd = kobayashi_upper_bound(a, b)
        bwd = kobayashi_upper_bound(b, a)
        assert fwd <= 2 * bwd + 1e-9
        assert bwd <= 2 * fwd + 1e-9


class TestSchurPartMember:
    def test_identity_function_rejected_by_zero(self):
        f = schur_poly([np.zeros((1, 1)), np.eye(1)])
        verdict = schur_part_member(sc(0.0), f)
        assert not verdict.member
        assert verdict.sup_norm >= 1.0

    def test_defect_supported_perturbation_accepted(self):
        f = schur_poly([J.mat, 0.5 * np.array([[0, 0], [1, 0]], dtype=complex)])
        verdict = schur_part_member(J, f)
        assert verdict.member
        assert verdict.sup_norm == pytest.approx(0.5, abs=1e-3)

    def test_constant_symbol_accepted(self):
        assert schur_part_member(J, schur_poly([J.mat])).member

    def test_off_defect_coefficient_rejected(self):
        # perturbation touching the isometric block breaks the shape
        f = schur_poly([J.mat, 0.1 * np.array([[1, 0], [0, 0]], dtype=complex)])
        verdict = schur_part_member(J, f)
        assert not verdict.member
        assert verdict.residual > 1e-3

    def test_polynomials_with_values_in_a_part_factor_boundedly(self):
        # when every value of G on the circle stays inside the part of w,
        # G - w factors through the defects with a bounded symbol
        from contraction_lab import defect_data
        from contraction_lab.shmulyan import partial_isometry_part
        w = generate(GenSpec(dim=4, kind="partial_isometry", seed=6,
                             params={"rank": 2}))
        dd = defect_data(w)
        raw = [rng_matrix(60 + k, 2, 2) for k in range(3)]
        scale = 0.9 / schur_poly(raw).sup_norm_estimate
        coeffs = [w.mat + dd.defect_space_star.basis @ (raw[0] * scale)
                  @ dd.defect_space.basis.conj().T]
        coeffs += [dd.defect_space_star.basis @ (c * scale)
                   @ dd.defect_space.basis.conj().T for c in raw[1:]]
        g = schur_poly(coeffs)
        part = partial_isometry_part(w)
        grid = np.exp(2j * np.pi * np.arange(32) / 32)
        for z in grid:
            assert part.membership_test(make_contraction(g.eval_at(z))).member
        verdict = schur_part_member(w, g)
        assert verdict.member
        assert verdict.residual < 1e-10
        assert verdict.sup_norm < 1.0

    def test_strictness_boundary(self):
        w = generate(GenSpec(dim=3, kind="partial_isometry", seed=2,
                             params={"rank": 1}))
        from contraction_lab import defect_data
        dd = defect_data(w)
        raw = [rng_matrix(5 + k, dd.defect_space_star.dim, dd.defect_space.dim)
               for k in range(3)]
        base = schur_poly(raw).sup_norm_estimate
        for target, expect in ((0.999, True), (1.001, False)):
            coeffs = [w.mat + dd.defect_space_star.basis @ (raw[0] * target / base)
                      @ dd.defect_space.basis.conj().T]
            coeffs += [dd.defect_space_star.basis @ (c * target / base)
                       @ dd.defect_space.basis.conj().T for c in raw[1:]]
            assert schur_part_member(w, schur_poly(coeffs)).member is expect
