"""Generators deliver their advertised structure exactly."""

import numpy as np
import pytest

from contraction_lab import asymptotic_limit, classify, make_contraction
from contraction_lab.corpus import KINDS, GenSpec, InvalidSpecError, generate
from contraction_lab.linalg import op_norm


class TestDeterminism:
    @pytest.mark.parametrize("kind", KINDS)
    def test_same_spec_same_output(self, kind):
        spec = GenSpec(dim=4, kind=kind, seed=123)
        first = generate(spec)
        second = generate(GenSpec(dim=4, kind=kind, seed=123))
        if isinstance(first, tuple):
            assert np.array_equal(first[0].mat, second[0].mat)
            assert np.array_equal(first[1].mat, second[1].mat)
        else:
            assert np.array_equal(first.mat, second.mat)

    def test_different_seeds_differ(self):
        a = generate(GenSpec(dim=3, kind="generic", seed=1))
        b = generate(GenSpec(dim=3, kind="generic", seed=2))
        assert op_norm(a.mat - b.mat) > 1e-6

    def test_deterministic_across_processes(self):
        # str hashing is randomized per interpreter, so this guards the
        # seeding path against it
        import subprocess
        import sys

        code = ("import json; from contraction_lab.corpus import GenSpec, generate; "
                "from contraction_lab.linalg import matrix_to_json; "
                "print(json.dumps(matrix_to_json(generate("
                "GenSpec(dim=3, kind='partial_isometry', seed=11)).mat)))")
        runs = {subprocess.run([sys.executable, "-c", code], check=True,
                               capture_output=True, text=True).stdout
                for _ in range(2)}
        assert len(runs) == 1


class TestClaims:
    def test_partial_isometry_identity(self):
        for seed in range(10):
            w = generate(GenSpec(dim=4, kind="partial_isometry", seed=seed))
            m = w.mat
            assert op_norm(m @ m.conj().T @ m - m) < 1e-12

    def test_commuting_pair_commutes_exactly(self):
        a, b = generate(GenSpec(dim=3, kind="commuting_pair", seed=5))
        assert op_norm(a.mat @ b.mat - b.mat @ a.mat) < 1e-14

    def test_doubly_commuting_pair(self):
        a, b = generate(GenSpec(dim=4, kind="doubly_commuting_pair", seed=7))
        assert op_norm(a.mat @ b.mat - b.mat @ a.mat) < 1e-13
        assert op_norm(a.mat @ b.mat.conj().T - b.mat.conj().T @ a.mat) < 1e-13
        assert "quasi_normal" in classify(a)

    def test_unitary(self):
        u = generate(GenSpec(dim=5, kind="unitary", seed=3))
        assert "unitary" in classify(u)

    def test_quasi_isometry(self):
        t = generate(GenSpec(dim=4, kind="quasi_isometry", seed=9))
        assert "quasi_isometry" in classify(t)

    def test_strict_norm_bound(self):
        t = generate(GenSpec(dim=4, kind="strict", seed=2,
                             params={"norm_bound": 0.7}))
        assert op_norm(t.mat) <= 0.7 + 1e-12
        assert "strict" in classify(t)

    def test_direct_sum_shapes(self):
        t = generate(GenSpec(dim=5, kind="direct_sum_U_plus_Q", seed=4,
                             params={"unitary_dim": 2, "norm_bound": 0.5}))
        u = t.mat[:2, :2]
        assert op_norm(u.conj().T @ u - np.eye(2)) < 1e-12
        assert op_norm(t.mat[:2, 2:]) == 0.0
        assert op_norm(t.mat[2:, 2:]) <= 0.5 + 1e-12

    def test_nilpotent_shift_idempotent_limit(self):
        # re-verified numerically at the finite truncation, not assumed
        t = generate(GenSpec(dim=4, kind="nilpotent_shift", seed=0,
                             params={"lam": 0.0}))
        assert "truncated-infinite-model" in t.tags
        data = asymptotic_limit(t)
        assert data.idempotent

    def test_nilpotent_shift_weights(self):
        t = generate(GenSpec(dim=4, kind="nilpotent_shift", seed=0,
                             params={"lam": 0.5}))
        assert t.mat[1, 0] == pytest.approx(0.5)
        assert t.mat[2, 1] == pytest.approx(1.0)
        assert t.mat[3, 2] == pytest.approx(1.0)

    def test_boundary_pattern(self):
        a, b = generate(GenSpec(dim=4, kind="doubly_commuting_pair", seed=8,
                                params={"boundary_count": 1}))
        # sharing unimodular entries forces equality on the boundary block
        assert op_norm(a.mat) == pytest.approx(1.0, abs=1e-12)
        assert op_norm(b.mat) == pytest.approx(1.0, abs=1e-12)


class TestValidation:
    def test_unknown_kind(self):
        with pytest.raises(InvalidSpecError):
            generate(GenSpec(dim=3, kind="bogus", seed=0))

    def test_bad_dim(self):
        with pytest.raises(InvalidSpecError):
            generate(GenSpec(dim=0, kind="generic", seed=0))

    def test_bad_rank(self):
        with pytest.raises(InvalidSpecError):
            generate(GenSpec(dim=3, kind="partial_isometry", seed=0,
                             params={"rank": 7}))
