"""Shared strategies and helpers for the test suite."""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from contraction_lab import make_contraction
from contraction_lab.linalg import op_norm

MAX_DIM = 5


def rng_matrix(seed: int, rows: int, cols: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def scaled_contraction(seed: int, dim: int, norm: float):
    g = rng_matrix(seed, dim, dim)
    n = op_norm(g)
    return make_contraction(g * (norm / n) if n > 0 else g)


@st.composite
def square_contractions(draw, max_dim: int = MAX_DIM, max_norm: float = 0.98):
    dim = draw(st.integers(1, max_dim))
    seed = draw(st.integers(0, 2**32 - 1))
    norm = draw(st.floats(0.05, max_norm))
    return scaled_contraction(seed, dim, norm)


@st.composite
def psd_matrices(draw, max_dim: int = MAX_DIM):
    dim = draw(st.integers(1, max_dim))
    seed = draw(st.integers(0, 2**32 - 1))
    g = rng_matrix(seed, dim, dim)
    return g @ g.conj().T / max(1.0, dim)


@st.composite
def rectangular_matrices(draw, max_dim: int = MAX_DIM):
    rows = draw(st.integers(1, max_dim))
    cols = draw(st.integers(1, max_dim))
    seed = draw(st.integers(0, 2**32 - 1))
    return rng_matrix(seed, rows, cols)
