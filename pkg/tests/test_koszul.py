import numpy as np
import pytest

from dwlab.corpus import koszul_vectors
from dwlab.koszul import (
    build_Q,
    harmonic_estimate_check,
    pair_indices,
    q_apply,
    q_derivative,
    q_field,
    q_star_apply,
)
from dwlab.quadrature import build_disk_rule
from dwlab.series import VectorSeries


def test_build_Q_single_nonzero():
    Q = build_Q([1.0, 0.0])
    dense = Q.dense()
    assert dense.shape == (2, 1)
    assert dense[0, 0] == 0.0 and dense[1, 0] == -1.0
    target = np.diag([0.0, 1.0])
    assert np.allclose(Q.qq_star(), target)


def test_build_Q_three_four():
    Q = build_Q([3.0, 4.0])
    dense = Q.dense()
    assert dense[0, 0] == 4.0 and dense[1, 0] == -3.0
    assert np.allclose(Q.qq_star(), [[16.0, -12.0], [-12.0, 9.0]])
    assert np.allclose(
        25.0 * np.eye(2) - np.outer([3.0, 4.0], [3.0, 4.0]), Q.qq_star()
    )


def test_zero_vector_allowed():
    Q = build_Q([0.0, 0.0, 0.0])
    assert Q.rank() == 0
    assert Q.identity_residual() == 0.0


def test_column_count_and_sparsity():
    c = np.arange(1.0, 6.0)
    Q = build_Q(c)
    n = 5
    assert Q.shape == (n, n * (n - 1) // 2)
    dense = Q.dense()
    for col in range(dense.shape[1]):
        assert np.count_nonzero(dense[:, col]) == 2


def test_identities_on_seeded_corpus():
    for c in koszul_vectors(count=100, n_max=64):
        Q = build_Q(c)
        assert Q.identity_residual() <= 1e-14
        assert Q.cq_residual() <= 1e-15
        assert Q.rank() == len(c) - 1


def test_q_field_examples():
    F = VectorSeries([[0.0, 1.0], [1.0]])  # (z, 1)
    z = 0.37 - 0.21j
    Q = q_field(F, z)
    dense = Q.dense()
    assert dense[0, 0] == pytest.approx(1.0)
    assert dense[1, 0] == pytest.approx(-z)
    # F(z) Q(z) = 0 on a grid, exactly
    rng = np.random.default_rng(11)
    pts = 0.9 * np.sqrt(rng.uniform(0, 1, 32)) * np.exp(2j * np.pi * rng.uniform(0, 1, 32))
    for p in pts:
        assert q_field(F, p).cq_residual() <= 1e-15


def test_q_field_rejects_boundary():
    F = VectorSeries([[1.0]])
    with pytest.raises(ValueError):
        q_field(F, 1.0)


def test_q_derivative_constant_and_linear():
    Fc = VectorSeries([[1.0], [2.0]])
    assert np.all(q_derivative(Fc, 0.1) == 0.0)
    F = VectorSeries([[0.0, 1.0], [1.0]])
    d = q_derivative(F, 0.3 + 0.2j)
    assert d[0, 0] == 0.0 and d[1, 0] == -1.0


def test_q_derivative_matches_finite_differences():
    F = VectorSeries([[0.0, 0.5, 0.25], [0.5, -0.125]])
    z = 0.3 + 0.2j
    h = 1e-5
    fd = (q_field(F, z + h).dense() - q_field(F, z - h).dense()) / (2 * h)
    assert np.allclose(q_derivative(F, z), fd, atol=1e-9)


def test_q_apply_and_star_apply_consistency():
    rng = np.random.default_rng(3)
    n = 4
    c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    k = rng.standard_normal(n * (n - 1) // 2) + 1j * rng.standard_normal(n * (n - 1) // 2)
    Q = build_Q(c).dense()
    assert np.allclose(q_apply(c, k), Q @ k)
    assert np.allclose(q_star_apply(c, v), Q.conj().T @ v)


def test_pair_indices_lexicographic():
    assert pair_indices(4) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_harmonic_estimate_constant_F():
    # constant F: Q' = 0, lhs = 0
    F = VectorSeries([[0.6], [0.8]])
    rule = build_disk_rule(1.0, 24, 64)
    rep = harmonic_estimate_check(F, {0: 1.0}, 1.0, rule)
    assert rep["lhs"] == pytest.approx(0.0, abs=1e-14)
    assert rep["passed"]


def test_harmonic_estimate_half_z_example():
    # F = (z/2, 1/2), w = 1: lhs = (1/4) int dA_alpha <= 8
    F = VectorSeries([[0.0, 0.5], [0.5]])
    rule = build_disk_rule(1.0, 32, 96)
    rep = harmonic_estimate_check(F, {0: 1.0}, 1.0, rule)
    assert rep["lhs"] == pytest.approx(np.pi / 4.0, rel=1e-12)
    assert rep["rhs"] == pytest.approx(8.0)
    assert rep["passed"]


def test_harmonic_estimate_harmonic_data():
    # w = Re z on the boundary: modes {1: 1/2, -1: 1/2}
    F = VectorSeries([[0.0, 0.5], [0.5]])
    rule = build_disk_rule(0.5, 32, 96)
    rep = harmonic_estimate_check(F, {1: 0.5, -1: 0.5}, 0.5, rule)
    assert rep["passed"]


def test_harmonic_estimate_warns_on_large_components():
    F = VectorSeries([[5.0], [0.5]])
    rule = build_disk_rule(1.0, 16, 32)
    with pytest.warns(UserWarning):
        harmonic_estimate_check(F, {0: 1.0}, 1.0, rule)


def test_triplet_json_form():
    Q = build_Q([3.0, 4.0])
    data = Q.to_json()
    assert data["n"] == 2
    assert data["pairs"] == [[0, 1]]
    assert [0, 0, 4.0, 0.0] in data["triplets"]
    assert [1, 0, -3.0, -0.0] in data["triplets"] or [1, 0, -3.0, 0.0] in data["triplets"]
