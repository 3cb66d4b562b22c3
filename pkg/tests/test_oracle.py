import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftlab.operators import BlockShiftOperator, Coupling, FinSuppVector, WeightedShift
from shiftlab.oracle import (
    DenseMatrix,
    DissipativeTestOperator,
    SingularSectionError,
    _solve,
    dense_resolvent_check,
    dense_svd_check,
    dissipative_identity_check,
    randomized_identity_suite,
    strong_convergence_probe,
)
from shiftlab.sequences import WeightSequence, theorem1_weights

T1 = WeightedShift(theorem1_weights())


def test_dense_matrix_validation():
    with pytest.raises(ValueError):
        DenseMatrix(np.zeros((2, 3)), "x", (0, 1))
    with pytest.raises(ValueError):
        DenseMatrix(np.array([[np.nan]]), "x", (0, 0))
    m = DenseMatrix.section(T1, 4)
    assert m.dim == 9 and m.window == (-4, 4)


def test_singular_section_detected():
    with pytest.raises(SingularSectionError):
        _solve(np.zeros((3, 3)), np.ones(3))


def test_compressed_section_fails_inside_disk():
    # the nilpotent compression has nothing to do with the bi-infinite resolvent
    f = FinSuppVector(-2, [1.0, 2.0, 3.0])
    per = dense_resolvent_check(T1, 0.7, f, 32, boundary="periodic")
    comp = dense_resolvent_check(T1, 0.7, f, 32, boundary="compress")
    assert per <= 1e-6 and comp > 1.0


@given(st.floats(0.1, 0.8), st.floats(0, 2 * np.pi), st.booleans())
@settings(max_examples=20)
def test_resolvent_oracle_random_points(gap, theta, inside):
    lam = (1 - gap if inside else 1 + gap) * np.exp(1j * theta)
    f = FinSuppVector(-3, np.arange(1.0, 8.0))
    assert dense_resolvent_check(T1, lam, f, 256, 64) <= 1e-8


def test_oracle_rejects_small_gap_and_edge_support():
    f = FinSuppVector.basis(0)
    with pytest.raises(ValueError, match="oracle floor"):
        dense_resolvent_check(T1, 0.9999, f, 64)
    with pytest.raises(ValueError, match="interior"):
        dense_resolvent_check(T1, 0.5, FinSuppVector.basis(60), 64)


def test_dense_svd_of_coupling():
    B = BlockShiftOperator(WeightSequence.harmonic())
    n = 16
    analytic = WeightSequence.harmonic().values(np.abs(np.arange(-n, n + 1)))
    assert dense_svd_check(Coupling(B), n, analytic) <= 1e-12


def test_dissipative_operator_validation(rng):
    D = DissipativeTestOperator.random(4, rng)
    assert np.min(np.linalg.eigvalsh(D.V)) >= -1e-12
    with pytest.raises(ValueError):
        DissipativeTestOperator(np.array([[0, 1], [0, 0]]), np.eye(2))
    with pytest.raises(ValueError):
        DissipativeTestOperator(np.eye(2), -np.eye(2))


def test_dissipative_identity_suite():
    res = randomized_identity_suite(trials=50, dim=8)
    assert res.shape == (50,) and res.max() <= 1e-10


@given(st.floats(0.01, 10.0), st.floats(-5, 5))
@settings(max_examples=20)
def test_identity_any_upper_point(eps, re):
    rng = np.random.default_rng(7)
    D = DissipativeTestOperator.random(6, rng)
    u = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    assert dissipative_identity_check(D, u, complex(re, eps)) <= 1e-10
    with pytest.raises(ValueError):
        dissipative_identity_check(D, u, complex(re, -eps))


def test_strong_convergence_slope(rng):
    D = DissipativeTestOperator.random(8, rng)
    u = rng.standard_normal(8) + 0j
    t = strong_convergence_probe(D, u)
    assert t.taus == (1e2, 1e3, 1e4)
    assert abs(t.slope + 1) <= 0.1
    assert all(a > b for a, b in zip(t.deviations, t.deviations[1:]))


def test_identity_suite_deterministic():
    a = randomized_identity_suite(trials=5, seed=11)
    b = randomized_identity_suite(trials=5, seed=11)
    assert np.array_equal(a, b)
