import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftlab.certificates import CONVERGED, DIVERGENCE_EVIDENCE
from shiftlab.hardy import (
    NOT_A_NORM,
    CoefficientSeries,
    cauchy_transform,
    companion_series_certificate,
    duality_bruteforce,
    duality_h2_norm,
    element_norm_table,
    h2_norm_exact,
    holder_inclusion_check,
    hp_norm_quadrature,
    integral_mean,
    monotone_in_r,
    plemelj_jump,
    radial_schedule,
    resolvent_element_series,
    richardson,
    strong_h2_weighted_sum,
    strong_series_certificate,
)
from shiftlab.operators import BlockShiftOperator, FinSuppVector, WeightedShift
from shiftlab.sequences import WeightSequence, theorem1_weights

# oracle: explicit running products in a plain loop, frozen
STRONG_ORACLE = {2000: 41.408162556937285, 20000: 50.620311177922076, 200000: 59.83083163240579}
# oracle: exact rational (H_12 - 1)^2
DUALITY_J12 = float((sum(Fraction(1, k) for k in range(1, 13)) - 1) ** 2)


def test_geometric_h2_norm():
    r = h2_norm_exact(CoefficientSeries.geometric(0.5, 60))
    assert r.estimate <= math.sqrt(4 / 3) <= r.upper_bound
    assert r.upper_bound - r.lower_bound < 1e-15


def test_h2_exact_requires_tail():
    with pytest.raises(ValueError, match="quadrature"):
        h2_norm_exact(CoefficientSeries([1.0, 2.0], tail_sq=None))


@given(st.floats(-0.8, 0.8), st.floats(-0.8, 0.8), st.floats(0.1, 3.0))
def test_parseval_exact_vs_quadrature(a, b, scale):
    q = complex(a, b)
    if abs(q) >= 0.85:
        return
    ex = h2_norm_exact(CoefficientSeries.geometric(q, 400, scale))
    qd = hp_norm_quadrature(lambda z: scale / (1 - q * z), 2.0, n_radii=40)
    assert abs(ex.estimate - qd.estimate) <= 1e-8


def test_quadrature_advisory_for_small_p():
    r = hp_norm_quadrature(lambda z: 1 + z, 0.5, n_radii=8)
    assert r.advisory == NOT_A_NORM
    with pytest.raises(ValueError):
        hp_norm_quadrature(lambda z: z, 3.0)


def test_integral_mean_of_monomial():
    m, err, ok = integral_mean(lambda z: z**3, 0.5, 1.0)
    assert ok and m == pytest.approx(0.125, rel=1e-12)


@given(st.sampled_from([1.0, 1.5, 2.0]), st.floats(0.1, 0.9))
def test_means_monotone_in_r_and_p(p, q):
    f = lambda z: 1 / (1 - q * z) + z**2
    r = hp_norm_quadrature(f, p, n_radii=12)
    assert monotone_in_r(r)
    assert holder_inclusion_check(f, 2.0, p, n_radii=12).ok


def test_radial_schedule():
    r = radial_schedule(5)
    assert np.allclose(r, [0.5, 0.75, 0.875, 0.9375, 0.96875])


def test_element_series_unit_shift():
    T = WeightedShift(WeightSequence.constant(1.0))
    js = np.arange(-5, 6)
    inside = element_norm_table(T, FinSuppVector.basis(0), js, side="inside")
    comp = element_norm_table(T, FinSuppVector.basis(0), js, side="companion")
    assert np.allclose(inside, (js >= 1).astype(float))
    assert np.allclose(comp, (js <= 0).astype(float))
    s = resolvent_element_series(T, FinSuppVector.basis(0), FinSuppVector.basis(3))
    # the expansion stops once the support has drifted past e_3
    assert np.allclose(s.coef, [0, 0, 1])


def test_weak_norms_theorem1_frozen():
    # oracle: the sup over |j| <= 200 equals ||W|| = 1/a_1 = 2, reached at j = 3
    T = WeightedShift(theorem1_weights())
    js = np.arange(-200, 201)
    vals = element_norm_table(T, FinSuppVector.basis(0), js, side="inside")
    assert vals.max() == pytest.approx(2.0, abs=1e-12)
    assert js[np.argmax(vals)] == 3


def test_strong_series_matches_oracle():
    cert = strong_series_certificate(theorem1_weights(), 0, 200000, cuts=list(STRONG_ORACLE))
    assert np.allclose(cert.partial_sums, list(STRONG_ORACLE.values()), rtol=1e-10)
    assert cert.verdict == DIVERGENCE_EVIDENCE


def test_strong_series_converges_for_fast_decay():
    rho = WeightSequence.user_table(1, [0.9, 1.1, 0.95])
    cert = strong_series_certificate(rho, 0, 1000)
    assert cert.verdict == CONVERGED and cert.tail_bound == 0.0
    comp = companion_series_certificate(rho, 0, 1000)
    assert comp.verdict == CONVERGED


def test_weighted_sum_zero_vector():
    w = strong_h2_weighted_sum(theorem1_weights(), FinSuppVector.zero(), 100)
    assert w.certificate.partial == 0.0 and w.certificate.converged


def test_duality_value_j12():
    rho = WeightSequence.harmonic()
    v = duality_h2_norm(rho, FinSuppVector.basis(0), -12, 12).partial
    assert v == pytest.approx(DUALITY_J12, abs=1e-12)
    assert abs(v - duality_bruteforce(rho, FinSuppVector.basis(0), -12, 14)) <= 1e-10


@given(st.integers(-30, -2))
def test_duality_matches_bruteforce(j):
    rho = WeightSequence.harmonic()
    u2 = FinSuppVector(-1, [1.0, 0.5j, -0.25])
    n = -j + 3
    a = duality_h2_norm(rho, u2, j, n).partial
    b = duality_bruteforce(rho, u2, j, n + 3)
    assert a == pytest.approx(b, rel=1e-12, abs=1e-14)


def test_cauchy_transform_closed_form():
    t = np.linspace(-1, 1, 4097)
    z = 0.3 + 0.5j
    v = cauchy_transform(t, np.ones_like(t), z)
    exact = np.log((1 - z) / (-1 - z))
    assert abs(v.value - exact) <= max(1e-8, 10 * v.error)
    with pytest.raises(ValueError):
        cauchy_transform(t, np.ones_like(t), 0.2 + 1e-6j)


def test_plemelj_gaussian():
    t = np.linspace(-8, 8, 2**14 + 1)
    d = np.exp(-t**2)
    for x in (-0.7, 0.0, 1.1):
        est = plemelj_jump(t, d, x)
        assert abs(est.value - math.exp(-x * x)) <= 1e-6


def test_richardson_exact_on_polynomials():
    eps = 0.1 / 2.0 ** np.arange(4)
    vals = 3.0 + 2 * eps - 5 * eps**2 + eps**3
    val, err = richardson(vals)
    assert val == pytest.approx(3.0, abs=1e-12)
    assert err >= abs(val - 3.0)


def test_block_element_table_shapes():
    B = BlockShiftOperator(WeightSequence.harmonic())
    u = (FinSuppVector.zero(), FinSuppVector.basis(0))
    js = np.arange(-8, 9)
    top = element_norm_table(B, u, js, 0, "inside")
    assert top.shape == js.shape and np.all(np.isfinite(top))
