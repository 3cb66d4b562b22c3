import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import sici

from shiftlab.linemodel import (
    GridFunction,
    PotentialFunction,
    birman_solomyak_certificate,
    growth_slope,
    kernel_criterion,
    parseval_crosscheck,
    potential_primitive,
    resolvent_factor_certificate,
    similarity_weight,
    sinc_primitive,
    sinc_primitive_closed_form,
    sine_tail,
    strong_growth_functional,
    weight_envelope,
    weight_envelope_check,
)

SINC = PotentialFunction.sinc()


@given(st.floats(0.5, 500.0))
def test_sine_tail_matches_sici(a):
    val, err = sine_tail(a)
    assert abs(val - (math.pi / 2 - sici(a)[0])) <= max(1e-12, err)


def test_sinc_primitive_agrees_with_closed_form():
    x = np.linspace(-60, 60, 241)
    assert np.allclose(sinc_primitive(x), sinc_primitive_closed_form(x), atol=1e-12)


def test_similarity_weight_limits():
    w = similarity_weight(SINC, np.array([-1e4, 0.0, 1e4]))
    assert w[0] == pytest.approx(1.0, abs=1e-3)
    assert w[1] == pytest.approx(math.exp(-math.pi / 2), rel=1e-10)
    assert w[2] == pytest.approx(math.exp(-math.pi), abs=1e-3)


def test_weight_envelope_scan():
    scan = weight_envelope_check(SINC, 1e3)
    assert scan.ok and scan.worst_margin >= 0
    lo, hi = weight_envelope(np.array([0.0]))
    assert lo[0] <= math.exp(-math.pi / 2) <= hi[0]


def test_growth_slope_near_four_over_pi():
    g = growth_slope(SINC)
    assert abs(g.slope - 4 / math.pi) / (4 / math.pi) < 0.05
    # oracle: int_{-pi}^{pi} |sin x / x| = 2 Si(pi)
    assert strong_growth_functional(SINC, math.pi) == pytest.approx(2 * sici(math.pi)[0], rel=1e-12)


def test_sampled_potential_primitive():
    x = np.linspace(0, 1, 65)
    q = PotentialFunction.sampled(x, np.ones_like(x))
    assert potential_primitive(q, np.array([2.0]))[0] == pytest.approx(1.0, abs=1e-12)
    assert strong_growth_functional(q, 5.0) == pytest.approx(1.0)


def test_potential_csv(tmp_path):
    p = tmp_path / "q.csv"
    p.write_text("x,q\n0,1\n0.5,1\n1,1\n")
    q = PotentialFunction.from_csv(p)
    assert q.span == (0.0, 1.0) and q(0.25) == 1.0 and q(3.0) == 0.0
    with pytest.raises(ValueError):
        PotentialFunction.sampled([0, 1, 3], [1, 1, 1])


def test_parseval_box_exact():
    h = 2.0**-6
    x = np.arange(0, 1 + h / 2, h)
    q = PotentialFunction.sampled(x, np.ones_like(x))
    g = GridFunction.bump(0.0, 0.25, h)
    lhs, rhs = parseval_crosscheck(q, g, 2.0, 4.0, h)
    assert abs(lhs - rhs) <= 1e-6
    assert rhs == pytest.approx(g.norm2(), rel=1e-12)


def test_parseval_sinc():
    g = GridFunction.bump(0.0, 0.25)
    lhs, rhs = parseval_crosscheck(SINC, g, 200.0, 201.0)
    assert abs(lhs - rhs) / rhs < 1e-2
    with pytest.raises(ValueError):
        parseval_crosscheck(SINC, g, 200.0, 100.0)


def test_birman_solomyak_sinc():
    c = birman_solomyak_certificate(SINC, 1.5, 1000)
    assert c.converged and c.certified
    # heavier exponent, smaller terms
    c2 = birman_solomyak_certificate(SINC, 1.9, 1000)
    assert c2.partial < c.partial
    with pytest.raises(ValueError):
        birman_solomyak_certificate(SINC, 2.0, 10)


def test_resolvent_factor_cells_sum_to_total():
    # oracle: int_R |1/(y - i)|^2 dy = pi, so the delta -> 2 cell sum tends to pi
    z = 1j
    c = resolvent_factor_certificate(z, 1.999, 10**5)
    assert c.converged
    assert abs(c.partial - math.pi) < 0.05


def test_kernel_criterion():
    k = kernel_criterion(SINC, 1j, 1.5, 500)
    assert k.satisfied
