import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import finsupp, off_circle
from shiftlab.operators import BlockShiftOperator, FinSuppVector, WeightedShift
from shiftlab.oracle import dense_resolvent_check
from shiftlab.resolvent import (
    SpectralPoint,
    adjoint_block_matrix_element,
    adjoint_block_resolvent,
    block_resolvent,
    packet_growth_probe,
    radial_grid,
    residual,
    resolvent_growth_probe,
    shift_resolvent,
    unit_resolvent,
)
from shiftlab.sequences import WeightSequence, theorem1_weights

SHIFTS = [WeightedShift(WeightSequence.constant(1.0)), WeightedShift(theorem1_weights()),
          WeightedShift(WeightSequence.user_table(-2, [0.5, 2.0, 0.8]))]
BH = BlockShiftOperator(WeightSequence.harmonic())


def test_spectral_point():
    p = SpectralPoint.polar(0.5, 0.0)
    assert p.inside and p.region == "inside" and p.gap == pytest.approx(0.5)
    with pytest.raises(ValueError):
        SpectralPoint(1.0)


def test_unweighted_inside_closed_form():
    # (T - lam)^{-1} e_0 = sum_k lam^k e_{k+1} for the unweighted left shift
    lam = 0.3 + 0.4j
    v = shift_resolvent(SHIFTS[0], lam, FinSuppVector.basis(0)).payload
    k = np.arange(40)
    assert np.allclose(v.get(k + 1), lam**k, atol=1e-15)
    assert v.get(np.arange(-5, 1)).tolist() == [0] * 6


def test_unweighted_outside_closed_form():
    lam = -2.0
    v = shift_resolvent(SHIFTS[0], lam, FinSuppVector.basis(0)).payload
    k = np.arange(40)
    assert np.allclose(v.get(-k), -(lam ** -(k + 1.0)), atol=1e-15)


def test_zero_point_is_inverse():
    T = SHIFTS[1]
    f = FinSuppVector(2, [1.0, 2.0, 3.0])
    v = shift_resolvent(T, 0.0, f).payload
    ref = T.inverse_apply(f)
    assert np.allclose(v.get(ref.indices()), ref.coef)


@pytest.mark.parametrize("T", SHIFTS, ids=lambda t: t.weights.family)
@given(f=finsupp(), lam=off_circle())
def test_shift_resolvent_residual(T, f, lam):
    r = shift_resolvent(T, lam, f)
    bound = (T.weights.bounds(-np.inf, np.inf)[1] + abs(lam)) * r.tail_bound
    assert residual(T, lam, f, r.payload) <= bound + 1e-10 * max(f.norm(), 1.0)
    assert r.tail_bound <= 1e-12 * f.norm() + 1e-300


@given(f=finsupp(), lam=off_circle(), mu=off_circle())
def test_first_resolvent_identity(f, lam, mu):
    T = SHIFTS[1]
    if abs(lam - mu) < 1e-3:
        return
    a = shift_resolvent(T, lam, f).payload
    b = shift_resolvent(T, mu, f).payload
    ab = shift_resolvent(T, lam, b).payload
    diff = (a - b) - ab * (lam - mu)
    assert diff.norm() <= 1e-8 * max(f.norm(), 1.0)


@given(f=finsupp(), lam=off_circle(), c=st.complex_numbers(max_magnitude=5))
def test_resolvent_is_linear(f, lam, c):
    T = SHIFTS[1]
    a = shift_resolvent(T, lam, f * c).payload
    b = shift_resolvent(T, lam, f).payload * c
    assert (a - b).norm() <= 1e-10 * max(abs(c) * f.norm(), 1.0)


def test_gap_policy():
    f = FinSuppVector.basis(0)
    with pytest.raises(ValueError):
        shift_resolvent(SHIFTS[0], 1 - 1e-8, f)
    with pytest.warns(RuntimeWarning):
        r = shift_resolvent(SHIFTS[0], 1 - 1e-4, f)
    assert r.small_gap
    # past the hard floor the tail length exceeds the output cap
    with pytest.warns(RuntimeWarning), pytest.raises(ValueError, match="cap"):
        shift_resolvent(SHIFTS[0], 1 - 1e-8, f, allow_small_gap=True)


@pytest.mark.parametrize("adjoint", [False, True])
@given(f=finsupp(), lam=off_circle())
def test_unit_resolvent_residual(adjoint, f, lam):
    v, tail = unit_resolvent(lam, f, adjoint=adjoint)
    shift = (lambda u: u.shifted(-1)) if adjoint else (lambda u: u.shifted(1))
    res = (shift(v) - v * lam - f).norm()
    assert res <= (1 + abs(lam)) * tail + 1e-10 * max(f.norm(), 1.0)


@given(f1=finsupp(max_len=4), f2=finsupp(max_len=4), lam=off_circle())
def test_block_resolvent_residual(f1, f2, lam):
    a, b = block_resolvent(BH, lam, (f1, f2))
    res = residual(BH, lam, (f1, f2), (a.payload, b.payload))
    scale = max(np.hypot(f1.norm(), f2.norm()), 1.0)
    assert res <= 3 * (a.tail_bound + b.tail_bound) + 1e-9 * scale


@given(f1=finsupp(max_len=4), f2=finsupp(max_len=4), lam=off_circle())
def test_adjoint_block_resolvent_residual(f1, f2, lam):
    a, b = adjoint_block_resolvent(BH, lam, (f1, f2))
    img = BH.adjoint_apply((a.payload, b.payload))
    r0 = img[0] - a.payload * lam - f1
    r1 = img[1] - b.payload * lam - f2
    scale = max(np.hypot(f1.norm(), f2.norm()), 1.0)
    assert np.hypot(r0.norm(), r1.norm()) <= 3 * (a.tail_bound + b.tail_bound) + 1e-9 * scale


def test_block_resolvent_duality():
    # <(B - lam)^{-1} f, g> = <f, (B* - conj lam)^{-1} g>
    lam = 0.4 + 0.3j
    f = (FinSuppVector(-1, [1.0, 2j]), FinSuppVector(0, [0.5, -1.0]))
    g = (FinSuppVector(2, [1.0]), FinSuppVector(-3, [1j, 1.0]))
    a, b = block_resolvent(BH, lam, f)
    lhs = a.payload.inner(g[0]) + b.payload.inner(g[1])
    c, d = adjoint_block_resolvent(BH, np.conj(lam), g)
    rhs = f[0].inner(c.payload) + f[1].inner(d.payload)
    assert lhs == pytest.approx(rhs, abs=1e-12)
    assert adjoint_block_matrix_element(BH, np.conj(lam), g, f) == pytest.approx(np.conj(lhs))


@pytest.mark.parametrize("op", [SHIFTS[0], SHIFTS[1], BH], ids=["unit", "theorem1", "block"])
def test_dense_oracle_agreement(op, rng):
    for z in (0.5 + 0.2j, -0.8j, 1.5, -1.2 + 0.3j):
        f = FinSuppVector(-3, rng.standard_normal(7))
        if isinstance(op, BlockShiftOperator):
            f = (f, FinSuppVector(-2, rng.standard_normal(5)))
        assert dense_resolvent_check(op, z, f, 128) <= 1e-8


def test_growth_probe_unit_shift_is_bounded():
    # for a unitary shift gap * ||(T - z)^{-1} u|| <= ||u||
    grid = radial_grid([0.5, 0.9, 1.1, 2.0], 8)
    p = resolvent_growth_probe(SHIFTS[0], FinSuppVector.basis(0), grid)
    assert p.sup <= 1.0 + 1e-12
    assert list(p.by_radius()) == sorted(p.by_radius())


def test_packet_probe_lower_bounds():
    p = packet_growth_probe(SHIFTS[0], [0.9, 0.99], 4)
    assert 0.5 < min(p.values) and p.sup <= 1.0 + 1e-12
    pt = packet_growth_probe(SHIFTS[1], [0.9, 0.99], 4)
    assert pt.sup <= 2.0 + 1e-9
