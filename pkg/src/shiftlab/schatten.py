"""Singular-value diagnostics and l^p summability verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .certificates import (
    SeriesCertificate,
    checkpoints,
    make_certificate,
    power_tail,
    trace,
)
from .operators import BlockShiftOperator, Coupling, WeightedShift, finite_section
from .sequences import REINDEXING_NOTE, PiTable, WeightSequence

DEFAULT_P_GRID = (1.0, 1.1, 1.5, 2.0)
POWER_MARGIN = 1.02


@dataclass(frozen=True)
class SchattenReport:
    """Values sorted by modulus (nonincreasing) with their source indices and per-p verdicts."""

    values: np.ndarray
    indices: np.ndarray
    window: tuple[int, int]
    verdicts: dict = field(default_factory=dict)
    domination: dict | None = None
    notes: tuple[str, ...] = ()

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.values)

    def to_dict(self, max_values: int = 64) -> dict:
        return {
            "window": list(self.window),
            "count": int(len(self.values)),
            "leading_values": [float(v) for v in self.values[:max_values]],
            "verdicts": {f"{p:g}": c.to_dict() for p, c in self.verdicts.items()},
            "domination": self.domination,
            "notes": list(self.notes),
        }


def sort_by_modulus(values, indices) -> tuple[np.ndarray, np.ndarray]:
    """Nonincreasing modulus; ties broken by ascending index."""
    values, indices = np.asarray(values), np.asarray(indices)
    order = np.lexsort((indices, -np.abs(values)))
    return values[order], indices[order]


# -- summability ----------------------------------------------------------------------

def _fit_power(v: np.ndarray, n: np.ndarray):
    x, y = np.log(n + 1.0), np.log(v)
    slope, icpt = np.polyfit(x, y, 1)
    r = y - (icpt + slope * x)
    return -slope, float(np.exp(icpt + np.max(r))), float(np.sum(r**2))


def _fit_geometric(v: np.ndarray, n: np.ndarray):
    slope, icpt = np.polyfit(n.astype(float), np.log(v), 1)
    r = np.log(v) - (icpt + slope * n)
    return float(np.exp(slope)), float(np.exp(icpt + np.max(r))), float(np.sum(r**2))


def summability_verdict(values, p: float, tail_model="auto", tail_bound: float | None = None
                        ) -> SeriesCertificate:
    """Partial sums of ``|v_n|^p`` for nonincreasing ``values`` with a tail estimate.

    ``tail_model`` is ``"power"`` (``v_n ~ C (n+1)^{-a}``), ``"geometric"``
    (``v_n ~ C r^n``), ``"auto"`` (better of the two fits on the second half
    of the positive values), or an envelope ``(C, a)`` with
    ``v_n <= C (n+1)^{-a}`` beyond the data, which gives a certified tail.
    A precomputed certified ``tail_bound`` overrides the model.  Fitted
    tails are marked uncertified; a power tail counts as convergent only
    when ``a p > 1.02``.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    v = np.abs(np.asarray(values, dtype=float))
    n = len(v)
    if n == 0:
        return make_certificate(f"sum |v|^{p:g}", [0], [0.0], 0.0, certified=True)
    cuts = checkpoints(n, n_min=max(2, n // 1000)) if n >= 2 else np.array([1])
    sums = trace(v**p, cuts)
    label = f"sum |v|^{p:g}"
    if tail_bound is not None:
        return make_certificate(label, cuts, sums, tail_bound, certified=True)
    if isinstance(tail_model, tuple):
        c, a = tail_model
        tail = 0.0 if c == 0 else power_tail(c**p, a * p, n)
        return make_certificate(label, cuts, sums, tail, certified=True)
    pos = np.flatnonzero(v > 0)
    if len(pos) == 0 or pos[-1] < n - 1 and v[-1] == 0:
        # trailing zeros: treat the data as exhausting the sequence
        return make_certificate(label, cuts, sums, 0.0, certified=False,
                                notes=["trailing zeros taken as exact"])
    half = pos[len(pos) // 2:]
    if len(half) < 3:
        return make_certificate(label, cuts, sums, None, certified=False)
    a, c_pow, res_pow = _fit_power(v[half], half)
    r, c_geo, res_geo = _fit_geometric(v[half], half)
    use = tail_model
    if use == "auto":
        use = "geometric" if res_geo < res_pow and r < 1 else "power"
    if use == "geometric":
        tail = c_geo**p * r ** (p * n) / (1 - r**p) if r < 1 else None
        note = f"geometric tail fit r={r:.6g}"
    elif use == "power":
        tail = power_tail(c_pow**p, a * p, n) if a * p > POWER_MARGIN else None
        note = f"power tail fit exponent={a:.6g}"
    else:
        raise ValueError(f"unknown tail model {tail_model!r}")
    return make_certificate(label, cuts, sums, tail, certified=False, notes=[note])


# -- I - T*T ---------------------------------------------------------------------------

def _defect_tail(rho: WeightSequence, lo: int, hi: int, p: float) -> float:
    """Certified bound for ``sum |1 - rho_j^2|^p`` over ``j`` outside ``[lo, hi]``."""
    total = 0.0
    for side, n0 in ((+1, hi), (-1, -lo)):
        if n0 < 1:
            return np.inf
        c, a = rho.envelope(side, n0 + 1)
        if c == 0:
            continue
        cs = c * (2.0 + c * (n0 + 1.0) ** (-a))
        total += power_tail(cs**p, a * p, n0)
    return total


def defect_spectrum(T: WeightedShift, window: tuple[int, int], p_grid=DEFAULT_P_GRID,
                    pi: PiTable | None = None) -> SchattenReport:
    """Eigenvalues ``1 - rho_j^2`` of the diagonal defect over the window.

    The enumeration is 0-based and ordered by decreasing modulus; with
    ``pi`` given, ``|lambda_n| <= pi_n`` is checked for every ``n``.  Tails
    beyond a symmetric window are certified from the family envelope.
    """
    lo, hi = window
    idx = np.arange(lo, hi + 1)
    lam = 1.0 - T.weights.values(idx) ** 2
    vals, order = sort_by_modulus(lam, idx)
    verdicts = {}
    for p in p_grid:
        verdicts[float(p)] = summability_verdict(vals, p, tail_bound=_defect_tail(T.weights, lo, hi, p))
    dom = None
    if pi is not None:
        ratios = np.abs(vals) / pi(np.arange(len(vals)))
        bad = np.flatnonzero(ratios > 1.0)
        dom = {"passed": bool(len(bad) == 0), "max_ratio": float(ratios.max()),
               "first_violation": int(bad[0]) if len(bad) else None, "count": int(len(vals))}
    notes = (REINDEXING_NOTE,) if T.weights.interleaved else ()
    return SchattenReport(vals, order, (lo, hi), verdicts, dom, notes)


# -- the block perturbation ---------------------------------------------------------------

def coupling_multiset(rho: WeightSequence, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``{rho_0} U {rho_m, rho_m : 1 <= m <= n}`` sorted, with indices ``-n .. n``."""
    idx = np.arange(-n, n + 1)
    return sort_by_modulus(rho.values(np.abs(idx)), idx)


def perturbation_singular_values(B: BlockShiftOperator, n: int, p_grid=DEFAULT_P_GRID,
                                 dense_check: bool = True) -> SchattenReport:
    """Singular values of ``S`` on ``|m| <= n`` from the diagonal ``S*S``.

    Checks ``mu_k <= rho_{floor(k/2)}`` (0-based ``k``) and, optionally, the
    dense SVD of the finite section.
    """
    vals, idx = coupling_multiset(B.coupling, n)
    k = np.arange(len(vals))
    bound = B.coupling.values(k // 2)
    viol = np.flatnonzero(vals > bound * (1 + 1e-15))
    dom = {"passed": bool(len(viol) == 0), "first_violation": int(viol[0]) if len(viol) else None,
           "max_ratio": float(np.max(vals / bound))}
    if dense_check:
        from .oracle import dense_svd_check

        dom["dense_svd_deviation"] = dense_svd_check(Coupling(B), n, vals)
    verdicts = {}
    for p in p_grid:
        tail = None
        if B.coupling.family == "harmonic":
            # rho_m = 1/(m + offset) <= 1/m, counted twice
            tail = 2.0 * power_tail(1.0, p, n) if B.coupling.offset >= 0 else None
        verdicts[float(p)] = summability_verdict(vals, p, tail_bound=tail)
    return SchattenReport(vals, idx, (-n, n), verdicts, dom)


def defect_section_values(T: WeightedShift, n: int) -> np.ndarray:
    """Diagonal of the dense section of ``I - T*T`` on interior coordinates."""
    m = finite_section(T, n)
    g = np.eye(len(m)) - m.conj().T @ m
    return np.real(np.diag(g))[1:]
