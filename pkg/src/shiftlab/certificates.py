"""Partial-sum certificates for nonnegative series.

A certificate records a trace of partial sums at increasing cut-offs and
one of two verdicts:

``converged``
    The partial sum plus a tail bound brackets the total.  ``certified`` is
    True when the tail bound is rigorous (derived from an analytic envelope)
    and False when it comes from a fitted tail model.

``divergence_evidence``
    No tail bound is available; the partial sums are fitted against a growth
    model and the fit is stored.  This is evidence, never a proof.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

CONVERGED = "converged"
DIVERGENCE_EVIDENCE = "divergence_evidence"


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares growth model of partial sums against ``ln N``.

    ``model`` is ``"log"`` for ``S = intercept + slope * ln N`` and
    ``"power"`` for ``ln S = intercept + slope * ln N``.
    """

    model: str
    slope: float
    intercept: float
    r2: float

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r2,
        }


@dataclass(frozen=True)
class SeriesCertificate:
    label: str
    checkpoints: tuple[int, ...]
    partial_sums: tuple[float, ...]
    verdict: str
    tail_bound: float | None = None
    certified: bool = False
    fit: GrowthFit | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def partial(self) -> float:
        return self.partial_sums[-1] if self.partial_sums else 0.0

    @property
    def converged(self) -> bool:
        return self.verdict == CONVERGED

    @property
    def bound(self) -> float | None:
        if self.tail_bound is None:
            return None
        return self.partial + self.tail_bound

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "verdict": self.verdict,
            "partial_sum": self.partial,
            "tail_bound": self.tail_bound,
            "bound": self.bound,
            "certified": self.certified,
            "fit": None if self.fit is None else self.fit.to_dict(),
            "checkpoints": list(self.checkpoints),
            "partial_sums": list(self.partial_sums),
            "notes": list(self.notes),
        }


def checkpoints(n_max: int, count: int = 12, n_min: int | None = None) -> np.ndarray:
    """Log-spaced integer cut-offs ending exactly at ``n_max``."""
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if n_min is None:
        n_min = max(1, n_max // 1000)
    n_min = max(1, min(int(n_min), n_max))
    pts = np.unique(np.round(np.geomspace(n_min, n_max, count)).astype(np.int64))
    if pts[-1] != n_max:
        pts = np.append(pts, n_max)
    return pts


def _r2(y: np.ndarray, resid: np.ndarray) -> float:
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return 1.0 - ss_res / ss_tot


def fit_log_growth(n: np.ndarray, sums: np.ndarray) -> GrowthFit:
    """Fit ``S(N) = a + b ln N``."""
    x = np.log(np.asarray(n, dtype=float))
    y = np.asarray(sums, dtype=float)
    if len(x) < 2:
        return GrowthFit("log", 0.0, float(y[-1]) if len(y) else 0.0, 0.0)
    slope, intercept = np.polyfit(x, y, 1)
    return GrowthFit("log", float(slope), float(intercept), _r2(y, y - (intercept + slope * x)))


def fit_power_growth(n: np.ndarray, sums: np.ndarray) -> GrowthFit:
    """Fit ``ln S(N) = a + b ln N`` on the positive partial sums."""
    n = np.asarray(n, dtype=float)
    s = np.asarray(sums, dtype=float)
    keep = s > 0
    if keep.sum() < 2:
        return GrowthFit("power", 0.0, 0.0, 0.0)
    x, y = np.log(n[keep]), np.log(s[keep])
    slope, intercept = np.polyfit(x, y, 1)
    return GrowthFit("power", float(slope), float(intercept), _r2(y, y - (intercept + slope * x)))


def best_growth_fit(n: np.ndarray, sums: np.ndarray) -> GrowthFit:
    """Logarithmic fit unless a power law explains the trace clearly better.

    Polynomially growing sums (slope of the power fit near 1 or above) are
    reported with the power model; everything else keeps the log model.
    """
    log_fit = fit_log_growth(n, sums)
    pow_fit = fit_power_growth(n, sums)
    if pow_fit.slope > 0.5 and pow_fit.r2 > log_fit.r2:
        return pow_fit
    return log_fit


def power_tail(coef: float, alpha: float, n0: float) -> float:
    """Upper bound for ``sum_{m > n0} coef * m**(-alpha)`` by the integral test."""
    if coef == 0.0:
        return 0.0
    if alpha <= 1.0:
        return float("inf")
    return coef * float(n0) ** (1.0 - alpha) / (alpha - 1.0)


def trace(terms: np.ndarray, cuts: np.ndarray) -> np.ndarray:
    """Partial sums of ``terms`` (1-based cut-offs) at each entry of ``cuts``."""
    csum = np.cumsum(np.asarray(terms, dtype=float))
    cuts = np.asarray(cuts, dtype=np.int64)
    out = np.zeros(len(cuts))
    ok = cuts > 0
    out[ok] = csum[np.minimum(cuts[ok], len(csum)) - 1] if len(csum) else 0.0
    return out


def make_certificate(
    label: str,
    cuts,
    sums,
    tail_bound: float | None,
    *,
    certified: bool,
    notes=(),
) -> SeriesCertificate:
    """Build a certificate; a finite tail bound means ``converged``."""
    cuts = tuple(int(c) for c in cuts)
    sums = tuple(float(s) for s in sums)
    if tail_bound is not None and np.isfinite(tail_bound):
        return SeriesCertificate(
            label, cuts, sums, CONVERGED, float(tail_bound), bool(certified), None, tuple(notes)
        )
    fit = best_growth_fit(np.array(cuts), np.array(sums)) if len(cuts) else None
    return SeriesCertificate(
        label, cuts, sums, DIVERGENCE_EVIDENCE, None, False, fit, tuple(notes)
    )
