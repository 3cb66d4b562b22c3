"""Closed-form resolvents with certified truncation.

For the weighted shift ``T e_j = rho_{j-1} e_{j-1}`` and ``|lam| < 1``

    ((T - lam)^{-1} f)_m = sum_{k<m} f_k lam^{m-k-1} / prod_{j=k}^{m-1} rho_j,

while for ``|lam| > 1``

    ((T - lam)^{-1} f)_m = -sum_{k>=m} f_k prod_{j=m}^{k-1} rho_j / lam^{k-m+1}.

Both are geometric recurrences.  They are evaluated as linear filters on
``f_k exp(L_k)`` with ``L`` the running sum of ``log rho``, and the infinite
tail is cut where a geometric bound on the discarded mass drops below
``tol * ||f||``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .operators import (
    BlockShiftOperator,
    FinSuppVector,
    WeightedShift,
)
from .sequences import WeightSequence

DEFAULT_TOL = 1e-12
ORACLE_MIN_GAP = 1e-3
HARD_MIN_GAP = 1e-6
MAX_OUTPUT_LENGTH = 1 << 24
_UNIT = WeightSequence.constant(1.0)


@dataclass(frozen=True)
class SpectralPoint:
    """Point ``z`` off the unit circle."""

    z: complex

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        if not np.isfinite(self.z):
            raise ValueError("spectral point must be finite")
        if self.gap == 0.0:
            raise ValueError("spectral point lies on the unit circle")

    @classmethod
    def polar(cls, r: float, theta: float) -> "SpectralPoint":
        return cls(r * complex(math.cos(theta), math.sin(theta)))

    @property
    def region(self) -> str:
        return "inside" if abs(self.z) < 1 else "outside"

    @property
    def inside(self) -> bool:
        return abs(self.z) < 1

    @property
    def gap(self) -> float:
        return abs(abs(self.z) - 1.0)


def as_point(lam) -> SpectralPoint:
    return lam if isinstance(lam, SpectralPoint) else SpectralPoint(lam)


@dataclass(frozen=True)
class TruncatedVector:
    """Finitely supported payload plus a certified bound on the discarded norm."""

    payload: FinSuppVector
    tail_bound: float
    certified: bool = True
    small_gap: bool = False

    def norm(self) -> float:
        return self.payload.norm()

    def norm_upper(self) -> float:
        return self.payload.norm() + self.tail_bound


# -- weighted shift ---------------------------------------------------------

def _log_weights(w: WeightSequence, lo: int, hi: int) -> np.ndarray:
    """``L_m = sum_{j=lo}^{m-1} log rho_j`` for ``m = lo .. hi + 1``."""
    out = np.zeros(hi - lo + 2)
    np.cumsum(np.log(w.window(lo, hi)), out=out[1:])
    return out


def _geometric_filter(h: np.ndarray, ratio: complex) -> np.ndarray:
    """``y_n = sum_{k<=n} h_k ratio^{n-k}``."""
    return lfilter([1.0], [1.0, -ratio], h.astype(complex))


def _inside_values(w, lam, f: FinSuppVector, top: int) -> FinSuppVector:
    """Inside-disk coordinates on ``lo+1 .. top``."""
    lo = f.lo
    L = _log_weights(w, lo, top - 1)  # L[m - lo], m = lo .. top
    if np.ptp(L) < 600.0:
        h = np.zeros(top - lo, dtype=complex)
        h[: len(f.coef)] = f.coef * np.exp(L[: len(f.coef)])
        y = _geometric_filter(h, lam)
        return FinSuppVector(lo + 1, y * np.exp(-L[1:]))
    rho = w.window(lo, top - 1)
    fc = f.get(np.arange(lo, top))
    v = np.zeros(top - lo, dtype=complex)
    prev = 0j
    for i in range(top - lo):
        prev = (fc[i] + lam * prev) / rho[i]
        v[i] = prev
    return FinSuppVector(lo + 1, v)


def _outside_values(w, lam, f: FinSuppVector, bottom: int) -> FinSuppVector:
    """Outside-disk coordinates on ``bottom .. hi``."""
    hi = f.hi
    L = _log_weights(w, bottom, hi)[:-1]  # L[m - bottom], m = bottom .. hi
    mu = 1.0 / lam
    if np.ptp(L) < 600.0:
        h = np.zeros(hi - bottom + 1, dtype=complex)
        h[hi - bottom - len(f.coef) + 1:] = f.coef * np.exp(L[hi - bottom - len(f.coef) + 1:])
        y = _geometric_filter(h[::-1], mu)[::-1]
        return FinSuppVector(bottom, -mu * y * np.exp(-L))
    rho = w.window(bottom, hi)
    fc = f.get(np.arange(bottom, hi + 1))
    v = np.zeros(hi - bottom + 1, dtype=complex)
    nxt = 0j
    for i in range(hi - bottom, -1, -1):
        nxt = (rho[i] * nxt - fc[i]) / lam
        v[i] = nxt
    return FinSuppVector(bottom, v)


def _contracting_start(w, lam_abs, start, side, cap=MAX_OUTPUT_LENGTH):
    """First ``n0`` (searching away from the support) where the tail ratio contracts.

    Returns ``(n0, q)`` with ``q < 1`` the ratio bound valid beyond ``n0``.
    """
    target = math.sqrt(lam_abs) if side > 0 else 1.0 / math.sqrt(lam_abs)
    step = 64
    n0 = start
    best = None
    while abs(n0 - start) <= cap:
        if side > 0:
            inf_v, _ = w.bounds(n0, np.inf)
            q = lam_abs / inf_v if inf_v > 0 else np.inf
            ok = inf_v >= target
        else:
            _, sup_v = w.bounds(-np.inf, n0)
            q = sup_v / lam_abs
            ok = sup_v <= target
        if q < 1.0 and best is None:
            best = (n0, q)
        if ok:
            return n0, q
        if best is not None and abs(n0 - start) > 4 * abs(best[0] - start) + 1024:
            return best
        n0 += side * step
        step *= 2
    if best is not None:
        return best
    raise ValueError("geometric tail does not contract: weights too small for this point")


def _cut_tail(v: FinSuppVector, q: float, thresh: float, side: int, n0: int):
    """Drop coordinates beyond the first index past ``n0`` whose tail bound is small."""
    factor = q / math.sqrt(1.0 - q * q)
    mags = np.abs(v.coef) * factor
    idx = v.indices()
    ok = (mags <= thresh) & ((idx >= n0) if side > 0 else (idx <= n0))
    hits = np.flatnonzero(ok)
    if len(hits) == 0:
        return None
    if side > 0:
        pos = hits[0]
        return FinSuppVector(v.lo, v.coef[: pos + 1]), float(mags[pos])
    pos = hits[-1]
    return FinSuppVector(v.lo + pos, v.coef[pos:]), float(mags[pos])


def _tail_length(q: float, mag: float, thresh: float) -> int:
    if mag <= thresh or mag == 0.0:
        return 1
    return int(math.ceil(math.log(thresh / mag) / math.log(q))) + 2


def left_shift_resolvent(w: WeightSequence, lam: complex, f: FinSuppVector,
                         tol: float = DEFAULT_TOL) -> tuple[FinSuppVector, float]:
    """``(T_w - lam)^{-1} f`` for ``T_w e_j = w_{j-1} e_{j-1}``; returns (payload, tail)."""
    f = f.trimmed()
    if f.is_zero():
        return FinSuppVector.zero(), 0.0
    fnorm = f.norm()
    thresh = tol * fnorm
    lam = complex(lam)
    if lam == 0:
        idx = f.indices()
        return FinSuppVector(f.lo + 1, f.coef / w.values(idx)), 0.0
    lam_abs = abs(lam)
    if lam_abs < 1:
        n0, q = _contracting_start(w, lam_abs, f.hi + 1, +1)
        top = n0 + 1
        while True:
            v = _inside_values(w, lam, f, top)
            cut = _cut_tail(v, q, thresh, +1, n0)
            if cut is not None:
                return cut
            # grow at least geometrically so refinement stays O(n log n)
            top = max(top + _tail_length(q, abs(v.coef[-1]) * q, thresh),
                      top + (top - f.lo) // 2)
            if top - f.lo > MAX_OUTPUT_LENGTH:
                raise ValueError("resolvent support exceeds the output length cap")
    n0, q = _contracting_start(w, lam_abs, f.lo - 1, -1)
    bottom = n0 - 1
    while True:
        v = _outside_values(w, lam, f, bottom)
        cut = _cut_tail(v, q, thresh, -1, n0)
        if cut is not None:
            return cut
        bottom = min(bottom - _tail_length(q, abs(v.coef[0]) * q, thresh),
                     bottom - (f.hi - bottom) // 2)
        if f.hi - bottom > MAX_OUTPUT_LENGTH:
            raise ValueError("resolvent support exceeds the output length cap")


def _check_gap(lam: SpectralPoint, allow_small_gap: bool) -> bool:
    if lam.gap < HARD_MIN_GAP and not allow_small_gap:
        raise ValueError(f"gap {lam.gap:.3g} is below the safety floor {HARD_MIN_GAP:g}")
    small = lam.gap < ORACLE_MIN_GAP
    if small:
        warnings.warn(f"gap {lam.gap:.3g} is below the oracle floor", RuntimeWarning,
                      stacklevel=3)
    return small


def shift_resolvent(T: WeightedShift, lam, f: FinSuppVector, tol: float = DEFAULT_TOL,
                    allow_small_gap: bool = False) -> TruncatedVector:
    """``(T - lam)^{-1} f`` by the two-case closed form.

    ``tol`` is relative to ``||f||``.  The stored tail bound certifies the
    norm of all discarded coordinates.
    """
    lam = as_point(lam)
    small = _check_gap(lam, allow_small_gap)
    v, tail = left_shift_resolvent(T.weights, lam.z, f, tol)
    return TruncatedVector(v, tail, True, small)


def unit_resolvent(lam: complex, f: FinSuppVector, tol: float = DEFAULT_TOL,
                   adjoint: bool = False) -> tuple[FinSuppVector, float]:
    """``(U - lam)^{-1} f`` (or ``(U* - lam)^{-1} f``) for the unweighted right shift.

    ``U* = T_1`` is the unweighted left shift and ``U = J T_1 J`` with
    ``J`` the index flip.
    """
    if adjoint:
        return left_shift_resolvent(_UNIT, lam, f, tol)
    v, tail = left_shift_resolvent(_UNIT, lam, f.reflected(), tol)
    return v.reflected(), tail


def residual(op, lam, f, v) -> float:
    """``||(op - lam) v - f||`` by exact operator application."""
    lam = as_point(lam).z
    if isinstance(f, tuple):
        img = op.apply(v)
        r = [img[i] - v[i] * lam - f[i] for i in range(2)]
        return float(np.hypot(r[0].norm(), r[1].norm()))
    return (op.apply(v) - v * lam - f).norm()


# -- block operator ---------------------------------------------------------

def _sup_coupling(B: BlockShiftOperator) -> float:
    return max(B.coupling.bounds(0, np.inf)[1], 0.0)


def block_resolvent(B: BlockShiftOperator, lam, f, tol: float = DEFAULT_TOL,
                    allow_small_gap: bool = False) -> tuple[TruncatedVector, TruncatedVector]:
    """``(B - lam)^{-1} f = (X f1 - X R X f2, X f2)`` with ``X = (U - lam)^{-1}``."""
    lam = as_point(lam)
    small = _check_gap(lam, allow_small_gap)
    f1, f2 = f
    inv = 1.0 / lam.gap
    x2, t2 = unit_resolvent(lam.z, f2, tol)
    x1, t1 = unit_resolvent(lam.z, f1, tol)
    y, ty = unit_resolvent(lam.z, B.apply_r(x2), tol)
    top_tail = t1 + ty + inv * _sup_coupling(B) * t2
    return (TruncatedVector(x1 - y, top_tail, True, small),
            TruncatedVector(x2, t2, True, small))


def adjoint_block_resolvent(B: BlockShiftOperator, lam, f, tol: float = DEFAULT_TOL,
                            allow_small_gap: bool = False):
    """``(B* - lam)^{-1} f = (Y f1, Y f2 - Y R Y f1)`` with ``Y = (U* - lam)^{-1}``."""
    lam = as_point(lam)
    small = _check_gap(lam, allow_small_gap)
    f1, f2 = f
    inv = 1.0 / lam.gap
    y1, t1 = unit_resolvent(lam.z, f1, tol, adjoint=True)
    y2, t2 = unit_resolvent(lam.z, f2, tol, adjoint=True)
    z, tz = unit_resolvent(lam.z, B.apply_r(y1), tol, adjoint=True)
    bottom_tail = t2 + tz + inv * _sup_coupling(B) * t1
    return (TruncatedVector(y1, t1, True, small),
            TruncatedVector(y2 - z, bottom_tail, True, small))


def adjoint_block_matrix_element(B: BlockShiftOperator, lam, f, g,
                                 tol: float = DEFAULT_TOL, allow_small_gap: bool = False
                                 ) -> complex:
    """``<(U*-lam)^{-1} f1, g1> + <(U*-lam)^{-1} f2 - (U*-lam)^{-1} R (U*-lam)^{-1} f1, g2>``."""
    a, b = adjoint_block_resolvent(B, lam, f, tol, allow_small_gap)
    return a.payload.inner(g[0]) + b.payload.inner(g[1])


# -- growth probes ----------------------------------------------------------

def resolve(op, lam, u, tol: float = DEFAULT_TOL, allow_small_gap: bool = False):
    """Dispatch to the closed-form resolvent of ``op``; returns (norm, tail)."""
    if isinstance(op, BlockShiftOperator):
        a, b = block_resolvent(op, lam, u, tol, allow_small_gap)
        return float(np.hypot(a.norm(), b.norm())), a.tail_bound + b.tail_bound
    r = shift_resolvent(op, lam, u, tol, allow_small_gap)
    return r.norm(), r.tail_bound


def _vec_norm(u) -> float:
    if isinstance(u, tuple):
        return float(np.hypot(u[0].norm(), u[1].norm()))
    return u.norm()


@dataclass(frozen=True)
class GrowthProbe:
    """Values ``gap * ||(T - z)^{-1} u||`` over a grid."""

    points: tuple[complex, ...]
    values: tuple[float, ...]

    @property
    def sup(self) -> float:
        return max(self.values) if self.values else 0.0

    def by_radius(self) -> dict[float, float]:
        out: dict[float, float] = {}
        for z, v in zip(self.points, self.values):
            r = round(abs(z), 12)
            out[r] = max(out.get(r, 0.0), v)
        return dict(sorted(out.items()))


def radial_grid(radii, n_angles: int, offset: float = 0.0) -> list[SpectralPoint]:
    th = offset + 2 * np.pi * np.arange(n_angles) / n_angles
    return [SpectralPoint.polar(r, t) for r in radii for t in th]


def resolvent_growth_probe(T, u, grid, tol: float = DEFAULT_TOL) -> GrowthProbe:
    """``gap * ||(T - z)^{-1} u||`` at every grid point (sup in :attr:`GrowthProbe.sup`)."""
    pts, vals = [], []
    for lam in grid:
        lam = as_point(lam)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            nrm, _ = resolve(T, lam, u, tol, allow_small_gap=True)
        pts.append(lam.z)
        vals.append(lam.gap * nrm)
    return GrowthProbe(tuple(pts), tuple(vals))


def wave_packet(theta: float, half_length: int, sign: int = -1) -> FinSuppVector:
    """Unit vector ``c * exp(sign * i n theta) * cos^2`` window on ``|n| <= half_length``."""
    n = np.arange(-half_length, half_length + 1)
    env = np.cos(0.5 * np.pi * n / (half_length + 1)) ** 2
    v = env * np.exp(sign * 1j * n * theta)
    return FinSuppVector(-half_length, v / np.linalg.norm(v))


def packet_growth_probe(op, radii, n_angles: int = 8, width: float = 8.0,
                        tol: float = DEFAULT_TOL) -> GrowthProbe:
    """Lower bounds for ``gap * ||(op - z)^{-1}||`` from wave-packet test vectors.

    At ``z = r e^{i theta}`` the packet oscillates at the frequency where
    the symbol of the shift meets ``e^{i theta}`` and has length about
    ``width / gap``.  For the block operator the packet sits in the second
    component.
    """
    pts, vals = [], []
    for lam in radial_grid(radii, n_angles, offset=0.1):
        half = int(math.ceil(width / lam.gap))
        theta = float(np.angle(lam.z))
        if isinstance(op, BlockShiftOperator):
            u = (FinSuppVector.zero(), wave_packet(theta, half, -1))
        else:
            u = wave_packet(theta, half, +1)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            nrm, _ = resolve(op, lam, u, tol, allow_small_gap=True)
        pts.append(lam.z)
        vals.append(lam.gap * nrm / _vec_norm(u))
    return GrowthProbe(tuple(pts), tuple(vals))
