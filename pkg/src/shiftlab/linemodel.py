"""The real-line model: potential q, similarity weight and the growth functionals.

The differential operator is never discretised.  Everything reduces to
integrals of the potential:

* the similarity weight ``exp(-Q(x))`` with ``Q(x) = int_{-inf}^x q``;
* ``int_{-X}^{X} |q|``, which grows without bound for ``q = sin x / x``;
* the Fubini identity ``int int |q(x)| |g(x - t)|^2 dx dt = ||g||^2 int |q|``;
* cell sums ``sum_n (int_n^{n+1} |f|^2)^{delta/2}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.special import sici

from .certificates import SeriesCertificate, make_certificate, trace

SINC = "sinc"
SAMPLED = "sampled"
SI_PI_OVERSHOOT = float(sici(np.pi)[0] - np.pi / 2)  # max |int_a^inf sin t/t dt| for a >= pi


@lru_cache(maxsize=8)
def _gauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def _panel_integrals(func, edges: np.ndarray, n: int = 24) -> np.ndarray:
    """Gauss-Legendre integrals of ``func`` over consecutive panels."""
    x, w = _gauss(n)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (b - a) * x + 0.5 * (a + b)
    return (0.5 * (b - a) * (func(nodes) * w).sum(axis=1, keepdims=True)).ravel()


def _sinc(x):
    x = np.asarray(x, dtype=float)
    return np.sinc(x / np.pi)


@dataclass(frozen=True)
class PotentialFunction:
    """Bounded real potential: ``sin x / x`` or samples on a uniform grid.

    Sampled potentials are linearly interpolated and vanish outside the grid.
    """

    kind: str = SINC
    x0: float = 0.0
    h: float = 1.0
    samples: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in (SINC, SAMPLED):
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.kind == SAMPLED:
            if not self.h > 0 or len(self.samples) < 2:
                raise ValueError("sampled potential needs h > 0 and >= 2 samples")
            if not np.all(np.isfinite(self.samples)):
                raise ValueError("potential samples must be finite")

    @classmethod
    def sinc(cls) -> "PotentialFunction":
        return cls(SINC)

    @classmethod
    def sampled(cls, x, values) -> "PotentialFunction":
        x = np.asarray(x, dtype=float)
        h = np.diff(x)
        if len(x) < 2 or np.any(h <= 0) or np.ptp(h) > 1e-9 * h.mean():
            raise ValueError("potential grid must be uniform and increasing")
        return cls(SAMPLED, float(x[0]), float(h.mean()), tuple(float(v) for v in values))

    @classmethod
    def from_csv(cls, path) -> "PotentialFunction":
        """Two columns ``x, q(x)``; a non-numeric header line is skipped."""
        data = np.genfromtxt(path, delimiter=",", skip_header=0, invalid_raise=True)
        data = data[~np.isnan(data).any(axis=1)]
        return cls.sampled(data[:, 0], data[:, 1])

    @property
    def grid(self) -> np.ndarray:
        return self.x0 + self.h * np.arange(len(self.samples))

    @property
    def span(self) -> tuple[float, float]:
        if self.kind == SINC:
            return -np.inf, np.inf
        return self.x0, self.x0 + self.h * (len(self.samples) - 1)

    def __call__(self, x):
        if self.kind == SINC:
            return _sinc(x)
        return np.interp(x, self.grid, np.asarray(self.samples), left=0.0, right=0.0)

    def envelope(self) -> tuple[float, float, float]:
        """``(C, alpha, x0)`` with ``|q(x)| <= C |x|^{-alpha}`` for ``|x| >= x0``."""
        if self.kind == SINC:
            return 1.0, 1.0, 1.0
        lo, hi = self.span
        return 0.0, 0.0, max(abs(lo), abs(hi))


@dataclass(frozen=True)
class GridFunction:
    """Complex samples on the uniform grid ``x0 + h * k``, ``k = 0 .. M-1``."""

    x0: float
    h: float
    values: np.ndarray

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("grid spacing must be positive")
        v = np.asarray(self.values, dtype=complex).ravel()
        if not np.all(np.isfinite(v)):
            raise ValueError("grid values must be finite")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, func, lo: float, hi: float, h: float = 2.0**-6) -> "GridFunction":
        m = int(round((hi - lo) / h)) + 1
        x = lo + h * np.arange(m)
        return cls(lo, h, func(x))

    @classmethod
    def bump(cls, center: float = 0.0, radius: float = 1.0, h: float = 2.0**-6) -> "GridFunction":
        """Smooth compactly supported bump ``exp(-1 / (1 - s^2))``, ``s = (x - c) / radius``."""
        def f(x):
            s = (x - center) / radius
            out = np.zeros_like(s)
            inside = np.abs(s) < 1
            out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
            return out

        return cls.from_function(f, center - radius, center + radius, h)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.h * np.arange(len(self.values))

    def norm2(self) -> float:
        """``int |g|^2`` by the composite trapezoid rule."""
        return float(np.trapezoid(np.abs(self.values) ** 2, dx=self.h))

    def support(self) -> tuple[float, float] | None:
        nz = np.flatnonzero(self.values)
        if len(nz) == 0:
            return None
        x = self.x
        return float(x[max(nz[0] - 1, 0)]), float(x[min(nz[-1] + 1, len(x) - 1)])


# -- the sine integral by panels -------------------------------------------------

def _euler_limit(partials: np.ndarray) -> float:
    """Limit of an alternating sequence of partial sums by repeated averaging."""
    s = np.asarray(partials, dtype=float)
    while len(s) > 1:
        s = 0.5 * (s[1:] + s[:-1])
    return float(s[0])


def sine_tail(a: float, n_panels: int = 40) -> tuple[float, float]:
    """``int_a^inf sin t / t dt`` for ``a >= 0`` with an error estimate.

    The range is split at multiples of ``pi``; the panel integrals alternate
    in sign and decrease, so the tail is summed by repeated averaging of
    the partial sums.
    """
    a = float(a)
    if a < 0:
        raise ValueError("a must be nonnegative")
    k0 = math.floor(a / math.pi) + 1
    head = _panel_integrals(_sinc, np.array([a, k0 * math.pi]))[0]
    edges = math.pi * np.arange(k0, k0 + n_panels + 1)
    panels = _panel_integrals(_sinc, edges)
    partials = np.cumsum(panels)
    est = _euler_limit(partials)
    coarse = _euler_limit(partials[:-2])
    return head + est, abs(est - coarse) + 1e-16 * abs(head)


def sinc_primitive(x) -> np.ndarray:
    """``Q(x) = int_{-inf}^x sin t / t dt`` by panel summation."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(len(xs))
    for i, v in enumerate(xs):
        t, _ = sine_tail(abs(v))
        out[i] = t if v <= 0 else math.pi - t
    return out if np.ndim(x) else float(out[0])


def sinc_primitive_closed_form(x) -> np.ndarray:
    """``Si(x) + pi/2`` from scipy, used as an independent check."""
    return sici(np.asarray(x, dtype=float))[0] + np.pi / 2


def potential_primitive(q: PotentialFunction, x) -> np.ndarray:
    """``Q(x) = int_{-inf}^x q``."""
    if q.kind == SINC:
        return sinc_primitive(x)
    grid = q.grid
    cum = cumulative_trapezoid(np.asarray(q.samples), grid, initial=0.0)
    return np.interp(x, grid, cum, left=0.0, right=cum[-1])


def similarity_weight(q: PotentialFunction, x, cross_check: bool = True,
                      tol: float = 1e-10) -> np.ndarray:
    """``exp(-Q(x))``.

    For ``sin x / x`` the panel primitive is compared against the sine
    integral and a disagreement above ``tol`` raises.
    """
    Q = potential_primitive(q, x)
    if q.kind == SINC and cross_check:
        ref = sinc_primitive_closed_form(x)
        dev = float(np.max(np.abs(np.asarray(Q) - ref)))
        if dev > tol:
            raise ArithmeticError(f"primitive disagrees with the sine integral by {dev:.3g}")
    return np.exp(-np.asarray(Q))


def weight_envelope(x) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise bracket ``[exp(-pi - m(x)), exp(m(x))]`` for the sinc weight.

    ``m(x) = min(2/|x|, Si(pi) - pi/2)`` bounds ``|int_{|x|}^inf sin t/t dt|``
    for ``|x| >= pi``; closer to the origin the bracket is ``[exp(-pi), 1]``
    widened by the same overshoot.
    """
    ax = np.abs(np.asarray(x, dtype=float))
    m = np.minimum(2.0 / np.maximum(ax, 1e-300), SI_PI_OVERSHOOT)
    return np.exp(-np.pi - m), np.exp(m)


@dataclass(frozen=True)
class EnvelopeScan:
    ok: bool
    min_weight: float
    max_weight: float
    worst_margin: float


def weight_envelope_check(q: PotentialFunction, X: float = 1e3, n: int = 20001,
                          slack: float = 1e-3) -> EnvelopeScan:
    """Scan ``exp(-Q)`` against :func:`weight_envelope` (plus ``slack``) on ``[-X, X]``."""
    x = np.linspace(-X, X, n)
    w = np.exp(-sinc_primitive_closed_form(x)) if q.kind == SINC else similarity_weight(q, x)
    lo, hi = weight_envelope(x)
    margin = np.minimum(w - (lo - slack), (hi + slack) - w)
    return EnvelopeScan(bool(np.all(margin >= 0)), float(w.min()), float(w.max()),
                        float(margin.min()))


# -- growth functional ------------------------------------------------------------

def strong_growth_functional(q: PotentialFunction, X: float) -> float:
    """``int_{-X}^{X} |q|``."""
    if X <= 0:
        raise ValueError("X must be positive")
    if q.kind == SINC:
        k = math.floor(X / math.pi)
        edges = np.append(math.pi * np.arange(k + 1), X) if X > k * math.pi else \
            math.pi * np.arange(k + 1)
        return 2.0 * float(np.sum(_panel_integrals(lambda t: np.abs(_sinc(t)), edges)))
    x = q.grid
    keep = (x >= -X) & (x <= X)
    if keep.sum() < 2:
        return 0.0
    return float(np.trapezoid(np.abs(np.asarray(q.samples)[keep]), x[keep]))


@dataclass(frozen=True)
class GrowthSlope:
    radii: tuple[float, ...]
    values: tuple[float, ...]
    slope: float
    intercept: float


def growth_slope(q: PotentialFunction, radii=(1e2, 1e3, 1e4)) -> GrowthSlope:
    """Least-squares slope of ``int_{-X}^X |q|`` against ``ln X``."""
    vals = [strong_growth_functional(q, X) for X in radii]
    slope, icpt = np.polyfit(np.log(radii), vals, 1)
    return GrowthSlope(tuple(radii), tuple(vals), float(slope), float(icpt))


# -- Fubini cross-check -----------------------------------------------------------

def _potential_grid(q: PotentialFunction, X: float, h: float):
    if q.kind == SAMPLED:
        x = q.grid
        keep = (x >= -X) & (x <= X)
        return x[keep], np.abs(np.asarray(q.samples)[keep])
    m = int(round(2 * X / h)) + 1
    x = np.linspace(-X, X, m)
    return x, np.abs(q(x))


def _trap_weights(x: np.ndarray) -> np.ndarray:
    w = np.zeros_like(x)
    d = np.diff(x)
    w[:-1] += d / 2
    w[1:] += d / 2
    return w


def parseval_crosscheck(q: PotentialFunction, g: GridFunction, T_max: float, X: float,
                        h: float = 2.0**-6) -> tuple[float, float]:
    """``(int_{-T}^{T} int_{-X}^{X} |q(x)| |g(x - t)|^2 dx dt, ||g||^2 int_{-X'}^{X'} |q|)``.

    The inner ``t`` integral uses the trapezoid primitive of ``|g|^2``; the
    ``x`` integral uses trapezoid weights on the potential grid.  ``X'`` is
    ``X`` for sampled potentials and ``T_max`` for ``sin x / x``, the window
    swept by the translates.
    """
    sup = g.support()
    if sup is None:
        return 0.0, 0.0
    if sup[0] - T_max < -X or sup[1] + T_max > X:
        raise ValueError("support of g shifted by T_max does not fit in [-X, X]")
    x, aq = _potential_grid(q, X, h)
    if len(x) < 2 or not np.any(aq):
        return 0.0, 0.0
    gx = g.x
    prim = cumulative_trapezoid(np.abs(g.values) ** 2, gx, initial=0.0)

    def G(s):
        return np.interp(s, gx, prim, left=0.0, right=prim[-1])

    inner = G(x + T_max) - G(x - T_max)
    w = _trap_weights(x)
    lhs = float(np.sum(w * aq * inner))
    if q.kind == SINC:
        rhs = g.norm2() * strong_growth_functional(q, T_max)
    else:
        rhs = float(prim[-1]) * float(np.sum(w * aq))
    return lhs, rhs


# -- cell sums ----------------------------------------------------------------------

def _cell_integrals(func, ns: np.ndarray, n_nodes: int = 32) -> np.ndarray:
    edges_lo = ns.astype(float)
    x, w = _gauss(n_nodes)
    nodes = edges_lo[:, None] + 0.5 * (x + 1.0)
    return (0.5 * np.abs(func(nodes)) ** 2 * w).sum(axis=1)


def _cell_order(n: int) -> np.ndarray:
    """Cells ``[m, m+1]`` for ``|m| <= n`` in ascending ``|m|``, then sign."""
    out = [0]
    for k in range(1, n + 1):
        out += [-k, k]
    return np.array(out)


def _bs_tail(c: float, alpha: float, delta: float, n: int) -> float:
    """``2 C^d (N^{-a d} + N^{1 - a d} / (a d - 1))`` for the cells beyond ``|m| <= N``."""
    if c == 0:
        return 0.0
    e = alpha * delta
    if e <= 1:
        return np.inf
    return 2.0 * c**delta * (n ** (-e) + n ** (1.0 - e) / (e - 1.0))


def _bs_certificate(label, cell_sq: np.ndarray, delta: float, n: int, tail: float
                    ) -> SeriesCertificate:
    terms = cell_sq ** (delta / 2.0)
    counts = 2 * np.unique(np.round(np.geomspace(1, n, 12)).astype(int)) + 1
    if counts[-1] != 2 * n + 1:
        counts = np.append(counts, 2 * n + 1)
    sums = trace(terms, counts)
    return make_certificate(label, (counts - 1) // 2, sums, tail, certified=np.isfinite(tail))


def birman_solomyak_certificate(f, delta: float, n: int, envelope=None) -> SeriesCertificate:
    """Certificate for ``sum_{|m| <= N} (int_m^{m+1} |f|^2)^{delta/2}``.

    ``f`` is a :class:`PotentialFunction` or a vectorised callable.  The
    tail uses ``|f(x)| <= C |x|^{-alpha}`` for ``|x| >= N``; ``envelope``
    overrides ``(C, alpha)``.
    """
    if not 1 < delta < 2:
        raise ValueError("delta must lie in (1, 2)")
    if n < 1:
        raise ValueError("N must be >= 1")
    ms = _cell_order(n)
    func = f if callable(f) else (lambda x: 0.0 * x)
    cell = _cell_integrals(func, ms)
    if envelope is not None:
        c, alpha = envelope
    elif isinstance(f, PotentialFunction):
        c, alpha, x0 = f.envelope()
        if c == 0.0 and x0 > n:
            c, alpha = float(np.max(np.abs(f.samples))), 0.0
        elif c > 0 and x0 > n:
            raise ValueError("envelope does not cover the tail for this N")
    else:
        c, alpha = np.inf, 0.0
    return _bs_certificate(f"cell sum delta={delta:g}", cell, delta, n, _bs_tail(c, alpha, delta, n))


def resolvent_factor_certificate(z: complex, delta: float, n: int) -> SeriesCertificate:
    """Cell sum for ``g(y) = 1 / (y - z)`` with exact arctan cell integrals.

    ``|g(y)| <= 2 / |y|`` once ``|y| >= 2|z|``, which gives the tail.
    """
    z = complex(z)
    if z.imag == 0:
        raise ValueError("z must be off the real axis")
    if n < 2 * abs(z):
        raise ValueError("N must be at least 2|z| for the tail envelope")
    a, b = z.real, abs(z.imag)
    ms = _cell_order(n).astype(float)
    cell = (np.arctan((ms + 1 - a) / b) - np.arctan((ms - a) / b)) / b
    return _bs_certificate(f"resolvent factor delta={delta:g}", cell, delta, n,
                           _bs_tail(2.0, 1.0, delta, n))


@dataclass(frozen=True)
class KernelCriterion:
    """Both factor conditions of the cell criterion for ``f(x) e^{ixy} g(y)``."""

    f_factor: SeriesCertificate
    g_factor: SeriesCertificate

    @property
    def satisfied(self) -> bool:
        return self.f_factor.converged and self.g_factor.converged


def kernel_criterion(q: PotentialFunction, z: complex, delta: float, n: int) -> KernelCriterion:
    """Cell criterion for ``V (A - z)^{-1}``: ``f = q`` and ``g(y) = 1/(y - z)``."""
    return KernelCriterion(birman_solomyak_certificate(q, delta, n),
                           resolvent_factor_certificate(z, delta, n))
