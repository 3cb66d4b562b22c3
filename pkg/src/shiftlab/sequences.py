"""Positive weight sequences on the integers.

Every operator in the package is parametrised by a bi-infinite sequence of
positive weights.  A :class:`WeightSequence` is an immutable description of
one of a handful of families; evaluation is vectorised over integer index
arrays and never materialises the whole sequence.

The interleaved families use ``a_j = 1 - 1/(j + 1)`` rather than
``1 - 1/j``: the latter gives ``a_1 = 0`` and a zero weight.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .certificates import (
    SeriesCertificate,
    checkpoints,
    make_certificate,
    power_tail,
    trace,
)

REINDEXING_NOTE = (
    "interleaved weights use a_j = 1 - 1/(j+1) (j >= 1) in place of 1 - 1/j, "
    "so that every weight is strictly positive"
)

FAMILIES = ("constant", "theorem1", "harmonic", "pi_dominated", "user_table")


@dataclass(frozen=True)
class PiTable:
    """Monotone decreasing positive sequence ``pi_n``, ``n >= 0``.

    ``kind`` is one of ``"power"`` (``scale * (n + 1) ** -exponent``),
    ``"geometric"`` (``scale * ratio ** n``) or ``"callable"``.
    """

    kind: str = "power"
    scale: float = 1.0
    exponent: float = 1.0
    ratio: float = 0.5
    func: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)
    summable_flag: bool | None = None

    def __post_init__(self):
        if self.kind not in ("power", "geometric", "callable"):
            raise ValueError(f"unknown pi table kind {self.kind!r}")
        if self.kind == "callable" and self.func is None:
            raise ValueError("callable pi table needs func")
        if self.scale <= 0:
            raise ValueError("pi table scale must be positive")

    @classmethod
    def harmonic(cls) -> "PiTable":
        return cls("power", 1.0, 1.0)

    @classmethod
    def constant(cls, value: float) -> "PiTable":
        return cls("power", float(value), 0.0)

    @classmethod
    def geometric(cls, ratio: float, scale: float = 1.0) -> "PiTable":
        return cls("geometric", float(scale), ratio=float(ratio))

    def __call__(self, n) -> np.ndarray:
        n = np.asarray(n)
        if self.kind == "power":
            return self.scale * (n + 1.0) ** (-self.exponent)
        if self.kind == "geometric":
            return self.scale * np.power(self.ratio, n.astype(float))
        return np.asarray(self.func(n), dtype=float)

    def summable(self) -> bool:
        if self.summable_flag is not None:
            return self.summable_flag
        if self.kind == "power":
            return self.exponent > 1.0
        if self.kind == "geometric":
            return self.ratio < 1.0
        # local decay exponent over two decades; exact flag preferred
        n1, n2 = 100, 10_000
        v1, v2 = self(np.array([n1, n2]))
        if v2 <= 0:
            return True
        return np.log(v1 / v2) / np.log(n2 / n1) > 1.05

    def check_monotone(self, n_max: int = 10_000) -> None:
        v = self(np.arange(n_max + 1))
        if np.any(v <= 0) or np.any(np.diff(v) > 0):
            raise ValueError("pi table must be positive and nonincreasing")

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "scale": self.scale}
        if self.kind == "power":
            d["exponent"] = self.exponent
        elif self.kind == "geometric":
            d["ratio"] = self.ratio
        return d


@dataclass(frozen=True)
class WeightSequence:
    """Lazy map ``j -> rho_j > 0`` with family metadata.

    Use the constructors (:meth:`constant`, :func:`theorem1_weights`, ...)
    rather than the raw fields.  ``shift`` translates the index:
    ``rho'_j = rho_{j - shift}``.
    """

    family: str
    value: float = 1.0
    offset: float = 1.0
    pi: PiTable | None = None
    table_lo: int = 0
    table: tuple[float, ...] = ()
    fill: float = 1.0
    shift: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown weight family {self.family!r}")
        if self.family == "constant" and not self.value > 0:
            raise ValueError("constant weight must be positive")
        if self.family == "harmonic" and not self.offset > 0:
            raise ValueError("harmonic offset must be positive")
        if self.family == "user_table":
            if not self.fill > 0 or any(not v > 0 for v in self.table):
                raise ValueError("user table weights must be positive")
        if self.family == "pi_dominated" and self.pi is None:
            raise ValueError("pi_dominated family needs a pi table")

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c: float = 1.0) -> "WeightSequence":
        return cls("constant", value=float(c))

    @classmethod
    def harmonic(cls, offset: float = 1.0) -> "WeightSequence":
        """``rho_n = 1 / (|n| + offset)``."""
        return cls("harmonic", offset=float(offset))

    @classmethod
    def user_table(cls, lo: int, values, fill: float = 1.0) -> "WeightSequence":
        return cls("user_table", table_lo=int(lo), table=tuple(float(v) for v in values),
                   fill=float(fill))

    @classmethod
    def from_csv(cls, path, lo: int = 0, fill: float = 1.0) -> "WeightSequence":
        """Read one column of weights (header optional) starting at index ``lo``."""
        vals = []
        with open(path) as fh:
            for line in fh:
                cell = line.strip().split(",")[0].strip()
                if not cell:
                    continue
                try:
                    vals.append(float(cell))
                except ValueError:
                    if vals:
                        raise
        return cls.user_table(lo, vals, fill)

    def shifted(self, t: int) -> "WeightSequence":
        return _replace(self, shift=self.shift + int(t))

    @property
    def interleaved(self) -> bool:
        return self.family in ("theorem1", "pi_dominated")

    # -- evaluation ---------------------------------------------------------
    def __call__(self, j):
        out = self.values(np.atleast_1d(np.asarray(j, dtype=np.int64)))
        return float(out[0]) if np.ndim(j) == 0 else out

    def values(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64) - self.shift
        if self.family == "constant":
            return np.full(idx.shape, self.value)
        if self.family == "harmonic":
            return 1.0 / (np.abs(idx) + self.offset)
        if self.family == "user_table":
            out = np.full(idx.shape, self.fill)
            pos = idx - self.table_lo
            inside = (pos >= 0) & (pos < len(self.table))
            out[inside] = np.asarray(self.table)[pos[inside]]
            return out
        a = self.a(np.maximum(idx // 2, 1))
        out = np.ones(idx.shape)
        even = (idx >= 2) & (idx % 2 == 0)
        odd = (idx >= 3) & (idx % 2 == 1)
        out[even] = a[even]
        out[odd] = 1.0 / a[odd]
        return out

    def window(self, lo: int, hi: int) -> np.ndarray:
        return self.values(np.arange(lo, hi + 1))

    def a(self, j) -> np.ndarray:
        """The interleaving sequence ``a_j`` (``j >= 1``) of an interleaved family."""
        j = np.asarray(j, dtype=np.int64)
        if self.family == "theorem1":
            return j / (j + 1.0)
        if self.family == "pi_dominated":
            return 1.0 - _pi_step(self.pi, j)
        raise ValueError(f"family {self.family!r} is not interleaved")

    # -- analytic envelopes -------------------------------------------------
    def tail_constant(self, side: int) -> float | None:
        """Exact constant value of the weights far out on ``side`` (+1 / -1)."""
        if self.family == "constant":
            return self.value
        if self.family == "user_table":
            return self.fill
        if self.interleaved and side < 0:
            return 1.0
        return None

    def envelope(self, side: int, n0: int) -> tuple[float, float]:
        """``(C, alpha)`` with ``|rho_j - 1| <= C |j|**-alpha`` for ``side*j >= n0``.

        ``C == 0`` means the weights equal one exactly there; ``alpha == 0``
        means no decay (a bound on ``|rho_j - 1|`` only).
        """
        n0 = max(int(n0), 1)
        t = self.shift * side
        base_n0 = n0 - t
        scale = 1.0
        if t > 0:
            if base_n0 < 1:
                lo, hi = self._all_range()
                return max(hi - 1.0, 1.0 - lo), 0.0
            scale = n0 / base_n0
        c, alpha = self._base_envelope(side, base_n0)
        return c * scale**alpha, alpha

    def _base_envelope(self, side: int, n0: int) -> tuple[float, float]:
        if self.family == "constant":
            return abs(self.value - 1.0), 0.0
        if self.family == "user_table":
            end = self.table_lo + len(self.table) - 1 if side > 0 else -self.table_lo
            dev = abs(self.fill - 1.0)
            if n0 > end:
                return dev, 0.0
            vals = np.abs(np.asarray(self.table) - 1.0)
            return max(dev, float(vals.max()) if len(vals) else 0.0), 0.0
        if self.family == "harmonic":
            return max(1.0, abs(1.0 / self.offset - 1.0)), 0.0
        # interleaved: |rho_{2i} - 1| <= 1/(i+1) = 2/(2i+2), |rho_{2i+1} - 1| <= 1/i = 2/(2i)
        if side < 0:
            return 0.0, 0.0
        n0 = max(n0, 3)
        return 2.0 * n0 / (n0 - 1.0), 1.0

    def bounds(self, lo, hi) -> tuple[float, float]:
        """``(inf, sup)`` of the weights over ``lo <= j <= hi`` (either may be infinite)."""
        cap = 1 << 16
        finite_lo = lo if np.isfinite(lo) else None
        finite_hi = hi if np.isfinite(hi) else None
        inf_v, sup_v = np.inf, -np.inf
        a = int(finite_lo) if finite_lo is not None else None
        b = int(finite_hi) if finite_hi is not None else None
        if a is not None and b is not None and b - a <= cap:
            w = self.window(a, b)
            return float(w.min()), float(w.max())
        # evaluate near the finite end(s), cover the rest analytically
        if a is not None:
            w = self.window(a, a + cap)
            inf_v, sup_v = min(inf_v, w.min()), max(sup_v, w.max())
            t_lo, t_hi = self._tail_range(+1, a + cap + 1)
            if a + cap + 1 <= 0:
                t_lo, t_hi = self._all_range()
            inf_v, sup_v = min(inf_v, t_lo), max(sup_v, t_hi)
        if b is not None:
            w = self.window(b - cap, b)
            inf_v, sup_v = min(inf_v, w.min()), max(sup_v, w.max())
            t_lo, t_hi = self._tail_range(-1, -(b - cap - 1))
            if b - cap - 1 >= 0:
                t_lo, t_hi = self._all_range()
            inf_v, sup_v = min(inf_v, t_lo), max(sup_v, t_hi)
        if a is None and b is None:
            return self._all_range()
        return float(inf_v), float(sup_v)

    def _all_range(self):
        lo1, hi1 = self._tail_range(+1, 1)
        lo2, hi2 = self._tail_range(-1, 1)
        w = self.window(-1 - abs(self.shift), 1 + abs(self.shift))
        return float(min(lo1, lo2, w.min())), float(max(hi1, hi2, w.max()))

    def _tail_range(self, side: int, n0: int) -> tuple[float, float]:
        """Range of the weights on ``side * j >= n0`` (n0 may be non-positive)."""
        base = n0 - self.shift * side
        if self.family == "constant":
            return self.value, self.value
        if self.family == "harmonic":
            m = max(base, 0)
            return 0.0, 1.0 / (m + self.offset)
        if self.family == "user_table":
            end = self.table_lo + len(self.table) - 1
            idx_lo = side * base if side > 0 else -(10**12)
            idx_hi = 10**12 if side > 0 else side * base
            lo_t, hi_t = max(idx_lo, self.table_lo), min(idx_hi, end)
            vals = [self.fill]
            if lo_t <= hi_t:
                seg = np.asarray(self.table)[lo_t - self.table_lo: hi_t - self.table_lo + 1]
                vals += [seg.min(), seg.max()]
            return float(min(vals)), float(max(vals))
        if side < 0:
            if base <= -2:
                # reaches into the non-trivial positive half
                return self._tail_range(+1, 1)[0], self._tail_range(+1, 1)[1]
            return 1.0, 1.0
        i0 = max(1, base // 2)
        lo_v, hi_v = i0 / (i0 + 1.0), (i0 + 1.0) / i0
        if base <= 1:
            lo_v, hi_v = min(lo_v, 1.0), max(hi_v, 1.0)
        return lo_v, hi_v

    def describe(self) -> dict:
        d = {"family": self.family}
        if self.family == "constant":
            d["value"] = self.value
        elif self.family == "harmonic":
            d["offset"] = self.offset
        elif self.family == "user_table":
            d.update(lo=self.table_lo, length=len(self.table), fill=self.fill)
        elif self.family == "pi_dominated":
            d["pi"] = self.pi.to_dict()
        if self.interleaved:
            d["reindexing"] = REINDEXING_NOTE
        if self.shift:
            d["shift"] = self.shift
        return d


def _replace(seq: WeightSequence, **kw) -> WeightSequence:
    from dataclasses import replace

    return replace(seq, **kw)


def _pi_step(pi: PiTable, j: np.ndarray) -> np.ndarray:
    """``1 - a_j`` for the pi-dominated family.

    The pair ``(a_j, 1/a_j)`` produces the two defect eigenvalues
    ``1 - a_j**2`` and ``a_j**-2 - 1``; the larger one is kept below
    ``pi_{2j-1}``, which makes the modulus-ordered enumeration dominated by
    ``pi``.
    """
    j = np.asarray(j, dtype=np.int64)
    p = pi(2 * j - 1)
    return np.minimum(1.0 - 1.0 / np.sqrt(1.0 + p), 1.0 / (j + 1.0))


def theorem1_weights() -> WeightSequence:
    """Interleaved weights: 1 for ``j <= 1``, ``a_j`` at ``2j``, ``1/a_j`` at ``2j+1``."""
    return WeightSequence("theorem1")


def pi_dominated_weights(pi: PiTable) -> WeightSequence:
    """Interleaved weights whose defect eigenvalues are dominated by ``pi``.

    Raises
    ------
    ValueError
        If ``pi`` is summable or not monotone.
    """
    pi.check_monotone(1000)
    if pi.summable():
        raise ValueError("pi table is summable; a non-summable sequence is required")
    return WeightSequence("pi_dominated", pi=pi)


def condition_star_certificate(rho: WeightSequence, p: float, n: int) -> SeriesCertificate:
    """Certificate for ``sum_j |rho_j - 1|**p`` over ``|j| <= n``."""
    if p < 1 or n < 1:
        raise ValueError("need p >= 1 and N >= 1")
    idx = np.arange(0, n + 1)
    pos = np.abs(rho.values(idx) - 1.0) ** p
    neg = np.abs(rho.values(-idx[1:]) - 1.0) ** p
    terms = pos.copy()
    terms[1:] += neg
    cuts = checkpoints(n + 1, n_min=max(2, (n + 1) // 1000))
    sums = trace(terms, cuts)
    tail = 0.0
    for side in (+1, -1):
        c, alpha = rho.envelope(side, n + 1)
        tail += power_tail(c**p, alpha * p, n) if c > 0 else 0.0
    notes = [REINDEXING_NOTE] if rho.interleaved else []
    return make_certificate(
        f"sum |rho_j - 1|^{p:g}", cuts - 1, sums, tail, certified=True, notes=notes
    )
