"""Exact operator actions on finitely supported sequences in l2(Z).

All operators here are bounded maps on l2(Z) or l2(Z) + l2(Z) that send
finitely supported vectors to finitely supported vectors, so their actions
are computed exactly; every result carries its own index window and nothing
is truncated.  Dense finite sections are available for oracle checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .sequences import WeightSequence

MAX_SECTION_HALF_WIDTH = 4096


class FinSuppVector:
    """Finitely supported complex sequence indexed by ``lo .. lo + len(coef) - 1``.

    Coefficients outside the window are zero.
    """

    __slots__ = ("lo", "coef")

    def __init__(self, lo: int, coef):
        self.lo = int(lo)
        self.coef = np.asarray(coef, dtype=complex).ravel()

    @classmethod
    def zero(cls) -> "FinSuppVector":
        return cls(0, np.zeros(0))

    @classmethod
    def basis(cls, j: int, value: complex = 1.0) -> "FinSuppVector":
        return cls(j, [value])

    @classmethod
    def from_dict(cls, entries: dict) -> "FinSuppVector":
        if not entries:
            return cls.zero()
        lo, hi = min(entries), max(entries)
        coef = np.zeros(hi - lo + 1, dtype=complex)
        for k, v in entries.items():
            coef[k - lo] = v
        return cls(lo, coef)

    @property
    def hi(self) -> int:
        return self.lo + len(self.coef) - 1

    @property
    def window(self) -> tuple[int, int]:
        return self.lo, self.hi

    def is_zero(self) -> bool:
        return not np.any(self.coef)

    def support(self) -> tuple[int, int] | None:
        nz = np.flatnonzero(self.coef)
        if len(nz) == 0:
            return None
        return self.lo + int(nz[0]), self.lo + int(nz[-1])

    def trimmed(self) -> "FinSuppVector":
        s = self.support()
        if s is None:
            return FinSuppVector.zero()
        return FinSuppVector(s[0], self.coef[s[0] - self.lo: s[1] - self.lo + 1])

    def indices(self) -> np.ndarray:
        return np.arange(self.lo, self.lo + len(self.coef))

    def get(self, idx) -> np.ndarray:
        """Coefficients at arbitrary integer indices (zero outside the window)."""
        idx = np.asarray(idx, dtype=np.int64)
        out = np.zeros(idx.shape, dtype=complex)
        pos = idx - self.lo
        ok = (pos >= 0) & (pos < len(self.coef))
        out[ok] = self.coef[pos[ok]]
        return out

    def __getitem__(self, j: int) -> complex:
        return complex(self.get(np.array([j]))[0])

    def to_dense(self, lo: int, hi: int) -> np.ndarray:
        return self.get(np.arange(lo, hi + 1))

    def norm(self) -> float:
        scale = float(np.max(np.abs(self.coef), initial=0.0))
        if scale == 0.0 or not np.isfinite(scale):
            return scale
        # rescaled so tiny coefficients do not underflow when squared
        return scale * float(np.linalg.norm(np.abs(self.coef) / scale))

    def inner(self, other: "FinSuppVector") -> complex:
        """``<self, other>``, linear in ``self``."""
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return 0j
        a = self.coef[lo - self.lo: hi - self.lo + 1]
        b = other.coef[lo - other.lo: hi - other.lo + 1]
        return complex(np.sum(a * np.conj(b)))

    def reflected(self) -> "FinSuppVector":
        """Index flip ``n -> -n``."""
        return FinSuppVector(-self.hi, self.coef[::-1])

    def shifted(self, t: int) -> "FinSuppVector":
        """Index translation ``n -> n + t``."""
        return FinSuppVector(self.lo + t, self.coef)

    def _binary(self, other: "FinSuppVector", op) -> "FinSuppVector":
        if len(self.coef) == 0:
            return FinSuppVector(other.lo, op(np.zeros_like(other.coef), other.coef))
        if len(other.coef) == 0:
            return FinSuppVector(self.lo, op(self.coef, np.zeros_like(self.coef)))
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        idx = np.arange(lo, hi + 1)
        return FinSuppVector(lo, op(self.get(idx), other.get(idx)))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, c):
        return FinSuppVector(self.lo, self.coef * c)

    __rmul__ = __mul__

    def __neg__(self):
        return FinSuppVector(self.lo, -self.coef)

    def __repr__(self):
        return f"FinSuppVector(lo={self.lo}, coef={self.coef!r})"


BlockVector = tuple  # (top, bottom) pair of FinSuppVector


def _pair_norm(u) -> float:
    return float(np.hypot(u[0].norm(), u[1].norm()))


# -- weighted shift ---------------------------------------------------------

@dataclass(frozen=True)
class WeightedShift:
    """Weighted bilateral shift ``T e_j = rho_{j-1} e_{j-1}``."""

    weights: WeightSequence
    inverse_drift = +1

    def apply(self, u: FinSuppVector) -> FinSuppVector:
        lo = u.lo - 1
        return FinSuppVector(lo, self.weights.window(lo, lo + len(u.coef) - 1) * u.coef)

    def adjoint_apply(self, u: FinSuppVector) -> FinSuppVector:
        """``T* e_j = rho_j e_{j+1}``."""
        return FinSuppVector(u.lo + 1, self.weights.window(u.lo, u.hi) * u.coef)

    def inverse_apply(self, u: FinSuppVector) -> FinSuppVector:
        """``T^{-1} e_j = e_{j+1} / rho_j``."""
        return FinSuppVector(u.lo + 1, u.coef / self.weights.window(u.lo, u.hi))

    def norm_bound(self, lo: int, hi: int) -> float:
        return self.weights.bounds(lo, hi)[1]


def apply_shift(T: WeightedShift, u: FinSuppVector) -> FinSuppVector:
    """Exact image ``T u``; the output window is the input window shifted by -1."""
    return T.apply(u)


# -- diagonal operators -----------------------------------------------------

@dataclass(frozen=True)
class DiagonalOperator:
    """Coordinatewise multiplication ``e_j -> d_j e_j``."""

    entries: Callable[[np.ndarray], np.ndarray]
    name: str = "diag"

    def __call__(self, j):
        return self.entries(np.asarray(j, dtype=np.int64))

    def apply(self, u: FinSuppVector) -> FinSuppVector:
        return FinSuppVector(u.lo, self.entries(u.indices()) * u.coef)

    def inverse_apply(self, u: FinSuppVector) -> FinSuppVector:
        return FinSuppVector(u.lo, u.coef / self.entries(u.indices()))

    def sup_abs(self, lo: int, hi: int) -> float:
        return float(np.max(np.abs(self.entries(np.arange(lo, hi + 1)))))

    def inf_abs(self, lo: int, hi: int) -> float:
        return float(np.min(np.abs(self.entries(np.arange(lo, hi + 1)))))


def defect_operator(T: WeightedShift) -> DiagonalOperator:
    """``D_T = diag |1 - rho_n^2|^{1/2}``, labelled as in the weight index."""
    w = T.weights
    return DiagonalOperator(lambda j: np.sqrt(np.abs(1.0 - w.values(j) ** 2)), "D_T")


def gram_defect(T: WeightedShift) -> DiagonalOperator:
    """``I - T*T`` exactly: ``T*T e_j = rho_{j-1}^2 e_j``."""
    w = T.weights
    return DiagonalOperator(lambda j: 1.0 - w.values(np.asarray(j) - 1) ** 2, "I - T*T")


def build_similarity(rho: WeightSequence) -> DiagonalOperator:
    """Diagonal ``W`` with ``w_{2j+1} = 1/a_j`` (``j >= 1``), 1 elsewhere.

    ``W^{-1} T W`` is then the unweighted shift.
    """
    if not rho.interleaved:
        raise ValueError(f"similarity needs an interleaved family, got {rho.family!r}")

    def entries(j):
        j = np.asarray(j, dtype=np.int64) - rho.shift
        out = np.ones(j.shape)
        odd = (j >= 3) & (j % 2 == 1)
        out[odd] = 1.0 / rho.a((j[odd] - 1) // 2)
        return out

    return DiagonalOperator(entries, "W")


def conjugate_check(T: WeightedShift, W: DiagonalOperator, window: tuple[int, int]) -> float:
    """``max_j || W^{-1} T W e_j - e_{j-1} ||`` over ``j`` in ``window``."""
    lo, hi = window
    if hi - lo > 10 * MAX_SECTION_HALF_WIDTH:
        raise ValueError("window too large")
    j = np.arange(lo, hi + 1)
    wj = W(j)
    wprev = W(j - 1)
    if np.any(wj == 0) or np.any(wprev == 0) or not np.all(np.isfinite(wj)):
        raise ValueError("W is not invertible on the window")
    coef = wj * T.weights.values(j - 1) / wprev
    return float(np.max(np.abs(coef - 1.0)))


# -- the block operator -----------------------------------------------------

def _right_shift(u: FinSuppVector) -> FinSuppVector:
    return FinSuppVector(u.lo + 1, u.coef)


def _left_shift(u: FinSuppVector) -> FinSuppVector:
    return FinSuppVector(u.lo - 1, u.coef)


@dataclass(frozen=True)
class BlockShiftOperator:
    """``T = [[U, R], [0, U]]`` on l2(Z) + l2(Z).

    ``U e_n = e_{n+1}`` and ``R e_n = rho_{|n|} e_n``.
    """

    coupling: WeightSequence
    inverse_drift = -1

    def r(self, n) -> np.ndarray:
        return self.coupling.values(np.abs(np.asarray(n, dtype=np.int64)))

    def apply_r(self, u: FinSuppVector) -> FinSuppVector:
        return FinSuppVector(u.lo, self.r(u.indices()) * u.coef)

    def apply(self, u):
        u1, u2 = u
        return _right_shift(u1) + self.apply_r(u2), _right_shift(u2)

    def adjoint_apply(self, u):
        """``T* = [[U*, 0], [R, U*]]``."""
        u1, u2 = u
        return _left_shift(u1), self.apply_r(u1) + _left_shift(u2)

    def inverse_apply(self, u):
        """``T^{-1} = [[U^{-1}, -U^{-1} R U^{-1}], [0, U^{-1}]]``."""
        u1, u2 = u
        y2 = _left_shift(u2)
        return _left_shift(u1) - _left_shift(self.apply_r(y2)), y2


def block_apply(B: BlockShiftOperator, u) -> tuple:
    """``(U u1 + R u2, U u2)``."""
    return B.apply(u)


@dataclass(frozen=True)
class ShiftPair:
    """The unitary part ``diag(U, U)``."""

    def apply(self, u):
        return _right_shift(u[0]), _right_shift(u[1])


@dataclass(frozen=True)
class Coupling:
    """The perturbation ``S = [[0, R], [0, 0]]``."""

    block: BlockShiftOperator

    def apply(self, u):
        r = self.block.apply_r(u[1])
        return r, FinSuppVector.zero()

    def adjoint_apply(self, u):
        return FinSuppVector.zero(), self.block.apply_r(u[0])


def perturbation_part(B: BlockShiftOperator) -> tuple[ShiftPair, Coupling]:
    """Split ``B = T0 + S`` with ``T0`` unitary and ``S`` carrying only ``R``."""
    return ShiftPair(), Coupling(B)


# -- finite sections --------------------------------------------------------

def _guard(n: int) -> None:
    if n < 1:
        raise ValueError("section half-width must be >= 1")
    if n > MAX_SECTION_HALF_WIDTH:
        raise ValueError(f"section half-width {n} exceeds {MAX_SECTION_HALF_WIDTH}")


def _shift_matrix(n: int, down: bool, weights=None, periodic=False) -> np.ndarray:
    """Matrix of a (weighted) shift on coordinates ``-n..n``.

    ``down=True`` is ``e_j -> w_{j-1} e_{j-1}``; ``down=False`` is
    ``e_j -> w_j e_{j+1}``.  ``weights`` is evaluated at the source-dependent
    index; None means unit weights.
    """
    m = 2 * n + 1
    idx = np.arange(-n, n + 1)
    out = np.zeros((m, m), dtype=complex)
    if down:
        w = np.ones(m) if weights is None else weights(idx - 1)
        out[np.arange(m - 1), np.arange(1, m)] = w[1:]
        if periodic:
            out[m - 1, 0] = w[0]
    else:
        w = np.ones(m) if weights is None else weights(idx)
        out[np.arange(1, m), np.arange(m - 1)] = w[:-1]
        if periodic:
            out[0, m - 1] = w[-1]
    return out


def finite_section(op, n: int, boundary: str = "compress") -> np.ndarray:
    """Dense matrix of ``op`` on coordinates ``|j| <= n``.

    Block operators give a ``2(2n+1)`` square matrix, top block first.
    ``boundary="periodic"`` closes shifts cyclically (the wrap entry carries
    the weight of the edge index); diagonal parts are unaffected.
    """
    _guard(n)
    if boundary not in ("compress", "periodic"):
        raise ValueError(f"unknown boundary {boundary!r}")
    per = boundary == "periodic"
    idx = np.arange(-n, n + 1)
    if isinstance(op, WeightedShift):
        return _shift_matrix(n, True, op.weights.values, per)
    if isinstance(op, DiagonalOperator):
        return np.diag(op(idx).astype(complex))
    if isinstance(op, (BlockShiftOperator, ShiftPair, Coupling)):
        m = 2 * n + 1
        out = np.zeros((2 * m, 2 * m), dtype=complex)
        if not isinstance(op, Coupling):
            u = _shift_matrix(n, False, None, per)
            out[:m, :m] = u
            out[m:, m:] = u
        if not isinstance(op, ShiftPair):
            blk = op.block if isinstance(op, Coupling) else op
            out[:m, m:] = np.diag(blk.r(idx))
        return out
    raise TypeError(f"no finite section for {type(op).__name__}")
