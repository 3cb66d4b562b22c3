"""Brute-force dense checks that share no code path with the closed forms.

Finite sections of shift operators need a boundary condition.  Plain
compression turns a shift into a nilpotent matrix whose resolvent inside
the disk has nothing to do with the bi-infinite one, so resolvent checks
close the section periodically by default; away from the wrap-around the
error then decays like ``|lam|^{N+B}`` inside and ``|lam|^{-(N+B)}``
outside.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .operators import (
    BlockShiftOperator,
    FinSuppVector,
    WeightedShift,
    finite_section,
)
from .resolvent import as_point, block_resolvent, shift_resolvent, ORACLE_MIN_GAP

DEFAULT_SEED = 20240229
COND_LIMIT = 1e14


@dataclass(frozen=True)
class DenseMatrix:
    data: np.ndarray
    provenance: str
    window: tuple[int, int]

    def __post_init__(self):
        a = np.asarray(self.data)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("dense matrix must be square")
        if not np.all(np.isfinite(a)):
            raise ValueError("dense matrix has non-finite entries")

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @classmethod
    def section(cls, op, n: int, boundary: str = "compress") -> "DenseMatrix":
        return cls(finite_section(op, n, boundary), f"{type(op).__name__}/{boundary}", (-n, n))


class SingularSectionError(np.linalg.LinAlgError):
    def __init__(self, cond: float):
        super().__init__(f"finite section is numerically singular (condition {cond:.3g})")
        self.cond = cond


def _solve(m: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSectionError(cond)
    return np.linalg.solve(m, rhs)


def dense_resolvent_check(op, lam, f, n: int, margin: int | None = None,
                          boundary: str = "periodic") -> float:
    """Max relative coordinate error between a dense solve and the closed form.

    Compares on coordinates ``|j| <= n - margin`` (both blocks for block
    operators); the error is normalised by the largest closed-form
    coordinate there.
    """
    lam = as_point(lam)
    if lam.gap < ORACLE_MIN_GAP:
        raise ValueError(f"gap {lam.gap:.3g} is below the oracle floor {ORACLE_MIN_GAP:g}")
    margin = n // 4 if margin is None else int(margin)
    if not 0 <= margin < n:
        raise ValueError("need 0 <= margin < N")
    idx = np.arange(-n, n + 1)
    inner = np.abs(idx) <= n - margin
    block = isinstance(op, BlockShiftOperator)
    parts = list(f) if block else [f]
    for p in parts:
        s = p.support()
        if s is not None and (s[0] < -(n - margin) or s[1] > n - margin):
            raise ValueError("support of f must lie in the interior")
    m = finite_section(op, n, boundary)
    rhs = np.concatenate([p.to_dense(-n, n) for p in parts])
    x = _solve(m - lam.z * np.eye(len(m)), rhs)
    if block:
        a, b = block_resolvent(op, lam, f)
        ref = np.concatenate([a.payload.to_dense(-n, n), b.payload.to_dense(-n, n)])
        mask = np.concatenate([inner, inner])
    elif isinstance(op, WeightedShift):
        ref = shift_resolvent(op, lam, f).payload.to_dense(-n, n)
        mask = inner
    else:
        raise TypeError(f"no closed-form resolvent for {type(op).__name__}")
    scale = float(np.max(np.abs(ref[mask])))
    if scale == 0:
        return float(np.max(np.abs(x[mask])))
    return float(np.max(np.abs(x[mask] - ref[mask])) / scale)


def dense_svd_check(op, n: int, analytic) -> float:
    """Max deviation between sorted dense singular values and the analytic list.

    The analytic list is padded with zeros to the section dimension.
    """
    m = finite_section(op, n)
    sv = np.linalg.svd(m, compute_uv=False)
    ref = np.sort(np.abs(np.asarray(analytic, dtype=float)))[::-1]
    if len(ref) > len(sv):
        raise ValueError("more analytic values than the section dimension")
    ref = np.concatenate([ref, np.zeros(len(sv) - len(ref))])
    return float(np.max(np.abs(sv - ref))) if len(sv) else 0.0


# -- dissipative test operators ----------------------------------------------------------

@dataclass(frozen=True)
class DissipativeTestOperator:
    """``L = A + iV`` with ``A`` Hermitian and ``V >= 0``."""

    A: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        A, V = np.asarray(self.A, dtype=complex), np.asarray(self.V, dtype=complex)
        if A.shape != V.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("A and V must be square matrices of equal size")
        if not np.array_equal(A, A.conj().T):
            raise ValueError("A must be Hermitian")
        if np.max(np.abs(V - V.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(V))):
            raise ValueError("V must be Hermitian")
        if np.min(np.linalg.eigvalsh(V)) < -1e-12:
            raise ValueError("V must be positive semidefinite")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "V", V)

    @classmethod
    def random(cls, dim: int = 8, rng=None) -> "DissipativeTestOperator":
        """``A = (M + M*)/2``, ``V = G*G`` with standard complex normal entries."""
        rng = np.random.default_rng(rng)

        def cn():
            return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)

        M, G = cn(), cn()
        A = (M + M.conj().T) / 2
        V = G.conj().T @ G
        V = (V + V.conj().T) / 2
        return cls(A, V)

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    @property
    def L(self) -> np.ndarray:
        return self.A + 1j * self.V


def dissipative_identity_check(D: DissipativeTestOperator, u, lam: complex) -> float:
    """``|LHS - RHS| / (1 + |RHS|)`` for ``<V x, x> = eps ||x||^2 - Im <x, u>``.

    Here ``x = (L - lam)^{-1} u`` and ``eps = Im lam > 0``.
    """
    lam = complex(lam)
    if lam.imag <= 0:
        raise ValueError("lam must lie in the upper half-plane")
    u = np.asarray(u, dtype=complex)
    if not np.any(u):
        return 0.0
    x = _solve(D.L - lam * np.eye(D.dim), u)
    lhs = float(np.real(np.vdot(x, D.V @ x)))
    f_uu = np.vdot(u, x)  # <x, u>, linear in x
    rhs = lam.imag * float(np.vdot(x, x).real) - float(f_uu.imag)
    return abs(lhs - rhs) / (1.0 + abs(rhs))


@dataclass(frozen=True)
class ConvergenceTable:
    taus: tuple[float, ...]
    deviations: tuple[float, ...]
    slope: float


def strong_convergence_probe(D, u, taus=(1e2, 1e3, 1e4)) -> ConvergenceTable:
    """``||i tau (L + i tau)^{-1} u - u||`` over the schedule with its log-log slope.

    ``D`` is a :class:`DissipativeTestOperator` or a plain square matrix.
    """
    L = D.L if isinstance(D, DissipativeTestOperator) else np.asarray(D, dtype=complex)
    u = np.asarray(u, dtype=complex)
    eye = np.eye(len(L))
    dev = []
    for t in taus:
        y = _solve(L + 1j * t * eye, u)
        dev.append(float(np.linalg.norm(1j * t * y - u)))
    dev_arr = np.array(dev)
    if np.all(dev_arr > 0) and len(taus) > 1:
        slope = float(np.polyfit(np.log(np.abs(taus)), np.log(dev_arr), 1)[0])
    else:
        slope = float("nan")
    return ConvergenceTable(tuple(float(t) for t in taus), tuple(dev), slope)


def randomized_identity_suite(trials: int = 50, dim: int = 8, lam: complex = 1j,
                              seed: int = DEFAULT_SEED) -> np.ndarray:
    """Residuals of :func:`dissipative_identity_check` over seeded random trials."""
    out = np.empty(trials)
    for k in range(trials):
        rng = np.random.default_rng([seed, k])
        D = DissipativeTestOperator.random(dim, rng)
        u = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        out[k] = dissipative_identity_check(D, u, lam)
    return out


def random_finsupp(rng, lo: int, hi: int) -> FinSuppVector:
    n = hi - lo + 1
    return FinSuppVector(lo, rng.standard_normal(n) + 1j * rng.standard_normal(n))


def quiet(func, *args, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return func(*args, **kw)
