"""Evidence-level classification of weak/strong smooth vectors and jump probes.

Every verdict is evidence drawn from finitely many test vectors; none of
them is a proof.  Weak smoothness is tested against ``v = e_j`` over a
window of ``j`` and, when a diagonal similarity to the unweighted shift is
known, backed by an analytic bound valid for the whole unit ball.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .hardy import element_norm_table, richardson, strong_h2_weighted_sum
from .operators import (
    BlockShiftOperator,
    DiagonalOperator,
    FinSuppVector,
    WeightedShift,
    build_similarity,
)
from .resolvent import adjoint_block_resolvent

WEAK_SMOOTH = "weak_smooth_evidence"
WEAK_GROWTH = "weak_growth_evidence"
STRONG_SMOOTH = "strong_smooth_evidence"
NOT_STRONG_SMOOTH = "not_strong_smooth"
JUMP_DETECTED = "singular_jump_detected"
NO_JUMP = "no_jump_detected"

DEFAULT_EPS = (0.1, 0.05, 0.025, 0.0125)


@dataclass(frozen=True)
class SmoothnessVerdict:
    kind: str
    witness: dict = field(default_factory=dict)
    trivial: bool = False

    def to_dict(self) -> dict:
        return {"kind": self.kind, "trivial": self.trivial, "witness": _plain(self.witness)}


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "to_dict"):
        return x.to_dict()
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


# -- weak smoothness -----------------------------------------------------------

def similarity_bound(T: WeightedShift, u: FinSuppVector) -> float | None:
    """``||W^{-1} u||_1 * ||W||`` when ``W^{-1} T W`` is the unweighted shift.

    Young's inequality bounds the H2 norm of any matrix element of the
    unweighted shift resolvent by ``||x||_1 ||y||_2``; with ``x = W^{-1} u``
    and ``y = W* v`` this covers every unit vector ``v``.  Returns None
    when no similarity is registered for the family.
    """
    if not isinstance(T, WeightedShift):
        return None
    w = T.weights
    if w.family == "constant" and w.value == 1.0:
        return float(np.sum(np.abs(u.coef)))
    if not w.interleaved:
        return None
    W = build_similarity(w)
    # a_j increases, so sup_j w_j = 1/a_1; all w_j >= 1
    w_sup = float(1.0 / w.a(1))
    x = W.inverse_apply(u)
    return float(np.sum(np.abs(x.coef))) * w_sup


def _dyadic_maxima(js: np.ndarray, vals: np.ndarray, sign: int) -> list[tuple[int, float]]:
    out = []
    lo = 1
    mag = sign * js
    while True:
        sel = (mag >= lo) & (mag < 2 * lo)
        if not np.any(sel):
            if lo > np.max(np.abs(js), initial=0):
                break
        else:
            out.append((lo, float(vals[sel].max())))
        lo *= 2
    return out


def growth_evidence(js, vals, rel: float = 1e-9) -> dict:
    """Dyadic block maxima of ``vals`` in each direction of ``j``.

    A direction shows growth when the maxima over the last three dyadic
    blocks increase strictly.
    """
    js, vals = np.asarray(js), np.asarray(vals)
    res = {}
    for name, sign in (("negative", -1), ("positive", +1)):
        blocks = _dyadic_maxima(js, vals, sign)
        tail = [v for _, v in blocks[-3:]]
        grows = len(tail) == 3 and all(b > a * (1 + rel) + rel for a, b in zip(tail, tail[1:]))
        res[name] = {"blocks": blocks, "growth": bool(grows)}
    return res


def _norm_tables(op, u, js, side):
    if isinstance(op, BlockShiftOperator):
        top = element_norm_table(op, u, js, 0, side)
        bot = element_norm_table(op, u, js, 1, side)
        return {"top": top, "bottom": bot}, np.maximum(top, bot)
    vals = element_norm_table(op, u, js, 0, side)
    return {"basis": vals}, vals


def classify_weak_disk(T, u, v_window: tuple[int, int], sides=("inside", "companion")
                       ) -> SmoothnessVerdict:
    """H2 norms of ``<(T - z)^{-1} u, e_j>`` and ``<(I - zT)^{-1} u, e_j>`` over the window.

    Each norm is an exact finite Parseval sum.  The verdict is
    :data:`WEAK_SMOOTH` with the sup when no direction of ``j`` shows
    growth, :data:`WEAK_GROWTH` with the growth table otherwise.
    """
    js = np.arange(v_window[0], v_window[1] + 1)
    witness: dict = {"window": list(v_window)}
    sup = 0.0
    growth = False
    for side in sides:
        tables, vals = _norm_tables(T, u, js, side)
        g = growth_evidence(js, vals)
        growth |= g["negative"]["growth"] or g["positive"]["growth"]
        k = int(np.argmax(vals)) if len(vals) else 0
        witness[side] = {
            "sup": float(vals.max()) if len(vals) else 0.0,
            "argmax_j": int(js[k]) if len(js) else None,
            "growth": g,
            "table": {name: t for name, t in tables.items()},
        }
        sup = max(sup, witness[side]["sup"])
    witness["sup"] = sup
    witness["j"] = js
    bound = similarity_bound(T, u) if not isinstance(u, tuple) else None
    witness["similarity_bound"] = bound
    return SmoothnessVerdict(WEAK_GROWTH if growth else WEAK_SMOOTH, witness)


# -- strong smoothness ---------------------------------------------------------

def classify_strong_shift(T: WeightedShift, u: FinSuppVector, n: int) -> SmoothnessVerdict:
    """Strong-smoothness verdict from the defect-weighted H2 series on both sides."""
    if u.trimmed().is_zero():
        return SmoothnessVerdict(STRONG_SMOOTH, {"reason": "u = 0"}, trivial=True)
    inside = strong_h2_weighted_sum(T.weights, u, n, companion=False)
    comp = strong_h2_weighted_sum(T.weights, u, n, companion=True)
    witness = {"inside": inside.certificate, "companion": comp.certificate,
               "inner": {k: c for k, c in inside.inner.items()}}
    if inside.certificate.converged and comp.certificate.converged:
        return SmoothnessVerdict(STRONG_SMOOTH, witness)
    return SmoothnessVerdict(NOT_STRONG_SMOOTH, witness)


# -- jumps across the circle ---------------------------------------------------

def _floor(vals) -> float:
    return 10 * np.finfo(float).eps * max(1.0, float(np.max(np.abs(vals), initial=0.0)))


def jump_probe(func, angles, eps=DEFAULT_EPS) -> SmoothnessVerdict:
    """Generic jump probe for ``func(lam) -> array of values``.

    At each angle the inside limit is extrapolated from
    ``lam = (1 - eps) e^{i theta}`` and the outside limit from
    ``lam = e^{i theta} / (1 - eps)``.  A jump is detected at the angle when
    the largest extrapolated jump exceeds ten times its error estimate.
    """
    eps = tuple(float(e) for e in eps)
    ratio = eps[0] / eps[1] if len(eps) > 1 else 2.0
    rows = []
    hits = 0
    for th in angles:
        e = np.exp(1j * th)
        inside = np.array([np.atleast_1d(func((1 - x) * e)) for x in eps])
        outside = np.array([np.atleast_1d(func(e / (1 - x))) for x in eps])
        jumps, errs = [], []
        for col in range(inside.shape[1]):
            li, ei = richardson(inside[:, col], ratio)
            lo, eo = richardson(outside[:, col], ratio)
            jumps.append(li - lo)
            errs.append(ei + eo)
        jumps = np.array(jumps)
        err = max(float(np.max(errs)), _floor(np.concatenate([inside.ravel(), outside.ravel()])))
        mag = float(np.max(np.abs(jumps)))
        hit = mag > 10 * err
        hits += hit
        rows.append({"theta": float(th), "jump": mag, "error": err, "ratio": mag / err,
                     "detected": bool(hit)})
    frac = hits / len(rows) if rows else 0.0
    kind = JUMP_DETECTED if rows and frac >= 0.5 else NO_JUMP
    return SmoothnessVerdict(kind, {"angles": rows, "detected": hits, "total": len(rows),
                                    "fraction": frac, "eps": list(eps)})


def default_test_window(f, half_width: int = 4):
    """Basis vectors ``(e_j, 0)`` and ``(0, e_j)`` around the support of ``f``."""
    centers = [x.support() for x in f if x.support() is not None]
    lo = min((c[0] for c in centers), default=0) - half_width
    hi = max((c[1] for c in centers), default=0) + half_width
    z = FinSuppVector.zero()
    out = []
    for j in range(lo, hi + 1):
        e = FinSuppVector.basis(j)
        out += [(e, z), (z, e)]
    return out


def singular_jump_probe(B: BlockShiftOperator, f, angles=None, eps=DEFAULT_EPS,
                        g_window=None) -> SmoothnessVerdict:
    """Jump of ``<(B* - lam)^{-1} f, g>`` across the circle for ``g`` in a test window."""
    if angles is None:
        angles = 2 * np.pi * (np.arange(32) + 0.5) / 32
    if all(x.trimmed().is_zero() for x in f):
        return SmoothnessVerdict(NO_JUMP, {"reason": "f = 0", "detected": 0,
                                           "total": len(angles)}, trivial=True)
    gs = default_test_window(f) if g_window is None else list(g_window)

    def func(lam):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            a, b = adjoint_block_resolvent(B, lam, f)
        return np.array([a.payload.inner(g[0]) + b.payload.inner(g[1]) for g in gs])

    return jump_probe(func, angles, eps)


# -- the CN probe ----------------------------------------------------------------

def cn_membership_probe(B: BlockShiftOperator, u, window: tuple[int, int]) -> dict:
    """Separate weak-disk verdicts for the inside (+) and companion (-) conditions."""
    plus = classify_weak_disk(B, u, window, sides=("inside",))
    minus = classify_weak_disk(B, u, window, sides=("companion",))
    return {
        "plus": plus,
        "minus": minus,
        "plus_bounded": plus.kind == WEAK_SMOOTH,
        "minus_bounded": minus.kind == WEAK_SMOOTH,
    }


def similarity_operator(T: WeightedShift) -> DiagonalOperator | None:
    return build_similarity(T.weights) if T.weights.interleaved else None
