"""Acceptance gate: one test per criterion, thresholds written out literally.

Each test records a ``criterion N: PASS|FAIL`` line; the lines are printed
as they happen and again in the terminal summary.
"""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from shiftlab.config import build_pi_table, build_weights, default_config
from shiftlab.hardy import duality_bruteforce, duality_h2_norm, strong_series_certificate
from shiftlab.linemodel import (
    PotentialFunction,
    birman_solomyak_certificate,
    growth_slope,
    weight_envelope_check,
)
from shiftlab.operators import (
    BlockShiftOperator,
    FinSuppVector,
    WeightedShift,
    build_similarity,
    conjugate_check,
)
from shiftlab.oracle import (
    DissipativeTestOperator,
    dissipative_identity_check,
    strong_convergence_probe,
)
from shiftlab.report import dumps, strip_timestamp
from shiftlab.schatten import defect_spectrum, perturbation_singular_values
from shiftlab.sequences import WeightSequence, pi_dominated_weights
from shiftlab.smoothness import (
    JUMP_DETECTED,
    WEAK_SMOOTH,
    classify_weak_disk,
    similarity_bound,
    singular_jump_probe,
)
from shiftlab.suites import run_claim

SEED = 20240229


@pytest.fixture(scope="module")
def theorem1_shift():
    return WeightedShift(build_weights({"family": "theorem1"}))


@pytest.fixture(scope="module")
def block():
    rho = WeightSequence.harmonic(1.0)
    return BlockShiftOperator(rho)


def _fit(x, y):
    slope, icpt = np.polyfit(np.asarray(x, float), np.asarray(y, float), 1)
    return float(slope), float(icpt)


def test_criterion_01_resolvent_oracle(criterion):
    with criterion(1, "closed-form resolvent vs dense oracle") as c:
        cfg = default_config()
        o = cfg["oracle"]
        assert (o["resolvent_points"], o["resolvent_N"], o["resolvent_margin"]) == (20, 256, 64)
        assert o["resolvent_min_gap"] >= 0.1
        t0 = time.perf_counter()
        entry = run_claim("O-resolvent", cfg, SEED)
        elapsed = time.perf_counter() - t0
        rows = entry["tables"]["resolvent_oracle"]["rows"]
        fams = {r[0] for r in rows}
        worst = max(r[4] for r in rows)
        c.note(f"max rel error {worst:.2e} over {len(rows)} points, {elapsed:.1f} s")
        assert fams == {"constant", "theorem1"}
        assert all(sum(r[0] == f for r in rows) == 20 for f in fams)
        assert min(r[3] for r in rows) >= 0.1
        assert worst <= 1e-8
        assert elapsed <= 60


def test_criterion_02_similarity_exact(criterion, theorem1_shift):
    with criterion(2, "W^-1 T W equals the unweighted shift") as c:
        W = build_similarity(theorem1_shift.weights)
        dev = conjugate_check(theorem1_shift, W, (-100, 100))
        c.note(f"deviation {dev:.2e}")
        assert dev <= 1e-12


def test_criterion_03_weak_uniform_bound(criterion, theorem1_shift):
    with criterion(3, "weak H2 norms bounded by the similarity constant") as c:
        u = FinSuppVector.basis(0)
        v = classify_weak_disk(theorem1_shift, u, (-200, 200))
        bound = similarity_bound(theorem1_shift, u)
        sup = v.witness["sup"]
        c.note(f"sup {sup:.6g}, bound {bound}")
        assert v.kind == WEAK_SMOOTH
        assert bound == pytest.approx(2.0, abs=1e-12)
        assert v.witness["inside"]["sup"] <= 2 + 1e-6
        assert v.witness["companion"]["sup"] <= 2 + 1e-6


J_GRID = np.array([10**3, 10**4, 10**5])


def _strong_sums(T):
    cert = strong_series_certificate(T.weights, 0, int(2 * J_GRID.max()), cuts=2 * J_GRID)
    return np.array(cert.partial_sums)


def test_criterion_04_strong_obstruction(criterion, theorem1_shift):
    with criterion(4, "strong series S_2J >= 1.5 ln J with slope 2.0 +- 0.1") as c:
        s = _strong_sums(theorem1_shift)
        slope, _ = _fit(np.log(J_GRID), s)
        c.note(f"S_2J {np.round(s, 4).tolist()}, slope {slope:.4f}")
        assert np.all(s >= 1.5 * np.log(J_GRID))
        assert abs(slope - 2.0) <= 0.1


def test_strong_series_measured_slope_is_four(theorem1_shift):
    # both parities contribute about 2/j, so the full sum grows like 4 ln J
    s = _strong_sums(theorem1_shift)
    assert s == pytest.approx([41.408162556937285, 50.620311177922076, 59.83083163240579], rel=1e-12)
    assert _fit(np.log(J_GRID), s)[0] == pytest.approx(4.0, abs=0.01)


def test_strong_series_even_terms_have_slope_two():
    entry = run_claim("T1-ii", default_config(), SEED)
    assert entry["witness"]["even_subseries_fit"]["slope"] == pytest.approx(2.0, abs=0.01)
    assert entry["witness"]["strong_verdict"] == "not_strong_smooth"


def _defect_partial_sums(rho, Ns):
    # |1 - rho_j^2| summed over |j| <= N, computed directly from the weights
    n = max(Ns)
    j = np.arange(-n, n + 1)
    d = np.abs(1.0 - rho.values(j) ** 2)
    return np.array([d[np.abs(j) <= N].sum() for N in Ns])


def test_criterion_05_schatten(criterion, theorem1_shift):
    with criterion(5, "defect S^1.5 certified, p=1 slope 2 +- 0.2, pi domination") as c:
        n = 10**5
        rep = defect_spectrum(theorem1_shift, (-n, n), (1.0, 1.5))
        v15 = rep.verdicts[1.5]
        Ns = np.unique(np.geomspace(100, n, 12).astype(int))
        s1 = _defect_partial_sums(theorem1_shift.weights, Ns)
        slope, _ = _fit(np.log(Ns), s1)
        pi = build_pi_table({"kind": "power", "exponent": 1.0, "scale": 1.0}, "pi")
        dom = defect_spectrum(WeightedShift(pi_dominated_weights(pi)), (-2, n + 2), (), pi=pi).domination
        c.note(f"p=1.5 certified={v15.certified}, p=1 slope {slope:.3f}, "
               f"domination over {dom['count']} eigenvalues passed={dom['passed']}")
        assert v15.converged and v15.certified
        assert dom["passed"] and dom["count"] >= n + 1
        assert not rep.verdicts[1.0].converged
        assert abs(slope - 2.0) <= 0.2


def test_defect_p1_measured_slope(theorem1_shift):
    # the interleaved defects are about 4/j on each side of the window
    Ns = np.unique(np.geomspace(100, 10**5, 12).astype(int))
    slope, _ = _fit(np.log(Ns), _defect_partial_sums(theorem1_shift.weights, Ns))
    assert 3.6 <= slope <= 4.1


def test_criterion_06_perturbation_structure(criterion, block):
    with criterion(6, "singular values of S at N=128 and mu_n <= rho_[n/2]") as c:
        rep = perturbation_singular_values(block, 128)
        dom = rep.domination
        c.note(f"dense deviation {dom['dense_svd_deviation']:.2e}, max ratio {dom['max_ratio']:.6g}")
        assert dom["dense_svd_deviation"] <= 1e-10
        assert dom["passed"] and dom["first_violation"] is None
        k = np.arange(len(rep.values))
        assert np.all(rep.values <= block.coupling.values(k // 2) * (1 + 1e-15))


def test_criterion_07_duality(criterion, block):
    with criterion(7, "duality H2 norm at j=-12 and (ln|j|)^2 growth") as c:
        rho, u2 = block.coupling, FinSuppVector.basis(0)
        val = duality_h2_norm(rho, u2, -12, 12).partial
        brute = duality_bruteforce(rho, u2, -12, 14)
        h12 = math.fsum(1.0 / k for k in range(1, 13))
        js = np.array([-100, -1000, -10000])
        vals = np.array([duality_h2_norm(rho, u2, int(j), int(-j)).partial for j in js])
        x = np.log(np.abs(js)) ** 2
        cfit = float(x @ vals / (x @ x))
        r2 = 1 - np.sum((vals - cfit * x) ** 2) / np.sum((vals - vals.mean()) ** 2)
        c.note(f"value {val:.15g}, c {cfit:.4f}, R2 {r2:.4f}")
        assert val == pytest.approx(4.423495156939421, abs=1e-10)
        assert abs(val - (h12 - 1) ** 2) <= 1e-10
        assert abs(val - brute) <= 1e-10
        assert cfit > 0 and r2 >= 0.99


def test_criterion_08_singular_jump(criterion, block):
    with criterion(8, "singular jump detected on >= 16 of 32 angles") as c:
        angles = 2 * np.pi * (np.arange(32) + 0.5) / 32
        e0, z = FinSuppVector.basis(0), FinSuppVector.zero()
        counts = []
        for f in ((e0, z), (z, e0)):
            v = singular_jump_probe(block, f, angles)
            hits = sum(r["ratio"] >= 10 for r in v.witness["angles"])
            counts.append(hits)
            assert v.kind == JUMP_DETECTED
            assert hits >= 16
        c.note(f"hits {counts}")


def test_criterion_09_line_model(criterion):
    with criterion(9, "line model growth, Parseval, cell criterion, weight envelope") as c:
        q = PotentialFunction.sinc()
        g = growth_slope(q, (1e2, 1e3, 1e4))
        rel = abs(g.slope - 4 / math.pi) / (4 / math.pi)
        entry = run_claim("T2-parseval", default_config(), SEED)
        box = entry["witness"]["box"]
        bs = birman_solomyak_certificate(q, 1.5, 1000)
        scan = weight_envelope_check(q, 1e3, slack=1e-3)
        c.note(f"slope rel error {rel:.2e}, box error {box['abs_error']:.1e}, "
               f"cell sum certified={bs.certified}, envelope ok={scan.ok}")
        assert rel <= 0.05
        assert box["abs_error"] <= 1e-6
        assert bs.converged and bs.certified
        assert scan.ok


def test_criterion_10_dissipative(criterion):
    with criterion(10, "dissipative identity and 1/tau strong convergence") as c:
        res, slopes = [], []
        for k in range(50):
            rng = np.random.default_rng([SEED, k])
            M = (rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))) / np.sqrt(2)
            G = (rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))) / np.sqrt(2)
            D = DissipativeTestOperator((M + M.conj().T) / 2, G.conj().T @ G)
            u = rng.standard_normal(8) + 1j * rng.standard_normal(8)
            res.append(dissipative_identity_check(D, u, 1j))
            slopes.append(strong_convergence_probe(D, u).slope)
        c.note(f"max residual {max(res):.1e}, slopes [{min(slopes):.3f}, {max(slopes):.3f}]")
        assert max(res) <= 1e-10
        assert all(abs(s + 1) <= 0.1 for s in slopes)


def test_criterion_11_hardy(criterion):
    with criterion(11, "H2 exact vs quadrature, monotone means, Plemelj jump") as c:
        cfg = default_config()
        e = {k: run_claim(k, cfg, SEED)["witness"] for k in ("H-parseval", "H-monotone", "H-plemelj")}
        rows = run_claim("H-parseval", cfg, SEED)["tables"]["h2_parseval"]["rows"]
        c.note(f"parseval gap {e['H-parseval']['max_gap']:.1e}, "
               f"plemelj error {e['H-plemelj']['max_error']:.1e}")
        assert len(rows) == 10
        assert e["H-parseval"]["max_gap"] <= 1e-8
        assert not e["H-monotone"]["radial_failures"] and not e["H-monotone"]["holder_failures"]
        assert e["H-plemelj"]["max_error"] <= 1e-4


def _run_all(out):
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "shiftlab.cli", "run", "--suite", "all",
                           "--out", str(out)], capture_output=True, text=True)
    return proc, time.perf_counter() - t0


def test_criterion_12_determinism(criterion, tmp_path):
    with criterion(12, "byte-identical reports and wall time <= 600 s") as c:
        (p1, t1), (p2, t2) = _run_all(tmp_path / "a"), _run_all(tmp_path / "b")
        c.note(f"wall times {t1:.1f} s and {t2:.1f} s, exit {p1.returncode}")
        assert p1.returncode in (0, 1), p1.stderr
        a = json.loads((tmp_path / "a" / "report.json").read_text())
        b = json.loads((tmp_path / "b" / "report.json").read_text())
        assert dumps(strip_timestamp(a)) == dumps(strip_timestamp(b))
        assert a["summary"]["claims"] == 21
        assert max(t1, t2) <= 600
