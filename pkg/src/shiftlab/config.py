"""Experiment configuration: defaults, YAML loading and validation."""

from __future__ import annotations

import copy
import hashlib
import json
from pathlib import Path

import yaml

from .sequences import (
    FAMILIES,
    PiTable,
    WeightSequence,
    pi_dominated_weights,
    theorem1_weights,
)

SUITES = ("theorem1", "theorem2", "theorem3", "hardy-props", "oracle-suite")
SUITE_CHOICES = SUITES + ("all",)


class ConfigError(ValueError):
    """Invalid configuration; ``key`` names the offending dotted key."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


DEFAULTS: dict = {
    "suite": "all",
    "seed": 20240229,
    "workers": 1,
    "output": {"dir": "shiftlab-report", "json": "report.json", "csv": True},
    "weights": {
        "shift": {"family": "theorem1"},
        "coupling": {"family": "harmonic", "offset": 1.0},
        "pi_table": {"kind": "power", "scale": 1.0, "exponent": 1.0},
    },
    "theorem1": {
        "conjugate_window": 100,
        "conjugate_tol": 1e-12,
        "weak_window": 200,
        "weak_slack": 1e-6,
        "growth_radii": [0.9, 0.99, 0.999],
        "growth_angles": 16,
        "star_N": 100000,
        "strong_J": [1000, 10000, 100000],
        "strong_lower_coef": 1.5,
        "strong_slope_target": 2.0,
        "strong_slope_tol": 0.1,
        "defect_N": 100000,
        "defect_p_grid": [1.0, 1.1, 1.5, 2.0],
        "defect_slope_target": 2.0,
        "defect_slope_tol": 0.2,
        "pi_scan_N": 100000,
    },
    "theorem2": {
        "growth_radii": [100.0, 1000.0, 10000.0],
        "slope_rel_tol": 0.05,
        "grid_spacing": 0.015625,
        "parseval_box_tol": 1e-6,
        "parseval_sinc_T": 200.0,
        "parseval_sinc_rel_tol": 0.01,
        "bs_delta": 1.5,
        "bs_N": 1000,
        "kernel_z": [0.0, 1.0],
        "weight_X": 1000.0,
        "weight_slack": 1e-3,
    },
    "theorem3": {
        "svd_N": 128,
        "svd_tol": 1e-10,
        "duality_j": -12,
        "duality_tol": 1e-10,
        "duality_js": [-100, -1000, -10000],
        "duality_r2": 0.99,
        "jump_angles": 32,
        "jump_min_hits": 16,
        "jump_ratio": 10.0,
        "jump_eps": [0.1, 0.05, 0.025, 0.0125],
        "cn_window": 256,
        "lrg_radii": [0.9, 0.99, 0.999, 0.9999],
        "lrg_angles": 16,
    },
    "hardy": {
        "n_radii": 40,
        "parseval_tol": 1e-8,
        "plemelj_tol": 1e-4,
        "plemelj_spacing": 0.000244140625,
    },
    "oracle": {
        "resolvent_points": 20,
        "resolvent_N": 256,
        "resolvent_margin": 64,
        "resolvent_min_gap": 0.1,
        "resolvent_tol": 1e-8,
        "dissipative_trials": 50,
        "dissipative_dim": 8,
        "dissipative_tol": 1e-10,
        "taus": [100.0, 1000.0, 10000.0],
        "slope_tol": 0.1,
        "svd_N": 128,
        "svd_tol": 1e-10,
    },
}

_COMMENTS = {
    "suite": "one of theorem1, theorem2, theorem3, hardy-props, oracle-suite, all",
    "seed": "base seed; each claim uses seed + crc32(claim id)",
    "workers": "claims run in parallel processes when > 1",
    "output": "report directory, JSON file name and whether CSV tables are written",
    "weights": "weight families: constant(value), theorem1, harmonic(offset), "
               "pi_dominated(pi), user_table(lo, values | csv, fill)",
    "theorem1": "weighted shift claims",
    "theorem2": "real-line model claims",
    "theorem3": "block operator claims",
    "hardy": "Hardy-space machinery; radii r_m = 1 - 2^-m for m <= n_radii",
    "oracle": "dense brute-force checks",
}

_TOL_KEYS = ("tol", "slack", "spacing", "r2")


def default_config() -> dict:
    return copy.deepcopy(DEFAULTS)


_LEAF_DOCS = {
    "output.dir": "report directory", "output.json": "JSON report file name",
    "output.csv": "write CSV tables",
    "weights.shift": "weighted shift family", "weights.coupling": "block coupling family",
    "weights.pi_table": "dominating sequence: power(scale, exponent) or geometric(scale, ratio)",
    "theorem1.conjugate_window": "|j| range of the similarity check",
    "theorem1.conjugate_tol": "similarity deviation tolerance",
    "theorem1.weak_window": "|j| range of the weak H2 table",
    "theorem1.weak_slack": "slack over the similarity bound",
    "theorem1.growth_radii": "radii of the packet resolvent probe",
    "theorem1.growth_angles": "angles per radius",
    "theorem1.star_N": "index range of the condition (*) sums",
    "theorem1.strong_J": "strong series evaluated at N = 2J",
    "theorem1.strong_lower_coef": "required S_2J >= coef * ln J",
    "theorem1.strong_slope_target": "expected slope of S_2J vs ln J",
    "theorem1.strong_slope_tol": "slope tolerance",
    "theorem1.defect_N": "defect eigenvalues over |j| <= N",
    "theorem1.defect_p_grid": "Schatten exponents",
    "theorem1.defect_slope_target": "expected p = 1 slope vs ln n",
    "theorem1.defect_slope_tol": "slope tolerance",
    "theorem1.pi_scan_N": "domination checked for n <= N",
    "theorem2.growth_radii": "X values for the growth fit",
    "theorem2.slope_rel_tol": "relative tolerance against 4/pi",
    "theorem2.grid_spacing": "grid spacing of densities",
    "theorem2.parseval_box_tol": "absolute tolerance, box potential",
    "theorem2.parseval_sinc_T": "translation range for sin x / x",
    "theorem2.parseval_sinc_rel_tol": "relative tolerance, sin x / x",
    "theorem2.bs_delta": "cell-criterion exponent in (1, 2)",
    "theorem2.bs_N": "cells |m| <= N",
    "theorem2.kernel_z": "spectral parameter [re, im]",
    "theorem2.weight_X": "envelope scan on [-X, X]",
    "theorem2.weight_slack": "envelope slack",
    "theorem3.svd_N": "section half-width for singular values",
    "theorem3.svd_tol": "dense SVD tolerance",
    "theorem3.duality_j": "index compared with the closed form",
    "theorem3.duality_tol": "closed-form and brute-force tolerance",
    "theorem3.duality_js": "sweep for the (ln|j|)^2 fit",
    "theorem3.duality_r2": "minimum R^2 of the fit",
    "theorem3.jump_angles": "boundary angles (midpoints)",
    "theorem3.jump_min_hits": "required detections",
    "theorem3.jump_ratio": "jump / error ratio for a detection",
    "theorem3.jump_eps": "distances from the circle",
    "theorem3.cn_window": "|j| range of the membership probe",
    "theorem3.lrg_radii": "radii of the packet resolvent probe",
    "theorem3.lrg_angles": "angles per radius",
    "hardy.n_radii": "number of scheduled radii",
    "hardy.parseval_tol": "exact vs quadrature tolerance",
    "hardy.plemelj_tol": "jump recovery tolerance",
    "hardy.plemelj_spacing": "density grid spacing",
    "oracle.resolvent_points": "random points per family",
    "oracle.resolvent_N": "section half-width",
    "oracle.resolvent_margin": "coordinates excluded at each edge",
    "oracle.resolvent_min_gap": "minimum ||lambda| - 1|",
    "oracle.resolvent_tol": "relative error tolerance",
    "oracle.dissipative_trials": "random operators",
    "oracle.dissipative_dim": "matrix size",
    "oracle.dissipative_tol": "identity residual tolerance",
    "oracle.taus": "tau schedule of the convergence probe",
    "oracle.slope_tol": "tolerance on slope -1",
    "oracle.svd_N": "section half-width for I - T*T",
    "oracle.svd_tol": "diagonal tolerance",
}


def _flow(value) -> str:
    return yaml.safe_dump(value, default_flow_style=True, width=1000).strip().removesuffix("...").strip()


def default_config_text() -> str:
    """Reference config with every default and an inline comment per key."""
    lines = ["# shiftlab reference configuration (all defaults)"]
    for key, value in DEFAULTS.items():
        lines.append("")
        lines.append(f"# {_COMMENTS[key]}")
        if not isinstance(value, dict):
            lines.append(f"{key}: {_flow(value)}")
            continue
        lines.append(f"{key}:")
        for sub, v in value.items():
            doc = _LEAF_DOCS.get(f"{key}.{sub}")
            lines.append(f"  {sub}: {_flow(v)}" + (f"  # {doc}" if doc else ""))
    return "\n".join(lines) + "\n"


def _merge(base: dict, over: dict, prefix: str = "") -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        key = f"{prefix}{k}"
        if k not in base:
            if prefix.startswith("weights."):
                out[k] = v
                continue
            raise ConfigError(key, "unknown key")
        if isinstance(base[k], dict) and not prefix.startswith("weights."):
            if not isinstance(v, dict):
                raise ConfigError(key, "expected a mapping")
            out[k] = _merge(base[k], v, key + ".")
        else:
            out[k] = copy.deepcopy(v)
    return out


def load_config(path=None, overrides: dict | None = None) -> dict:
    """Defaults merged with a YAML file and explicit overrides, then validated."""
    cfg = default_config()
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError("config", f"cannot read {path}: {exc}") from exc
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as exc:
            raise ConfigError("config", f"invalid YAML: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be a mapping")
        cfg = _merge(cfg, data)
    if overrides:
        cfg = _merge(cfg, {k: v for k, v in overrides.items() if v is not None})
    validate(cfg)
    return cfg


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def validate(cfg: dict) -> None:
    """Raise :class:`ConfigError` naming the first offending key."""
    if cfg.get("suite") not in SUITE_CHOICES:
        raise ConfigError("suite", f"must be one of {', '.join(SUITE_CHOICES)}")
    for key in ("seed", "workers"):
        if not isinstance(cfg.get(key), int) or isinstance(cfg.get(key), bool) or cfg[key] < 0:
            raise ConfigError(key, "must be a nonnegative integer")
    if cfg["workers"] < 1:
        raise ConfigError("workers", "must be >= 1")
    out = cfg["output"]
    if not isinstance(out.get("dir"), str) or not out["dir"]:
        raise ConfigError("output.dir", "must be a nonempty string")
    if not isinstance(out.get("json"), str) or not out["json"]:
        raise ConfigError("output.json", "must be a nonempty string")
    if not isinstance(out.get("csv"), bool):
        raise ConfigError("output.csv", "must be true or false")
    for name in ("shift", "coupling"):
        build_weights(cfg["weights"].get(name), f"weights.{name}")
    build_pi_table(cfg["weights"].get("pi_table"), "weights.pi_table")
    for section in ("theorem1", "theorem2", "theorem3", "hardy", "oracle"):
        for k, v in cfg[section].items():
            key = f"{section}.{k}"
            vals = v if isinstance(v, list) else [v]
            if isinstance(v, list) and not v:
                raise ConfigError(key, "must be a nonempty list")
            if not all(_is_num(x) for x in vals):
                raise ConfigError(key, "must be numeric")
            if any(t in k for t in _TOL_KEYS) and not all(x > 0 for x in vals):
                raise ConfigError(key, "tolerances must be positive")
            if isinstance(DEFAULTS[section][k], int) and not isinstance(DEFAULTS[section][k], bool) \
                    and not all(isinstance(x, int) for x in vals):
                raise ConfigError(key, "must be an integer")
            if k.endswith(("_N", "_window", "_angles", "_points", "_trials", "_dim", "n_radii")) \
                    and not all(x >= 1 for x in vals):
                raise ConfigError(key, "must be >= 1")
    radii = cfg["theorem1"]["growth_radii"] + cfg["theorem3"]["lrg_radii"]
    if not all(0 < r < 1 for r in radii):
        raise ConfigError("theorem1.growth_radii", "radii must lie in (0, 1)")
    if not 1 < cfg["theorem2"]["bs_delta"] < 2:
        raise ConfigError("theorem2.bs_delta", "must lie in (1, 2)")
    if cfg["oracle"]["resolvent_margin"] >= cfg["oracle"]["resolvent_N"]:
        raise ConfigError("oracle.resolvent_margin", "must be smaller than resolvent_N")
    if any(j >= 0 for j in cfg["theorem3"]["duality_js"]):
        raise ConfigError("theorem3.duality_js", "must be negative")


def build_pi_table(params, key: str = "pi") -> PiTable:
    if not isinstance(params, dict):
        raise ConfigError(key, "expected a mapping")
    kind = params.get("kind", "power")
    allowed = {"power": {"kind", "scale", "exponent"}, "geometric": {"kind", "scale", "ratio"}}
    if kind not in allowed:
        raise ConfigError(f"{key}.kind", "must be power or geometric")
    for k in params:
        if k not in allowed[kind]:
            raise ConfigError(f"{key}.{k}", "unknown key")
        if k != "kind" and not _is_num(params[k]):
            raise ConfigError(f"{key}.{k}", "must be numeric")
    try:
        return PiTable(kind, float(params.get("scale", 1.0)), float(params.get("exponent", 1.0)),
                       float(params.get("ratio", 0.5)))
    except ValueError as exc:
        raise ConfigError(key, str(exc)) from exc


def build_weights(params, key: str = "weights") -> WeightSequence:
    """Weight family from ``{family: name, ...params}``."""
    if not isinstance(params, dict):
        raise ConfigError(key, "expected a mapping")
    fam = params.get("family")
    if fam not in FAMILIES:
        raise ConfigError(f"{key}.family", f"must be one of {', '.join(FAMILIES)}")
    allowed = {
        "constant": {"value"},
        "theorem1": set(),
        "harmonic": {"offset"},
        "pi_dominated": {"pi"},
        "user_table": {"lo", "values", "csv", "fill"},
    }[fam]
    for k in params:
        if k != "family" and k not in allowed:
            raise ConfigError(f"{key}.{k}", f"unknown parameter for family {fam}")
    try:
        if fam == "constant":
            v = params.get("value", 1.0)
            if not _is_num(v) or v <= 0:
                raise ConfigError(f"{key}.value", "must be a positive number")
            return WeightSequence.constant(float(v))
        if fam == "theorem1":
            return theorem1_weights()
        if fam == "harmonic":
            v = params.get("offset", 1.0)
            if not _is_num(v) or v <= 0:
                raise ConfigError(f"{key}.offset", "must be a positive number")
            return WeightSequence.harmonic(float(v))
        if fam == "pi_dominated":
            return pi_dominated_weights(build_pi_table(params.get("pi", {}), f"{key}.pi"))
        lo = params.get("lo", 0)
        if not isinstance(lo, int):
            raise ConfigError(f"{key}.lo", "must be an integer")
        fill = params.get("fill", 1.0)
        if not _is_num(fill) or fill <= 0:
            raise ConfigError(f"{key}.fill", "must be a positive number")
        if "csv" in params:
            return WeightSequence.from_csv(params["csv"], lo, float(fill))
        vals = params.get("values")
        if not isinstance(vals, list) or not vals or not all(_is_num(x) and x > 0 for x in vals):
            raise ConfigError(f"{key}.values", "must be a nonempty list of positive numbers")
        return WeightSequence.user_table(lo, vals, float(fill))
    except ConfigError:
        raise
    except (ValueError, OSError) as exc:
        raise ConfigError(key, str(exc)) from exc


def config_hash(cfg: dict) -> str:
    """SHA-256 of the canonical JSON form, ignoring output and worker settings."""
    core = {k: v for k, v in cfg.items() if k not in ("output", "workers")}
    return hashlib.sha256(json.dumps(core, sort_keys=True).encode()).hexdigest()
