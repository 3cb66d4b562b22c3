import pytest
import yaml

from shiftlab.config import (
    DEFAULTS,
    ConfigError,
    build_pi_table,
    build_weights,
    config_hash,
    default_config,
    default_config_text,
    load_config,
    validate,
)


def _write(tmp_path, text):
    p = tmp_path / "c.yaml"
    p.write_text(text)
    return p


def test_reference_config_round_trips(tmp_path):
    text = default_config_text()
    assert yaml.safe_load(text) == DEFAULTS
    assert "#" in text.splitlines()[0]
    assert load_config(_write(tmp_path, text)) == DEFAULTS


def test_partial_file_merges_defaults(tmp_path):
    cfg = load_config(_write(tmp_path, "seed: 5\ntheorem1: {weak_window: 50}\n"))
    assert cfg["seed"] == 5 and cfg["theorem1"]["weak_window"] == 50
    assert cfg["theorem1"]["conjugate_window"] == DEFAULTS["theorem1"]["conjugate_window"]


@pytest.mark.parametrize("text,key", [
    ("weights: {shift: {family: nope}}", "weights.shift.family"),
    ("weights: {shift: {family: constant, value: -1}}", "weights.shift.value"),
    ("weights: {coupling: {family: harmonic, scale: 2}}", "weights.coupling.scale"),
    ("weights: {pi_table: {kind: power, exponent: 2.0}}", "weights.shift"),
    ("theorem1: {conjugate_tol: 0}", "theorem1.conjugate_tol"),
    ("theorem1: {strong_J: []}", "theorem1.strong_J"),
    ("theorem1: {weak_window: 2.5}", "theorem1.weak_window"),
    ("oracle: {taus: [1, x]}", "oracle.taus"),
    ("suite: everything", "suite"),
    ("workers: 0", "workers"),
    ("bogus: 1", "bogus"),
    ("theorem2: {bs_delta: 2.5}", "theorem2.bs_delta"),
    ("output: 3", "output"),
])
def test_invalid_configs_name_the_key(tmp_path, text, key):
    if key == "weights.shift":
        # a summable pi table only matters for the pi-dominated family
        text = "weights: {shift: {family: pi_dominated, pi: {kind: power, exponent: 2.0}}}"
    with pytest.raises(ConfigError) as exc:
        load_config(_write(tmp_path, text))
    assert exc.value.key.startswith(key)


def test_unreadable_and_malformed(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.yaml")
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, "a: [1, 2"))
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, "- 1\n- 2\n"))


def test_weight_builders(tmp_path):
    assert build_weights({"family": "harmonic", "offset": 2.0})(0) == 0.5
    assert build_weights({"family": "user_table", "lo": 1, "values": [0.5]})(1) == 0.5
    csv = tmp_path / "w.csv"
    csv.write_text("0.25\n4\n")
    assert build_weights({"family": "user_table", "csv": str(csv)})(1) == 4.0
    with pytest.raises(ConfigError):
        build_weights({"family": "user_table", "csv": str(tmp_path / "none.csv")}, "w")
    assert build_pi_table({"kind": "geometric", "ratio": 0.5})(2) == 0.25


def test_hash_ignores_output_and_workers():
    a = default_config()
    b = default_config()
    b["output"]["dir"] = "elsewhere"
    b["workers"] = 4
    assert config_hash(a) == config_hash(b)
    b["seed"] += 1
    assert config_hash(a) != config_hash(b)
    validate(a)
