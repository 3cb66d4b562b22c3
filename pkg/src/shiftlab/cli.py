"""Command line entry point: ``shiftlab run | default-config | validate``.

Exit codes: 0 every claim passed, 1 some claim failed, 2 invalid
configuration, 3 internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone

from . import __version__
from .config import SUITE_CHOICES, ConfigError, config_hash, default_config_text, load_config
from .report import ReportError, build_report, emit_report
from .suites import FAIL, run_claim, select

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("shiftlab")


def _timed(claim_id: str, cfg: dict, seed: int) -> tuple[dict, float]:
    t0 = time.perf_counter()
    try:
        entry = run_claim(claim_id, cfg, seed)
    except Exception as exc:  # reported per claim, mapped to exit code 3
        entry = {"id": claim_id, "verdict": FAIL, "error": f"{type(exc).__name__}: {exc}",
                 "traceback": traceback.format_exc().splitlines()[-3:]}
    return entry, time.perf_counter() - t0


def run_suite(cfg: dict) -> tuple[dict, int]:
    """Run the configured suite; returns the report and the exit code."""
    started = datetime.now(timezone.utc)
    ids = [c.id for c in select(cfg["suite"])]
    if cfg["workers"] > 1 and len(ids) > 1:
        with ProcessPoolExecutor(max_workers=cfg["workers"]) as pool:
            results = list(pool.map(_timed, ids, [cfg] * len(ids), [cfg["seed"]] * len(ids)))
    else:
        results = [_timed(i, cfg, cfg["seed"]) for i in ids]
    entries = [e for e, _ in results]
    runtimes = {e["id"]: t for e, t in results}
    report = build_report(cfg, entries, runtimes, started)
    if report["summary"]["errors"]:
        return report, EXIT_INTERNAL
    return report, EXIT_OK if report["summary"]["success"] else EXIT_FAIL


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shiftlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run certification suites and write the report")
    r.add_argument("--config", help="YAML config file (defaults apply to missing keys)")
    r.add_argument("--suite", choices=SUITE_CHOICES)
    r.add_argument("--out", help="report directory")
    r.add_argument("--seed", type=int)
    r.add_argument("--workers", type=int)
    sub.add_parser("default-config", help="print the reference config with every default")
    v = sub.add_parser("validate", help="check a config file without running anything")
    v.add_argument("--config", required=True)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "default-config":
        sys.stdout.write(default_config_text())
        return EXIT_OK
    try:
        if args.command == "validate":
            cfg = load_config(args.config)
            print(f"config ok (hash {config_hash(cfg)[:16]})")
            return EXIT_OK
        overrides = {"suite": args.suite, "seed": args.seed, "workers": args.workers}
        if args.out:
            overrides["output"] = {"dir": args.out}
        cfg = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        log.info("running suite %s with %d worker(s)", cfg["suite"], cfg["workers"])
        report, code = run_suite(cfg)
        out = cfg["output"]
        paths = emit_report(report, out["dir"], out["json"], out["csv"])
    except ReportError as exc:
        print(f"report error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL
    for entry in report["claims"]:
        extra = f"  ({entry['error']})" if "error" in entry else ""
        print(f"{entry['id']:<22} {entry['verdict']}{extra}")
    print(f"report: {paths[0]}")
    return code


if __name__ == "__main__":
    sys.exit(main())
