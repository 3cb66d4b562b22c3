"""Report assembly and emission (JSON plus CSV extracts)."""

from __future__ import annotations

import csv
import json
import math
import re
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .config import config_hash
from .sequences import REINDEXING_NOTE
from .suites import EVIDENCE, FAIL, PASS


class ReportError(OSError):
    """Failure writing a report file; the message carries the path."""


def _finite(x):
    """Replace non-finite floats by strings so the JSON stays standard."""
    if isinstance(x, float) and not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(x, dict):
        return {k: _finite(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_finite(v) for v in x]
    return x


def build_report(cfg: dict, entries: list[dict], runtimes: dict | None = None,
                 started: datetime | None = None) -> dict:
    """Deterministic report; wall-clock data lives only in ``metadata.timestamp``."""
    entries = sorted(entries, key=lambda e: e["id"])
    ids = [e["id"] for e in entries]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate claim ids in report")
    counts = {v: sum(e["verdict"] == v for e in entries) for v in (PASS, FAIL, EVIDENCE)}
    errors = [e["id"] for e in entries if "error" in e]
    started = started or datetime.now(timezone.utc)
    runtimes = runtimes or {}
    core_cfg = {k: v for k, v in cfg.items() if k not in ("output", "workers")}
    return _finite({
        "metadata": {
            "version": __version__,
            "config_hash": config_hash(cfg),
            "seed": cfg["seed"],
            "suite": cfg["suite"],
            "reindexing_note": REINDEXING_NOTE,
            "timestamp": {
                "started_utc": started.isoformat(timespec="seconds"),
                "runtimes_seconds": {k: round(v, 3) for k, v in sorted(runtimes.items())},
                "total_seconds": round(sum(runtimes.values()), 3),
            },
        },
        "config": core_cfg,
        "summary": {"claims": len(entries), **counts, "errors": errors,
                    "success": counts[FAIL] == 0 and not errors},
        "claims": entries,
    })


def strip_timestamp(report: dict) -> dict:
    out = json.loads(json.dumps(report))
    out.get("metadata", {}).pop("timestamp", None)
    return out


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]", "p", text)


def emit_report(report: dict, out_dir, json_name: str = "report.json", csv_tables: bool = True
                ) -> list[Path]:
    """Write the JSON report and one CSV per claim table; returns the written paths."""
    out = Path(out_dir)
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ReportError(f"cannot create report directory {out}: {exc}") from exc
    path = out / json_name
    try:
        path.write_text(dumps(report))
    except OSError as exc:
        raise ReportError(f"cannot write {path}: {exc}") from exc
    written.append(path)
    if not csv_tables:
        return written
    for entry in report.get("claims", []):
        for name, table in sorted(entry.get("tables", {}).items()):
            path = out / f"{_slug(entry['id'])}_{_slug(name)}.csv"
            try:
                with path.open("w", newline="") as fh:
                    w = csv.writer(fh, lineterminator="\n")
                    w.writerow(table["columns"])
                    w.writerows(table["rows"])
            except OSError as exc:
                raise ReportError(f"cannot write {path}: {exc}") from exc
            written.append(path)
    return written
