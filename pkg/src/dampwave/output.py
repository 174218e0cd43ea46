"""Deterministic persistence of reports: CSV series plus a JSON manifest."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
from pathlib import Path

from .norms import snapshots_to_csv


def content_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, str):
        return v
    if v is None:
        return ""
    return repr(float(v))


def report_tables(report) -> dict:
    """Named CSV texts for a report (decay, profile, lifespan or simulation)."""
    kind = report.kind
    if kind in ("decay", "simulate"):
        return {"norms": snapshots_to_csv(report.snapshots, report.m_list)}
    if kind == "profile":
        ms = list(report.difference)
        header = ["t", *[f"diff_lm_{m:g}" for m in ms], "ratio_l2", "solution_l2"]
        rows = zip(report.times, *[report.difference[m] for m in ms], report.ratio,
                   report.solution_l2)
        return {"profile": _rows_to_csv(header, rows)}
    if kind == "lifespan":
        header = ["eps", "status", "T_num", "half_width", "t_reached"]
        rows = [(e.eps, e.status, e.T_num, e.half_width, e.t_reached) for e in report.estimates]
        return {"lifespan": _rows_to_csv(header, rows)}
    raise ValueError(f"no table layout for report kind {kind!r}")


def write_outputs(report, directory, seed: int | None = None) -> Path:
    """Write the report's CSV files and manifest into ``directory``; returns the manifest path.

    File names are ``<kind>-<table>-<hash>.csv`` and ``<kind>-<hash>.json``
    where ``hash`` is a prefix of the SHA-256 of the file content.
    """
    from . import __version__

    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {directory}: {exc}") from exc
    files = {}
    for name, text in report_tables(report).items():
        digest = content_hash(text)
        fname = f"{report.kind}-{name}-{digest[:16]}.csv"
        _write(directory / fname, text)
        files[name] = {"file": fname, "sha256": digest}
    manifest = {
        "kind": report.kind,
        "tool": "dampwave",
        "version": __version__,
        "seed": seed,
        "config": report.config.to_dict(),
        "grid": {"n": report.config.problem.n, "N": report.config.grid.N,
                 "L": report.config.grid.L},
        "passed": bool(report.passed),
        "summary": report.summary(),
        "files": files,
    }
    text = json.dumps(manifest, sort_keys=True, indent=2, default=_json_default) + "\n"
    path = directory / f"{report.kind}-{content_hash(text)[:16]}.json"
    _write(path, text)
    return path


def _json_default(obj):
    try:
        import numpy as np

        if isinstance(obj, np.generic):
            return obj.item()
        if isinstance(obj, np.ndarray):
            return obj.tolist()
    except ImportError:  # pragma: no cover
        pass
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise OSError(f"failed to write {path}: {exc}") from exc
