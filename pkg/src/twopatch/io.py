"""Run configuration parsing and result serialisation (CSV / NDJSON).

Config files are flat ``section.key = value`` lines; ``#`` starts a comment.
List values are comma separated.  Every key must appear in :data:`SCHEMA`.

Floats are written with ``repr``, the shortest decimal that round-trips, so
reading a file back reproduces every value exactly.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Iterable, Optional

from .integrate import IntegrationConfig
from .model import ModelParams

FORMATS = ("csv", "ndjson")


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending key."""


@dataclass(frozen=True)
class Key:
    kind: str  # float, int, str, floats
    default: Any = None
    required: bool = False
    length: Optional[int] = None
    doc: str = ""


_REQ = dict(required=True)
_INT_DEFAULTS = IntegrationConfig()

SCHEMA: dict[str, Key] = {
    **{f"params.{n}": Key("float", doc="model parameter", **_REQ)
       for n in ("K1", "K2", "a1", "a2", "d1", "d2", "rho1", "rho2", "s")},
    "params.r1": Key("float", 1.0, doc="prey growth rate, patch 1"),
    "params.r2": Key("float", 1.0, doc="prey growth rate, patch 2"),
    "equilibria.grid_density": Key("int", 30, doc="multistart grid points per axis"),
    "simulate.initial": Key("floats", None, length=4, doc="x1, y1, x2, y2 (required by simulate)"),
    **{f"integrate.{f.name}": Key("int" if f.name == "n_samples" else "float",
                                  getattr(_INT_DEFAULTS, f.name), doc="integrator setting")
       for f in fields(IntegrationConfig)},
    "sweep1d.family": Key("str", "full-interior",
                          doc="subsystem-interior | mixed-boundary | full-interior"),
    "sweep1d.parameter": Key("str", "s", doc="s | rho1 | rho2"),
    "sweep1d.start": Key("float", 0.0),
    "sweep1d.stop": Key("float", 0.99),
    "sweep1d.n": Key("int", 200),
    "sweep1d.source_patch": Key("int", 0, doc="1 or 2 selects one face; 0 keeps both"),
    "sweep1d.grid_density": Key("int", 30),
    "sweep1d.breaks": Key("floats", None, doc="optional breakpoints for a regime table"),
    "sweep2d.axis1": Key("str", "s"),
    "sweep2d.axis1_range": Key("floats", (0.0, 0.99), length=2),
    "sweep2d.axis1_n": Key("int", 150),
    "sweep2d.axis2": Key("str", "rho1"),
    "sweep2d.axis2_range": Key("floats", (0.0, 15.0), length=2),
    "sweep2d.axis2_n": Key("int", 150),
    "sweep2d.grid_density": Key("int", 30),
    "output.path": Key("str", None, doc="overridden by --out"),
    "output.format": Key("str", "csv", doc="csv | ndjson; overridden by --format"),
}


def _convert(key: str, spec: Key, raw: str):
    try:
        if spec.kind == "float":
            v = float(raw)
            if not math.isfinite(v):
                raise ValueError("not finite")
            return v
        if spec.kind == "int":
            return int(raw)
        if spec.kind == "str":
            return raw
        vals = tuple(float(x) for x in raw.split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {spec.kind} ({exc})") from None
    if spec.length is not None and len(vals) != spec.length:
        raise ConfigError(f"{key}: expected {spec.length} values, got {len(vals)}")
    return vals


def parse_config(text: str) -> dict:
    """Parse config text into a dict with every schema key (defaults filled)."""
    seen: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'section.key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in SCHEMA:
            raise ConfigError(f"unknown key {key!r} (line {lineno})")
        if key in seen:
            raise ConfigError(f"duplicate key {key!r} (line {lineno})")
        seen[key] = _convert(key, SCHEMA[key], raw)
    out = {}
    for key, spec in SCHEMA.items():
        if key in seen:
            out[key] = seen[key]
        elif spec.required:
            name = key.split(".", 1)[1]
            raise ConfigError(f"missing required key {key!r} ({name})")
        else:
            out[key] = spec.default
    if out["output.format"] not in FORMATS:
        raise ConfigError(f"output.format must be one of {FORMATS}")
    return out


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def params_from_config(cfg: dict) -> ModelParams:
    kw = {k.split(".", 1)[1]: v for k, v in cfg.items() if k.startswith("params.")}
    try:
        return ModelParams(**kw)
    except ValueError as exc:
        raise ConfigError(f"params: {exc}") from None


def integration_from_config(cfg: dict) -> IntegrationConfig:
    kw = {k.split(".", 1)[1]: v for k, v in cfg.items() if k.startswith("integrate.")}
    try:
        return IntegrationConfig(**kw)
    except ValueError as exc:
        raise ConfigError(f"integrate: {exc}") from None


def schema_text() -> str:
    lines = []
    for key, spec in SCHEMA.items():
        req = "required" if spec.required else f"default {spec.default!r}"
        doc = f"  {spec.doc}" if spec.doc else ""
        lines.append(f"{key:28s} {spec.kind:7s} {req}{doc}")
    return "\n".join(lines)


# -- tables --------------------------------------------------------------------------

COLUMNS = {
    "classify": ("item", "value"),
    "equilibria": ("class", "x1", "y1", "x2", "y2", "residual", "label",
                   *(f"eig_re_{k}" for k in range(1, 5)), *(f"eig_im_{k}" for k in range(1, 5)),
                   "provenance"),
    "simulate": ("t", "x1", "y1", "x2", "y2"),
    "sweep1d": ("s", "branch_id", "x1", "y1", "x2", "y2", "label"),
    "sweep2d": ("p1", "p2", "interior_count", "failed_flag"),
}

_TEXT_COLUMNS = {"item", "value", "class", "label", "provenance"}
_INT_COLUMNS = {"branch_id", "interior_count", "failed_flag"}


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)  # JSON has no NaN; kept as text and parsed back by read_table
    return v


def write_table(stream, command: str, rows: Iterable[dict], fmt: str,
                footer: Iterable[tuple[str, dict]] = ()) -> None:
    """Write rows (dicts keyed by the command's columns) plus tagged footer records.

    CSV footers are ``# tag: {json}`` lines; NDJSON footers are objects with a
    ``"record"`` field holding the tag.
    """
    cols = COLUMNS[command]
    if fmt == "csv":
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(cols)
        for row in rows:
            w.writerow([format_value(row[c]) for c in cols])
        for tag, rec in footer:
            stream.write(f"# {tag}: {json.dumps(rec)}\n")
    elif fmt == "ndjson":
        for row in rows:
            stream.write(json.dumps({c: _json_value(row[c]) for c in cols}) + "\n")
        for tag, rec in footer:
            stream.write(json.dumps({"record": tag, **rec}) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def _parse_cell(col: str, v):
    if col in _TEXT_COLUMNS:
        return v
    if col in _INT_COLUMNS:
        return int(v)
    return float(v)


def read_table(source, fmt: Optional[str] = None) -> tuple[list[dict], list[tuple[str, dict]]]:
    """Read a file written by :func:`write_table`; returns ``(rows, footers)``.

    ``source`` is a path or the file's text.  The format is inferred from
    the path suffix (``.ndjson``) when not given.
    """
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source
                                    and Path(source).exists()):
        path = Path(source)
        text = path.read_text()
        if fmt is None:
            fmt = "ndjson" if path.suffix in (".ndjson", ".jsonl") else "csv"
    else:
        text = source
        fmt = fmt or "csv"
    rows, footers = [], []
    if fmt == "csv":
        body = [ln for ln in text.splitlines() if not ln.startswith("#")]
        for ln in text.splitlines():
            if ln.startswith("# "):
                tag, _, payload = ln[2:].partition(": ")
                footers.append((tag, json.loads(payload)))
        for rec in csv.DictReader(io.StringIO("\n".join(body) + "\n")):
            rows.append({k: _parse_cell(k, v) for k, v in rec.items()})
    else:
        for ln in text.splitlines():
            if not ln.strip():
                continue
            rec = json.loads(ln)
            if "record" in rec:
                footers.append((rec.pop("record"), rec))
            else:
                rows.append({k: _parse_cell(k, v) for k, v in rec.items()})
    return rows, footers
