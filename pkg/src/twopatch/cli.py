"""Command-line front end: ``twopatch {classify,equilibria,simulate,sweep1d,sweep2d}``.

Exit codes: 0 success, 1 computation failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import contextlib
import math
import sys
from pathlib import Path

import numpy as np

from . import bifurcation, equilibria, io
from .integrate import IntegrationError, TrajectorySummary, integrate
from .stability import ek1k2_closed_form, persistence_report, single_patch_regime

EXIT_OK, EXIT_COMPUTE, EXIT_CONFIG = 0, 1, 2
COMMANDS = ("classify", "equilibria", "simulate", "sweep1d", "sweep2d")


def _nan_pad(values, n):
    out = [float(v) for v in values][:n]
    return out + [math.nan] * (n - len(out))


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _classify(cfg, args):
    p = io.params_from_config(cfg)
    rows = []
    for i in (1, 2):
        r, K, a, d, _ = p.patch(i)
        rows.append((f"patch{i}.regime", single_patch_regime(r, K, a, d)))
    rep = persistence_report(p)
    for i in (1, 2):
        rows.append((f"patch{i}.predator_threshold", getattr(rep, f"predator_threshold{i}")))
        rows.append((f"patch{i}.predator_persistence", rep.guarantee(i)))
    rows += [("prey_only.global_stable", rep.global_ek_stable), ("bound.T", rep.bound_T),
             ("bound.d_min", rep.bound_dmin), ("bound.L_envelope", rep.L_envelope)]
    ek = ek1k2_closed_form(p)
    rows += [("prey_only.local_stable", ek["stable"]), ("prey_only.inequality1", ek["inequality1"]),
             ("prey_only.inequality2", ek["inequality2"])]
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:{width}s}  {io.format_value(v)}")
    if args.out is not None:
        with _output(args.out) as fh:
            io.write_table(fh, "classify", ({"item": k, "value": io.format_value(v)}
                                            for k, v in rows), args.format)
    return EXIT_OK


def equilibrium_rows(records):
    for rec in records:
        ev = rec.stability.eigenvalues
        row = {"class": rec.cls, "residual": rec.residual, "label": rec.label,
               "provenance": rec.provenance}
        row.update(zip(("x1", "y1", "x2", "y2"), rec.state))
        re = _nan_pad([z.real for z in ev], 4)
        im = _nan_pad([z.imag for z in ev], 4)
        for k in range(4):
            row[f"eig_re_{k + 1}"] = re[k]
            row[f"eig_im_{k + 1}"] = im[k]
        yield row


def _equilibria(cfg, args):
    p = io.params_from_config(cfg)
    recs = equilibria.all_equilibria(p, cfg["equilibria.grid_density"])
    with _output(args.out) as fh:
        io.write_table(fh, "equilibria", equilibrium_rows(recs), args.format)
    return EXIT_OK


def _summary_record(summ: TrajectorySummary) -> dict:
    a = summ.attractor
    return {"attractor": a.kind, "state": a.state, "minima": a.minima, "maxima": a.maxima,
            "period": a.period, "persistence": list(summ.persistence),
            "tail_min": list(summ.tail_min), "tail_max": list(summ.tail_max),
            "L_tail_max": summ.L_tail_max, "t_end": summ.t_end, "n_steps": summ.n_steps}


def _sample_rows(samples):
    for row in samples:
        yield dict(zip(io.COLUMNS["simulate"], (float(v) for v in row)))


def _simulate(cfg, args):
    p = io.params_from_config(cfg)
    icfg = io.integration_from_config(cfg)
    initial = cfg["simulate.initial"]
    if initial is None:
        raise io.ConfigError("missing required key 'simulate.initial' (initial)")
    if any(v < 0 for v in initial):
        raise io.ConfigError("simulate.initial: components must be >= 0")
    try:
        summ = integrate(p, initial, icfg)
    except IntegrationError as exc:
        S = np.column_stack([exc.times, exc.states]) if len(exc.times) else np.empty((0, 5))
        step = max(1, len(S) // max(1, icfg.n_samples or 1))
        with _output(args.out) as fh:
            io.write_table(fh, "simulate", _sample_rows(S[::step]), args.format,
                           footer=[("failure", {"t": exc.t, "message": str(exc)})])
        print(f"integration failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    samples = summ.samples if summ.samples is not None else np.empty((0, 5))
    with _output(args.out) as fh:
        io.write_table(fh, "simulate", _sample_rows(samples), args.format,
                       footer=[("summary", _summary_record(summ))])
    if args.out is not None:
        print(f"attractor: {summ.attractor.kind}")
    return EXIT_OK


def sweep1d_rows(res: bifurcation.Sweep1DResult):
    nan4 = dict(x1=math.nan, y1=math.nan, x2=math.nan, y2=math.nan)
    for value, pts, ids, fail in zip(res.grid, res.points, res.branch_ids, res.failures):
        if fail is not None:
            yield {"s": value, "branch_id": -1, **nan4, "label": "failed"}
            continue
        if not pts:
            yield {"s": value, "branch_id": -1, **nan4, "label": "none"}
            continue
        for (rec, lab), bid in zip(pts, ids):
            yield {"s": value, "branch_id": bid, **dict(zip(("x1", "y1", "x2", "y2"), rec.state)),
                   "label": lab.label}


def sweep1d_from_rows(rows, parameter: str = "s", family: str = "file"
                      ) -> bifurcation.Sweep1DResult:
    """Rebuild a sweep (states and labels only) from rows read back from a file."""
    from .stability import StabilityLabel

    grid, points, ids, fails = [], [], [], []
    for row in rows:
        if not grid or row["s"] != grid[-1]:
            grid.append(row["s"])
            points.append([])
            ids.append([])
            fails.append(None)
        if row["label"] == "failed":
            fails[-1] = "failed"
        elif row["label"] != "none":
            st = (row["x1"], row["y1"], row["x2"], row["y2"])
            rec = equilibria.EquilibriumRecord(st, family, math.nan, "file")
            points[-1].append((rec, StabilityLabel(row["label"], (), math.nan)))
            ids[-1].append(row["branch_id"])
    return bifurcation.Sweep1DResult(parameter, family, tuple(grid),
                                     tuple(tuple(p) for p in points),
                                     tuple(tuple(i) for i in ids), tuple(fails))


def _sweep1d(cfg, args):
    p = io.params_from_config(cfg)
    n = cfg["sweep1d.n"]
    if n < 1:
        raise io.ConfigError("sweep1d.n must be >= 1")
    grid = [cfg["sweep1d.start"]] if n == 1 else \
        np.linspace(cfg["sweep1d.start"], cfg["sweep1d.stop"], n).tolist()
    src = cfg["sweep1d.source_patch"]
    if src not in (0, 1, 2):
        raise io.ConfigError("sweep1d.source_patch must be 0, 1 or 2")
    family = cfg["sweep1d.family"]
    if family not in bifurcation.FAMILIES:
        raise io.ConfigError(f"sweep1d.family must be one of {bifurcation.FAMILIES}")
    try:
        bifurcation.check_axis_values(cfg["sweep1d.parameter"], grid)
    except ValueError as exc:
        raise io.ConfigError(f"sweep1d: {exc}") from None
    res = bifurcation.sweep1d(p, family, grid, parameter=cfg["sweep1d.parameter"],
                              source_patch=src or None,
                              grid_density=cfg["sweep1d.grid_density"])
    footer = [("sweep", {"parameter": res.parameter, "family": res.family})]
    with _output(args.out) as fh:
        io.write_table(fh, "sweep1d", sweep1d_rows(res), args.format, footer=footer)
    breaks = cfg["sweep1d.breaks"]
    if breaks:
        for row in bifurcation.regime_table(res, breaks):
            flag = "  (transitional)" if row.transitional else ""
            print(f"[{row.lo}, {row.hi}]: {row.count} {', '.join(row.labels) or '-'}{flag}",
                  file=sys.stderr if args.out is None else sys.stdout)
    return EXIT_COMPUTE if any(f is not None for f in res.failures) else EXIT_OK


def _sweep2d(cfg, args):
    p = io.params_from_config(cfg)
    axes = []
    for k in ("axis1", "axis2"):
        name, rng, n = cfg[f"sweep2d.{k}"], cfg[f"sweep2d.{k}_range"], cfg[f"sweep2d.{k}_n"]
        try:
            bifurcation.axis_values((name, rng, n))
        except ValueError as exc:
            raise io.ConfigError(f"sweep2d.{k}: {exc}") from None
        axes.append((name, rng, n))
    if axes[0][0] == axes[1][0]:
        raise io.ConfigError("sweep2d.axis1 and sweep2d.axis2 must differ")
    grid = bifurcation.sweep2d(p, axes[0], axes[1], cfg["sweep2d.grid_density"], jobs=args.jobs)

    def rows():
        for i, v1 in enumerate(grid.values1):
            for j, v2 in enumerate(grid.values2):
                yield {"p1": float(v1), "p2": float(v2), "interior_count": int(grid.counts[i, j]),
                       "failed_flag": int(grid.failed[i, j])}

    footer = [("axes", {"p1": grid.axis1, "p2": grid.axis2})]
    with _output(args.out) as fh:
        io.write_table(fh, "sweep2d", rows(), args.format, footer=footer)
    return EXIT_COMPUTE if grid.failed.any() else EXIT_OK


_HANDLERS = {"classify": _classify, "equilibria": _equilibria, "simulate": _simulate,
             "sweep1d": _sweep1d, "sweep2d": _sweep2d}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twopatch", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", type=Path, help="flat 'section.key = value' file")
        sp.add_argument("--out", type=Path, help="output file (stdout if omitted)")
        sp.add_argument("--format", choices=io.FORMATS, default=None)
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
        sp.add_argument("--schema", action="store_true",
                        help="print the config keys and output columns, then exit")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.schema:
        print(f"output columns ({args.command}): {', '.join(io.COLUMNS[args.command])}\n")
        print(io.schema_text())
        return EXIT_OK
    try:
        if args.config is None:
            raise io.ConfigError("--config is required")
        if args.jobs < 1:
            raise io.ConfigError("--jobs must be >= 1")
        cfg = io.load_config(args.config)
        if args.format is None:
            args.format = cfg["output.format"]
        if args.out is None and cfg["output.path"] is not None:
            args.out = Path(cfg["output.path"])
        return _HANDLERS[args.command](cfg, args)
    except io.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
