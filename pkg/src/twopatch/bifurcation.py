"""One- and two-parameter sweeps over the dispersal parameters."""
from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .equilibria import (EquilibriumRecord, interior_equilibria, mixed_boundary_equilibria,
                         MIXED_X1_ZERO, MIXED_X2_ZERO)
from .model import ModelParams
from .stability import StabilityLabel

SUBSYSTEM = "subsystem-interior"
MIXED = "mixed-boundary"
FULL = "full-interior"
FAMILIES = (SUBSYSTEM, MIXED, FULL)
SWEEP_AXES = ("s", "rho1", "rho2")

BRANCH_LINK_TOL = 0.05


@dataclass(frozen=True)
class Sweep1DResult:
    parameter: str
    family: str
    grid: tuple
    points: tuple      # per grid value: tuple of (EquilibriumRecord, StabilityLabel)
    branch_ids: tuple  # per grid value: branch id of each equilibrium
    failures: tuple    # per grid value: None or the error message

    def counts(self) -> list[int]:
        return [len(pt) for pt in self.points]

    def pattern(self, k: int) -> tuple:
        """``(count, sorted labels)`` at grid index ``k``."""
        labels = tuple(sorted(lab.label for _, lab in self.points[k]))
        return len(labels), labels


def check_axis_values(name: str, values) -> None:
    if name not in SWEEP_AXES:
        raise ValueError(f"sweep parameter must be one of {SWEEP_AXES}, got {name!r}")
    v = np.asarray(values, dtype=float)
    if name == "s" and (np.any(v < 0) or np.any(v >= 1)):
        raise ValueError("s values must lie in [0, 1)")
    if name != "s" and np.any(v < 0):
        raise ValueError(f"{name} values must be >= 0")


def _family_at(params: ModelParams, family: str, source_patch: Optional[int],
               grid_density: int, seeds) -> list[tuple[EquilibriumRecord, StabilityLabel]]:
    if family == FULL:
        return [(r, r.stability) for r in interior_equilibria(params, grid_density, seeds)]
    recs = mixed_boundary_equilibria(params)
    if family == MIXED:
        return [(r, r.stability) for r in recs]
    want = {1: MIXED_X2_ZERO, 2: MIXED_X1_ZERO}
    keep = want.values() if source_patch is None else (want[source_patch],)
    # labels inside the invariant face, i.e. of the reduced model
    return [(r, r.face_stability) for r in recs if r.cls in keep]


def _link(prev_states, prev_ids, states, next_id: int, tol: float):
    """Greedy nearest-neighbour branch continuation between adjacent grid points."""
    ids = [-1] * len(states)
    pairs = sorted((float(np.linalg.norm(np.subtract(a, b))), i, j)
                   for i, a in enumerate(states) for j, b in enumerate(prev_states))
    used_i, used_j = set(), set()
    for dist, i, j in pairs:
        if dist >= tol:
            break
        if i in used_i or j in used_j:
            continue
        ids[i] = prev_ids[j]
        used_i.add(i)
        used_j.add(j)
    for i in range(len(ids)):
        if ids[i] < 0:
            ids[i] = next_id
            next_id += 1
    return ids, next_id


def sweep1d(params_base: ModelParams, family: str, s_grid: Sequence[float],
            parameter: str = "s", source_patch: Optional[int] = None,
            grid_density: int = 30, branch_link_tol: float = BRANCH_LINK_TOL) -> Sweep1DResult:
    """Equilibria of one family along a grid of ``parameter`` (``s`` by default).

    ``source_patch`` selects one face for the subsystem family (both if None).
    For the full-interior family the prey levels found at the previous grid
    point are added to the multistart seeds.
    """
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")
    if source_patch not in (None, 1, 2):
        raise ValueError(f"source_patch must be 1, 2 or None, got {source_patch!r}")
    grid = tuple(float(v) for v in s_grid)
    check_axis_values(parameter, grid)
    points, branch_ids, failures = [], [], []
    prev_states, prev_ids, next_id = [], [], 0
    seeds = None
    for value in grid:
        params = params_base.with_(**{parameter: value})
        try:
            found = _family_at(params, family, source_patch, grid_density, seeds)
            failures.append(None)
        except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            found = []
            failures.append(f"{type(exc).__name__}: {exc}")
        states = [rec.state for rec, _ in found]
        ids, next_id = _link(prev_states, prev_ids, states, next_id, branch_link_tol)
        points.append(tuple(found))
        branch_ids.append(tuple(ids))
        prev_states, prev_ids = states, ids
        seeds = [(st[0], st[2]) for st in states] or None
    return Sweep1DResult(parameter, family, grid, tuple(points), tuple(branch_ids),
                         tuple(failures))


@dataclass(frozen=True)
class RegimeRow:
    lo: float
    hi: float
    count: int
    labels: tuple
    transitional: bool
    n_points: int


def regime_table(sweep: Sweep1DResult, s_breaks: Sequence[float]) -> list[RegimeRow]:
    """Modal ``(count, labels)`` pattern between consecutive breakpoints.

    Ranges are half-open ``[lo, hi)`` except the last, which is closed; a
    range with ``lo == hi`` picks out the grid points equal to ``lo``.  A
    single breakpoint is treated as such a degenerate range.  Rows whose
    grid points do not all share the modal pattern are flagged transitional.
    """
    br = [float(b) for b in s_breaks]
    if not br:
        raise ValueError("need at least one breakpoint")
    grid = np.asarray(sweep.grid)
    if br[0] < grid.min() - 1e-12 or br[-1] > grid.max() + 1e-12:
        raise ValueError("breakpoints must lie within the sweep grid")
    if len(br) == 1:
        br = [br[0], br[0]]
    rows = []
    for k in range(len(br) - 1):
        lo, hi = br[k], br[k + 1]
        if lo == hi:
            sel = np.flatnonzero(np.isclose(grid, lo, rtol=0, atol=1e-12))
        elif k == len(br) - 2:
            sel = np.flatnonzero((grid >= lo) & (grid <= hi))
        else:
            sel = np.flatnonzero((grid >= lo) & (grid < hi))
        pats = Counter(sweep.pattern(int(i)) for i in sel)
        if not pats:
            rows.append(RegimeRow(lo, hi, 0, (), False, 0))
            continue
        (count, labels), _ = pats.most_common(1)[0]
        rows.append(RegimeRow(lo, hi, count, labels, len(pats) > 1, int(sel.size)))
    return rows


@dataclass(frozen=True)
class SweepGrid:
    axis1: str
    values1: np.ndarray
    axis2: str
    values2: np.ndarray
    counts: np.ndarray  # int, -1 where the cell failed
    failed: np.ndarray  # bool

    def category(self, i: int, j: int) -> str:
        """Region colour of a cell: ``"0"``, ``"1"``, ``"2"``, ``"3+"`` or ``"failed"``."""
        if self.failed[i, j]:
            return "failed"
        c = int(self.counts[i, j])
        return "3+" if c >= 3 else str(c)


def _count_row(args):
    params_base, axis1, v1, axis2, values2, grid_density = args
    counts, failed = [], []
    for v2 in values2:
        try:
            p = params_base.with_(**{axis1: v1, axis2: v2})
            counts.append(len(interior_equilibria(p, grid_density)))
            failed.append(False)
        except (ArithmeticError, ValueError, np.linalg.LinAlgError):
            counts.append(-1)
            failed.append(True)
    return counts, failed


def axis_values(spec) -> tuple[str, np.ndarray]:
    name, (lo, hi), n = spec
    n = int(n)
    if n < 1:
        raise ValueError("axis resolution must be >= 1")
    vals = np.array([float(lo)]) if n == 1 else np.linspace(float(lo), float(hi), n)
    check_axis_values(name, vals)
    return name, vals


def sweep2d(params_base: ModelParams, axis1, axis2, grid_density: int = 30,
            jobs: int = 1) -> SweepGrid:
    """Interior-equilibrium counts over a grid of two dispersal parameters.

    Each axis is ``(name, (lo, hi), n)`` with ``name`` in ``{"s", "rho1",
    "rho2"}``; values are ``n`` evenly spaced points including both ends
    (just ``lo`` when ``n == 1``).  Cells are independent; ``jobs > 1``
    distributes rows over worker processes.
    """
    n1, v1 = axis_values(axis1)
    n2, v2 = axis_values(axis2)
    if n1 == n2:
        raise ValueError("the two sweep axes must differ")
    work = [(params_base, n1, float(a), n2, v2, grid_density) for a in v1]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_count_row, work))
    else:
        rows = [_count_row(w) for w in work]
    counts = np.array([r[0] for r in rows], dtype=int).reshape(len(v1), len(v2))
    failed = np.array([r[1] for r in rows], dtype=bool).reshape(len(v1), len(v2))
    return SweepGrid(n1, v1, n2, v2, counts, failed)
