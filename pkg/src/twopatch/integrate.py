"""Positivity-preserving adaptive integration and attractor summaries."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.signal import find_peaks

from .model import ModelParams, embed_sub3, rhs_full, rhs_sub3
from .stability import lyapunov_sum

EQUILIBRIUM = "equilibrium"
LIMIT_CYCLE = "limit-cycle"
UNDETERMINED = "undetermined"


class IntegrationError(RuntimeError):
    """Step-size underflow or a non-finite state; keeps the partial trajectory."""

    def __init__(self, message: str, t: float, times=None, states=None):
        super().__init__(f"{message} at t = {t!r}")
        self.t = t
        self.times = np.asarray(times if times is not None else [])
        self.states = np.asarray(states if states is not None else [])


@dataclass(frozen=True)
class IntegrationConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    t_end: float = 5000.0
    max_step: float = 1.0
    tail_fraction: float = 0.2
    extinction_eps: float = 1e-6
    cycle_amplitude_eps: float = 1e-4
    n_samples: int = 2000  # decimated points kept in the summary; 0 keeps none

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "t_end", "max_step", "extinction_eps",
                     "cycle_amplitude_eps"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")
        if not (0.0 < self.tail_fraction < 1.0):
            raise ValueError(f"tail_fraction must lie in (0, 1), got {self.tail_fraction!r}")
        if self.n_samples < 0:
            raise ValueError("n_samples must be >= 0")


@dataclass(frozen=True)
class Attractor:
    kind: str
    state: Optional[tuple] = None
    minima: Optional[tuple] = None
    maxima: Optional[tuple] = None
    period: Optional[float] = None


@dataclass(frozen=True)
class TrajectorySummary:
    attractor: Attractor
    persistence: tuple
    tail_min: tuple
    tail_max: tuple
    L_tail_max: float
    t_end: float
    n_steps: int
    samples: Optional[np.ndarray] = field(default=None, repr=False)  # columns t, state...

    @property
    def kind(self) -> str:
        return self.attractor.kind


# Dormand-Prince 5(4) tableau; the field is autonomous, so the nodes are not needed
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


def dopri(f: Callable[[list], list], y0: Sequence[float], t_end: float, rel_tol: float,
          abs_tol: float, max_step: float, t0: float = 0.0):
    """Adaptive Dormand-Prince integration that rejects steps leaving the orthant.

    ``f`` maps a list of floats to a list of floats.  Returns the accepted
    times and states as lists.  A step whose result has a negative
    component is retried at half the step size.
    """
    n = len(y0)
    y = [float(v) for v in y0]
    t = float(t0)
    times, states = [t], [tuple(y)]
    k1 = f(y)
    h = min(max_step, 1e-2, t_end - t) if t_end > t else 0.0
    while t < t_end:
        last = h >= (t_end - t) * (1.0 - 1e-9)
        if last:
            h = t_end - t
        elif h <= 1e-14 * max(1.0, abs(t)):
            raise IntegrationError("step-size underflow", t, times, states)
        ks = [k1]
        for stage in range(1, 7):
            a = _A[stage]
            yi = [y[m] + h * sum(a[q] * ks[q][m] for q in range(stage)) for m in range(n)]
            ks.append(f(yi))
        y_new = yi  # last stage is evaluated at the 5th-order solution (FSAL)
        if any(v < 0.0 for v in y_new):
            h *= 0.5
            continue
        err = 0.0
        for m in range(n):
            e = h * sum(_E[q] * ks[q][m] for q in range(7))
            sc = abs_tol + rel_tol * max(abs(y[m]), abs(y_new[m]))
            err += (e / sc) ** 2
        err = math.sqrt(err / n)
        if not math.isfinite(err):
            if not all(math.isfinite(v) for v in y_new):
                h *= 0.5
                if h <= 1e-14 * max(1.0, abs(t)):
                    raise IntegrationError("non-finite state", t, times, states)
                continue
        if err <= 1.0:
            t = t_end if last else t + h
            y = y_new
            k1 = ks[6]
            times.append(t)
            states.append(tuple(y))
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        else:
            fac = max(0.2, 0.9 * err ** -0.25)
        h = min(max_step, h * fac)
    return times, states


def _full_field(p: ModelParams) -> Callable[[list], list]:
    r1, r2, K1, K2, a1, a2 = p.r1, p.r2, p.K1, p.K2, p.a1, p.a2
    d1, d2, rho1, rho2, s = p.d1, p.d2, p.rho1, p.rho2, p.s
    w = 1.0 - s

    def f(z):
        x1, y1, x2, y2 = z
        p1 = a1 * x1 / (1.0 + x1)
        p2 = a2 * x2 / (1.0 + x2)
        move = w * y1 * y2 * (p1 - p2) + s * (y2 - y1)
        return [r1 * x1 * (1.0 - x1 / K1) - p1 * y1, p1 * y1 - d1 * y1 + rho1 * move,
                r2 * x2 * (1.0 - x2 / K2) - p2 * y2, p2 * y2 - d2 * y2 - rho2 * move]
    return f


def _sub3_field(p: ModelParams, i: int) -> Callable[[list], list]:
    r, K, a, d_i, rho_i = p.patch(i)
    _, _, _, d_j, rho_j = p.patch(3 - i)
    s, w = p.s, 1.0 - p.s

    def f(z):
        x, yi, yj = z
        pi = a * x / (1.0 + x)
        move = w * pi * yi * yj + s * (yj - yi)
        return [r * x * (1.0 - x / K) - pi * yi, pi * yi - d_i * yi + rho_i * move,
                -d_j * yj - rho_j * move]
    return f


def _classify_tail(times: np.ndarray, states: np.ndarray, cfg: IntegrationConfig,
                   rate: Callable[[np.ndarray], np.ndarray]) -> Attractor:
    var = states.var(axis=0)
    last = states[-1]
    if np.all(var < (cfg.abs_tol * 100.0) ** 2) and \
            float(np.max(np.abs(rate(last)))) <= 1e-6:
        return Attractor(EQUILIBRIUM, state=tuple(float(v) for v in last))
    ptp = np.ptp(states, axis=0)
    k = int(np.argmax(ptp))
    if ptp[k] > cfg.cycle_amplitude_eps:
        peaks, _ = find_peaks(states[:, k], prominence=0.25 * ptp[k])
        if peaks.size >= 3:
            period = float(np.mean(np.diff(times[peaks])))
            return Attractor(LIMIT_CYCLE, minima=tuple(float(v) for v in states.min(axis=0)),
                             maxima=tuple(float(v) for v in states.max(axis=0)), period=period)
    return Attractor(UNDETERMINED)


def _run(field_fn, rate, L_of, initial, cfg: IntegrationConfig) -> TrajectorySummary:
    y0 = np.asarray(initial, dtype=float)
    if np.any(y0 < 0) or not np.all(np.isfinite(y0)):
        raise ValueError(f"initial state must be finite and >= 0, got {y0.tolist()}")
    t_end = cfg.t_end
    times, states = dopri(field_fn, y0, t_end, cfg.rel_tol, cfg.abs_tol, cfg.max_step)
    for attempt in range(2):
        T = np.asarray(times)
        S = np.asarray(states)
        tail = T >= (1.0 - cfg.tail_fraction) * t_end
        attractor = _classify_tail(T[tail], S[tail], cfg, rate)
        if attractor.kind != UNDETERMINED or attempt == 1:
            break
        # give it one more span of the same length before giving up
        more_t, more_s = dopri(field_fn, S[-1], 2.0 * t_end, cfg.rel_tol, cfg.abs_tol,
                               cfg.max_step, t0=t_end)
        times = times + more_t[1:]
        states = states + more_s[1:]
        t_end *= 2.0
    tail_states = S[tail]
    tmin = tail_states.min(axis=0)
    tmax = tail_states.max(axis=0)
    samples = None
    if cfg.n_samples:
        idx = np.unique(np.linspace(0, len(T) - 1, min(cfg.n_samples, len(T))).astype(int))
        samples = np.column_stack([T[idx], S[idx]])
    return TrajectorySummary(
        attractor=attractor,
        persistence=tuple(bool(v > cfg.extinction_eps) for v in tmin),
        tail_min=tuple(float(v) for v in tmin),
        tail_max=tuple(float(v) for v in tmax),
        L_tail_max=float(np.max(L_of(tail_states))),
        t_end=t_end,
        n_steps=len(T) - 1,
        samples=samples,
    )


def integrate(params: ModelParams, initial, config: Optional[IntegrationConfig] = None
              ) -> TrajectorySummary:
    """Integrate the full model from ``initial`` and summarise the tail.

    Raises IntegrationError (with the partial trajectory) on step-size
    underflow or a non-finite state.
    """
    cfg = config or IntegrationConfig()
    return _run(_full_field(params), lambda z: rhs_full(params, z),
                lambda S: lyapunov_sum(params, S), initial, cfg)


def integrate_sub3(params: ModelParams, source_patch: int, initial,
                   config: Optional[IntegrationConfig] = None) -> TrajectorySummary:
    """As :func:`integrate` for the reduced model with source patch ``source_patch``."""
    if source_patch not in (1, 2):
        raise ValueError(f"source_patch must be 1 or 2, got {source_patch!r}")
    cfg = config or IntegrationConfig()

    def L_of(S):
        full = np.array([embed_sub3(source_patch, z) for z in S])
        return lyapunov_sum(params, full)

    return _run(_sub3_field(params, source_patch), lambda z: rhs_sub3(params, source_patch, z),
                L_of, initial, cfg)


@dataclass(frozen=True)
class BasinReport:
    initials: tuple
    results: tuple  # TrajectorySummary or the exception raised for that initial
    cluster: tuple  # attractor index per initial, -1 for failures
    n_attractors: int

    def __iter__(self):
        return iter(zip(self.initials, self.results))


def _attractor_key(a: Attractor) -> Optional[np.ndarray]:
    if a.kind == EQUILIBRIUM:
        return np.array(a.state)
    if a.kind == LIMIT_CYCLE:
        return np.concatenate([a.minima, a.maxima])
    return None


def _probe_one(args):
    params, initial, cfg = args
    try:
        return integrate(params, initial, cfg)
    except (IntegrationError, ValueError) as exc:
        return exc


def basin_probe(params: ModelParams, initials, config: Optional[IntegrationConfig] = None,
                jobs: int = 1, dist_tol: float = 1e-2) -> BasinReport:
    """Integrate from each initial state and count the distinct attractors reached.

    Equilibria are merged when their states are within ``dist_tol``; limit
    cycles when their tail envelopes (per-component min and max) are.
    Undetermined outcomes each count as their own attractor.  Output order
    follows the input order regardless of ``jobs``.
    """
    cfg = config or IntegrationConfig()
    inits = tuple(tuple(float(v) for v in z) for z in initials)
    work = [(params, z, cfg) for z in inits]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_probe_one, work))
    else:
        results = [_probe_one(w) for w in work]
    reps: list[tuple[str, Optional[np.ndarray]]] = []
    cluster = []
    for res in results:
        if isinstance(res, Exception):
            cluster.append(-1)
            continue
        kind, key = res.attractor.kind, _attractor_key(res.attractor)
        hit = -1
        if key is not None:
            for c, (k2, key2) in enumerate(reps):
                if k2 == kind and key2 is not None and np.linalg.norm(key - key2) < dist_tol:
                    hit = c
                    break
        if hit < 0:
            reps.append((kind, key))
            hit = len(reps) - 1
        cluster.append(hit)
    return BasinReport(inits, tuple(results), tuple(cluster), len(reps))
