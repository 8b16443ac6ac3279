"""The thirteen acceptance criteria, each at its stated tolerance.

Every test records one ``criterion N: PASS/FAIL`` line (printed, and repeated
in the terminal summary).  Failing criteria are left failing on purpose; the
reasons are analysed in the README.
"""
import functools
import time

import numpy as np
import pytest
from scipy.optimize import bisect

from conftest import fd_jacobian, random_params
from oracles import bisect_roots
from twopatch import bifurcation as bf
from twopatch.equilibria import StructuralNoInterior, interior_equilibria, subsystem_cubic
from twopatch.integrate import EQUILIBRIUM, IntegrationConfig, basin_probe, integrate
from twopatch.model import (jacobian_full, jacobian_sub3, reference_params, rhs_full, rhs_sub3,
                            symmetric_params)
from twopatch.stability import (INTERIOR_GAS, LIMIT_CYCLE, PREDATOR_EXTINCT, SINK, classify,
                                ek1k2_closed_form, persistence_report, single_patch_regime,
                                single_patch_trace)

pytestmark = pytest.mark.acceptance

FACE_RUN_INITIAL = (0.05, 1, 3.55, 2.7)
EQUILIBRIUM_VS_CYCLE_INITIALS = [(0.25, 1.05, 4.18, 2.68), (0.58, 1.4, 2.5, 3.1)]
CYCLE_SIDE_EQUILIBRIUM = (0.09, 1.08, 4.27, 2.64)
COEXIST_PARAMS = dict(s=0.55, rho1=13.0)
COEXIST_INITIAL = (1, 0.25, 0.3, 0.7)


def _rng(n):
    return np.random.default_rng(20261014 + n)


# shared by criteria 6-9 so each trajectory is integrated once
@functools.lru_cache(maxsize=None)
def face_run():
    return integrate(reference_params(s=0.8), FACE_RUN_INITIAL)


@functools.lru_cache(maxsize=None)
def bistable_probe():
    return basin_probe(reference_params(s=0.8392), EQUILIBRIUM_VS_CYCLE_INITIALS)


@functools.lru_cache(maxsize=None)
def coexistence():
    return integrate(reference_params(**COEXIST_PARAMS), COEXIST_INITIAL)


def test_criterion_01_single_patch_regimes(gate):
    t0 = time.perf_counter()
    cases = [((1.8, 7, 1.4, 0.35), LIMIT_CYCLE), ((1, 10, 1, 0.85), INTERIOR_GAS),
             ((1, 10, 2.1, 2), PREDATOR_EXTINCT)]
    got = [single_patch_regime(*args) for args, _ in cases]
    ok = got == [want for _, want in cases] and time.perf_counter() - t0 < 1.0
    gate(1, ok, f"regimes {got}", t0)


def test_criterion_02_hopf_location(gate):
    t0 = time.perf_counter()
    rng = _rng(2)
    worst = 0.0
    for _ in range(10):
        r, K, a = rng.uniform(0.2, 3.0), rng.uniform(2.0, 20.0), rng.uniform(0.2, 5.0)
        hopf = (K - 1) / 2
        lo, hi = (a * m / (1 + m) for m in (0.5 * hopf, 0.5 * (hopf + K)))
        d = bisect(lambda dd: single_patch_trace(r, K, a, dd), lo, hi, xtol=1e-15, rtol=1e-15)
        worst = max(worst, abs(d / (a - d) - hopf))
    ok = worst < 1e-6 and time.perf_counter() - t0 < 5.0
    gate(2, ok, f"max |delta mu| = {worst:.2e}", t0)


def _rel_err(J, F):
    return float(np.max(np.abs(J - F)) / max(1.0, np.max(np.abs(J))))


def test_criterion_03_jacobian_oracle(gate):
    t0 = time.perf_counter()
    rng = _rng(3)
    worst = 0.0
    for _ in range(1000):
        p = random_params(rng, s=rng.uniform(0, 1))
        z = rng.uniform(0, 1, 4) * np.array([2 * p.K1, 5, 2 * p.K2, 5])
        worst = max(worst, _rel_err(jacobian_full(p, z), fd_jacobian(lambda v: rhs_full(p, v), z)))
        for i in (1, 2):
            J3 = jacobian_sub3(p, i, z[:3])
            worst = max(worst, _rel_err(J3, fd_jacobian(lambda v: rhs_sub3(p, i, v), z[:3])))
    ok = worst < 1e-6 and time.perf_counter() - t0 < 10.0
    gate(3, ok, f"max relative deviation {worst:.2e} over 1000 draws", t0)


# midpoints of the five s-ranges; expected face labels per (a1, d1, source patch)
FACE_RANGE_MIDPOINTS = (0.05, 0.3, 0.585, 0.75, 0.91)
FACE_PATTERNS = {
    (1.0, 0.85, 1): [("sink",), ("saddle", "sink"), (), (), ()],
    (1.0, 0.85, 2): [("saddle",), ("saddle",), ("saddle",), ("saddle", "sink"), ()],
    (2.1, 2.0, 1): [(), (), (), (), ()],
    (2.1, 2.0, 2): [("saddle",), ("saddle",), ("saddle", "sink"), (), ()],
}


def test_criterion_04_face_regimes(gate):
    t0 = time.perf_counter()
    misses = []
    for (a1, d1, patch), want in FACE_PATTERNS.items():
        res = bf.sweep1d(reference_params(a1=a1, d1=d1), bf.SUBSYSTEM, FACE_RANGE_MIDPOINTS,
                         source_patch=patch)
        for k, s in enumerate(FACE_RANGE_MIDPOINTS):
            got = res.pattern(k)[1]
            if got != want[k]:
                misses.append(f"a1={a1} patch {patch} s={s}: got {got or 'none'}, "
                              f"expected {want[k]}")
    ok = not misses and time.perf_counter() - t0 < 120
    gate(4, ok, "; ".join(misses) or "all 20 samples match", t0)


INTERIOR_SAMPLES = (0.05, 0.12, 0.3, 0.6, 0.8, 0.835, 0.9)
INTERIOR_PATTERNS = {
    (1.0, 0.85): [("source",), ("source",), ("saddle",), ("sink",), ("saddle", "saddle"),
                  ("saddle", "saddle", "sink"), ("saddle", "saddle", "saddle")],
    (2.1, 2.0): [("saddle", "sink", "source"), ("saddle", "saddle", "sink"),
                 ("saddle", "saddle", "sink"), ("sink",), ("saddle",), ("saddle",), ("saddle",)],
}


def test_criterion_05_interior_regimes(gate):
    t0 = time.perf_counter()
    misses = []
    for (a1, d1), want in INTERIOR_PATTERNS.items():
        res = bf.sweep1d(reference_params(a1=a1, d1=d1), bf.FULL, INTERIOR_SAMPLES)
        for k, s in enumerate(INTERIOR_SAMPLES):
            got = res.pattern(k)[1]
            if got != want[k]:
                misses.append(f"a1={a1} s={s}: got {got or 'none'}, expected {want[k]}")
    ok = not misses and time.perf_counter() - t0 < 300
    gate(5, ok, "; ".join(misses) or "all 14 samples match", t0)


def test_criterion_06_boundary_convergence(gate):
    t0 = time.perf_counter()
    summ = face_run()
    dev = float(np.max(np.abs(np.subtract(summ.attractor.state, (0, 1, 3.6, 2.9)))))
    ok = summ.attractor.kind == EQUILIBRIUM and dev <= 0.05 and time.perf_counter() - t0 < 30
    gate(6, ok, f"{summ.attractor.kind} at {np.round(summ.attractor.state, 4).tolist()}, "
                f"max deviation {dev:.3f}", t0)


def test_criterion_07_bistability(gate):
    t0 = time.perf_counter()
    rep = bistable_probe()
    near = [float(np.max(np.abs(np.subtract(r.attractor.state, CYCLE_SIDE_EQUILIBRIUM))))
            for r in rep.results if r.attractor.kind == EQUILIBRIUM]
    ok = rep.n_attractors == 2 and any(d <= 0.05 for d in near) and time.perf_counter() - t0 < 60
    kinds = [r.attractor.kind for r in rep.results]
    gate(7, ok, f"{rep.n_attractors} attractors {kinds}, "
                f"closest equilibrium {min(near, default=np.inf):.3f} from the target", t0)


def test_criterion_08_coexistence_without_interior(gate):
    t0 = time.perf_counter()
    n_interior = len(interior_equilibria(reference_params(**COEXIST_PARAMS)))
    summ = coexistence()
    inf = np.asarray(summ.tail_min)
    ok = n_interior == 0 and bool(np.all(inf > 1e-3)) and time.perf_counter() - t0 < 60
    gate(8, ok, f"{n_interior} interior equilibria; {summ.attractor.kind}, tail infima "
                f"{np.array2string(inf, precision=2)}", t0)


def test_criterion_09_dissipative_envelope(gate):
    t0 = time.perf_counter()
    runs = [(reference_params(s=0.8), face_run())]
    runs += [(reference_params(s=0.8392), r) for r in bistable_probe().results]
    runs += [(reference_params(**COEXIST_PARAMS), coexistence())]
    ratios = [summ.L_tail_max / persistence_report(p).L_envelope for p, summ in runs]
    ok = max(ratios) <= 1.01
    gate(9, ok, f"max L_tail / envelope = {max(ratios):.3f} over {len(runs)} trajectories", t0)


def test_criterion_10_prey_only_global_stability(gate):
    t0 = time.perf_counter()
    p = reference_params(a1=2.1, d1=2.0, a2=2.1, d2=2.0, K2=10.0)
    rng = _rng(10)
    cfg = IntegrationConfig(t_end=2000.0)
    worst = 0.0
    for _ in range(50):
        summ = integrate(p, rng.uniform(0.01, 10.0, 4), cfg)
        worst = max(worst, float(np.max(np.abs(np.subtract(summ.attractor.state, (10, 0, 10, 0))))))
    ok = worst < 1e-3 and time.perf_counter() - t0 < 120
    gate(10, ok, f"max deviation from (K1, 0, K2, 0) = {worst:.2e} over 50 initials", t0)


def test_criterion_11_closed_form_prey_only_stability(gate):
    t0 = time.perf_counter()
    rng = _rng(11)
    violations = used = stable = 0
    for _ in range(10_000):
        p = random_params(rng, s=rng.uniform(0, 1))
        p = p.with_(d1=rng.uniform(0.02, 1.2) * p.a1, d2=rng.uniform(0.02, 1.2) * p.a2)
        lab = classify(jacobian_full(p, (p.K1, 0, p.K2, 0)))
        if lab.margin < 1e-7:
            continue
        used += 1
        if ek1k2_closed_form(p)["stable"]:
            stable += 1
            violations += lab.label != SINK
    ok = violations == 0
    gate(11, ok, f"{violations} violations; {stable} closed-form stable of {used} kept draws", t0)


def test_criterion_12_cubic_root_oracle(gate):
    t0 = time.perf_counter()
    rng = _rng(12)
    miscount = checked = 0
    worst = 0.0
    for _ in range(1000):
        p = random_params(rng)
        for i in (1, 2):
            try:
                rep = subsystem_cubic(p, i)
            except StructuralNoInterior:
                continue
            ref = bisect_roots(rep.f, 0.0, 2 * rep.K)
            got = [x for x in rep.real_roots if 0 < x < 2 * rep.K]
            checked += 1
            if len(got) != len(ref):
                miscount += 1
                continue
            if got:
                worst = max(worst, float(np.max(np.abs(np.subtract(got, ref)))))
    ok = miscount == 0 and worst <= 1e-8
    gate(12, ok, f"{miscount} count mismatches, max root deviation {worst:.1e} "
                 f"over {checked} cubics", t0)


def test_criterion_13_symmetric_interior(gate):
    t0 = time.perf_counter()
    rng = _rng(13)
    bad = []
    for _ in range(20):
        s, rho1, rho2 = rng.uniform(0, 0.99), rng.uniform(0.05, 15), rng.uniform(0.05, 15)
        recs = interior_equilibria(symmetric_params(s=s, rho1=rho1, rho2=rho2))
        hit = [r for r in recs if np.allclose(r.state, (5, 0.5, 5, 0.5), atol=1e-8)]
        if len(hit) != 1 or hit[0].label != SINK:
            bad.append(f"(s={s:.3f}, rho1={rho1:.2f}, rho2={rho2:.2f})")
    gate(13, not bad, f"{20 - len(bad)}/20 draws find the sink {', '.join(bad)}".rstrip(), t0)
