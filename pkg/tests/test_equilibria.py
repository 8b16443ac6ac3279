import logging

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import params_strategy, random_params
from oracles import bisect_roots, confirmed_scan_roots
from twopatch import equilibria as eq
from twopatch.model import (ModelParams, derive, reference_params, rhs_full, rhs_sub3,
                            symmetric_params)
from twopatch.stability import NotSymmetricError, SADDLE, SINK, SOURCE

FOUR_FACE_SET = ModelParams(r1=1, r2=0.54, d1=0.45, d2=0.105, K1=10, K2=8, a1=0.6, a2=0.35,
                   rho1=1.75, rho2=1.2, s=0.65)


def _residual_ok(rec):
    return rec.residual <= 1e-9 * (1 + np.max(np.abs(rec.state)))


def test_trivial_boundaries_are_exact():
    recs = eq.trivial_boundaries(reference_params())
    assert [r.state for r in recs] == [(0, 0, 0, 0), (10, 0, 0, 0), (0, 0, 7, 0), (10, 0, 7, 0)]
    assert all(r.residual == 0.0 and r.provenance == eq.CLOSED_FORM for r in recs)
    assert recs[-1].cls == eq.BOTH_PREY


def test_cubic_two_window_roots_per_patch_on_four_face_set():
    for i in (1, 2):
        rep = eq.subsystem_cubic(FOUR_FACE_SET, i)
        assert len(rep.roots_in_window) == 2


def test_cubic_structural_cases():
    with pytest.raises(eq.StructuralNoInterior):
        eq.subsystem_cubic(reference_params(a1=0.8, d1=0.85), 1)
    with pytest.raises(eq.StructuralNoInterior):
        eq.subsystem_cubic(reference_params(a1=2.1, d1=2.0), 1)  # mu1 = 20 > K1
    with pytest.raises(eq.StructuralNoInterior):
        eq.subsystem_cubic(reference_params(s=1.0), 1)
    assert eq.subsystem_interiors(reference_params(a1=0.8, d1=0.85), 1) == []


def test_cubic_roots_match_bisection_scan(rng):
    checked = 0
    for _ in range(200):
        p = random_params(rng)
        for i in (1, 2):
            try:
                rep = eq.subsystem_cubic(p, i)
            except eq.StructuralNoInterior:
                continue
            K = rep.K
            ref = bisect_roots(rep.f, 0.0, 2 * K)
            got = [x for x in rep.real_roots if 0 < x < 2 * K]
            assert len(got) == len(ref)
            np.testing.assert_allclose(got, ref, atol=1e-8)
            for x in rep.real_roots:
                assert abs(rep.f(x)) <= 1e-10 * max(1.0, abs(rep.coefficients[2]))
            checked += 1
    assert checked > 100


def test_cubic_report_fields():
    rep = eq.subsystem_cubic(reference_params(s=0.3), 1)
    c, alpha, _ = rep.coefficients
    assert rep.discriminant == pytest.approx(c * c + 3 * alpha)
    lo, hi = rep.critical_points
    assert rep.df(lo) == pytest.approx(0, abs=1e-9) and rep.df(hi) == pytest.approx(0, abs=1e-9)
    assert len(rep.roots_in_window) <= 2


def test_subsystem_interiors_face_examples():
    p = reference_params(s=0.3)
    two = eq.subsystem_interiors(p, 1)
    assert len(two) == 2
    for st3 in two:
        assert np.max(np.abs(rhs_sub3(p, 1, st3))) <= 1e-10
        assert np.all(st3 > 0)
    assert eq.subsystem_interiors(reference_params(s=0.9), 1) == []


def test_subsystem_interior_frozen_values():
    # frozen from a brute-force residual scan of the reduced model (s = 0.3, face x2 = 0)
    xs = [st3[0] for st3 in eq.subsystem_interiors(reference_params(s=0.3), 1)]
    np.testing.assert_allclose(xs, [6.771, 9.511], atol=1e-3)


def test_mixed_boundaries_on_four_face_set():
    recs = eq.mixed_boundary_equilibria(FOUR_FACE_SET)
    assert len(recs) == 4
    assert sorted(r.cls for r in recs) == [eq.MIXED_X1_ZERO] * 2 + [eq.MIXED_X2_ZERO] * 2
    for r in recs:
        assert _residual_ok(r)
        zero = 2 if r.cls == eq.MIXED_X2_ZERO else 0
        assert r.state[zero] == 0.0


def test_no_mixed_boundaries_without_dispersal():
    assert eq.mixed_boundary_equilibria(reference_params(rho1=0.0, rho2=0.0)) == []


def test_mixed_boundary_sink_on_face_two_where_it_exists():
    recs = [r for r in eq.mixed_boundary_equilibria(reference_params(s=0.8))
            if r.cls == eq.MIXED_X1_ZERO]
    assert [r.label for r in recs] == [SINK, SADDLE]
    np.testing.assert_allclose(recs[0].state, (0, 1.008, 3.602, 2.872), atol=1e-3)


@pytest.mark.xfail(strict=True, reason="face-2 sink only exists for s in (0.785, 0.821); "
                                       "at s = 0.7 both face-2 equilibria are saddles")
def test_mixed_boundary_face_sink_claim_at_s_0_7():
    recs = [r for r in eq.mixed_boundary_equilibria(reference_params(s=0.7))
            if r.cls == eq.MIXED_X1_ZERO]
    assert [r.label for r in recs] == [SINK, SADDLE]


def test_symmetric_interior_closed_form():
    rec = eq.symmetric_interior(symmetric_params())
    assert rec.state == (5.0, 0.5, 5.0, 0.5) and rec.cls == eq.SYMMETRIC_INTERIOR
    assert eq.symmetric_interior(symmetric_params(d=6.5, a=6.0)) is None
    with pytest.raises(NotSymmetricError):
        eq.symmetric_interior(reference_params())


@given(st.floats(0, 1), st.floats(0, 20), st.floats(0, 20))
def test_symmetric_interior_residual_for_any_dispersal(s, rho1, rho2):
    assert eq.symmetric_interior(symmetric_params(s=s, rho1=rho1, rho2=rho2)).residual <= 1e-14


def test_three_interiors_in_symmetric_case():
    recs = eq.interior_equilibria(symmetric_params(s=0.85))
    assert len(recs) == 3
    assert recs[0].cls == eq.SYMMETRIC_INTERIOR and recs[0].state == pytest.approx((5, .5, 5, .5))
    assert [r.label for r in recs] == [SINK, SADDLE, SINK]


def test_reference_interiors():
    one = eq.interior_equilibria(reference_params(s=0.6))
    assert len(one) == 1 and one[0].label == SINK
    np.testing.assert_allclose(one[0].state, (4.841, 3.013, 0.460, 1.754), atol=1e-3)
    three = eq.interior_equilibria(reference_params(s=0.835))
    assert sorted(r.label for r in three) == [SADDLE, SADDLE, SINK]
    src = eq.interior_equilibria(reference_params(s=0.05))
    assert [r.label for r in src] == [SOURCE]


def test_interiors_sorted_and_verified():
    for s in (0.05, 0.3, 0.835, 0.9):
        recs = eq.interior_equilibria(reference_params(a1=2.1, d1=2.0, s=s))
        xs = [r.state[0] for r in recs]
        assert xs == sorted(xs)
        assert all(_residual_ok(r) and r.provenance == eq.NUMERIC_SOLVE for r in recs)
        assert all(min(r.state) > 0 for r in recs)


def test_interior_count_never_exceeds_three_on_reference_family():
    for a1, d1 in ((1.0, 0.85), (2.1, 2.0)):
        for s in np.linspace(0, 0.99, 34):
            assert len(eq.interior_equilibria(reference_params(a1=a1, d1=d1, s=s))) <= 3


def _completeness(p):
    roots = np.array([[r.state[0], r.state[2]] for r in eq.interior_equilibria(p)]).reshape(-1, 2)
    scan, diag = confirmed_scan_roots(p)
    for z in scan:
        assert len(roots) and np.min(np.linalg.norm(roots - z, axis=1)) <= diag


@pytest.mark.parametrize("s", [0.05, 0.3, 0.835, 0.9])
def test_solver_complete_against_residual_scan_reference(s):
    _completeness(reference_params(s=s))
    _completeness(reference_params(a1=2.1, d1=2.0, s=s))


def test_solver_complete_against_residual_scan_random(rng):
    for _ in range(12):
        _completeness(random_params(rng))


def test_symmetric_interior_rediscovered(rng):
    for _ in range(10):
        p = symmetric_params(s=rng.uniform(0, 0.99), rho1=rng.uniform(0, 15), rho2=rng.uniform(0, 15))
        assert any(r.cls == eq.SYMMETRIC_INTERIOR for r in eq.interior_equilibria(p))


def test_decoupled_interior_is_the_product():
    p = reference_params(rho1=0.0, rho2=0.0)
    recs = eq.interior_equilibria(p)
    dp = derive(p)
    assert len(recs) == 1
    np.testing.assert_allclose(recs[0].state, (dp.mu1, dp.nu1, dp.mu2, dp.nu2), rtol=1e-10)
    dec = eq.decoupled_equilibria(p)
    assert all(_residual_ok(r) for r in dec) and len(dec) == 4


def test_special_cases_at_s0():
    recs = eq.special_case_equilibria(reference_params(s=0.0))
    e12 = next(r for r in recs if r.cls == eq.PREDATOR2_FREE)
    assert e12.state[0] == pytest.approx(17 / 3) and e12.state[2:] == (7.0, 0.0)
    assert set(e12.conditions) >= {"condition1", "condition2", "las"}
    assert all(r.residual <= 1e-12 for r in recs)


def test_special_cases_at_s1():
    p = reference_params(s=1.0, a1=1.0, d1=0.3)
    recs = eq.special_case_equilibria(p)
    assert recs and all(r.residual <= 1e-10 for r in recs)
    for r in recs:
        assert isinstance(r.conditions["las"], bool) and isinstance(r.conditions["gas"], bool)


def test_special_case_reduces_without_dispersal_from_patch():
    p = reference_params(s=1.0, a1=1.0, d1=0.3, rho1=0.0)
    q = eq._s1_quantities(p, 1)
    assert q["mu_hat"] == pytest.approx(derive(p).mu1)


def test_special_cases_need_pure_strategy():
    with pytest.raises(eq.WrongSError):
        eq.special_case_equilibria(reference_params(s=0.5))


@given(params_strategy())
def test_every_equilibrium_meets_the_residual_bound(p):
    for r in eq.all_equilibria(p, grid_density=8):
        assert _residual_ok(r)
        assert np.max(np.abs(rhs_full(p, r.state))) == pytest.approx(r.residual)


@given(params_strategy(s=0.5))
def test_structural_exclusion(p):
    for i in (1, 2):
        dp = derive(p)
        if dp.mu(i) is None or dp.alpha(i) is None:
            continue
        c = dp.mu(i) + p.patch(i)[1]
        if c * c + 3 * dp.alpha(i) < 0:
            assert eq.subsystem_interiors(p, i) == []


def test_two_window_roots_give_two_positive_records(rng):
    hits = 0
    for _ in range(400):
        p = random_params(rng)
        for i in (1, 2):
            try:
                rep = eq.subsystem_cubic(p, i)
            except eq.StructuralNoInterior:
                continue
            if len(rep.roots_in_window) == 2:
                recs = eq.subsystem_interiors(p, i)
                assert len(recs) == 2 and all(np.all(z > 0) for z in recs)
                hits += 1
    assert hits > 0


def test_existence_condition_probe(rng, caplog):
    """Logs counterexamples to the two-positive-roots condition; never fails on them."""
    tested = violations = 0
    log = logging.getLogger("condition-probe")
    for _ in range(10000):
        p = random_params(rng)
        i = int(rng.integers(1, 3))
        dp = derive(p)
        mu, K = dp.mu(i), p.patch(i)[1]
        if mu is None or mu >= K or dp.alpha(i) is None:
            continue
        c, alpha, beta = mu + K, dp.alpha(i), dp.beta(i)
        if not (3 * beta / c < alpha < c * c):
            continue
        tested += 1
        rep = eq.subsystem_cubic(p, i) if c * c + 3 * alpha >= 0 else None
        n_pos = 0 if rep is None else sum(1 for x in rep.real_roots if x > 0)
        if n_pos < 2:
            violations += 1
            log.info("counterexample: %s source=%d", p, i)
    rate = violations / tested if tested else float("nan")
    print(f"condition probe: {violations}/{tested} draws violate ({rate:.3%})")
    assert tested > 0
