"""Equilibria of the full model and of its single-prey faces.

Every record returned here is verified against ``rhs_full`` and carries its
eigenvalue classification.  Mixed boundary records additionally carry the
classification inside their invariant face, which is what the reduced
(three-species) model sees.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .model import (ModelParams, cubic_coefficients, derive, embed_sub3, jacobian_full,
                    jacobian_sub3, prey_level, prey_nullcline, restrict_sub3, rhs_full,
                    rhs_sub3)
from .stability import (NotSymmetricError, StabilityLabel, _excess, check_symmetric,
                        classify)

log = logging.getLogger(__name__)

ORIGIN = "origin"
PREY1_ONLY = "prey1-only"
PREY2_ONLY = "prey2-only"
BOTH_PREY = "both-prey"
MIXED_X2_ZERO = "mixed-boundary-x2=0"
MIXED_X1_ZERO = "mixed-boundary-x1=0"
INTERIOR = "interior"
SYMMETRIC_INTERIOR = "symmetric-interior"
# only present at s = 0: one patch at its predator-prey equilibrium, the other prey-only
PREDATOR2_FREE = "predator2-free"
PREDATOR1_FREE = "predator1-free"
# only present without dispersal: products of single-patch equilibria
DECOUPLED = "decoupled"

CLOSED_FORM = "closed-form"
CUBIC_ROOT = "cubic-root"
NUMERIC_SOLVE = "numeric-solve"

WINDOW_TOL = 1e-12
DEDUP_TOL = 1e-6


class StructuralNoInterior(ValueError):
    """The reduced model cannot have an interior equilibrium for these parameters."""


class WrongSError(ValueError):
    """A closed form that only exists for ``s = 0`` or ``s = 1`` was requested."""


@dataclass(frozen=True)
class EquilibriumRecord:
    state: tuple
    cls: str
    residual: float
    provenance: str
    stability: Optional[StabilityLabel] = None
    face_stability: Optional[StabilityLabel] = None
    conditions: dict = field(default_factory=dict)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.state)

    @property
    def label(self) -> Optional[str]:
        return None if self.stability is None else self.stability.label


def _residual(params: ModelParams, state) -> float:
    return float(np.max(np.abs(rhs_full(params, state))))


def make_record(params: ModelParams, state, cls: str, provenance: str,
                face: Optional[int] = None, conditions: Optional[dict] = None) -> EquilibriumRecord:
    state = np.asarray(state, dtype=float)
    stab = classify(jacobian_full(params, state))
    face_stab = None
    if face is not None:
        face_stab = classify(jacobian_sub3(params, face, restrict_sub3(face, state)))
    return EquilibriumRecord(tuple(float(v) for v in state), cls, _residual(params, state),
                             provenance, stab, face_stab, dict(conditions or {}))


def trivial_boundaries(params: ModelParams) -> list[EquilibriumRecord]:
    p = params
    pts = (((0.0, 0.0, 0.0, 0.0), ORIGIN), ((p.K1, 0.0, 0.0, 0.0), PREY1_ONLY),
           ((0.0, 0.0, p.K2, 0.0), PREY2_ONLY), ((p.K1, 0.0, p.K2, 0.0), BOTH_PREY))
    return [make_record(p, st, cls, CLOSED_FORM) for st, cls in pts]


@dataclass(frozen=True)
class CubicReport:
    source_patch: int
    coefficients: tuple  # (mu + K, alpha, beta)
    mu: float
    K: float
    discriminant: float
    critical_points: Optional[tuple]
    real_roots: tuple
    roots_in_window: tuple
    marginal_roots: tuple

    def f(self, x):
        c, alpha, beta = self.coefficients
        return ((x - c) * x - alpha) * x + beta

    def df(self, x):
        c, alpha, _ = self.coefficients
        return (3.0 * x - 2.0 * c) * x - alpha


def companion_roots(coeffs: Iterable[float]) -> np.ndarray:
    """Roots of the monic polynomial ``x**n + c[0] x**(n-1) + ... + c[n-1]``."""
    c = np.asarray(list(coeffs), dtype=float)
    n = c.size
    C = np.zeros((n, n))
    C[0, :] = -c
    C[np.arange(1, n), np.arange(n - 1)] = 1.0
    return np.linalg.eigvals(C)


def _polish(f, df, x: float, iters: int = 30) -> float:
    for _ in range(iters):
        fx, dfx = f(x), df(x)
        if dfx == 0.0 or fx == 0.0:
            break
        step = fx / dfx
        x_new = x - step
        if abs(f(x_new)) >= abs(fx):
            break
        x = x_new
        if abs(step) <= 4e-16 * max(1.0, abs(x)):
            break
    return x


def subsystem_cubic(params: ModelParams, source_patch: int) -> CubicReport:
    """Real roots of the source-patch cubic and the subset giving interior states.

    Raises StructuralNoInterior when no interior equilibrium of the reduced
    model can exist (``a_i <= d_i``, ``K_i <= mu_i``, or negative
    discriminant of the cubic's derivative).  ``s = 1`` and ``rho_j = 0``
    also raise, since the cubic is undefined there.
    """
    i = source_patch
    r, K, a, d, _ = params.patch(i)
    mu = prey_level(a, d)
    if mu is None:
        raise StructuralNoInterior(f"a{i} <= d{i}: predator cannot grow in patch {i}")
    if K <= mu:
        raise StructuralNoInterior(f"K{i} <= mu{i}")
    coeffs = cubic_coefficients(params, i)
    if coeffs is None:
        raise StructuralNoInterior("cubic undefined (s = 1 or no dispersal into the sink)")
    c, alpha, beta = coeffs
    disc = c * c + 3.0 * alpha
    if disc < 0:
        raise StructuralNoInterior(f"discriminant (mu{i}+K{i})^2 + 3 alpha{i} < 0")
    sq = np.sqrt(disc)
    crit = ((c - sq) / 3.0, (c + sq) / 3.0)

    def f(x):
        return ((x - c) * x - alpha) * x + beta

    def df(x):
        return (3.0 * x - 2.0 * c) * x - alpha

    ftol = 1e-10 * max(1.0, abs(beta))
    raw = companion_roots((-c, -alpha, beta))
    real = []
    for z in sorted(raw, key=lambda v: v.real):
        # near a double root the eigen-solver splits it into a close complex pair
        if abs(z.imag) > 1e-6 * max(1.0, abs(z)):
            continue
        x = _polish(f, df, float(z.real))
        if abs(f(x)) > ftol:
            continue
        if real and abs(x - real[-1]) <= 1e-9 * max(1.0, abs(x)):
            continue
        real.append(x)
    wt = WINDOW_TOL * max(1.0, K)
    inside = tuple(x for x in real if mu + wt < x < K - wt)
    marginal = tuple(x for x in real if abs(x - mu) <= wt or abs(x - K) <= wt)
    return CubicReport(i, coeffs, mu, K, disc, crit, tuple(real), inside, marginal)


def _sink_predator(params: ModelParams, i: int, x: float, yi: float) -> float:
    """Sink-patch predator density balancing the sink equation."""
    _, _, a, _, _ = params.patch(i)
    _, _, _, d_j, rho_j = params.patch(3 - i)
    s = params.s
    p = a * x / (1.0 + x)
    return rho_j * s * yi / (d_j + rho_j * s + rho_j * (1.0 - s) * p * yi)


def subsystem_interiors(params: ModelParams, source_patch: int) -> list[np.ndarray]:
    """Interior equilibria ``(x_i, y_i, y_j)`` of the reduced model, sorted by ``x_i``.

    Returns an empty list when the cubic reports a structural obstruction,
    and at ``s = 0``, where nothing feeds the sink predator.
    """
    if params.s == 0.0:
        return []
    try:
        rep = subsystem_cubic(params, source_patch)
    except StructuralNoInterior as exc:
        log.debug("no subsystem interior for patch %d: %s", source_patch, exc)
        return []
    r, K, a, _, _ = params.patch(source_patch)
    out = []
    for x in rep.roots_in_window:
        yi = float(prey_nullcline(x, r, K, a))
        yj = _sink_predator(params, source_patch, x, yi)
        if yi <= 0 or yj <= 0:
            log.warning("positivity violation at root x=%r (y_i=%r, y_j=%r); excluded", x, yi, yj)
            continue
        st = np.array([x, yi, yj])
        res = float(np.max(np.abs(rhs_sub3(params, source_patch, st))))
        if res > 1e-10 * (1.0 + np.max(np.abs(st))):
            log.warning("subsystem root x=%r has residual %.3e; excluded", x, res)
            continue
        out.append(st)
    return out


def mixed_boundary_equilibria(params: ModelParams) -> list[EquilibriumRecord]:
    out = []
    for i, cls in ((1, MIXED_X2_ZERO), (2, MIXED_X1_ZERO)):
        for st3 in subsystem_interiors(params, i):
            out.append(make_record(params, embed_sub3(i, st3), cls, CUBIC_ROOT, face=i))
    return out


def symmetric_interior(params: ModelParams) -> Optional[EquilibriumRecord]:
    """The equilibrium ``(mu, nu, mu, nu)`` of identical patches, if it exists.

    Raises NotSymmetricError unless ``a, d, K`` agree across patches and
    ``r1 = r2 = 1``.
    """
    check_symmetric(params)
    mu = prey_level(params.a1, params.d1)
    if mu is None or mu >= params.K1:
        return None
    nu = float(prey_nullcline(mu, 1.0, params.K1, params.a1))
    return make_record(params, (mu, nu, mu, nu), SYMMETRIC_INTERIOR, CLOSED_FORM)


def _is_symmetric(params: ModelParams) -> bool:
    try:
        check_symmetric(params)
    except NotSymmetricError:
        return False
    return True


# -- interior solver ---------------------------------------------------------------

def _reduced_system(p: ModelParams, x1: np.ndarray, x2: np.ndarray):
    """Predator equations on the prey nullclines and their total derivatives."""
    y1 = p.r1 * (p.K1 - x1) * (1.0 + x1) / (p.a1 * p.K1)
    y2 = p.r2 * (p.K2 - x2) * (1.0 + x2) / (p.a2 * p.K2)
    dq1 = p.r1 * (p.K1 - 1.0 - 2.0 * x1) / (p.a1 * p.K1)
    dq2 = p.r2 * (p.K2 - 1.0 - 2.0 * x2) / (p.a2 * p.K2)
    p1 = p.a1 * x1 / (1.0 + x1)
    p2 = p.a2 * x2 / (1.0 + x2)
    dp1 = p.a1 / (1.0 + x1) ** 2
    dp2 = p.a2 / (1.0 + x2) ** 2
    s, w = p.s, 1.0 - p.s
    diff = p1 - p2
    g1 = p1 * y1 - p.d1 * y1 + p.rho1 * w * y1 * y2 * diff + p.rho1 * s * (y2 - y1)
    g2 = p2 * y2 - p.d2 * y2 - p.rho2 * w * y1 * y2 * diff - p.rho2 * s * (y2 - y1)
    # partials of the predator equations in (x1, y1, x2, y2)
    a_x1 = dp1 * y1 * (1.0 + p.rho1 * w * y2)
    a_y1 = p1 - p.d1 + p.rho1 * w * y2 * diff - p.rho1 * s
    a_x2 = -p.rho1 * w * y1 * y2 * dp2
    a_y2 = p.rho1 * w * y1 * diff + p.rho1 * s
    b_x1 = -p.rho2 * w * y1 * y2 * dp1
    b_y1 = -p.rho2 * w * y2 * diff + p.rho2 * s
    b_x2 = dp2 * y2 * (1.0 + p.rho2 * w * y1)
    b_y2 = p2 - p.d2 - p.rho2 * w * y1 * diff - p.rho2 * s
    J11 = a_x1 + a_y1 * dq1
    J12 = a_x2 + a_y2 * dq2
    J21 = b_x1 + b_y1 * dq1
    J22 = b_x2 + b_y2 * dq2
    return g1, g2, J11, J12, J21, J22


def _newton(p: ModelParams, seeds: np.ndarray, max_iter: int = 80) -> np.ndarray:
    """Damped Newton on the reduced system, vectorised over seeds."""
    X = np.array(seeds, dtype=float).reshape(-1, 2).copy()
    lo = np.array([-0.5 * p.K1, -0.5 * p.K2])
    hi = np.array([1.5 * p.K1, 1.5 * p.K2])
    alive = np.ones(len(X), dtype=bool)
    done = np.zeros(len(X), dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(max_iter):
            idx = np.flatnonzero(alive & ~done)
            if idx.size == 0:
                break
            x1, x2 = X[idx, 0], X[idx, 1]
            g1, g2, J11, J12, J21, J22 = _reduced_system(p, x1, x2)
            det = J11 * J22 - J12 * J21
            bad = ~np.isfinite(det) | (det == 0.0)
            dx1 = (J22 * g1 - J12 * g2) / det
            dx2 = (J11 * g2 - J21 * g1) / det
            norm0 = np.maximum(np.abs(g1), np.abs(g2))
            lam = np.ones(idx.size)
            accepted = np.zeros(idx.size, dtype=bool)
            n1, n2 = x1.copy(), x2.copy()
            for _ in range(12):
                t1 = x1 - lam * dx1
                t2 = x2 - lam * dx2
                h1, h2, *_ = _reduced_system(p, t1, t2)
                norm1 = np.maximum(np.abs(h1), np.abs(h2))
                ok = ~accepted & (norm1 < norm0) & np.isfinite(norm1)
                n1[ok], n2[ok] = t1[ok], t2[ok]
                accepted |= ok
                if accepted.all():
                    break
                lam = np.where(accepted, lam, 0.5 * lam)
            step = np.maximum(np.abs(n1 - x1), np.abs(n2 - x2))
            X[idx, 0], X[idx, 1] = n1, n2
            converged = (norm0 == 0.0) | (accepted & (step <= 1e-14 * (1.0 + np.abs(n1) + np.abs(n2))))
            stalled = ~accepted & (norm0 > 0)
            done[idx[converged | stalled]] = True
            outside = np.any((X[idx] < lo) | (X[idx] > hi), axis=1)
            alive[idx[bad | outside]] = False
    return X[alive]


def _quadratic_roots(A, B, C):
    """Real roots of ``A z^2 + B z + C`` for arrays of coefficients; NaN if absent."""
    A, B, C = np.broadcast_arrays(np.asarray(A, float), np.asarray(B, float), np.asarray(C, float))
    lo = np.full(A.shape, np.nan)
    hi = np.full(A.shape, np.nan)
    with np.errstate(all="ignore"):
        scale = np.maximum(np.abs(B), np.maximum(np.abs(A), np.abs(C)))
        lin = np.abs(A) <= 1e-14 * scale
        disc = B * B - 4.0 * A * C
        quad = ~lin & (disc >= 0)
        sq = np.sqrt(np.where(quad, disc, 0.0))
        # numerically stable pair
        q = -0.5 * (B + np.copysign(sq, B))
        r1 = np.where(quad, q / A, np.nan)
        r2 = np.where(quad & (q != 0), C / q, np.nan)
        lo = np.where(quad, np.fmin(r1, r2), lo)
        hi = np.where(quad, np.fmax(r1, r2), hi)
        lz = lin & (B != 0)
        lo = np.where(lz, -C / B, lo)
    return lo, hi


def _balance_seeds(p: ModelParams, n: int = 400) -> np.ndarray:
    """Seeds where the predator balance curve crosses a predator nullcline.

    On the prey nullclines, ``rho2 * dy1/dt + rho1 * dy2/dt`` vanishes on a
    conic in the ``(x1, x2)`` plane; for a fixed prey level in one patch it is
    a quadratic in the other (its two branches are the two signs of the
    square root).  Interior equilibria are where a branch meets the remaining
    predator equation, located by sign changes along each branch and
    parametrised both ways so that turning points are covered.
    """
    if p.rho1 == 0.0 and p.rho2 == 0.0:
        mu1, mu2 = prey_level(p.a1, p.d1), prey_level(p.a2, p.d2)
        if mu1 is None or mu2 is None:
            return np.empty((0, 2))
        return np.array([[mu1, mu2]])
    c1, c2 = p.a1 - p.d1, p.a2 - p.d2
    u1 = p.rho2 * p.r1 / (p.a1 * p.K1)
    u2 = p.rho1 * p.r2 / (p.a2 * p.K2)
    seeds = []
    for which in (1, 2):
        # solve for x_which with the other prey level as parameter
        u_a, c_a, d_a, K_a = (u1, c1, p.d1, p.K1) if which == 1 else (u2, c2, p.d2, p.K2)
        u_b, c_b, d_b, K_b = (u2, c2, p.d2, p.K2) if which == 1 else (u1, c1, p.d1, p.K1)
        t = np.linspace(0.0, K_b, n + 2)[1:-1]
        h = u_b * (K_b - t) * (c_b * t - d_b)
        A = -u_a * c_a * np.ones_like(t)
        B = u_a * (c_a * K_a + d_a) * np.ones_like(t)
        C = -u_a * d_a * K_a + h
        for branch in _quadratic_roots(A, B, C):
            valid = np.isfinite(branch) & (branch > 0) & (branch < K_a)
            if not valid.any():
                continue
            if which == 1:
                x1, x2 = branch, t
            else:
                x1, x2 = t, branch
            g1, g2, *_ = _reduced_system(p, np.where(valid, x1, 1.0), np.where(valid, x2, 1.0))
            H = g1 if p.rho1 > 0 else g2
            sgn = np.sign(H)
            cross = valid[:-1] & valid[1:] & (sgn[:-1] * sgn[1:] <= 0)
            for k in np.flatnonzero(cross):
                dh = H[k] - H[k + 1]
                w = 0.5 if dh == 0 else H[k] / dh
                seeds.append(((1 - w) * x1[k] + w * x1[k + 1], (1 - w) * x2[k] + w * x2[k + 1]))
    return np.array(seeds).reshape(-1, 2)


def _dedup(points: np.ndarray, tol: float = DEDUP_TOL) -> list[np.ndarray]:
    pts = sorted((tuple(z) for z in points), key=lambda z: (z[0], z[1]))
    kept: list[np.ndarray] = []
    for z in pts:
        z = np.array(z)
        if all(np.linalg.norm(z - k) > tol * max(1.0, np.linalg.norm(z)) for k in kept):
            kept.append(z)
    return kept


def interior_equilibria(params: ModelParams, grid_density: int = 30,
                        extra_seeds: Optional[Iterable] = None) -> list[EquilibriumRecord]:
    """All interior equilibria found by multistart Newton, sorted by ``x1``.

    Seeds are a ``grid_density`` x ``grid_density`` grid over
    ``(0, K1) x (0, K2)``, the predator-balance branch crossings, and any
    ``extra_seeds`` (prey pairs ``(x1, x2)``, e.g. from a neighbouring sweep
    point).  An empty list is a valid answer.
    """
    p = params
    g1 = (np.arange(grid_density) + 0.5) / grid_density * p.K1
    g2 = (np.arange(grid_density) + 0.5) / grid_density * p.K2
    G1, G2 = np.meshgrid(g1, g2, indexing="ij")
    seeds = [np.column_stack([G1.ravel(), G2.ravel()]), _balance_seeds(p)]
    if extra_seeds is not None:
        extra = np.array(list(extra_seeds), dtype=float).reshape(-1, 2)
        seeds.append(extra)
    roots = _newton(p, np.vstack(seeds))
    inside = roots[(roots[:, 0] > 0) & (roots[:, 0] < p.K1 * (1 - 1e-12))
                   & (roots[:, 1] > 0) & (roots[:, 1] < p.K2 * (1 - 1e-12))]
    sym = _is_symmetric(p)
    mu_sym = prey_level(p.a1, p.d1) if sym else None
    out = []
    for x1, x2 in _dedup(inside):
        y1 = float(prey_nullcline(x1, p.r1, p.K1, p.a1))
        y2 = float(prey_nullcline(x2, p.r2, p.K2, p.a2))
        st = np.array([x1, y1, x2, y2])
        if y1 <= 0 or y2 <= 0:
            continue
        if _residual(p, st) > 1e-9 * (1.0 + np.max(np.abs(st))):
            continue
        cls = INTERIOR
        if mu_sym is not None and abs(x1 - mu_sym) <= 1e-7 * max(1.0, mu_sym) \
                and abs(x2 - mu_sym) <= 1e-7 * max(1.0, mu_sym):
            cls = SYMMETRIC_INTERIOR
        out.append(make_record(p, st, cls, NUMERIC_SOLVE))
    return out


# -- s = 0 and s = 1 closed forms ---------------------------------------------------

def _s1_quantities(params: ModelParams, i: int) -> dict:
    j = 3 - i
    r_i, K_i, a_i, d_i, rho_i = params.patch(i)
    _, _, _, d_j, rho_j = params.patch(j)
    d_hat = d_i + rho_i * d_j / (d_j + rho_j)
    mu_hat = prey_level(a_i, d_hat)
    nu_hat = None if mu_hat is None else float(prey_nullcline(mu_hat, r_i, K_i, a_i))
    nu_hat_sink = None if nu_hat is None else rho_j * nu_hat / (d_j + rho_j)
    return {"d_hat": d_hat, "mu_hat": mu_hat, "nu_hat": nu_hat, "nu_hat_sink": nu_hat_sink}


def condition1(params: ModelParams) -> bool:
    """Local stability test of ``(K1, 0, K2, 0)`` used when ``s = 1``, as printed."""
    p = params
    m1 = _excess(p.a1, p.d1, p.K1)
    m2 = _excess(p.a2, p.d2, p.K2)
    return bool((m1 + p.rho1) + (m2 + p.rho2) > 0 and m1 * (p.rho2 + m2) + p.rho1 * m2 > 0)


def condition2(params: ModelParams, i: int) -> bool:
    """Auxiliary test for ``E^{b*}_{i2}`` at ``s = 0``, evaluated verbatim as printed.

    The index pattern (``d_i`` paired with ``a_j``) is taken as published and
    is not derived here.
    """
    j = 3 - i
    _, _, a_i, d_i, _ = params.patch(i)
    _, K_j, a_j, d_j, rho_j = params.patch(j)
    mu_i, nu_i = derive(params).mu(i), derive(params).nu(i)
    mu_j = prey_level(a_j, d_j)
    if a_j <= d_i or nu_i is None:
        return False
    ratio = d_i / (a_j - d_i)
    mu_j_eff = np.inf if mu_j is None else mu_j
    den = nu_i * (K_j * (a_j - d_i) - d_i)
    if den == 0:
        return False
    return bool(0 < ratio < K_j < mu_j_eff and rho_j < (d_j - K_j * (a_j - d_j)) / den)


def special_case_equilibria(params: ModelParams) -> list[EquilibriumRecord]:
    """Boundary equilibria with closed forms at the pure strategies ``s = 0, 1``.

    ``s = 1``: one record per source patch with ``0 < mu_hat_i < K_i``,
    tagged with the printed local (``las``) and global (``gas``) conditions.
    ``s = 0``: ``(mu1, nu1, K2, 0)`` and ``(K1, 0, mu2, nu2)`` when they exist,
    tagged with the printed local condition (``las``, which includes
    condition 2).  Both cases also report ``condition1``.
    """
    p = params
    if p.s not in (0.0, 1.0):
        raise WrongSError(f"closed forms need s = 0 or s = 1, got s = {p.s!r}")
    out = []
    if p.s == 1.0:
        for i, cls in ((1, MIXED_X2_ZERO), (2, MIXED_X1_ZERO)):
            q = _s1_quantities(p, i)
            r_i, K_i, a_i, _, _ = p.patch(i)
            r_j, K_j, a_j, _, _ = p.patch(3 - i)
            mu_hat = q["mu_hat"]
            if mu_hat is None or not (0 < mu_hat < K_i):
                continue
            hopf_ok = (K_i - 1.0) / 2.0 < mu_hat < K_i
            conds = {
                **q,
                "las": bool(hopf_ok and r_j < a_j * q["nu_hat_sink"]),
                # printed with nu_hat_i^j; read as the sink density nu_hat_j^i
                "gas": bool(hopf_ok and r_j * (K_j + 1.0) ** 2 / (4.0 * a_j * K_j) < q["nu_hat_sink"]),
                "condition1": condition1(p),
            }
            st3 = (mu_hat, q["nu_hat"], q["nu_hat_sink"])
            out.append(make_record(p, embed_sub3(i, st3), cls, CLOSED_FORM, face=i,
                                   conditions=conds))
    else:
        dp = derive(p)
        for i, cls in ((1, PREDATOR2_FREE), (2, PREDATOR1_FREE)):
            mu, nu = dp.mu(i), dp.nu(i)
            _, K_i, _, _, _ = p.patch(i)
            if mu is None or not (0 < mu < K_i):
                continue
            st = (mu, nu, p.K2, 0.0) if i == 1 else (p.K1, 0.0, mu, nu)
            conds = {"condition2": condition2(p, i), "condition1": condition1(p)}
            conds["las"] = bool((K_i - 1.0) / 2.0 < mu < K_i and conds["condition2"])
            out.append(make_record(p, st, cls, CLOSED_FORM, conditions=conds))
    return out


def decoupled_equilibria(params: ModelParams) -> list[EquilibriumRecord]:
    """Products of single-patch equilibria beyond the four trivial ones (no dispersal)."""
    p = params
    if p.rho1 != 0.0 or p.rho2 != 0.0:
        return []
    dp = derive(p)
    opts = []
    for i in (1, 2):
        _, K, _, _, _ = p.patch(i)
        pts = [(0.0, 0.0), (K, 0.0)]
        mu = dp.mu(i)
        if mu is not None and mu < K:
            pts.append((mu, dp.nu(i)))
        opts.append(pts)
    out = []
    for a in opts[0]:
        for b in opts[1]:
            if a[1] == 0.0 and b[1] == 0.0:
                continue
            if a[1] > 0 and b[1] > 0:
                continue  # interior; found by interior_equilibria
            out.append(make_record(p, (*a, *b), DECOUPLED, CLOSED_FORM))
    return out


def all_equilibria(params: ModelParams, grid_density: int = 30) -> list[EquilibriumRecord]:
    """Every equilibrium family that applies at the given ``s``."""
    p = params
    out = trivial_boundaries(p)
    if p.s in (0.0, 1.0):
        out += special_case_equilibria(p)
    if 0.0 < p.s < 1.0:
        out += mixed_boundary_equilibria(p)
    out += decoupled_equilibria(p)
    out += interior_equilibria(p, grid_density)
    return out
