"""Eigenvalue classification and the closed-form stability/persistence tests."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (ModelParams, derive, jacobian_full, jacobian_single, prey_level,
                    prey_nullcline)

SINK = "sink"
SADDLE = "saddle"
SOURCE = "source"
MARGINAL = "marginal"

PREDATOR_EXTINCT = "predator-extinct-GAS"
INTERIOR_GAS = "interior-GAS"
LIMIT_CYCLE = "limit-cycle"


class NotSymmetricError(ValueError):
    """Raised when an operation needs identical patches with ``r = 1``."""


@dataclass(frozen=True)
class StabilityLabel:
    label: str
    eigenvalues: tuple
    margin: float

    @property
    def n_unstable(self) -> int:
        return sum(1 for ev in self.eigenvalues if ev.real > 0)


def classify(matrix) -> StabilityLabel:
    """Label a linearisation by the signs of its eigenvalues' real parts.

    Real parts within ``1e-9 * (1 + spectral radius)`` of zero make the
    equilibrium ``marginal``; no sign is trusted that close to a bifurcation.
    """
    M = np.asarray(matrix, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    ev = np.linalg.eigvals(M)
    ev = ev[np.lexsort((ev.imag, ev.real))]
    tol = 1e-9 * (1.0 + float(np.max(np.abs(ev))))
    re = ev.real
    margin = float(np.min(np.abs(re)))
    if margin <= tol:
        label = MARGINAL
    elif np.all(re < 0):
        label = SINK
    elif np.all(re > 0):
        label = SOURCE
    else:
        label = SADDLE
    return StabilityLabel(label, tuple(complex(v) for v in ev), margin)


def _excess(a: float, d: float, K: float) -> float:
    """``(a-d)(mu-K)/(1+K)`` written so that it is defined for any ``a, d``."""
    return d - a * K / (1.0 + K)


def ek1k2_closed_form(params: ModelParams) -> dict:
    """Closed-form local stability test of the prey-only state ``(K1, 0, K2, 0)``.

    Both inequalities are the trace and determinant conditions of the
    predator block of the Jacobian there.
    """
    p = params
    m1 = _excess(p.a1, p.d1, p.K1)
    m2 = _excess(p.a2, p.d2, p.K2)
    ineq1 = (m1 + p.s * p.rho1) + (m2 + p.s * p.rho2)
    ineq2 = m1 * (p.s * p.rho2 + m2) + p.s * p.rho1 * m2
    return {"stable": bool(ineq1 > 0 and ineq2 > 0), "inequality1": ineq1,
            "inequality2": ineq2}


def check_symmetric(params: ModelParams, tol: float = 1e-12) -> None:
    p = params
    pairs = (("a", p.a1, p.a2), ("d", p.d1, p.d2), ("K", p.K1, p.K2))
    for name, u, v in pairs:
        if abs(u - v) > tol * max(1.0, abs(u)):
            raise NotSymmetricError(f"{name}1 != {name}2 ({u!r} vs {v!r})")
    if abs(p.r1 - 1.0) > tol or abs(p.r2 - 1.0) > tol:
        raise NotSymmetricError(f"symmetric analysis needs r1 = r2 = 1, got {p.r1!r}, {p.r2!r}")


def symmetric_closed_forms(params: ModelParams) -> dict:
    """Sums and products of the eigenvalue pairs at ``E = (mu, nu, mu, nu)``.

    The in-phase pair belongs to the uncoupled single-patch linearisation;
    the out-of-phase pair comes from the quotient by the in-phase subspace.
    """
    check_symmetric(params)
    p = params
    a, d, K = p.a1, p.d1, p.K1
    mu = prey_level(a, d)
    if mu is None:
        raise ValueError("symmetric interior needs a > d")
    nu = float(prey_nullcline(mu, 1.0, K, a))
    rs = p.rho1 + p.rho2
    den = K * (1.0 + mu)
    inphase_trace = mu * (K - 1.0 - 2.0 * mu) / den
    return {
        "mu": mu,
        "nu": nu,
        "in_phase_product": d * (K - mu) / den,
        "in_phase_sum": inphase_trace,
        "out_phase_product": (rs * ((1.0 - p.s) * (K - mu) * d * nu
                                    - (K - 1.0 - 2.0 * mu) * p.s * mu) + d * (K - mu)) / den,
        "out_phase_sum": inphase_trace - p.s * rs,
    }


def symmetric_interior_stability(params: ModelParams) -> dict:
    """Threshold test ``(K-1)/2 < mu < K`` plus an eigenvalue cross-check."""
    cf = symmetric_closed_forms(params)
    mu, K = cf["mu"], params.K1
    stable = (K - 1.0) / 2.0 < mu < K
    closed_stable = (cf["in_phase_product"] > 0 and cf["in_phase_sum"] < 0
                     and cf["out_phase_product"] > 0 and cf["out_phase_sum"] < 0)
    eig = classify(jacobian_full(params, (mu, cf["nu"], mu, cf["nu"])))
    return {
        "stable": stable,
        "via": "closed-form",
        "closed_forms": cf,
        "closed_form_stable": closed_stable,
        "eigen": eig,
        "agrees": (eig.label == SINK) == closed_stable or eig.label == MARGINAL,
    }


def single_patch_regime(r: float, K: float, a: float, d: float) -> str:
    """Global regime of the uncoupled Rosenzweig-MacArthur patch."""
    if min(r, K, a, d) <= 0:
        raise ValueError("single-patch parameters must be positive")
    mu = prey_level(a, d)
    if mu is None or mu >= K:
        return PREDATOR_EXTINCT
    if mu >= (K - 1.0) / 2.0:
        return INTERIOR_GAS
    return LIMIT_CYCLE


def single_patch_trace(r: float, K: float, a: float, d: float) -> float:
    """Trace of the single-patch Jacobian at its interior equilibrium."""
    mu = prey_level(a, d)
    if mu is None:
        raise ValueError("no interior equilibrium when a <= d")
    nu = float(prey_nullcline(mu, r, K, a))
    return float(np.trace(jacobian_single(r, K, a, d, mu, nu)))


def hopf_death_rate(r: float, K: float, a: float, tol: float = 1e-13) -> float:
    """Death rate ``d`` at which the interior trace changes sign (bisection).

    Needs ``K > 1``; the trace is positive for small ``d`` (small ``mu``) and
    negative once ``mu`` passes the Hopf level.
    """
    if K <= 1.0:
        raise ValueError("no Hopf point for K <= 1")
    lo = 1e-12 * a
    hi = a * K / (1.0 + K) * (1.0 - 1e-12)  # mu(hi) just below K
    f_lo = single_patch_trace(r, K, a, lo)
    if f_lo <= 0 or single_patch_trace(r, K, a, hi) >= 0:
        raise RuntimeError("trace does not change sign on the bracket")
    while hi - lo > tol * a:
        mid = 0.5 * (lo + hi)
        if single_patch_trace(r, K, a, mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class PersistenceReport:
    predator_threshold1: float
    predator_threshold2: float
    predator_persist1: bool
    predator_persist2: bool
    global_ek_stable: bool
    bound_T: float
    bound_dmin: float
    L_envelope: float

    def guarantee(self, i: int) -> str:
        """``"guaranteed"`` when the sufficient condition holds, else ``"inconclusive"``."""
        ok = self.predator_persist1 if i == 1 else self.predator_persist2
        return "guaranteed" if ok else "inconclusive"


def _concave_max(rho: float, r: float, K: float, d: float) -> float:
    """max over [0, K] of ``rho * x * (r + d - r x / K)``."""
    c = r + d
    vertex = c * K / (2.0 * r)
    if vertex <= K:
        return rho * c * c * K / (4.0 * r)
    return rho * K * d


def boundedness_constant(params: ModelParams) -> float:
    p = params
    return _concave_max(p.rho2, p.r1, p.K1, p.d1) + _concave_max(p.rho1, p.r2, p.K2, p.d2)


def lyapunov_sum(params: ModelParams, state) -> float:
    """``rho2 (x1 + y1) + rho1 (x2 + y2)``, bounded asymptotically by ``T / d_min``."""
    x1, y1, x2, y2 = state[..., 0], state[..., 1], state[..., 2], state[..., 3]
    return params.rho2 * (x1 + y1) + params.rho1 * (x2 + y2)


def persistence_report(params: ModelParams) -> PersistenceReport:
    p = params
    dp = derive(p)
    thr, persist = [], []
    for i in (1, 2):
        r, K, a, d, rho = p.patch(i)
        # (a-d)(K-mu)/(1+K), written without mu so that a <= d stays defined
        th = a * K / (1.0 + K) - d
        thr.append(th)
        persist.append(bool(th > 0 and rho * p.s < th))
    T = boundedness_constant(p)
    dmin = min(p.d1, p.d2)
    # a <= d leaves mu undefined; the predator then declines at every prey level
    ek_global = all(dp.mu(i) is None or dp.mu(i) > p.patch(i)[1] for i in (1, 2))
    return PersistenceReport(thr[0], thr[1], persist[0], persist[1], ek_global,
                             T, dmin, T / dmin)
