"""Two-patch Rosenzweig-MacArthur model with mixed predator dispersal.

State ordering is ``(x1, y1, x2, y2)`` for the full model and
``(x_i, y_i, y_j)`` for the reduced model living on the face ``x_j = 0``
(patch ``i`` is the source, patch ``j`` the sink).  All quantities are
dimensionless.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Optional

import numpy as np

PARAM_NAMES = ("r1", "r2", "K1", "K2", "a1", "a2", "d1", "d2", "rho1", "rho2", "s")


@dataclass(frozen=True)
class ModelParams:
    """The eleven rescaled parameters of the two-patch model.

    ``s`` is the fraction of predators dispersing passively (density driven);
    the remaining ``1 - s`` follow the predation-attraction strategy.
    """

    K1: float
    K2: float
    a1: float
    a2: float
    d1: float
    d2: float
    rho1: float
    rho2: float
    s: float
    r1: float = 1.0
    r2: float = 1.0

    def __post_init__(self):
        for name in ("r1", "r2", "K1", "K2", "a1", "a2", "d1", "d2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")
        for name in ("rho1", "rho2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")
        if not (0.0 <= self.s <= 1.0):
            raise ValueError(f"s must lie in [0, 1], got {self.s!r}")

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def patch(self, i: int) -> tuple[float, float, float, float, float]:
        """(r, K, a, d, rho) of patch ``i`` (1-based)."""
        if i == 1:
            return self.r1, self.K1, self.a1, self.d1, self.rho1
        if i == 2:
            return self.r2, self.K2, self.a2, self.d2, self.rho2
        raise ValueError(f"patch index must be 1 or 2, got {i!r}")


@dataclass(frozen=True)
class DerivedParams:
    """Derived constants; ``None`` marks a quantity that is undefined."""

    mu1: Optional[float]
    mu2: Optional[float]
    nu1: Optional[float]
    nu2: Optional[float]
    alpha1: Optional[float]
    alpha2: Optional[float]
    beta1: Optional[float]
    beta2: Optional[float]
    hopf1: float
    hopf2: float

    def mu(self, i: int) -> Optional[float]:
        return self.mu1 if i == 1 else self.mu2

    def nu(self, i: int) -> Optional[float]:
        return self.nu1 if i == 1 else self.nu2

    def alpha(self, i: int) -> Optional[float]:
        return self.alpha1 if i == 1 else self.alpha2

    def beta(self, i: int) -> Optional[float]:
        return self.beta1 if i == 1 else self.beta2


def prey_level(a: float, d: float) -> Optional[float]:
    """Prey density zeroing predator growth, ``d/(a-d)``; None if ``a <= d``."""
    if a <= d:
        return None
    return d / (a - d)


def prey_nullcline(x, r: float, K: float, a: float):
    """Predator density on the prey nullcline, ``r(K-x)(1+x)/(aK)``."""
    return r * (K - x) * (1.0 + x) / (a * K)


def cubic_coefficients(params: ModelParams, i: int) -> Optional[tuple[float, float, float]]:
    """Coefficients ``(mu_i + K_i, alpha_i, beta_i)`` of the source-patch cubic.

    Interior equilibria of the reduced model on ``x_j = 0`` have prey density
    ``x`` solving ``x**3 - (mu+K) x**2 - alpha x + beta = 0``.  Returns None when
    the cubic is not defined (``a_i <= d_i``, ``s == 1`` or ``rho_j == 0``, or
    ``rho_j`` so small that the coefficients overflow).
    """
    j = 3 - i
    r, K, a, d, rho_i = params.patch(i)
    _, _, _, d_j, rho_j = params.patch(j)
    s = params.s
    mu = prey_level(a, d)
    if mu is None or s >= 1.0 or rho_j == 0.0:
        return None
    c = a - d
    den = rho_j * (1.0 - s) * r
    # A, B: scaled sink-loss and passive-return terms after clearing denominators
    try:
        A = K * (d_j + rho_j * s) / den
        B = s * rho_i * d_j * K / (den * c)
    except ZeroDivisionError:  # subnormal rho_j
        return None
    alpha = A - B - mu * K
    beta = A * mu + B
    if not (math.isfinite(alpha) and math.isfinite(beta)):
        return None  # rho_j so small that the coefficients overflow
    return mu + K, alpha, beta


def derive(params: ModelParams) -> DerivedParams:
    out = {}
    for i in (1, 2):
        r, K, a, d, _ = params.patch(i)
        mu = prey_level(a, d)
        out[f"mu{i}"] = mu
        out[f"nu{i}"] = None if mu is None else float(prey_nullcline(mu, r, K, a))
        coeffs = cubic_coefficients(params, i)
        out[f"alpha{i}"] = None if coeffs is None else coeffs[1]
        out[f"beta{i}"] = None if coeffs is None else coeffs[2]
        out[f"hopf{i}"] = (K - 1.0) / 2.0
    return DerivedParams(**out)


def _holling(a, x):
    return a * x / (1.0 + x)


def rhs_full(params: ModelParams, state) -> np.ndarray:
    """Time derivative of ``(x1, y1, x2, y2)``."""
    x1, y1, x2, y2 = (float(v) for v in state)
    p = params
    p1 = _holling(p.a1, x1)
    p2 = _holling(p.a2, x2)
    attract = (1.0 - p.s) * y1 * y2 * (p1 - p2)
    passive = p.s * (y2 - y1)
    return np.array([
        p.r1 * x1 * (1.0 - x1 / p.K1) - p1 * y1,
        p1 * y1 - p.d1 * y1 + p.rho1 * attract + p.rho1 * passive,
        p.r2 * x2 * (1.0 - x2 / p.K2) - p2 * y2,
        p2 * y2 - p.d2 * y2 - p.rho2 * attract - p.rho2 * passive,
    ])


def jacobian_full(params: ModelParams, state) -> np.ndarray:
    x1, y1, x2, y2 = (float(v) for v in state)
    p = params
    s = p.s
    p1, p2 = _holling(p.a1, x1), _holling(p.a2, x2)
    dp1, dp2 = p.a1 / (1.0 + x1) ** 2, p.a2 / (1.0 + x2) ** 2
    w = 1.0 - s
    J = np.zeros((4, 4))
    J[0, 0] = p.r1 * (1.0 - 2.0 * x1 / p.K1) - dp1 * y1
    J[0, 1] = -p1
    J[1, 0] = dp1 * y1 * (1.0 + p.rho1 * w * y2)
    J[1, 1] = p1 - p.d1 + p.rho1 * w * y2 * (p1 - p2) - p.rho1 * s
    J[1, 2] = -p.rho1 * w * y1 * y2 * dp2
    J[1, 3] = p.rho1 * w * y1 * (p1 - p2) + p.rho1 * s
    J[2, 2] = p.r2 * (1.0 - 2.0 * x2 / p.K2) - dp2 * y2
    J[2, 3] = -p2
    J[3, 0] = -p.rho2 * w * y1 * y2 * dp1
    J[3, 1] = p.rho2 * w * y2 * (p2 - p1) + p.rho2 * s
    J[3, 2] = dp2 * y2 * (1.0 + p.rho2 * w * y1)
    J[3, 3] = p2 - p.d2 + p.rho2 * w * y1 * (p2 - p1) - p.rho2 * s
    return J


def _check_patch(source_patch: int) -> int:
    if source_patch not in (1, 2):
        raise ValueError(f"source_patch must be 1 or 2, got {source_patch!r}")
    return source_patch


def rhs_sub3(params: ModelParams, source_patch: int, state) -> np.ndarray:
    """Reduced model on the face where the sink patch has no prey."""
    i = _check_patch(source_patch)
    r, K, a, d_i, rho_i = params.patch(i)
    _, _, _, d_j, rho_j = params.patch(3 - i)
    s = params.s
    x, yi, yj = (float(v) for v in state)
    p = _holling(a, x)
    attract = (1.0 - s) * p * yi * yj
    return np.array([
        r * x * (1.0 - x / K) - p * yi,
        p * yi - d_i * yi + rho_i * attract + rho_i * s * (yj - yi),
        -d_j * yj - rho_j * attract - rho_j * s * (yj - yi),
    ])


def jacobian_sub3(params: ModelParams, source_patch: int, state) -> np.ndarray:
    i = _check_patch(source_patch)
    r, K, a, d_i, rho_i = params.patch(i)
    _, _, _, d_j, rho_j = params.patch(3 - i)
    s = params.s
    w = 1.0 - s
    x, yi, yj = (float(v) for v in state)
    p = _holling(a, x)
    dp = a / (1.0 + x) ** 2
    return np.array([
        [r * (1.0 - 2.0 * x / K) - dp * yi, -p, 0.0],
        [dp * yi * (1.0 + rho_i * w * yj), p - d_i + rho_i * w * p * yj - rho_i * s,
         rho_i * w * p * yi + rho_i * s],
        [-rho_j * w * dp * yi * yj, -rho_j * w * p * yj + rho_j * s,
         -d_j - rho_j * w * p * yi - rho_j * s],
    ])


def rhs_single(r: float, K: float, a: float, d: float, x: float, y: float) -> np.ndarray:
    p = _holling(a, x)
    return np.array([r * x * (1.0 - x / K) - p * y, p * y - d * y])


def jacobian_single(r: float, K: float, a: float, d: float, x: float, y: float) -> np.ndarray:
    p = _holling(a, x)
    dp = a / (1.0 + x) ** 2
    return np.array([[r * (1.0 - 2.0 * x / K) - dp * y, -p], [dp * y, p - d]])


def sub3_indices(source_patch: int) -> list[int]:
    """Positions of ``(x_i, y_i, y_j)`` inside the full state vector."""
    return [0, 1, 3] if _check_patch(source_patch) == 1 else [2, 3, 1]


def embed_sub3(source_patch: int, state3) -> np.ndarray:
    """Lift a reduced state onto the full state with ``x_j = 0``."""
    out = np.zeros(4)
    out[sub3_indices(source_patch)] = np.asarray(state3, dtype=float)
    return out


def restrict_sub3(source_patch: int, state4) -> np.ndarray:
    return np.asarray(state4, dtype=float)[sub3_indices(source_patch)]


def reference_params(a1: float = 1.0, d1: float = 0.85, s: float = 0.5, **overrides) -> ModelParams:
    """The asymmetric reference family used throughout the bifurcation study.

    Patch 2 is fixed at ``r=1.8, K=7, a=1.4, d=0.35`` (a stable limit cycle when
    uncoupled); patch 1 has ``K=10`` and the caller chooses ``(a1, d1)``.
    """
    base = dict(r1=1.0, r2=1.8, K1=10.0, K2=7.0, a1=a1, a2=1.4, d1=d1, d2=0.35,
                rho1=1.0, rho2=2.5, s=s)
    base.update(overrides)
    return ModelParams(**base)


def symmetric_params(s: float = 0.5, rho1: float = 1.72, rho2: float = 13.0,
                     a: float = 6.0, d: float = 5.0, K: float = 10.0) -> ModelParams:
    return ModelParams(K1=K, K2=K, a1=a, a2=a, d1=d, d2=d, rho1=rho1, rho2=rho2, s=s,
                       r1=1.0, r2=1.0)
