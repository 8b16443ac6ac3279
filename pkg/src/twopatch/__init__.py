"""Two-patch predator-prey model with mixed predator dispersal.

Submodules: ``model`` (parameters, vector fields, Jacobians), ``equilibria``,
``stability``, ``integrate``, ``bifurcation`` and ``io``/``cli``.
"""
from .model import (DerivedParams, ModelParams, derive, jacobian_full, jacobian_single,
                    jacobian_sub3, reference_params, rhs_full, rhs_single, rhs_sub3,
                    symmetric_params)
from .stability import (StabilityLabel, classify, ek1k2_closed_form, persistence_report,
                        single_patch_regime, symmetric_interior_stability)
from .equilibria import (EquilibriumRecord, all_equilibria, interior_equilibria,
                         mixed_boundary_equilibria, special_case_equilibria, subsystem_cubic,
                         subsystem_interiors, symmetric_interior, trivial_boundaries)
from .integrate import IntegrationConfig, TrajectorySummary, basin_probe, integrate, integrate_sub3
from .bifurcation import regime_table, sweep1d, sweep2d

__version__ = "0.1.0"
