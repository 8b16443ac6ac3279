"""
One patch on its own
====================

Without dispersal each patch is a Rosenzweig-MacArthur system. Its long-run
behaviour depends only on where the predator's break-even prey level sits
relative to the carrying capacity.
"""
from twopatch.stability import hopf_death_rate, single_patch_regime, single_patch_trace

# Patch 2 of the reference landscape oscillates, patch 1 settles down.
for name, args in [("patch 2", (1.8, 7.0, 1.4, 0.35)), ("patch 1", (1.0, 10.0, 1.0, 0.85)),
                   ("harsh patch", (1.0, 10.0, 2.1, 2.0))]:
    print(f"{name:12s} {single_patch_regime(*args)}")

# Raising the predator death rate moves the equilibrium right until the
# Jacobian trace changes sign. Bisection finds the crossing.
r, K, a = 1.0, 10.0, 1.0
d_star = hopf_death_rate(r, K, a)
print(f"\ntrace flips sign at d = {d_star:.10f}, prey level {d_star / (a - d_star):.10f}")
for d in (d_star - 0.01, d_star + 0.01):
    print(f"  d = {d:.4f}: trace {single_patch_trace(r, K, a, d):+.5f}")
