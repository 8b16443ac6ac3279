"""
Where the equilibria are
========================

The two-patch model has up to four trivial equilibria, four on the faces
where one prey is absent, and up to three in the interior. This script lists
them for one parameter set and shows how the face equilibria come from a
cubic in the source-patch prey.
"""
import numpy as np

from twopatch import all_equilibria, reference_params, subsystem_cubic

# The face with no prey in patch 2 gets its prey level from a cubic. Only
# roots between the predator break-even level and the capacity are admissible.
rep = subsystem_cubic(reference_params(s=0.3), 1)
print("cubic roots :", np.round(rep.real_roots, 6))
print("admissible  :", np.round(rep.roots_in_window, 6), f"(window {rep.mu:.4f} .. {rep.K})")

# Everything at once, with the eigenvalue label of each point. At this mix of
# dispersal modes the interior holds three equilibria.
params = reference_params(s=0.835)
print()
for rec in all_equilibria(params):
    state = ", ".join(f"{v:8.4f}" for v in rec.state)
    print(f"{rec.cls:22s} ({state})  {rec.label:7s} {rec.provenance}")
