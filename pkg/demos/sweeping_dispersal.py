"""
Sweeping the passive share of dispersal
=======================================

We move the fraction of predators that disperse passively from 0 to 1 and
watch the interior equilibria appear, change stability and vanish.
"""
import numpy as np

from twopatch import bifurcation as bf
from twopatch import reference_params, symmetric_params

grid = np.linspace(0.0, 0.95, 96)
sweep = bf.sweep1d(reference_params(), bf.FULL, grid)

# A regime table groups the grid into ranges with the same count/label pattern.
for row in bf.regime_table(sweep, [0.0, 0.1, 0.2, 0.45, 0.7, 0.78, 0.83, 0.845, 0.95]):
    flag = " (transitional)" if row.transitional else ""
    print(f"[{row.lo:.3f}, {row.hi:.3f}]  {row.count}  {', '.join(row.labels) or '-'}{flag}")

# In two parameters only the count is kept. A coarse map of the symmetric
# landscape already shows one, two and three interior equilibria.
grid2 = bf.sweep2d(symmetric_params(), ("s", (0.5, 0.95), 10), ("rho1", (0.5, 6.0), 8))
print("\nrows s, columns rho1")
for v, row in zip(grid2.values1, grid2.counts):
    print(f"s = {v:.3f}  " + " ".join(str(c) for c in row))
