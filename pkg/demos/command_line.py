"""
Driving the command line from Python
====================================

The ``twopatch`` command reads a flat ``section.key = value`` file and writes
CSV or NDJSON that the library can read back without loss.
"""
import tempfile
from pathlib import Path

from twopatch import cli, io
from twopatch.bifurcation import regime_table

workdir = Path(tempfile.mkdtemp())
config = workdir / "table.cfg"
config.write_text("""\
params.r1 = 1
params.r2 = 1.8
params.K1 = 10
params.K2 = 7
params.a1 = 1
params.a2 = 1.4
params.d1 = 0.85
params.d2 = 0.35
params.rho1 = 1
params.rho2 = 2.5
params.s = 0.5
sweep1d.family = subsystem-interior
sweep1d.source_patch = 2
sweep1d.start = 0
sweep1d.stop = 0.95
sweep1d.n = 191
""")

out = workdir / "face2.csv"
code = cli.main(["sweep1d", "--config", str(config), "--out", str(out)])
print("exit code", code, "->", out)

# Rebuild the sweep from the file and summarise it.
rows, footers = io.read_table(out)
sweep = cli.sweep1d_from_rows(rows)
for row in regime_table(sweep, [0.0, 0.1, 0.45, 0.595, 0.8, 0.83, 0.95]):
    print(f"[{row.lo}, {row.hi}]  {row.count}  {', '.join(row.labels) or '-'}"
          + ("  (transitional)" if row.transitional else ""))
