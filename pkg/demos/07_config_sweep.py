"""
Config-driven runs from a script
================================

The command-line workbench reads INI files.  Here a small beta sweep is
written to a temporary directory and each run drops a JSON artifact.
Equivalent shell usage:

    suppression integrate --config run.ini --format json --out results/
"""

# %%
import io
import json
import tempfile
from pathlib import Path

from suppression.cli import run

# %%
workdir = Path(tempfile.mkdtemp())
for beta in (0.75, 1.0, 2.0, 3.0):
    cfg = workdir / f"beta_{beta}.ini"
    cfg.write_text(f"[regulator]\nbeta = {beta}\ndim = 2\n[integral]\nalpha_growth = 1\n")
    out_dir = workdir / f"out_{beta}"
    err = io.StringIO()
    code = run(["integrate", "--config", str(cfg), "--format", "json", "--out", str(out_dir)],
               stdout=io.StringIO(), stderr=err)
    if code == 0:
        summary = json.loads((out_dir / "integrate.json").read_text())["summary"]
        print(f"beta={beta}: value={summary['value']:.10f} ({summary['status']})")
    else:
        print(f"beta={beta}: exit {code}: {err.getvalue().strip()}")
