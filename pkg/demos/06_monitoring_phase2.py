"""End-to-end monitoring with the command-line tool: fit limits from a
Phase I file, then check a Phase II stream that drifts downward (events
arriving faster).

Run:  python demos/06_monitoring_phase2.py
"""
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from weibull_tbe import WeibullParams, sample

rng = np.random.default_rng(3)
work = Path(tempfile.mkdtemp())
phase1 = work / "phase1.csv"
phase2 = work / "phase2.csv"
phase1.write_text("# Phase I gaps, hours\n" + "\n".join(f"{v:.4f}" for v in sample(WeibullParams(1.5, 40.0), rng, 100)))
gaps = np.concatenate([sample(WeibullParams(1.5, 40.0), rng, 60), sample(WeibullParams(1.5, 2.0), rng, 40)])
phase2.write_text("\n".join(f"{v:.4f}" for v in gaps))

cli = [sys.executable, "-m", "weibull_tbe"]
design = work / "design.json"
subprocess.run(cli + ["design", "--alpha", "0.0027", "--eta", "1.5", "--phase1", str(phase1),
                      "--format", "json", "--out", str(design)], check=True)
print(design.read_text())
done = subprocess.run(cli + ["monitor", "--design", str(design), "--data", str(phase2), "--format", "table"],
                      capture_output=True, text=True)
flagged = [line for line in done.stdout.splitlines() if "lcl" in line or "ucl" in line]
print("\n".join(flagged[:10]))
print(done.stderr.strip(), "| exit code", done.returncode)
