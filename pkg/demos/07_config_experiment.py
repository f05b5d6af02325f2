"""
Config-driven experiment runs
=============================

The same runs are available from the shell, e.g.

    faregame sweep --config configs/benchmark.yaml --out out/sweep
    faregame stability --config configs/benchmark.yaml --out out/stability
    faregame montecarlo --config configs/benchmark.yaml --out out/mc
    faregame bounds --K 100 --T 200 --r 0.04
"""
import json
import sys
import tempfile
from pathlib import Path

from faregame.cli import main
from faregame.harness import read_csv

config = Path(__file__).resolve().parents[1] / "configs" / "benchmark.yaml"
with tempfile.TemporaryDirectory() as tmp:
    code = main(["sweep", "--config", str(config), "--epsilon-sweep", "0,0.4", "--out", tmp])
    print(f"exit status {code}")
    manifest = json.loads((Path(tmp) / "manifest.json").read_text())
    for run in manifest["runs"]:
        print(f"  eps={run['epsilon']}: converged={run['converged']} in {run['iterations']} iterations,"
              f" C2={run['bounds']['C2']:.4g}, below C2: {run['bounds']['epsilon_below_C2']}")
    market = read_csv(Path(tmp) / "eps_0.4" / "market.csv")
    print(f"  market.csv columns {list(market)}; p_bar(0) = {market['p_bar'][0]:.6f}")
    for f in sorted((Path(tmp) / "eps_0.4").iterdir()):
        print(f"  {f.name:18s} {f.stat().st_size:>10d} bytes")
sys.exit(code)
