"""Small end-to-end optimization run on flat ground.

Twelve trials keep the demo under a minute; the shipped configuration in
demos/scenario.yaml runs the full 40-trial budget through the CLI
(`gaitopt optimize demos/scenario.yaml --out-dir runs/demo`).
"""

import numpy as np

from gaitopt.harness import ScenarioConfig, run_scenario

cfg = ScenarioConfig(variant="vmc+tegotae", budget=12, seed=0)
report, records = run_scenario(cfg)

print("trial  kind      beta   objective   mean_vx    CoT")
for row in report.rows:
    flag = " (fell)" if row["aborted"] else ""
    print(
        f"{row['trial']:>5}  {row['kind']:<8} {row['beta']:5.2f}  "
        f"{row['objective']:9.3f}  {row['mean_vx']:8.3f}  {row['cot']:5.2f}{flag}"
    )

first = [r["objective"] for r in report.rows[:5]]
print(f"\nfirst-5 mean objective  {np.mean(first):.3f}")
print(f"last-5  mean objective  {report.last5['mean_objective']:.3f}")
print(f"last-5  mean speed      {report.last5['mean_vx']:.3f} m/s (target 0.5)")
print(f"wall time               {report.wall_time_s:.1f} s")
