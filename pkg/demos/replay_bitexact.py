"""Determinism demo: export a run log, then replay it bit for bit.

Every run is a pure function of its config (seed included). The replay
re-executes the scenario from the logged config and compares all traces
exactly; any nondeterminism in the controller, simulator, or optimizer
would show up as a mismatch here.
"""

import os
import tempfile

from gaitopt.harness import ScenarioConfig, export_log, replay_log, run_scenario

cfg = ScenarioConfig(variant="vmc+tegotae", budget=6, seed=11)
report, records = run_scenario(cfg)
print(f"ran {cfg.budget} trials, last-5 mean objective "
      f"{report.last5['mean_objective']:.3f}")

path = os.path.join(tempfile.mkdtemp(), "run.npz")
export_log(path, cfg, report, records)
print(f"log written to {path} ({os.path.getsize(path) // 1024} KiB)")

ok, message = replay_log(path)
print("replay:", message)
assert ok
