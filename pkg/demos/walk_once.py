"""Run one trial of the full controller on flat ground and print what happened.

The robot stands, blends into the default gait over 1.5 s, then walks a
3 s scored window. Expect roughly 0.5 m/s forward speed at a cost of
transport near 1.2 with the stock parameters.
"""

import numpy as np

from gaitopt.cpg import CpgParams
from gaitopt.harness import SimSession, TrialProtocol, run_trial
from gaitopt.objective import ObjectiveConfig, cost_of_transport, objective_value
from gaitopt.sim import RobotModel, Terrain

VARIANT = "vmc+tegotae"
TARGET_SPEED = 0.5  # m/s

params = CpgParams().opt_vector()
session = SimSession(RobotModel(), Terrain(), params)
record = run_trial(session, params, TARGET_SPEED, VARIANT, TrialProtocol())

cfg = ObjectiveConfig()
cot = cost_of_transport(
    record.torques, record.joint_velocities, cfg.dt, record.mass, record.distance
)
vx = record.velocities[:, 0]

print(f"variant          {VARIANT}")
print(f"aborted          {record.aborted}")
print(f"distance         {record.distance:.3f} m in 3.0 s")
print(f"forward speed    {vx.mean():.3f} m/s (target {TARGET_SPEED})")
print(f"speed std        {vx.std():.3f} m/s")
print(f"cost of transport {cot:.3f}")
print(f"objective        {objective_value(record, cfg):.3f}")
print(f"peak |pitch|     {np.abs(record.pitch).max():.3f} rad")
