"""Why the feedback terms earn their keep: carry 8 kg with each variant.

Same mid-range gait parameters, same terrain, one trial each. On easy
flat ground all four variants look alike; the payload is what separates
them. Force feedback retimes stance under load, posture control damps
the wobble, and the open-loop controller usually goes down.
"""

from gaitopt.cpg import CpgParams
from gaitopt.harness import VARIANTS, SimSession, TrialProtocol, run_trial
from gaitopt.objective import ObjectiveConfig, cost_of_transport, objective_value
from gaitopt.sim import RobotModel, Terrain, configure

PAYLOAD = 8.0  # kg on a 12 kg trunk

params = CpgParams().opt_vector()
cfg = ObjectiveConfig()
print(f"carrying {PAYLOAD:.0f} kg, identical parameters:\n")
print(f"{'variant':<14} {'objective':>9} {'CoT':>6} {'vx':>7}")
for variant in VARIANTS:
    model, terrain = configure(RobotModel(), Terrain(), payload_mass=PAYLOAD)
    session = SimSession(model, terrain, params)
    rec = run_trial(session, params, 0.5, variant, TrialProtocol())
    if rec.aborted:
        print(f"{variant:<14} {'fell':>9}")
        continue
    cot = cost_of_transport(rec.torques, rec.joint_velocities, cfg.dt, rec.mass, rec.distance)
    print(
        f"{variant:<14} {objective_value(rec, cfg):>9.3f} {cot:>6.2f} "
        f"{rec.velocities[:, 0].mean():>7.3f}"
    )
