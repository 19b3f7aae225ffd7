"""What the context estimator sees: load from foot forces, slope from pitch.

Walks the same gait on flat ground, uphill, and with a trunk payload.
The per-leg force average tracks total weight / 4 and the mean pitch
tracks the incline, which is exactly the pair the optimizer conditions
its surrogate on.
"""

from gaitopt.cpg import CpgParams
from gaitopt.harness import SimSession, TrialProtocol, run_trial
from gaitopt.objective import estimate_context
from gaitopt.sim import RobotModel, Terrain, configure

CASES = {
    "flat, no payload": dict(),
    "10 deg uphill": dict(slope_angle=0.1745),
    "8 kg payload": dict(payload_mass=8.0),
}

params = CpgParams().opt_vector()
print(f"{'condition':<18} {'load [N]':>9} {'slope est':>10}  note")
for name, kw in CASES.items():
    model, terrain = configure(RobotModel(), Terrain(), **kw)
    session = SimSession(model, terrain, params)
    rec = run_trial(session, params, 0.5, "vmc+tegotae", TrialProtocol())
    ctx = estimate_context(rec.foot_forces, rec.pitch)
    note = "fell" if rec.aborted else f"weight/4 = {model.total_mass * 9.81 / 4:.1f} N"
    print(f"{name:<18} {ctx.load:>9.2f} {ctx.slope:>10.3f}  {note}")
