"""Watch the oscillator network settle into a trot, without any physics.

Prints the amplitude convergence and then one full gait cycle of foot
targets for the front-right leg, so you can see the swing arc and the
stance press that the simulator later turns into joint angles.
"""

import numpy as np

from gaitopt.cpg import CpgParams, OscillatorNetworkState, foot_targets, step_network

DT = 1e-3
params = CpgParams()
state = OscillatorNetworkState.initial(r0=0.1)
no_force = np.zeros(4)

print("amplitude convergence toward mu =", params.mu)
for k in range(1, 501):
    state = step_network(state, params, no_force, DT)
    if k in (5, 10, 20, 40, 80, 500):
        print(f"  t={k * DT:.3f}s  r={np.array2string(state.r, precision=4)}")

# phase differences against the front-right leg, in units of pi
rel = (state.theta - state.theta[0]) / np.pi % 2
print("phase offsets vs FR [pi]:", np.array2string(rel, precision=3))

print("\none cycle of front-right foot targets (hip frame):")
print("  phase      x [m]     z [m]   half-cycle")
period = 2 * np.pi / params.omega_swing + 2 * np.pi / params.omega_stance
steps = int(period / DT)
for k in range(steps):
    state = step_network(state, params, no_force, DT)
    if k % (steps // 8) == 0:
        x, z = foot_targets(state, params)[0]
        half = "swing " if np.sin(state.theta[0]) > 0 else "stance"
        print(f"  {state.theta[0]:5.2f}  {x:9.4f}  {z:8.4f}   {half}")
