"""Coupled-oscillator gait pattern generator.

A network of four amplitude-controlled phase oscillators, one per leg,
produces rhythmic foot position targets.  Legs are indexed

    0: front right, 1: front left, 2: rear right, 3: rear left.

Each oscillator carries an amplitude ``r`` and a phase ``theta``.  The
amplitude relaxes to the setpoint ``mu``; the phase advances at a
swing or stance rate depending on the half cycle, is pulled toward the
gait pattern by phase coupling, and is slowed or sped up by measured
foot loading (force feedback).  Phases live in [0, 2*pi); sin(theta) > 0
is the swing half of the cycle.
"""

import dataclasses

import numpy as np

NUM_LEGS = 4

# Optimised gait parameters, in the order used by vectors handed to the
# optimiser.  The remaining CpgParams fields stay fixed during a run.
OPT_PARAM_NAMES = (
    "ground_clearance",
    "ground_penetration",
    "omega_swing",
    "omega_stance",
    "mu",
    "x_offset_front",
    "x_offset_hind",
    "sigma_force",
)


def trot_coupling() -> np.ndarray:
    """Phase-offset matrix for a trot: diagonal pairs in phase, lateral
    and fore/aft neighbours in anti-phase."""
    pi = np.pi
    return np.array(
        [
            [0.0, pi, pi, 0.0],
            [-pi, 0.0, 0.0, -pi],
            [-pi, 0.0, 0.0, -pi],
            [0.0, pi, pi, 0.0],
        ]
    )


@dataclasses.dataclass
class CpgParams:
    """Gait generator parameters.

    The eight fields named in OPT_PARAM_NAMES are searched online by the
    optimiser; everything else is a fixed design constant.

    Attributes:
        mu: amplitude setpoint of every oscillator.
        omega_swing: phase rate during the swing half cycle [rad/s].
        omega_stance: phase rate during the stance half cycle [rad/s].
        alpha: amplitude convergence gain.
        sigma_force: gain of the normal-force phase feedback; 0 disables it.
        ground_clearance: swing foot apex height above the neutral line [m].
        ground_penetration: stance foot press depth below the neutral line [m].
        step_length: half stride scaling of the fore/aft foot sweep [m].
        body_height: nominal hip height above the foot neutral line [m].
        x_offset_front: fore/aft neutral offset of the front feet [m].
        x_offset_hind: fore/aft neutral offset of the hind feet [m].
        coupling_weights: 4x4 coupling strengths w[i, j].
        coupling_phases: 4x4 phase offsets phi[i, j] (trot by default).
    """

    mu: float = 1.3
    omega_swing: float = 19.0
    omega_stance: float = 12.0
    alpha: float = 50.0
    sigma_force: float = 0.15
    ground_clearance: float = 0.08
    ground_penetration: float = 0.01
    step_length: float = 0.05
    body_height: float = 0.3
    x_offset_front: float = -0.035
    x_offset_hind: float = -0.035
    coupling_weights: np.ndarray = dataclasses.field(
        default_factory=lambda: np.ones((NUM_LEGS, NUM_LEGS))
    )
    coupling_phases: np.ndarray = dataclasses.field(default_factory=trot_coupling)

    def x_offsets(self) -> np.ndarray:
        """Per-leg fore/aft neutral offsets (front, front, hind, hind)."""
        return np.array(
            [
                self.x_offset_front,
                self.x_offset_front,
                self.x_offset_hind,
                self.x_offset_hind,
            ]
        )

    def opt_vector(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in OPT_PARAM_NAMES])

    def with_opt_vector(self, x: np.ndarray) -> "CpgParams":
        x = np.asarray(x, dtype=float)
        if x.shape != (len(OPT_PARAM_NAMES),):
            raise ValueError(f"expected {len(OPT_PARAM_NAMES)} parameters, got {x.shape}")
        return dataclasses.replace(self, **dict(zip(OPT_PARAM_NAMES, x)))


@dataclasses.dataclass
class OscillatorNetworkState:
    """Amplitudes and phases of the four leg oscillators."""

    r: np.ndarray
    theta: np.ndarray

    @staticmethod
    def initial(phases: np.ndarray | None = None, r0: float = 0.3) -> "OscillatorNetworkState":
        """Trot-patterned phases and a small starting amplitude by default."""
        if phases is None:
            phases = np.array([0.0, np.pi, np.pi, 0.0])
        return OscillatorNetworkState(
            r=np.full(NUM_LEGS, float(r0)), theta=np.mod(np.asarray(phases, dtype=float), 2 * np.pi)
        )


def step_network(
    state: OscillatorNetworkState,
    params: CpgParams,
    normal_forces: np.ndarray,
    dt: float,
) -> OscillatorNetworkState:
    """Advance the oscillator network one explicit-Euler step.

    Args:
        state: current amplitudes and phases.
        params: gait parameters.
        normal_forces: measured foot normal forces [N], shape (4,).  Only
            used when params.sigma_force is nonzero.
        dt: integration step [s].

    Returns:
        The new network state.  Amplitudes are clamped non-negative and
        phases wrapped to [0, 2*pi).
    """
    forces = np.asarray(normal_forces, dtype=float)
    if forces.shape != (NUM_LEGS,) or not np.all(np.isfinite(forces)):
        raise ValueError("normal_forces must be four finite values")
    r, theta = state.r, state.theta

    r_dot = params.alpha * (params.mu**2 - r**2) * r

    omega = np.where(np.sin(theta) > 0.0, params.omega_swing, params.omega_stance)
    # coupling term: sum_j r_j w[i,j] sin(theta_j - theta_i - phi[i,j])
    phase_diff = theta[None, :] - theta[:, None] - params.coupling_phases
    coupling = (params.coupling_weights * np.sin(phase_diff)) @ r
    feedback = params.sigma_force * forces * np.cos(theta)
    theta_dot = omega + coupling - feedback

    r_new = np.maximum(r + r_dot * dt, 0.0)
    theta_new = np.mod(theta + theta_dot * dt, 2 * np.pi)
    return OscillatorNetworkState(r=r_new, theta=theta_new)


def foot_targets(state: OscillatorNetworkState, params: CpgParams) -> np.ndarray:
    """Map oscillator states to foot position targets in each hip frame.

    Returns:
        Array (4, 2) of [x, z] per leg: x sweeps fore/aft around the
        neutral offset, z lifts by ground_clearance during swing
        (sin(theta) > 0) and presses by ground_penetration during stance.
    """
    s = np.sin(state.theta)
    x = params.x_offsets() - params.step_length * state.r * np.cos(state.theta)
    height_gain = np.where(s > 0.0, params.ground_clearance, params.ground_penetration)
    z = -params.body_height + height_gain * s
    return np.stack([x, z], axis=1)
