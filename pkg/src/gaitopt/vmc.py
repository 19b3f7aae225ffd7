"""Virtual-model trunk attitude control.

A spring-damper law on trunk roll, pitch and yaw produces a corrective
moment, which is realised by distributing forces over the stance feet
and mapping them to sagittal joint torques.  Swing legs receive zero.
"""

import dataclasses

import numpy as np

from .cpg import NUM_LEGS


@dataclasses.dataclass
class VmcGains:
    """Per-axis attitude stiffness; damping is a fixed fraction of it."""

    k_roll: float = 150.0
    k_pitch: float = 160.0
    k_yaw: float = 300.0
    damping_fraction: float = 0.1

    def stiffness(self) -> np.ndarray:
        return np.array([self.k_roll, self.k_pitch, self.k_yaw])

    def damping(self) -> np.ndarray:
        return self.damping_fraction * self.stiffness()


@dataclasses.dataclass
class TrunkAttitude:
    roll: float
    pitch: float
    yaw: float
    roll_rate: float = 0.0
    pitch_rate: float = 0.0
    yaw_rate: float = 0.0

    def angles(self) -> np.ndarray:
        return np.array([self.roll, self.pitch, self.yaw])

    def rates(self) -> np.ndarray:
        return np.array([self.roll_rate, self.pitch_rate, self.yaw_rate])


def vmc_wrench(
    attitude: TrunkAttitude,
    target: np.ndarray | None = None,
    gains: VmcGains = VmcGains(),
) -> np.ndarray:
    """Corrective trunk moment [roll, pitch, yaw] from the spring-damper law."""
    if target is None:
        target = np.zeros(3)
    err = np.asarray(target, dtype=float) - attitude.angles()
    return gains.stiffness() * err - gains.damping() * attitude.rates()


def _skew(p: np.ndarray) -> np.ndarray:
    return np.array(
        [
            [0.0, -p[2], p[1]],
            [p[2], 0.0, -p[0]],
            [-p[1], p[0], 0.0],
        ]
    )


def distribute_wrench(
    wrench: np.ndarray,
    foot_positions: np.ndarray,
    stance: np.ndarray,
) -> np.ndarray:
    """Minimum-norm stance-foot reaction forces producing a trunk moment.

    Solves sum_i p_i x F_i = wrench for the stance feet in the
    least-squares, minimum-norm sense (F is the ground reaction acting
    on the robot, p_i the foot position relative to the trunk COM).

    Returns:
        (4, 3) forces; swing legs are zero rows.
    """
    forces = np.zeros((NUM_LEGS, 3))
    idx = np.flatnonzero(stance)
    if idx.size == 0:
        return forces
    a = np.hstack([_skew(foot_positions[i]) for i in idx])
    # minimum-norm solution via the 3x3 normal equations; the tiny ridge
    # keeps degenerate stance geometries (single foot, collinear feet)
    # bounded instead of raising
    gram = a @ a.T
    ridge = 1e-9 * max(np.trace(gram), 1.0)
    sol = np.linalg.solve(gram + ridge * np.eye(3), np.asarray(wrench, dtype=float))
    forces[idx] = (a.T @ sol).reshape(-1, 3)
    return forces


def vmc_joint_torques(
    wrench: np.ndarray,
    foot_positions: np.ndarray,
    stance: np.ndarray,
    jacobians: np.ndarray,
) -> np.ndarray:
    """Sagittal joint torques realising a corrective trunk moment.

    The moment is distributed as stance-foot reaction forces F_i; the
    motor torque whose quasi-static ground reaction equals F_i is
    -J^T F_i (pushing the foot against the ground harder than the
    nominal gait does).

    Args:
        wrench: desired trunk moment [roll, pitch, yaw].
        foot_positions: (4, 3) foot positions relative to the trunk COM,
            trunk frame.
        stance: (4,) boolean stance flags.
        jacobians: (4, 2, 2) sagittal foot Jacobians.

    Returns:
        (4, 2) joint torques, zero for swing legs.
    """
    forces = distribute_wrench(wrench, foot_positions, stance)
    sagittal = forces[:, [0, 2]]
    tau = -np.einsum("lab,la->lb", jacobians, sagittal)
    tau[~np.asarray(stance, dtype=bool)] = 0.0
    return tau
