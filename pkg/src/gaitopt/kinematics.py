"""Planar two-link leg kinematics and joint-level PD control.

Each leg is a hip-pitch + knee chain moving the foot in the hip's
sagittal (x-z) plane.  Conventions:

  * q = (hip_pitch, knee), both in radians.
  * q = (0, 0) puts the foot straight below the hip at z = -(l_thigh+l_calf).
  * positive hip pitch swings the foot backward (-x).
  * the knee angle folds the calf in the knee-backward sense and is
    restricted to [0, pi]; 0 is the straight leg.

All functions broadcast over leading axes, so q may be (2,) for one leg
or (4, 2) for the whole robot.
"""

import dataclasses

import numpy as np


class OutOfWorkspaceError(ValueError):
    """Foot target outside the annulus reachable by the two links."""


@dataclasses.dataclass
class LegGeometry:
    l_thigh: float = 0.213
    l_calf: float = 0.213

    @property
    def max_reach(self) -> float:
        return self.l_thigh + self.l_calf

    @property
    def min_reach(self) -> float:
        return abs(self.l_thigh - self.l_calf)


@dataclasses.dataclass
class JointState:
    """Angles and angular velocities for one leg."""

    q: np.ndarray
    qd: np.ndarray


@dataclasses.dataclass
class JointGains:
    kp: float = 70.0
    kd: float = 1.3


def forward_kinematics(q: np.ndarray, geom: LegGeometry = LegGeometry()) -> np.ndarray:
    """Foot position [x, z] in the hip frame for joint angles q."""
    q = np.asarray(q, dtype=float)
    hip, knee = q[..., 0], q[..., 1]
    a = hip - knee
    x = -geom.l_thigh * np.sin(hip) - geom.l_calf * np.sin(a)
    z = -geom.l_thigh * np.cos(hip) - geom.l_calf * np.cos(a)
    return np.stack([x, z], axis=-1)


def inverse_kinematics(target: np.ndarray, geom: LegGeometry = LegGeometry()) -> np.ndarray:
    """Joint angles reaching the foot target [x, z], knee-backward branch.

    Raises:
        OutOfWorkspaceError: if the target lies outside the reachable
            annulus (boundary points are valid).
    """
    target = np.asarray(target, dtype=float)
    x, z = target[..., 0], target[..., 1]
    rho2 = x * x + z * z
    l1, l2 = geom.l_thigh, geom.l_calf
    cos_knee = (rho2 - l1 * l1 - l2 * l2) / (2.0 * l1 * l2)
    # tolerate only float roundoff at the workspace boundary
    if np.any(np.abs(cos_knee) > 1.0 + 1e-9):
        raise OutOfWorkspaceError(
            f"target radius {np.sqrt(np.max(rho2)):.4f} outside "
            f"[{geom.min_reach:.4f}, {geom.max_reach:.4f}]"
        )
    knee = np.arccos(np.clip(cos_knee, -1.0, 1.0))
    delta = np.arctan2(l2 * np.sin(knee), l1 + l2 * np.cos(knee))
    hip = delta + np.arctan2(-x, -z)
    return np.stack([hip, knee], axis=-1)


def foot_jacobian(q: np.ndarray, geom: LegGeometry = LegGeometry()) -> np.ndarray:
    """Jacobian d[x, z]/d[hip, knee], shape (..., 2, 2)."""
    q = np.asarray(q, dtype=float)
    hip, knee = q[..., 0], q[..., 1]
    a = hip - knee
    l1, l2 = geom.l_thigh, geom.l_calf
    dx_dhip = -l1 * np.cos(hip) - l2 * np.cos(a)
    dx_dknee = l2 * np.cos(a)
    dz_dhip = l1 * np.sin(hip) + l2 * np.sin(a)
    dz_dknee = -l2 * np.sin(a)
    row_x = np.stack([dx_dhip, dx_dknee], axis=-1)
    row_z = np.stack([dz_dhip, dz_dknee], axis=-1)
    return np.stack([row_x, row_z], axis=-2)


def pd_torque(
    q_ref: np.ndarray,
    qd_ref: np.ndarray,
    q: np.ndarray,
    qd: np.ndarray,
    gains: JointGains = JointGains(),
) -> np.ndarray:
    """Joint PD law kp*(q_ref - q) + kd*(qd_ref - qd)."""
    return gains.kp * (np.asarray(q_ref) - np.asarray(q)) + gains.kd * (
        np.asarray(qd_ref) - np.asarray(qd)
    )


def clamp_to_workspace(target: np.ndarray, geom: LegGeometry = LegGeometry(), margin: float = 1e-4) -> np.ndarray:
    """Radially clamp foot targets into the reachable annulus."""
    target = np.asarray(target, dtype=float)
    rho = np.linalg.norm(target, axis=-1, keepdims=True)
    lo = geom.min_reach + margin
    hi = geom.max_reach - margin
    safe_rho = np.where(rho < 1e-12, 1.0, rho)
    scale = np.clip(rho, lo, hi) / safe_rho
    return target * scale
