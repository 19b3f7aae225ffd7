"""Desk-scale rigid-body quadruped simulator.

The trunk is a single rigid body; legs are massless two-link chains
whose joints carry a reflected rotor inertia, so the joint dynamics are

    I_j * qdd = tau + J^T f_contact - b * qd  (+ joint-stop torque)

with f_contact the ground reaction on the foot expressed in the trunk
frame.  Ground contact is a penalty model: normal force from a
spring-damper on penetration depth, tangential force viscous in slip
velocity and clamped to the Coulomb cone.  Slopes are modelled by
rotating the terrain plane; world gravity stays fixed.  Integration is
semi-implicit Euler at the control rate.

World frame: z up.  Trunk orientation is a unit quaternion (w, x, y, z);
angular velocity is kept in the body frame.  Euler angles use the
yaw-pitch-roll (ZYX) convention, so walking uphill along +x gives a
negative pitch.
"""

import dataclasses

import numpy as np

from .kinematics import LegGeometry, foot_jacobian, forward_kinematics, inverse_kinematics

GRAVITY = 9.81


class SimulationDiverged(RuntimeError):
    """Raised when the state stops being finite."""


# ---------------------------------------------------------------------------
# quaternion helpers (w, x, y, z)


def quat_to_mat(q: np.ndarray) -> np.ndarray:
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def quat_integrate(q: np.ndarray, omega_body: np.ndarray, dt: float) -> np.ndarray:
    """First-order quaternion update from a body-frame angular velocity."""
    w, x, y, z = q
    ox, oy, oz = omega_body
    dq = 0.5 * np.array(
        [
            -x * ox - y * oy - z * oz,
            w * ox + y * oz - z * oy,
            w * oy - x * oz + z * ox,
            w * oz + x * oy - y * ox,
        ]
    )
    out = q + dq * dt
    norm = np.sqrt(np.dot(out, out))
    if norm < 1e-9:
        raise SimulationDiverged("quaternion collapsed")
    return out / norm


def quat_from_pitch(pitch: float) -> np.ndarray:
    half = 0.5 * pitch
    return np.array([np.cos(half), 0.0, np.sin(half), 0.0])


def euler_zyx(q: np.ndarray) -> tuple[float, float, float]:
    """(roll, pitch, yaw) of the trunk quaternion."""
    w, x, y, z = q
    roll = np.arctan2(2 * (w * x + y * z), 1 - 2 * (x * x + y * y))
    s = np.clip(2 * (w * y - x * z), -1.0, 1.0)
    pitch = np.arcsin(s)
    yaw = np.arctan2(2 * (w * z + x * y), 1 - 2 * (y * y + z * z))
    return float(roll), float(pitch), float(yaw)


# ---------------------------------------------------------------------------


@dataclasses.dataclass
class RobotModel:
    """Trunk, leg mounting and actuation constants."""

    trunk_mass: float = 12.0
    payload_mass: float = 0.0
    trunk_inertia: np.ndarray = dataclasses.field(
        default_factory=lambda: np.array([0.11, 0.24, 0.31])
    )
    hip_x: float = 0.19
    hip_y: float = 0.13
    legs: LegGeometry = dataclasses.field(default_factory=LegGeometry)
    joint_inertia: float = 0.02
    joint_damping: float = 0.01
    torque_limit: float = 25.0
    # slight knee hyperextension is allowed so a straight leg can rest
    # against the stop and lock passively under load
    joint_lower: np.ndarray = dataclasses.field(default_factory=lambda: np.array([-1.7, -0.03]))
    joint_upper: np.ndarray = dataclasses.field(
        default_factory=lambda: np.array([1.7, np.pi - 0.05])
    )
    stop_stiffness: float = 300.0
    stop_damping: float = 3.0

    @property
    def total_mass(self) -> float:
        return self.trunk_mass + self.payload_mass

    def inertia(self) -> np.ndarray:
        """Principal trunk inertia; a payload scales it with the mass."""
        return self.trunk_inertia * (self.total_mass / self.trunk_mass)

    def hip_positions(self) -> np.ndarray:
        """(4, 3) hip mount points in the trunk frame: FR, FL, RR, RL."""
        x, y = self.hip_x, self.hip_y
        return np.array(
            [
                [x, -y, 0.0],
                [x, y, 0.0],
                [-x, -y, 0.0],
                [-x, y, 0.0],
            ]
        )


@dataclasses.dataclass
class Terrain:
    """Planar terrain through the origin, rotated about the world y axis.

    A positive slope_angle raises the surface along +x, so walking in +x
    is walking uphill.
    """

    friction: float = 0.9
    slope_angle: float = 0.0
    contact_stiffness: float = 1.0e4
    contact_damping: float = 300.0
    # kept below the explicit-integration bound c*dt/m_eff < 2 for the
    # reflected foot mass, otherwise standing chatters
    tangent_damping: float = 250.0

    def normal(self) -> np.ndarray:
        return np.array([-np.sin(self.slope_angle), 0.0, np.cos(self.slope_angle)])

    def height(self, x: float, y: float) -> float:
        return x * np.tan(self.slope_angle)


@dataclasses.dataclass
class SimState:
    """Full simulator state plus the contact forces of the last step."""

    pos: np.ndarray
    quat: np.ndarray
    vel: np.ndarray
    omega_body: np.ndarray
    q: np.ndarray          # (4, 2) joint angles
    qd: np.ndarray         # (4, 2) joint velocities
    time: float = 0.0
    foot_forces: np.ndarray = dataclasses.field(default_factory=lambda: np.zeros((4, 3)))
    normal_forces: np.ndarray = dataclasses.field(default_factory=lambda: np.zeros(4))

    def height_above_terrain(self, terrain: Terrain) -> float:
        return float(self.pos @ terrain.normal())


def contact_forces(
    positions: np.ndarray, velocities: np.ndarray, terrain: Terrain
) -> tuple[np.ndarray, np.ndarray]:
    """Penalty contact forces for point feet.

    Args:
        positions: (k, 3) world foot positions.
        velocities: (k, 3) world foot velocities.
        terrain: terrain model.

    Returns:
        (forces (k, 3) world, normal force magnitudes (k,)).
    """
    n = terrain.normal()
    depth = -(positions @ n)
    vn = velocities @ n
    normal = np.where(
        depth > 0.0,
        np.maximum(0.0, terrain.contact_stiffness * depth - terrain.contact_damping * vn),
        0.0,
    )
    vt = velocities - vn[:, None] * n
    ft = -terrain.tangent_damping * vt
    ft_mag = np.sqrt(np.sum(ft * ft, axis=1))
    cone = terrain.friction * normal
    scale = np.minimum(cone / np.maximum(ft_mag, 1e-12), 1.0)
    forces = normal[:, None] * n + ft * scale[:, None]
    forces[normal <= 0.0] = 0.0
    return forces, normal


def contact_force(position: np.ndarray, velocity: np.ndarray, terrain: Terrain):
    """Single-foot convenience wrapper around contact_forces."""
    f, n = contact_forces(position[None, :], velocity[None, :], terrain)
    return f[0], float(n[0])


def _leg_points_and_jacobians(q: np.ndarray, geom: LegGeometry):
    """Foot xz positions and Jacobians for all legs, sharing the trig."""
    hip, knee = q[:, 0], q[:, 1]
    a = hip - knee
    l1, l2 = geom.l_thigh, geom.l_calf
    sh, ch = np.sin(hip), np.cos(hip)
    sa, ca = np.sin(a), np.cos(a)
    x = -l1 * sh - l2 * sa
    z = -l1 * ch - l2 * ca
    jac = np.empty((q.shape[0], 2, 2))
    jac[:, 0, 0] = -l1 * ch - l2 * ca
    jac[:, 0, 1] = l2 * ca
    jac[:, 1, 0] = l1 * sh + l2 * sa
    jac[:, 1, 1] = -l2 * sa
    return x, z, jac


def step(
    state: SimState,
    tau: np.ndarray,
    model: RobotModel,
    terrain: Terrain,
    dt: float = 1e-3,
) -> SimState:
    """Advance the simulator one semi-implicit Euler step.

    Args:
        state: current state.
        tau: commanded joint torques, shape (4, 2); clamped to the
            actuator limit.
        model, terrain: robot and terrain description.
        dt: time step [s].

    Returns:
        The next state, with the contact forces used during the step
        cached on it (these are what force feedback reads next tick).

    Raises:
        SimulationDiverged: if any state entry stops being finite.
    """
    tau = np.clip(np.asarray(tau, dtype=float), -model.torque_limit, model.torque_limit)
    if tau.shape != (4, 2):
        raise ValueError("tau must have shape (4, 2)")
    if not np.all(np.isfinite(tau)):
        raise SimulationDiverged("non-finite torque command")

    rot = quat_to_mat(state.quat)
    hips = model.hip_positions()
    x, z, jac = _leg_points_and_jacobians(state.q, model.legs)

    feet_trunk = hips.copy()
    feet_trunk[:, 0] += x
    feet_trunk[:, 2] += z
    feet_world = state.pos + feet_trunk @ rot.T

    joint_vel_xz = (jac @ state.qd[:, :, None])[:, :, 0]
    v_trunk = np.cross(state.omega_body, feet_trunk)
    v_trunk[:, 0] += joint_vel_xz[:, 0]
    v_trunk[:, 2] += joint_vel_xz[:, 1]
    feet_vel_world = state.vel + v_trunk @ rot.T

    forces, normal = contact_forces(feet_world, feet_vel_world, terrain)

    # trunk Newton-Euler about its COM
    m = model.total_mass
    acc = forces.sum(axis=0) / m
    acc[2] -= GRAVITY
    moment_world = np.cross(feet_world - state.pos, forces).sum(axis=0)
    moment_body = rot.T @ moment_world
    inertia = model.inertia()
    omega = state.omega_body
    omega_dot = (moment_body - np.cross(omega, inertia * omega)) / inertia

    # joint dynamics with reflected rotor inertia
    f_trunk = forces @ rot
    f_xz = f_trunk[:, [0, 2]]
    tau_contact = (jac.transpose(0, 2, 1) @ f_xz[:, :, None])[:, :, 0]
    below = state.q < model.joint_lower
    above = state.q > model.joint_upper
    tau_stop = np.where(
        below, model.stop_stiffness * (model.joint_lower - state.q), 0.0
    ) + np.where(above, model.stop_stiffness * (model.joint_upper - state.q), 0.0)
    tau_stop -= np.where(below | above, model.stop_damping * state.qd, 0.0)
    qdd = (tau + tau_contact + tau_stop - model.joint_damping * state.qd) / model.joint_inertia

    vel = state.vel + acc * dt
    pos = state.pos + vel * dt
    omega_new = omega + omega_dot * dt
    quat = quat_integrate(state.quat, omega_new, dt)
    qd = state.qd + qdd * dt
    q = state.q + qd * dt

    if not (
        np.all(np.isfinite(pos))
        and np.all(np.isfinite(vel))
        and np.all(np.isfinite(omega_new))
        and np.all(np.isfinite(q))
        and np.all(np.isfinite(qd))
    ):
        raise SimulationDiverged(f"state diverged at t={state.time:.3f}")

    return SimState(
        pos=pos,
        quat=quat,
        vel=vel,
        omega_body=omega_new,
        q=q,
        qd=qd,
        time=state.time + dt,
        foot_forces=forces,
        normal_forces=normal,
    )


def configure(
    model: RobotModel,
    terrain: Terrain,
    friction: float | None = None,
    slope_angle: float | None = None,
    payload_mass: float | None = None,
) -> tuple[RobotModel, Terrain]:
    """Return copies with terrain friction/slope and payload updated."""
    if friction is not None:
        terrain = dataclasses.replace(terrain, friction=float(friction))
    if slope_angle is not None:
        terrain = dataclasses.replace(terrain, slope_angle=float(slope_angle))
    if payload_mass is not None:
        if payload_mass < 0:
            raise ValueError("payload_mass must be non-negative")
        model = dataclasses.replace(model, payload_mass=float(payload_mass))
    return model, terrain


def make_standing_state(
    model: RobotModel,
    terrain: Terrain,
    x_offsets: np.ndarray,
    height: float,
    preload: float = 0.002,
) -> SimState:
    """Standing state with all feet seated on the terrain surface.

    The trunk is aligned with the slope so every foot touches down
    simultaneously; a small preload sinks the feet into the penalty
    contact so the stance starts loaded.
    """
    x_offsets = np.broadcast_to(np.asarray(x_offsets, dtype=float), (4,))
    targets = np.stack([x_offsets, np.full(4, -height)], axis=1)
    q = inverse_kinematics(targets, model.legs)
    n = terrain.normal()
    pos = n * (height - preload)
    quat = quat_from_pitch(-terrain.slope_angle)
    return SimState(
        pos=pos,
        quat=quat,
        vel=np.zeros(3),
        omega_body=np.zeros(3),
        q=q,
        qd=np.zeros((4, 2)),
    )
