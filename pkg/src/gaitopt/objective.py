"""Trial scoring, context estimation and normalisation.

A trial is scored from its steady-state traces only: a saturating
velocity-tracking reward accumulated per control tick minus a weighted
cost of transport.  The environment context (mean foot load, mean trunk
pitch) is estimated from the same traces.
"""

import dataclasses

import numpy as np

from .sim import GRAVITY

# search box of the eight optimised gait parameters, row order matching
# cpg.OPT_PARAM_NAMES
PARAM_BOUNDS = np.array(
    [
        [0.06, 0.10],     # ground clearance [m]
        [0.005, 0.015],   # ground penetration [m]
        [16.0, 23.0],     # swing phase rate [rad/s]
        [10.0, 15.0],     # stance phase rate [rad/s]
        [0.9, 1.7],       # amplitude setpoint
        [-0.06, -0.01],   # front foot x offset [m]
        [-0.06, -0.01],   # hind foot x offset [m]
        [0.05, 0.30],     # force feedback gain
    ]
)

# context normalisation: mean foot load [N], mean trunk pitch [rad]
CONTEXT_BOUNDS = np.array(
    [
        [15.0, 55.0],
        [-0.4, 0.1],
    ]
)

COT_CAP = 10.0
MIN_DISTANCE = 0.01


@dataclasses.dataclass
class ObjectiveConfig:
    """Weights and constants of the trial score."""

    v_weight: float = 1.0
    cot_weight: float = 0.5
    velocity_scale: float = 0.05   # denominator of the squared-error exponent
    reward_clip: float = 0.85      # per-tick ceiling of the velocity reward
    dt: float = 1e-3


@dataclasses.dataclass
class ContextVector:
    load: float
    slope: float

    def as_array(self) -> np.ndarray:
        return np.array([self.load, self.slope])


@dataclasses.dataclass
class TrialRecord:
    """Steady-state traces and metadata of one executed trial.

    Arrays cover the steady-state window only (T ticks); the transition
    window is never scored.  Velocities are heading-frame [vx, vy].
    """

    params: np.ndarray              # (8,) optimised parameter vector
    v_star: float
    velocities: np.ndarray          # (T, 2)
    torques: np.ndarray             # (T, 8)
    joint_velocities: np.ndarray    # (T, 8)
    foot_forces: np.ndarray         # (T, 4) normal force magnitudes
    pitch: np.ndarray               # (T,)
    distance: float                 # trunk displacement projected on the terrain plane [m]
    mass: float                     # total mass during the trial [kg]
    aborted: bool = False
    trial_index: int = -1
    beta: float = np.nan
    proposal_kind: str = ""
    variant: str = ""
    transition_traces: dict | None = None   # optional, never scored


def cost_of_transport(
    torques: np.ndarray,
    joint_velocities: np.ndarray,
    dt: float,
    mass: float,
    distance: float,
) -> float:
    """Positive-work proxy CoT: sum_t <|tau|, |qd|> dt / (m g d), capped."""
    if distance < MIN_DISTANCE:
        return COT_CAP
    energy = float(np.sum(np.abs(torques) * np.abs(joint_velocities)) * dt)
    return min(energy / (mass * GRAVITY * distance), COT_CAP)


def velocity_reward(velocities: np.ndarray, v_star: float, cfg: ObjectiveConfig) -> float:
    """Accumulated per-tick clipped Gaussian tracking reward."""
    err = velocities.copy()
    err[:, 0] -= v_star
    sq = np.sum(err * err, axis=1)
    per_tick = np.minimum(np.exp(-sq / cfg.velocity_scale), cfg.reward_clip)
    return float(cfg.v_weight * cfg.dt * np.sum(per_tick))


def objective_value(record: TrialRecord, cfg: ObjectiveConfig = ObjectiveConfig()) -> float:
    """Trial score; aborted trials are floored at -1."""
    if record.aborted:
        return -1.0
    cot = cost_of_transport(
        record.torques, record.joint_velocities, cfg.dt, record.mass, record.distance
    )
    return velocity_reward(record.velocities, record.v_star, cfg) - cfg.cot_weight * cot


def estimate_context(foot_forces: np.ndarray, pitch: np.ndarray) -> ContextVector:
    """Mean per-sample foot load over all legs and the mean trunk pitch."""
    return ContextVector(load=float(np.mean(foot_forces)), slope=float(np.mean(pitch)))


@dataclasses.dataclass
class NormalizationRanges:
    """Affine [lo, hi] -> [0, 1] maps for parameters and context."""

    param_bounds: np.ndarray = dataclasses.field(default_factory=lambda: PARAM_BOUNDS.copy())
    context_bounds: np.ndarray = dataclasses.field(default_factory=lambda: CONTEXT_BOUNDS.copy())

    def normalize_params(self, x: np.ndarray) -> np.ndarray:
        lo, hi = self.param_bounds[:, 0], self.param_bounds[:, 1]
        return np.clip((np.asarray(x, dtype=float) - lo) / (hi - lo), 0.0, 1.0)

    def denormalize_params(self, u: np.ndarray) -> np.ndarray:
        lo, hi = self.param_bounds[:, 0], self.param_bounds[:, 1]
        return lo + np.clip(np.asarray(u, dtype=float), 0.0, 1.0) * (hi - lo)

    def normalize_context(self, c: np.ndarray) -> np.ndarray:
        lo, hi = self.context_bounds[:, 0], self.context_bounds[:, 1]
        return np.clip((np.asarray(c, dtype=float) - lo) / (hi - lo), 0.0, 1.0)
