"""Scenario harness: closed-loop trials, the optimisation loop, logging.

A trial is a transition window (gait parameters interpolate linearly
from the previous set to the proposed set) followed by a steady-state
window that is recorded and scored.  The simulator state chains from
trial to trial; only an aborted trial resets the robot to standing.

Scenario configs are YAML with sections: robot, protocol, optimizer,
controller, schedules (terrain / payload / velocity).  Runs export a
structured npz log that can be replayed bit-exactly.
"""

import copy
import dataclasses
import json
import os
import time

import numpy as np
import yaml

from . import cbo
from .cpg import CpgParams, OscillatorNetworkState, foot_targets, step_network
from .kinematics import (
    JointGains,
    clamp_to_workspace,
    foot_jacobian,
    forward_kinematics,
    inverse_kinematics,
    pd_torque,
)
from .objective import (
    CONTEXT_BOUNDS,
    PARAM_BOUNDS,
    ContextVector,
    ObjectiveConfig,
    TrialRecord,
    cost_of_transport,
    estimate_context,
    objective_value,
)
from .sim import (
    RobotModel,
    SimState,
    SimulationDiverged,
    Terrain,
    configure,
    euler_zyx,
    make_standing_state,
    step,
)
from .vmc import TrunkAttitude, VmcGains, vmc_joint_torques, vmc_wrench

VARIANTS = ("open-loop", "vmc", "tegotae", "vmc+tegotae")

FALL_HEIGHT = 0.05
STANCE_FORCE_THRESHOLD = 5.0
# time constant of the pitch reference filter, slow next to a gait cycle
PITCH_ANCHOR_TAU = 1.0

LOG_FORMAT = "gaitopt-log-v1"


class ScenarioConfigError(ValueError):
    """Config rejected before any simulation runs."""


@dataclasses.dataclass
class TrialProtocol:
    transition_s: float = 1.5
    steady_s: float = 3.0
    rate_hz: float = 1000.0

    @property
    def dt(self) -> float:
        return 1.0 / self.rate_hz

    @property
    def transition_steps(self) -> int:
        return int(round(self.transition_s * self.rate_hz))

    @property
    def steady_steps(self) -> int:
        return int(round(self.steady_s * self.rate_hz))


@dataclasses.dataclass
class ScenarioConfig:
    """Validated description of one optimisation run."""

    variant: str = "vmc+tegotae"
    budget: int = 40
    seed: int = 0
    inference: bool = False
    v_star_schedule: list = dataclasses.field(default_factory=lambda: [[0, 0.5]])
    terrain_schedule: list = dataclasses.field(
        default_factory=lambda: [[0, {"friction": 0.9, "slope_angle": 0.0}]]
    )
    payload_schedule: list = dataclasses.field(default_factory=list)
    robot: dict = dataclasses.field(default_factory=dict)
    protocol: TrialProtocol = dataclasses.field(default_factory=TrialProtocol)
    record_transition: bool = False

    def validate(self) -> None:
        if self.variant not in VARIANTS:
            raise ScenarioConfigError(
                f"unknown controller variant {self.variant!r}; choose from {VARIANTS}"
            )
        if not isinstance(self.budget, int) or self.budget < 1:
            raise ScenarioConfigError("budget must be a positive integer")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ScenarioConfigError("seed must be a non-negative integer")
        for name, sched in (
            ("v_star_schedule", self.v_star_schedule),
            ("terrain_schedule", self.terrain_schedule),
            ("payload_schedule", self.payload_schedule),
        ):
            for entry in sched:
                if len(entry) != 2 or not isinstance(entry[0], int) or entry[0] < 0:
                    raise ScenarioConfigError(f"{name} entries must be [trial_index, value]")
        if not any(t == 0 for t, _ in self.v_star_schedule):
            raise ScenarioConfigError("v_star_schedule must define trial 0")
        for _, update in self.terrain_schedule:
            unknown = set(update) - {"friction", "slope_angle"}
            if unknown:
                raise ScenarioConfigError(f"unknown terrain keys {sorted(unknown)}")
        known_robot = {f.name for f in dataclasses.fields(RobotModel)}
        unknown = set(self.robot) - known_robot
        if unknown:
            raise ScenarioConfigError(f"unknown robot keys {sorted(unknown)}")

    @staticmethod
    def from_dict(data: dict) -> "ScenarioConfig":
        data = copy.deepcopy(data)
        known = {f.name for f in dataclasses.fields(ScenarioConfig)}
        unknown = set(data) - known
        if unknown:
            raise ScenarioConfigError(f"unknown config keys {sorted(unknown)}")
        proto = data.pop("protocol", {})
        if isinstance(proto, dict):
            unknown = set(proto) - {f.name for f in dataclasses.fields(TrialProtocol)}
            if unknown:
                raise ScenarioConfigError(f"unknown protocol keys {sorted(unknown)}")
            proto = TrialProtocol(**proto)
        cfg = ScenarioConfig(**data, protocol=proto)
        cfg.validate()
        return cfg

    @staticmethod
    def from_yaml(path: str) -> "ScenarioConfig":
        with open(path) as fh:
            data = yaml.safe_load(fh)
        if not isinstance(data, dict):
            raise ScenarioConfigError("config file must contain a mapping")
        return ScenarioConfig.from_dict(data)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        return out


def interpolate_params(old: np.ndarray, new: np.ndarray, fraction: float) -> np.ndarray:
    """Linear blend between consecutive parameter vectors."""
    fraction = float(np.clip(fraction, 0.0, 1.0))
    return (1.0 - fraction) * np.asarray(old, dtype=float) + fraction * np.asarray(
        new, dtype=float
    )


def _variant_uses(variant: str) -> tuple[bool, bool]:
    return "vmc" in variant, "tegotae" in variant


def effective_params(base: CpgParams, vec: np.ndarray, variant: str) -> CpgParams:
    """Parameter vector applied to the base gait; force feedback is
    disabled for variants without it."""
    p = base.with_opt_vector(vec)
    if "tegotae" not in variant:
        p = dataclasses.replace(p, sigma_force=0.0)
    return p


class SimSession:
    """Mutable closed-loop state carried across chained trials."""

    def __init__(
        self,
        model: RobotModel,
        terrain: Terrain,
        params_vec: np.ndarray,
        base: CpgParams = None,
        gains: JointGains = None,
        vmc_gains: VmcGains = None,
    ):
        self.model = model
        self.terrain = terrain
        self.base = base if base is not None else CpgParams()
        self.gains = gains if gains is not None else JointGains()
        self.vmc_gains = vmc_gains if vmc_gains is not None else VmcGains()
        self.params_vec = np.asarray(params_vec, dtype=float).copy()
        self.state: SimState = None
        self.osc: OscillatorNetworkState = None
        self.prev_q_ref = None
        self.reset_standing()

    def reset_standing(self) -> None:
        p = self.base.with_opt_vector(self.params_vec)
        self.state = make_standing_state(
            self.model, self.terrain, p.x_offsets(), p.body_height
        )
        self.osc = OscillatorNetworkState.initial()
        self.prev_q_ref = None
        # posture control anchors its pitch spring to a slow average of the
        # measured pitch; a fixed zero target would unload the front or hind
        # pair on an incline and cost their traction
        self.pitch_anchor = float(euler_zyx(self.state.quat)[1])


def control_step(session: SimSession, params: CpgParams, variant: str, dt: float) -> np.ndarray:
    """One controller tick: oscillators -> foot targets -> IK -> PD (+VMC)."""
    state = session.state
    use_vmc, _ = _variant_uses(variant)

    session.osc = step_network(session.osc, params, state.normal_forces, dt)
    targets = clamp_to_workspace(foot_targets(session.osc, params), session.model.legs)
    q_ref = inverse_kinematics(targets, session.model.legs)
    if session.prev_q_ref is None:
        qd_ref = np.zeros((4, 2))
    else:
        qd_ref = (q_ref - session.prev_q_ref) / dt
    session.prev_q_ref = q_ref
    tau = pd_torque(q_ref, qd_ref, state.q, state.qd, session.gains)

    if use_vmc:
        roll, pitch, yaw = euler_zyx(state.quat)
        om = state.omega_body
        attitude = TrunkAttitude(roll, pitch, yaw, om[0], om[1], om[2])
        session.pitch_anchor += (dt / PITCH_ANCHOR_TAU) * (pitch - session.pitch_anchor)
        target = np.array([0.0, session.pitch_anchor, 0.0])
        wrench = vmc_wrench(attitude, target, session.vmc_gains)
        stance = state.normal_forces > STANCE_FORCE_THRESHOLD
        if np.any(stance):
            hips = session.model.hip_positions()
            rel = forward_kinematics(state.q, session.model.legs)
            feet = hips.copy()
            feet[:, 0] += rel[:, 0]
            feet[:, 2] += rel[:, 1]
            jac = foot_jacobian(state.q, session.model.legs)
            tau = tau + vmc_joint_torques(wrench, feet, stance, jac)
    return tau


def _heading_velocity(state: SimState) -> tuple[float, float, float]:
    roll, pitch, yaw = euler_zyx(state.quat)
    c, s = np.cos(yaw), np.sin(yaw)
    vx = c * state.vel[0] + s * state.vel[1]
    vy = -s * state.vel[0] + c * state.vel[1]
    return vx, vy, pitch


def run_trial(
    session: SimSession,
    new_params: np.ndarray,
    v_star: float,
    variant: str,
    protocol: TrialProtocol = TrialProtocol(),
    record_transition: bool = False,
) -> TrialRecord:
    """Execute one trial: parameter transition, then the scored window.

    The session state (robot, oscillators) continues from the previous
    trial; an abort (fall or divergence) resets it to standing and marks
    the record aborted.
    """
    dt = protocol.dt
    old_params = session.params_vec
    new_params = np.asarray(new_params, dtype=float).copy()
    n_tr, n_st = protocol.transition_steps, protocol.steady_steps
    limit = session.model.torque_limit

    velocities = np.zeros((n_st, 2))
    torques = np.zeros((n_st, 8))
    joint_vel = np.zeros((n_st, 8))
    forces = np.zeros((n_st, 4))
    pitch_arr = np.zeros(n_st)
    trans = {"velocities": np.zeros((n_tr, 2))} if record_transition else None

    aborted = False
    distance = 0.0
    steady_filled = 0
    try:
        for k in range(n_tr):
            vec = interpolate_params(old_params, new_params, (k + 1) / n_tr)
            params = effective_params(session.base, vec, variant)
            tau = control_step(session, params, variant, dt)
            session.state = step(session.state, tau, session.model, session.terrain, dt)
            if record_transition:
                vx, vy, _ = _heading_velocity(session.state)
                trans["velocities"][k] = (vx, vy)
            if session.state.height_above_terrain(session.terrain) < FALL_HEIGHT:
                raise SimulationDiverged("fall during transition")

        params = effective_params(session.base, new_params, variant)
        pos_start = session.state.pos.copy()
        for k in range(n_st):
            state = session.state
            tau = control_step(session, params, variant, dt)
            tau_applied = np.clip(tau, -limit, limit)
            vx, vy, pitch = _heading_velocity(state)
            velocities[k] = (vx, vy)
            torques[k] = tau_applied.ravel()
            joint_vel[k] = state.qd.ravel()
            forces[k] = state.normal_forces
            pitch_arr[k] = pitch
            session.state = step(state, tau_applied, session.model, session.terrain, dt)
            steady_filled = k + 1
            if session.state.height_above_terrain(session.terrain) < FALL_HEIGHT:
                raise SimulationDiverged("fall during steady state")
        delta = session.state.pos - pos_start
        n = session.terrain.normal()
        in_plane = delta - (delta @ n) * n
        distance = float(np.sqrt(in_plane @ in_plane))
    except SimulationDiverged:
        aborted = True
        session.params_vec = new_params
        session.reset_standing()
    else:
        session.params_vec = new_params

    return TrialRecord(
        params=new_params,
        v_star=float(v_star),
        velocities=velocities,
        torques=torques,
        joint_velocities=joint_vel,
        foot_forces=forces,
        pitch=pitch_arr,
        distance=distance,
        mass=session.model.total_mass,
        aborted=aborted,
        variant=variant,
        transition_traces=trans,
    )


def standing_context(
    session: SimSession, dt: float = 1e-3, settle_s: float = 1.0, window_s: float = 0.25
) -> ContextVector:
    """Measure load and slope from a short standing hold.

    A fallen trial leaves no usable gait data, but after the reset the
    robot is standing and its static leg forces and trunk pitch carry
    the same information the walking estimate uses.  Probing them here
    means a new payload or incline is noticed before the next trial
    instead of only after the first one that survives it.
    """
    # contact ringing after a reset needs most of a second to damp; an
    # early read biases the load estimate high by 20 percent or more
    n_settle = int(round(settle_s / dt))
    n_window = int(round(window_s / dt))
    q_hold = session.state.q.copy()
    qd_zero = np.zeros((4, 2))
    limit = session.model.torque_limit
    forces = np.zeros((n_window, 4))
    pitch = np.zeros(n_window)
    for k in range(n_settle):
        tau = pd_torque(q_hold, qd_zero, session.state.q, session.state.qd, session.gains)
        tau = np.clip(tau, -limit, limit)
        session.state = step(session.state, tau, session.model, session.terrain, dt)
        j = k - (n_settle - n_window)
        if j >= 0:
            forces[j] = session.state.normal_forces
            pitch[j] = euler_zyx(session.state.quat)[1]
    return estimate_context(forces, pitch)


@dataclasses.dataclass
class RunReport:
    """Per-trial rows plus a summary over the last five finished trials."""

    rows: list
    last5: dict
    seed: int
    variant: str
    wall_time_s: float


def _schedule_value(schedule: list, trial: int):
    value = None
    for t, v in schedule:
        if t == trial:
            value = v
    return value


def summarize_rows(rows: list) -> dict:
    done = [r for r in rows if not r["aborted"]]
    tail = done[-5:]
    if not tail:
        return {"trials": 0}
    return {
        "trials": len(tail),
        "mean_objective": float(np.mean([r["objective"] for r in tail])),
        "mean_vx": float(np.mean([r["mean_vx"] for r in tail])),
        "mean_cot": float(np.mean([r["cot"] for r in tail])),
    }


def run_scenario(
    config: ScenarioConfig, obj_cfg: ObjectiveConfig = ObjectiveConfig()
) -> tuple[RunReport, list]:
    """Run the full optimisation loop described by the config.

    Returns:
        (report, trial records in execution order).
    """
    config.validate()
    t0 = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    protocol = config.protocol

    robot_kwargs = dict(config.robot)
    for key in ("trunk_inertia", "joint_lower", "joint_upper"):
        if key in robot_kwargs:
            robot_kwargs[key] = np.asarray(robot_kwargs[key], dtype=float)
    model = RobotModel(**robot_kwargs)
    terrain = Terrain()
    first_terrain = _schedule_value(config.terrain_schedule, 0)
    if first_terrain:
        model, terrain = configure(model, terrain, **first_terrain)
    first_payload = _schedule_value(config.payload_schedule, 0)
    if first_payload is not None:
        model, terrain = configure(model, terrain, payload_mass=first_payload)

    sharing = cbo.ContextSharingConfig()
    schedule = cbo.BetaSchedule()
    history = cbo.OptimizerHistory()
    v_star = float(_schedule_value(config.v_star_schedule, 0))

    beta = cbo.update_beta(0, schedule, changed=False, inference=config.inference)
    params, info = cbo.propose_next(
        history, np.zeros(2), beta, PARAM_BOUNDS, CONTEXT_BOUNDS, rng,
        trial_index=0, gp_seed=int(rng.integers(2**31)),
    )
    session = SimSession(model, terrain, params)

    rows = []
    records = []
    changed_mode = False

    for i in range(config.budget):
        if i > 0:
            new_v = _schedule_value(config.v_star_schedule, i)
            if new_v is not None and float(new_v) != v_star:
                v_star = float(new_v)
                history = cbo.reuse_history(history, v_star, obj_cfg)
            terrain_update = _schedule_value(config.terrain_schedule, i)
            payload = _schedule_value(config.payload_schedule, i)
            if terrain_update or payload is not None:
                session.model, session.terrain = configure(
                    session.model,
                    session.terrain,
                    payload_mass=payload,
                    **(terrain_update or {}),
                )

        record = run_trial(session, params, v_star, config.variant, protocol,
                           config.record_transition)
        record.trial_index = i
        record.beta = beta
        record.proposal_kind = info["kind"]
        j = objective_value(record, obj_cfg)

        if record.aborted:
            # run_trial already reset the robot to standing; read the
            # situation from the static stance rather than keeping a
            # context that may predate the fall's cause
            context = standing_context(session, dt=protocol.dt)
        else:
            context = estimate_context(record.foot_forces, record.pitch)
        c_arr = context.as_array()

        if not changed_mode and cbo.context_changed(
            history.context_matrix() if history.n else np.empty((0, 2)), c_arr, sharing
        ):
            changed_mode = True

        history.append(record.params, c_arr, j, record)
        records.append(record)

        cot = cost_of_transport(
            record.torques, record.joint_velocities, obj_cfg.dt, record.mass, record.distance
        )
        rows.append(
            {
                "trial": i,
                "objective": j,
                "cot": cot,
                "mean_vx": float(np.mean(record.velocities[:, 0])),
                "c_load": context.load,
                "c_slope": context.slope,
                "beta": beta,
                "kind": info["kind"],
                "aborted": record.aborted,
                "v_star": v_star,
                "params": record.params.tolist(),
            }
        )

        n_ctx = cbo.count_same_context(history.context_matrix(), c_arr, sharing)
        beta = cbo.update_beta(n_ctx, schedule, changed=changed_mode, inference=config.inference)
        params, info = cbo.propose_next(
            history, c_arr, beta, PARAM_BOUNDS, CONTEXT_BOUNDS, rng,
            trial_index=i + 1, gp_seed=int(rng.integers(2**31)),
        )

    report = RunReport(
        rows=rows,
        last5=summarize_rows(rows),
        seed=config.seed,
        variant=config.variant,
        wall_time_s=time.perf_counter() - t0,
    )
    return report, records


# ---------------------------------------------------------------------------
# logging, export, replay


def export_log(path: str, config: ScenarioConfig, report: RunReport, records: list) -> None:
    """Write the structured full run log (config + per-trial traces)."""
    n = len(records)
    payload = {
        "format": LOG_FORMAT,
        "config_json": json.dumps(config.to_dict()),
        "seed": config.seed,
        "params": np.array([r.params for r in records]),
        "objectives": np.array([row["objective"] for row in report.rows]),
        "contexts": np.array([[row["c_load"], row["c_slope"]] for row in report.rows]),
        "betas": np.array([row["beta"] for row in report.rows]),
        "kinds": np.array([row["kind"] for row in report.rows]),
        "aborted": np.array([r.aborted for r in records]),
        "v_star": np.array([r.v_star for r in records]),
        "mass": np.array([r.mass for r in records]),
        "distance": np.array([r.distance for r in records]),
        "mean_vx": np.array([row["mean_vx"] for row in report.rows]),
        "cot": np.array([row["cot"] for row in report.rows]),
        "velocities": np.array([r.velocities for r in records]),
        "torques": np.array([r.torques for r in records]),
        "joint_velocities": np.array([r.joint_velocities for r in records]),
        "foot_forces": np.array([r.foot_forces for r in records]),
        "pitch": np.array([r.pitch for r in records]),
        "wall_time_s": report.wall_time_s,
    }
    assert n == len(report.rows)
    np.savez_compressed(path, **payload)


def load_log(path: str) -> dict:
    with np.load(path, allow_pickle=False) as data:
        out = {key: data[key] for key in data.files}
    fmt = str(out["format"])
    if fmt != LOG_FORMAT:
        raise ValueError(f"unsupported log format {fmt!r}")
    return out


def records_from_log(log: dict) -> list:
    """Rebuild TrialRecord objects from a loaded log."""
    n = log["params"].shape[0]
    records = []
    for i in range(n):
        records.append(
            TrialRecord(
                params=log["params"][i],
                v_star=float(log["v_star"][i]),
                velocities=log["velocities"][i],
                torques=log["torques"][i],
                joint_velocities=log["joint_velocities"][i],
                foot_forces=log["foot_forces"][i],
                pitch=log["pitch"][i],
                distance=float(log["distance"][i]),
                mass=float(log["mass"][i]),
                aborted=bool(log["aborted"][i]),
                trial_index=i,
                beta=float(log["betas"][i]),
                proposal_kind=str(log["kinds"][i]),
            )
        )
    return records


def replay_log(path: str) -> tuple[bool, str]:
    """Re-run the logged scenario from its config and compare bit-exactly."""
    log = load_log(path)
    config = ScenarioConfig.from_dict(json.loads(str(log["config_json"])))
    report, records = run_scenario(config)
    checks = {
        "params": np.array([r.params for r in records]),
        "objectives": np.array([row["objective"] for row in report.rows]),
        "velocities": np.array([r.velocities for r in records]),
        "torques": np.array([r.torques for r in records]),
        "joint_velocities": np.array([r.joint_velocities for r in records]),
        "foot_forces": np.array([r.foot_forces for r in records]),
        "pitch": np.array([r.pitch for r in records]),
        "distance": np.array([r.distance for r in records]),
        "betas": np.array([row["beta"] for row in report.rows]),
    }
    for key, fresh in checks.items():
        stored = log[key]
        if stored.shape != fresh.shape or not np.array_equal(stored, fresh):
            return False, f"mismatch in {key}"
    return True, f"replay of {len(records)} trials matched bit-exactly"


def export_trials_csv(path: str, report: RunReport) -> None:
    import csv

    from .cpg import OPT_PARAM_NAMES

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["trial", "objective", "cot", "mean_vx", "c_load", "c_slope", "beta",
             "kind", "aborted", "v_star", *OPT_PARAM_NAMES]
        )
        for row in report.rows:
            writer.writerow(
                [row["trial"], row["objective"], row["cot"], row["mean_vx"],
                 row["c_load"], row["c_slope"], row["beta"], row["kind"],
                 int(row["aborted"]), row["v_star"], *row["params"]]
            )


def export_plot_data(out_dir: str, log: dict) -> list:
    """Write plot-ready per-trial series (objective, CoT, velocity, context)."""
    import csv

    os.makedirs(out_dir, exist_ok=True)
    series = {
        "objective_curve.csv": ("objective", log["objectives"]),
        "cot_curve.csv": ("cot", log["cot"]),
        "velocity_curve.csv": ("mean_vx", log["mean_vx"]),
        "context_load_curve.csv": ("c_load", log["contexts"][:, 0]),
        "context_slope_curve.csv": ("c_slope", log["contexts"][:, 1]),
        "beta_curve.csv": ("beta", log["betas"]),
    }
    written = []
    for fname, (col, values) in series.items():
        path = os.path.join(out_dir, fname)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["trial", col])
            for i, v in enumerate(np.asarray(values).ravel()):
                writer.writerow([i, v])
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# ablation driver


def _ablation_job(args: tuple) -> dict:
    cfg_dict, variant, seed = args
    cfg = ScenarioConfig.from_dict({**cfg_dict, "variant": variant, "seed": seed})
    report, _ = run_scenario(cfg)
    return {
        "variant": variant,
        "seed": seed,
        "last5": report.last5,
        "wall_time_s": report.wall_time_s,
    }


def run_ablation(
    base_config: ScenarioConfig,
    seeds: list,
    variants: tuple = VARIANTS,
    max_workers: int | None = None,
) -> list:
    """Run every controller variant over the seeds.

    Independent runs are dispatched to worker processes when more than
    one CPU is available; otherwise they run sequentially in-process.
    """
    base = base_config.to_dict()
    jobs = [(base, variant, seed) for variant in variants for seed in seeds]
    if max_workers is None:
        max_workers = min(len(jobs), os.cpu_count() or 1)
    if max_workers > 1:
        import concurrent.futures

        with concurrent.futures.ProcessPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(_ablation_job, jobs))
    return [_ablation_job(job) for job in jobs]


def ablation_summary(results: list) -> dict:
    """Median last-5 objective and CoT per variant."""
    out = {}
    for variant in {r["variant"] for r in results}:
        rows = [r["last5"] for r in results if r["variant"] == variant and r["last5"]["trials"]]
        out[variant] = {
            "median_objective": float(np.median([r["mean_objective"] for r in rows])),
            "median_cot": float(np.median([r["mean_cot"] for r in rows])),
            "median_vx": float(np.median([r["mean_vx"] for r in rows])),
            "runs": len(rows),
        }
    return out
