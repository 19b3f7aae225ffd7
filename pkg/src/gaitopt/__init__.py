"""CPG quadruped gait generation with online contextual Bayesian optimisation."""

from .cpg import (
    CpgParams,
    OPT_PARAM_NAMES,
    OscillatorNetworkState,
    foot_targets,
    step_network,
    trot_coupling,
)
from .kinematics import (
    JointGains,
    JointState,
    LegGeometry,
    OutOfWorkspaceError,
    foot_jacobian,
    forward_kinematics,
    inverse_kinematics,
    pd_torque,
)
from .vmc import TrunkAttitude, VmcGains, distribute_wrench, vmc_joint_torques, vmc_wrench
from .sim import (
    RobotModel,
    SimState,
    SimulationDiverged,
    Terrain,
    configure,
    contact_force,
    contact_forces,
    make_standing_state,
    step,
)
from .objective import (
    CONTEXT_BOUNDS,
    ContextVector,
    NormalizationRanges,
    ObjectiveConfig,
    PARAM_BOUNDS,
    TrialRecord,
    cost_of_transport,
    estimate_context,
    objective_value,
)
from .gp import GpFitError, GpModel, KernelConfig, fit, kernel_eval, posterior
from .cbo import (
    BetaSchedule,
    ContextSharingConfig,
    OptimizerHistory,
    context_changed,
    count_same_context,
    propose_next,
    reuse_history,
    update_beta,
)
from .harness import (
    RunReport,
    ScenarioConfig,
    ScenarioConfigError,
    SimSession,
    TrialProtocol,
    interpolate_params,
    replay_log,
    run_scenario,
    run_trial,
)

__version__ = "0.1.0"
