import numpy as np

from gaitopt.kinematics import LegGeometry, foot_jacobian
from gaitopt.vmc import (
    TrunkAttitude,
    VmcGains,
    distribute_wrench,
    vmc_joint_torques,
    vmc_wrench,
)

# symmetric standing stance used throughout: feet under the hips
FEET = np.array(
    [
        [0.19, -0.13, -0.3],
        [0.19, 0.13, -0.3],
        [-0.19, -0.13, -0.3],
        [-0.19, 0.13, -0.3],
    ]
)
ALL_STANCE = np.ones(4, dtype=bool)


def test_equilibrium_gives_zero_wrench():
    att = TrunkAttitude(0.0, 0.0, 0.0)
    assert np.allclose(vmc_wrench(att, None, VmcGains()), 0.0, atol=1e-15)


def test_roll_error_gain():
    # 0.1 rad error through k_roll = 150 is a 15 N*m moment
    att = TrunkAttitude(-0.1, 0.0, 0.0)
    w = vmc_wrench(att, None, VmcGains())
    assert abs(w[0] - 15.0) < 1e-12
    assert abs(w[1]) < 1e-12 and abs(w[2]) < 1e-12


def test_wrench_linearity():
    g = VmcGains()
    a1 = TrunkAttitude(0.05, -0.02, 0.01, 0.3, -0.1, 0.2)
    a2 = TrunkAttitude(0.10, -0.04, 0.02, 0.6, -0.2, 0.4)
    assert np.allclose(vmc_wrench(a2, None, g), 2 * vmc_wrench(a1, None, g), atol=1e-12)


def test_wrench_damping_term():
    g = VmcGains()
    att = TrunkAttitude(0.0, 0.0, 0.0, 1.0, 0.0, 0.0)
    w = vmc_wrench(att, None, g)
    assert abs(w[0] + g.damping_fraction * g.k_roll) < 1e-12


def test_zero_wrench_zero_torques():
    jac = np.stack([foot_jacobian(np.array([0.3, 1.0]), LegGeometry())] * 4)
    tau = vmc_joint_torques(np.zeros(3), FEET, ALL_STANCE, jac)
    assert np.allclose(tau, 0.0, atol=1e-12)


def test_pitch_moment_distribution_frozen():
    """Minimum-norm distribution of a pure 8 N*m pitch moment.

    Frozen from the independent pseudo-inverse oracle (and the closed
    form lam = m / (4(h^2 + a^2)), F_x = -lam*h, F_z = -+lam*a) for
    feet at (+-0.19, +-0.13, -0.3).
    """
    forces = distribute_wrench(np.array([0.0, 8.0, 0.0]), FEET, ALL_STANCE)
    assert np.allclose(forces[:, 0], -4.758128469468676, atol=1e-6)
    assert np.allclose(forces[:, 1], 0.0, atol=1e-9)
    assert np.allclose(forces[:2, 2], -3.013481363996828, atol=1e-6)
    assert np.allclose(forces[2:, 2], 3.013481363996828, atol=1e-6)
    # front and hind vertical components mirror each other
    assert abs(forces[0, 2] + forces[2, 2]) < 1e-9


def test_moment_reconstruction_residual():
    rng = np.random.default_rng(5)
    for _ in range(20):
        wrench = rng.normal(0, 10, 3)
        forces = distribute_wrench(wrench, FEET, ALL_STANCE)
        rebuilt = np.sum(np.cross(FEET, forces), axis=0)
        assert np.allclose(rebuilt, wrench, rtol=1e-6, atol=1e-6)


def test_single_stance_leg_and_swing_zero():
    stance = np.array([False, True, False, False])
    jac = np.stack([foot_jacobian(np.array([0.1, 0.8]), LegGeometry())] * 4)
    tau = vmc_joint_torques(np.array([2.0, 4.0, 0.0]), FEET, stance, jac)
    assert np.allclose(tau[[0, 2, 3]], 0.0, atol=1e-15)
    assert np.any(tau[1] != 0.0)
    forces = distribute_wrench(np.array([2.0, 4.0, 0.0]), FEET, stance)
    assert np.allclose(forces[[0, 2, 3]], 0.0, atol=1e-15)


def test_no_stance_legs_inactive():
    jac = np.zeros((4, 2, 2))
    tau = vmc_joint_torques(np.array([5.0, 5.0, 5.0]), FEET, np.zeros(4, dtype=bool), jac)
    assert np.array_equal(tau, np.zeros((4, 2)))
