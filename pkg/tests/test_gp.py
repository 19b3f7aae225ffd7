"""Surrogate model tests against independent dense-solve oracles."""

import numpy as np
from scipy.linalg import cholesky

from gaitopt.gp import (
    GpModel,
    KernelConfig,
    fit,
    kernel_eval,
    log_marginal_likelihood,
    posterior,
)

SQRT5 = np.sqrt(5.0)


def oracle_kernel(a, b, log_params, config):
    """Loop-based Matern 5/2 product kernel, written independently."""
    a, b = np.atleast_2d(a), np.atleast_2d(b)
    d = config.dims
    ls = np.exp(log_params[:d])
    sig_f = np.exp(log_params[d])
    out = np.ones((a.shape[0], b.shape[0]))
    for lo, hi in ((0, config.param_dims), (config.param_dims, d)):
        for i in range(a.shape[0]):
            for j in range(b.shape[0]):
                diff = (a[i, lo:hi] - b[j, lo:hi]) / ls[lo:hi]
                r = np.sqrt(np.dot(diff, diff))
                out[i, j] *= (1 + SQRT5 * r + 5 * r * r / 3) * np.exp(-SQRT5 * r)
    return sig_f**2 * out


def oracle_posterior(model, xq, y_raw):
    """Dense posterior with an explicit matrix inverse."""
    cfg = model.config
    d = cfg.dims
    sig_f = np.exp(model.log_params[d])
    sig_n = np.exp(model.log_params[d + 1])
    n = model.x_train.shape[0]
    y_std = float(np.std(y_raw))
    if y_std < 1e-8:
        y_std = 1.0
    ys = (np.asarray(y_raw, dtype=float) - np.mean(y_raw)) / y_std
    k = oracle_kernel(model.x_train, model.x_train, model.log_params, cfg)
    k += sig_n**2 * np.eye(n)
    for jitter in (1e-6, 1e-5, 1e-4):
        try:
            np.linalg.cholesky(k + jitter * np.eye(n))
            break
        except np.linalg.LinAlgError:
            continue
    kinv = np.linalg.inv(k + jitter * np.eye(n))
    ks = oracle_kernel(np.atleast_2d(xq), model.x_train, model.log_params, cfg)
    mean_s = ks @ kinv @ ys
    var = sig_f**2 - np.einsum("ij,jk,ik->i", ks, kinv, ks)
    mean = model.y_mean + model.y_std * mean_s
    std = model.y_std * np.sqrt(np.maximum(var, 0.0))
    return mean, std


def small_config():
    return KernelConfig(param_dims=3, context_dims=2)


def test_kernel_zero_distance_is_signal_variance():
    cfg = small_config()
    hp = cfg.default_log_params()
    a = np.full((1, 5), 0.4)
    k = kernel_eval(a, a, hp, cfg)
    assert abs(k[0, 0] - np.exp(hp[cfg.dims]) ** 2) < 1e-12


def test_kernel_decays_to_zero():
    cfg = small_config()
    hp = cfg.default_log_params()
    a = np.zeros((1, 5))
    b = np.full((1, 5), 1e3)
    assert kernel_eval(a, b, hp, cfg)[0, 0] < 1e-10


def test_kernel_factorizes_over_context():
    # equal contexts: the context factor is k(0) = 1, so the product
    # collapses to the parameter kernel alone
    cfg = small_config()
    hp = cfg.default_log_params()
    rng = np.random.default_rng(0)
    xa, xb = rng.random(3), rng.random(3)
    c = rng.random(2)
    full = kernel_eval(np.r_[xa, c][None], np.r_[xb, c][None], hp, cfg)[0, 0]
    ls = np.exp(hp[:3])
    diff = (xa - xb) / ls
    r = np.sqrt(diff @ diff)
    kx = (1 + SQRT5 * r + 5 * r * r / 3) * np.exp(-SQRT5 * r)
    assert abs(full - np.exp(hp[cfg.dims]) ** 2 * kx) < 1e-12


def test_kernel_matches_oracle_on_random_sets():
    cfg = KernelConfig(param_dims=8, context_dims=2)
    rng = np.random.default_rng(3)
    hp = cfg.default_log_params() + rng.normal(0, 0.3, cfg.dims + 2)
    a = rng.random((7, 10))
    b = rng.random((9, 10))
    assert np.allclose(kernel_eval(a, b, hp, cfg), oracle_kernel(a, b, hp, cfg), atol=1e-12)


def test_kernel_matrix_psd():
    cfg = KernelConfig(param_dims=8, context_dims=2)
    rng = np.random.default_rng(8)
    for _ in range(10):
        x = rng.random((15, 10))
        hp = cfg.default_log_params() + rng.normal(0, 0.5, cfg.dims + 2)
        k = kernel_eval(x, x, hp, cfg)
        assert np.allclose(k, k.T, atol=1e-12)
        assert np.linalg.eigvalsh(k).min() >= -1e-8


def test_single_point_model():
    cfg = KernelConfig(param_dims=8, context_dims=2)
    x = np.full((1, 10), 0.5)
    model = fit(x, np.array([2.7]), cfg)
    mean_at, _ = posterior(model, x)
    assert abs(mean_at[0] - 2.7) < 1e-6
    far, _ = posterior(model, np.zeros((1, 10)))
    # prior mean in standardized units is 0, i.e. the target itself
    assert abs(far[0] - 2.7) < 1e-6


def test_noise_floor_interpolation():
    cfg = KernelConfig(param_dims=8, context_dims=2)
    rng = np.random.default_rng(5)
    x = rng.random((12, 10))
    y = np.sin(3 * x[:, 0]) + x[:, 9]
    hp = cfg.default_log_params()
    hp[-1] = 0.5 * np.log(1e-6)  # pin noise to the floor
    ys = (y - y.mean()) / y.std()
    n = x.shape[0]
    k = kernel_eval(x, x, hp, cfg) + (np.exp(hp[-1]) ** 2 + 1e-6) * np.eye(n)
    chol = cholesky(k, lower=True)
    from scipy.linalg import cho_solve

    model = GpModel(
        x_train=x,
        y_mean=float(y.mean()),
        y_std=float(y.std()),
        log_params=hp,
        chol=chol,
        alpha=cho_solve((chol, True), ys),
        config=cfg,
        lml=0.0,
    )
    mean, _ = posterior(model, x)
    assert np.max(np.abs((mean - y) / y.std())) < 1e-4


def test_fit_never_below_default_hyperparameters():
    cfg = KernelConfig(param_dims=8, context_dims=2)
    rng = np.random.default_rng(12)
    x = rng.random((15, 10))
    y = np.cos(4 * x[:, 1]) + 0.1 * rng.normal(size=15)
    model = fit(x, y, cfg, seed=0)
    ys = (y - y.mean()) / y.std()
    base = log_marginal_likelihood(cfg.default_log_params(), x, ys, cfg)
    assert model.lml >= base - 1e-9


def test_posterior_interpolates_and_reverts():
    cfg = KernelConfig(param_dims=8, context_dims=2)
    rng = np.random.default_rng(2)
    x = rng.random((10, 10))
    y = x[:, 0] * 2.0 + 1.0
    model = fit(x, y, cfg, seed=1)
    mean_at, std_at = posterior(model, x[3:4])
    far, std_far = posterior(model, np.full((1, 10), 40.0))
    assert abs(far[0] - y.mean()) < 1e-3  # reverts to the prior mean
    assert std_at[0] <= std_far[0]
    sig_f = np.exp(model.log_params[cfg.dims])
    assert abs(std_far[0] - model.y_std * sig_f) < 1e-6


def test_posterior_std_nonnegative_and_shrinks_with_data():
    cfg = KernelConfig(param_dims=8, context_dims=2)
    rng = np.random.default_rng(21)
    x = rng.random((8, 10))
    y = rng.normal(size=8)
    q = rng.random((1, 10))
    m1 = fit(x, y, cfg, seed=3)
    _, s1 = posterior(m1, q)
    hp = m1.log_params  # same hyperparameters, one more observation
    x2 = np.vstack([x, q])
    y2 = np.append(y, 0.0)
    ys2 = (y2 - y2.mean()) / y2.std()
    k = kernel_eval(x2, x2, hp, cfg) + (np.exp(hp[-1]) ** 2 + 1e-6) * np.eye(9)
    chol = cholesky(k, lower=True)
    from scipy.linalg import cho_solve

    m2 = GpModel(
        x_train=x2,
        y_mean=float(y2.mean()),
        y_std=float(y2.std()),
        log_params=hp,
        chol=chol,
        alpha=cho_solve((chol, True), ys2),
        config=cfg,
        lml=0.0,
    )
    _, s2 = posterior(m2, q)
    scale = m2.y_std / m1.y_std  # compare in standardized units
    assert s1[0] >= 0.0 and s2[0] >= 0.0
    assert s2[0] / m2.y_std <= s1[0] / m1.y_std + 1e-9


def test_posterior_matches_dense_oracle():
    # smaller sibling of the acceptance sweep
    cfg = KernelConfig(param_dims=8, context_dims=2)
    rng = np.random.default_rng(17)
    for _ in range(10):
        n = int(rng.integers(4, 21))
        x = rng.random((n, 10))
        y = np.sin(x @ rng.normal(0, 2, 10)) + 0.05 * rng.normal(size=n)
        model = fit(x, y, cfg, seed=int(rng.integers(1000)))
        q = rng.random((6, 10))
        mean, std = posterior(model, q)
        omean, ostd = oracle_posterior(model, q, y)
        assert np.allclose(mean, omean, rtol=1e-8, atol=1e-10)
        assert np.allclose(std, ostd, rtol=1e-8, atol=1e-10)
