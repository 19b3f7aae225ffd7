"""Gaussian-process surrogate over (parameters, context) pairs.

Covariance is a product of two Matern 5/2 ARD kernels, one over the
normalised parameter block and one over the normalised context block,
with a shared signal variance and additive observation noise.  Targets
are standardised per fit.  Hyperparameters (per-dimension lengthscales,
signal amplitude, noise amplitude) maximise the log marginal likelihood
from multiple restarts with analytic gradients.
"""

import dataclasses

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular
from scipy.optimize import minimize

SQRT5 = np.sqrt(5.0)

JITTERS = (1e-6, 1e-5, 1e-4)

LOG_LS_BOUNDS = (np.log(0.05), np.log(20.0))
LOG_SIGF_BOUNDS = (np.log(0.05), np.log(5.0))
LOG_SIGN_BOUNDS = (0.5 * np.log(1e-6), np.log(1.0))


class GpFitError(RuntimeError):
    """Covariance factorisation failed at every jitter level."""


@dataclasses.dataclass
class KernelConfig:
    """Dimension split and hyperparameter initialisation of the kernel."""

    param_dims: int = 8
    context_dims: int = 2
    init_lengthscale: float = 0.5
    init_signal: float = 1.0
    init_noise: float = 0.1

    @property
    def dims(self) -> int:
        return self.param_dims + self.context_dims

    def default_log_params(self) -> np.ndarray:
        return np.concatenate(
            [
                np.full(self.dims, np.log(self.init_lengthscale)),
                [np.log(self.init_signal), np.log(self.init_noise)],
            ]
        )


@dataclasses.dataclass
class GpModel:
    """Fitted surrogate: training data, hyperparameters and factorisation."""

    x_train: np.ndarray
    y_mean: float
    y_std: float
    log_params: np.ndarray
    chol: np.ndarray
    alpha: np.ndarray
    config: KernelConfig
    lml: float


def _matern52(r: np.ndarray) -> np.ndarray:
    s = SQRT5 * r
    return (1.0 + s + s * s / 3.0) * np.exp(-s)


def _matern52_dr2(r: np.ndarray) -> np.ndarray:
    """d matern52 / d(r^2); bounded at r = 0."""
    return -(5.0 / 6.0) * (1.0 + SQRT5 * r) * np.exp(-SQRT5 * r)


def _block_sq_dists(a: np.ndarray, b: np.ndarray, lengthscales: np.ndarray, lo: int, hi: int):
    diff = (a[:, None, lo:hi] - b[None, :, lo:hi]) / lengthscales[lo:hi]
    return np.sum(diff * diff, axis=2)


def kernel_eval(
    a: np.ndarray, b: np.ndarray, log_params: np.ndarray, config: KernelConfig
) -> np.ndarray:
    """Noise-free product-kernel matrix between row sets a and b."""
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    d = config.dims
    ls = np.exp(log_params[:d])
    sig_f = np.exp(log_params[d])
    r2x = _block_sq_dists(a, b, ls, 0, config.param_dims)
    r2c = _block_sq_dists(a, b, ls, config.param_dims, d)
    return sig_f**2 * _matern52(np.sqrt(r2x)) * _matern52(np.sqrt(r2c))


def _chol_with_jitter(k: np.ndarray) -> tuple[np.ndarray, float]:
    for jitter in JITTERS:
        try:
            return cholesky(k + jitter * np.eye(k.shape[0]), lower=True), jitter
        except np.linalg.LinAlgError:
            continue
    raise GpFitError("covariance not positive definite at any jitter level")


def log_marginal_likelihood(
    log_params: np.ndarray, x: np.ndarray, y_standard: np.ndarray, config: KernelConfig
) -> float:
    value, _ = _lml_and_grad(log_params, x, y_standard, config)
    return value


def _lml_and_grad(log_params, x, y, config):
    n, d = x.shape[0], config.dims
    ls = np.exp(log_params[:d])
    sig_f = np.exp(log_params[d])
    sig_n = np.exp(log_params[d + 1])

    r2x = _block_sq_dists(x, x, ls, 0, config.param_dims)
    r2c = _block_sq_dists(x, x, ls, config.param_dims, d)
    rx = np.sqrt(r2x)
    rc = np.sqrt(r2c)
    gx = _matern52(rx)
    gc = _matern52(rc)
    k_signal = sig_f**2 * gx * gc
    k = k_signal + sig_n**2 * np.eye(n)

    chol, _ = _chol_with_jitter(k)
    alpha = cho_solve((chol, True), y)
    lml = (
        -0.5 * float(y @ alpha)
        - float(np.sum(np.log(np.diag(chol))))
        - 0.5 * n * np.log(2.0 * np.pi)
    )

    k_inv = cho_solve((chol, True), np.eye(n))
    m = np.outer(alpha, alpha) - k_inv

    grad = np.empty(d + 2)
    dgx = sig_f**2 * _matern52_dr2(rx) * gc
    dgc = sig_f**2 * gx * _matern52_dr2(rc)
    for j in range(d):
        diff = (x[:, None, j] - x[None, :, j]) / ls[j]
        dd = diff * diff
        front = dgx if j < config.param_dims else dgc
        # d r^2 / d log(ls_j) = -2 * dd
        grad[j] = 0.5 * np.sum(m * (front * (-2.0 * dd)))
    grad[d] = 0.5 * np.sum(m * (2.0 * k_signal))
    grad[d + 1] = 0.5 * np.trace(m) * 2.0 * sig_n**2
    return lml, grad


def fit(
    x: np.ndarray,
    y: np.ndarray,
    config: KernelConfig = KernelConfig(),
    seed: int = 0,
    n_restarts: int = 5,
    max_iter: int = 60,
) -> GpModel:
    """Fit the surrogate to normalised inputs x and raw targets y.

    Hyperparameters are optimised by L-BFGS-B from the default start and
    n_restarts random starts; the best log marginal likelihood wins and
    is never worse than the default hyperparameters evaluated directly.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    n = x.shape[0]
    if n == 0:
        raise ValueError("need at least one observation")
    if x.shape[1] != config.dims:
        raise ValueError(f"expected {config.dims} input dims, got {x.shape[1]}")

    y_mean = float(np.mean(y))
    y_std = float(np.std(y))
    if y_std < 1e-8:
        y_std = 1.0
    ys = (y - y_mean) / y_std

    d = config.dims
    bounds = [LOG_LS_BOUNDS] * d + [LOG_SIGF_BOUNDS, LOG_SIGN_BOUNDS]
    default = config.default_log_params()

    best_hp = default
    best_lml = log_marginal_likelihood(default, x, ys, config)

    if n >= 3:
        rng = np.random.default_rng(seed)
        starts = [default]
        lo = np.array([b[0] for b in bounds])
        hi = np.array([b[1] for b in bounds])
        for _ in range(n_restarts):
            starts.append(lo + rng.random(d + 2) * (hi - lo))
        for start in starts:
            try:
                res = minimize(
                    lambda hp: tuple(map(np.negative, _lml_and_grad(hp, x, ys, config))),
                    start,
                    jac=True,
                    method="L-BFGS-B",
                    bounds=bounds,
                    options={"maxiter": max_iter},
                )
            except GpFitError:
                continue
            if np.all(np.isfinite(res.x)) and -res.fun > best_lml:
                best_lml = -res.fun
                best_hp = res.x

    k = kernel_eval(x, x, best_hp, config) + np.exp(best_hp[d + 1]) ** 2 * np.eye(n)
    chol, _ = _chol_with_jitter(k)
    alpha = cho_solve((chol, True), ys)
    return GpModel(
        x_train=x,
        y_mean=y_mean,
        y_std=y_std,
        log_params=np.asarray(best_hp, dtype=float),
        chol=chol,
        alpha=alpha,
        config=config,
        lml=best_lml,
    )


def posterior(model: GpModel, x_query: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """De-standardised posterior mean and standard deviation of the latent
    function at the query rows."""
    x_query = np.atleast_2d(np.asarray(x_query, dtype=float))
    k_star = kernel_eval(x_query, model.x_train, model.log_params, model.config)
    mean_s = k_star @ model.alpha
    v = solve_triangular(model.chol, k_star.T, lower=True)
    sig_f = np.exp(model.log_params[model.config.dims])
    var = np.maximum(sig_f**2 - np.sum(v * v, axis=0), 0.0)
    mean = model.y_mean + model.y_std * mean_s
    std = model.y_std * np.sqrt(var)
    return mean, std
