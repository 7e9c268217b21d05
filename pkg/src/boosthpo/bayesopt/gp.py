"""Gaussian process surrogate with a Matern 5/2 kernel.

Targets are standardized to zero mean / unit variance before fitting; kernel
hyper-parameters are chosen by maximizing the log marginal likelihood with a
multi-start Nelder-Mead search on log10 hyper-parameters.  Training rows are
canonically sorted so the fit is invariant to the order trials arrived in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular
from scipy.optimize import minimize

from ..errors import TooFewTrials
from ..trials import TrialRecord
from .space import ParamSpace

__all__ = ["matern52", "matern52_matrix", "GaussianProcessState", "fit_gp", "gp_posterior"]

NOISE_FLOOR = 1e-6

# log10 search bounds for (lengthscales, signal variance, noise variance);
# targets are standardized, so the signal variance is bounded below at the
# observed spread -- otherwise the complexity term shrinks it under the data
_ELL_BOUNDS = (-2.0, 1.5)
_SIG_BOUNDS = (0.0, 2.0)
_NOISE_BOUNDS = (math.log10(NOISE_FLOOR), 0.0)

_SQRT5 = math.sqrt(5.0)


def matern52(x, y, lengthscales, signal_variance: float) -> float:
    """Matern 5/2 covariance between two vectors."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    ell = np.broadcast_to(np.asarray(lengthscales, dtype=np.float64), x.shape)
    r = math.sqrt(float(np.sum(((x - y) / ell) ** 2)))
    return signal_variance * (1.0 + _SQRT5 * r + 5.0 / 3.0 * r * r) * math.exp(-_SQRT5 * r)


def matern52_matrix(
    xa: np.ndarray, xb: np.ndarray, lengthscales: np.ndarray, signal_variance: float
) -> np.ndarray:
    """Cross-covariance matrix, shape (len(xa), len(xb))."""
    a = xa / lengthscales
    b = xb / lengthscales
    d2 = (
        np.sum(a * a, axis=1)[:, None]
        + np.sum(b * b, axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    r = np.sqrt(np.maximum(d2, 0.0))
    return signal_variance * (1.0 + _SQRT5 * r + 5.0 / 3.0 * r * r) * np.exp(-_SQRT5 * r)


@dataclass
class GaussianProcessState:
    """Fitted surrogate: standardized targets and a factorized Gram matrix."""

    x_train: np.ndarray  # (n, D) encoded rows
    y_raw: np.ndarray  # (n,) raw scores
    y_mean: float
    y_std: float
    lengthscales: np.ndarray  # (D,)
    signal_variance: float
    noise_variance: float  # effective value after any jitter escalation
    chol: np.ndarray  # lower-triangular factor of K + noise*I
    alpha: np.ndarray  # (K + noise*I)^-1 y_standardized

    @property
    def y_standardized(self) -> np.ndarray:
        return (self.y_raw - self.y_mean) / self.y_std

    @classmethod
    def build(
        cls,
        x_train: np.ndarray,
        y_raw: np.ndarray,
        lengthscales,
        signal_variance: float,
        noise_variance: float,
        y_mean: float | None = None,
        y_std: float | None = None,
    ) -> "GaussianProcessState":
        """Factorize the Gram matrix, escalating jitter tenfold on failure."""
        x_train = np.asarray(x_train, dtype=np.float64)
        y_raw = np.asarray(y_raw, dtype=np.float64)
        if y_mean is None:
            y_mean = float(y_raw.mean())
        if y_std is None:
            y_std = float(y_raw.std(ddof=1)) if y_raw.size > 1 else 1.0
            if y_std == 0.0:
                y_std = 1.0
        ell = np.broadcast_to(
            np.asarray(lengthscales, dtype=np.float64), (x_train.shape[1],)
        ).copy()
        y_s = (y_raw - y_mean) / y_std

        noise = max(noise_variance, NOISE_FLOOR)
        kernel = matern52_matrix(x_train, x_train, ell, signal_variance)
        chol = None
        for _ in range(12):
            try:
                chol = cholesky(kernel + noise * np.eye(len(y_raw)), lower=True)
                break
            except np.linalg.LinAlgError:
                noise *= 10.0
        if chol is None:
            raise np.linalg.LinAlgError("Gram matrix not factorizable even after jitter")
        alpha = cho_solve((chol, True), y_s)
        return cls(
            x_train=x_train,
            y_raw=y_raw,
            y_mean=y_mean,
            y_std=y_std,
            lengthscales=ell,
            signal_variance=signal_variance,
            noise_variance=noise,
            chol=chol,
            alpha=alpha,
        )

    def log_marginal_likelihood(self) -> float:
        y_s = self.y_standardized
        n = y_s.size
        return float(
            -0.5 * y_s @ self.alpha
            - np.sum(np.log(np.diag(self.chol)))
            - 0.5 * n * math.log(2.0 * math.pi)
        )

    def posterior_standardized(self, xq: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Predictive mean/variance in standardized units for query rows."""
        xq = np.atleast_2d(np.asarray(xq, dtype=np.float64))
        k_star = matern52_matrix(self.x_train, xq, self.lengthscales, self.signal_variance)
        mu = k_star.T @ self.alpha
        v = solve_triangular(self.chol, k_star, lower=True)
        var = self.signal_variance - np.sum(v * v, axis=0)
        return mu, np.maximum(var, 0.0)


def gp_posterior(state: GaussianProcessState, x: np.ndarray) -> tuple[float, float]:
    """Predictive mean and variance at one point, in raw score units."""
    mu, var = state.posterior_standardized(np.asarray(x)[None, :])
    return (
        float(state.y_mean + state.y_std * mu[0]),
        float(state.y_std * state.y_std * var[0]),
    )


def _canonical_order(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    keys = (y,) + tuple(x[:, j] for j in range(x.shape[1] - 1, -1, -1))
    return np.lexsort(keys)


def _negative_lml(theta: np.ndarray, x: np.ndarray, y_s: np.ndarray) -> float:
    d = x.shape[1]
    lo = np.array([_ELL_BOUNDS[0]] * d + [_SIG_BOUNDS[0], _NOISE_BOUNDS[0]])
    hi = np.array([_ELL_BOUNDS[1]] * d + [_SIG_BOUNDS[1], _NOISE_BOUNDS[1]])
    clipped = np.clip(theta, lo, hi)
    penalty = float(np.sum((theta - clipped) ** 2))

    ell = 10.0 ** clipped[:d]
    sig = 10.0 ** clipped[d]
    noise = 10.0 ** clipped[d + 1]
    kernel = matern52_matrix(x, x, ell, sig) + noise * np.eye(len(y_s))
    try:
        chol = cholesky(kernel, lower=True)
    except np.linalg.LinAlgError:
        return 1e12 + penalty
    alpha = cho_solve((chol, True), y_s)
    lml = (
        -0.5 * y_s @ alpha
        - np.sum(np.log(np.diag(chol)))
        - 0.5 * len(y_s) * math.log(2.0 * math.pi)
    )
    # weak prior toward floor noise; resolves the signal/noise ridge that is
    # likelihood-flat for near-diagonal kernels without distorting real fits
    noise_pull = 0.05 * (clipped[d + 1] - _NOISE_BOUNDS[0])
    return float(-lml) + noise_pull + 100.0 * penalty


def _median_distance(x: np.ndarray) -> float:
    diffs = x[:, None, :] - x[None, :, :]
    d = np.sqrt(np.sum(diffs * diffs, axis=-1))
    upper = d[np.triu_indices(len(x), k=1)]
    med = float(np.median(upper)) if upper.size else 0.0
    return med if med > 0 else 0.5


def fit_gp(trials: list[TrialRecord], space: ParamSpace, maxfev: int = 150) -> GaussianProcessState:
    """Fit the surrogate to finished trials (all must carry scores).

    All-equal targets are a degenerate case: the fit falls back to fixed
    default hyper-parameters (lengthscale 0.5, unit signal, floor noise).
    """
    ok = [t for t in trials if t.ok]
    if len(ok) < 2:
        raise TooFewTrials(f"need >= 2 scored trials, got {len(ok)}")

    x = np.stack([space.encode(t.params) for t in ok])
    y = np.array([t.validation_score for t in ok], dtype=np.float64)
    order = _canonical_order(x, y)
    x, y = x[order], y[order]
    d = x.shape[1]

    y_std = float(y.std(ddof=1))
    if y_std == 0.0:
        return GaussianProcessState.build(
            x, y, np.full(d, 0.5), 1.0, NOISE_FLOOR, y_mean=float(y.mean()), y_std=1.0
        )

    y_s = (y - y.mean()) / y_std
    med = _median_distance(x)
    starts = []
    for ell0 in (0.1, 0.3, 1.0, med):
        for noise0 in (NOISE_FLOOR, 1e-2):
            starts.append(
                np.array([math.log10(ell0)] * d + [0.0, math.log10(noise0)])
            )

    best_theta = None
    best_val = np.inf
    for theta0 in starts:
        res = minimize(
            _negative_lml,
            theta0,
            args=(x, y_s),
            method="Nelder-Mead",
            options={"maxfev": maxfev, "xatol": 1e-3, "fatol": 1e-5},
        )
        if res.fun < best_val:
            best_val = float(res.fun)
            best_theta = res.x

    lo = np.array([_ELL_BOUNDS[0]] * d + [_SIG_BOUNDS[0], _NOISE_BOUNDS[0]])
    hi = np.array([_ELL_BOUNDS[1]] * d + [_SIG_BOUNDS[1], _NOISE_BOUNDS[1]])
    theta = np.clip(best_theta, lo, hi)
    return GaussianProcessState.build(
        x,
        y,
        10.0 ** theta[:d],
        float(10.0 ** theta[d]),
        float(10.0 ** theta[d + 1]),
    )
