"""Expected improvement and the candidate search for the next suggestion."""

from __future__ import annotations

import numpy as np
from scipy.stats import norm, qmc

from .gp import GaussianProcessState
from .space import ParamSpace

__all__ = ["expected_improvement", "suggest_next"]

N_CANDIDATES = 2048
N_PERTURBED = 10
N_REFINE_STEPS = 32
DEFAULT_XI = 0.01


def expected_improvement(mu, variance, best_so_far: float, xi: float = 0.0):
    """EI for maximization: E[max(f - best - xi, 0)] under N(mu, variance).

    With zero variance this degenerates to max(mu - best - xi, 0).
    """
    scalar = np.ndim(mu) == 0 and np.ndim(variance) == 0
    mu_a, var_a = np.broadcast_arrays(
        np.atleast_1d(np.asarray(mu, dtype=np.float64)),
        np.atleast_1d(np.asarray(variance, dtype=np.float64)),
    )
    sigma = np.sqrt(np.maximum(var_a, 0.0))
    improve = mu_a - best_so_far - xi

    out = np.maximum(improve, 0.0)
    mask = sigma > 0
    if np.any(mask):
        z = improve[mask] / sigma[mask]
        out[mask] = improve[mask] * norm.cdf(z) + sigma[mask] * norm.pdf(z)
    out = np.maximum(out, 0.0)
    return float(out[0]) if scalar else out


def _pick_candidate(ei: np.ndarray, variance: np.ndarray) -> int:
    """Argmax EI; when every candidate ties at zero EI, fall back to the
    candidate with the largest posterior variance."""
    if float(np.max(ei)) <= 0.0:
        return int(np.argmax(variance))
    return int(np.argmax(ei))


def suggest_next(
    state: GaussianProcessState, space: ParamSpace, rng: np.random.Generator
) -> np.ndarray:
    """Next encoded point to evaluate: argmax-EI over seeded quasi-random
    candidates plus perturbed incumbents, refined coordinate-wise."""
    d = space.encoded_dim
    sobol = qmc.Sobol(d=d, scramble=True, seed=int(rng.integers(2**31)))
    candidates = sobol.random(N_CANDIDATES)

    n_best = min(N_PERTURBED, len(state.y_raw))
    best_rows = np.argsort(-state.y_raw, kind="stable")[:n_best]
    perturbed = state.x_train[best_rows] + rng.normal(0.0, 0.05, size=(n_best, d))
    candidates = np.clip(np.vstack([candidates, perturbed]), 0.0, 1.0)

    best_std = (float(np.max(state.y_raw)) - state.y_mean) / state.y_std
    mu, var = state.posterior_standardized(candidates)
    ei = expected_improvement(mu, var, best_std, xi=DEFAULT_XI)
    x = candidates[_pick_candidate(np.asarray(ei), var)].copy()

    def ei_at(point: np.ndarray) -> float:
        m, v = state.posterior_standardized(point[None, :])
        return float(expected_improvement(m, v, best_std, xi=DEFAULT_XI)[0])

    current = ei_at(x)
    for step in range(N_REFINE_STEPS):
        coord = step % d
        width = 0.25 * (0.85**step)
        for delta in (width, -width):
            trial = x.copy()
            trial[coord] = min(max(trial[coord] + delta, 0.0), 1.0)
            value = ei_at(trial)
            if value > current:
                current = value
                x = trial
    return np.clip(x, 0.0, 1.0)
