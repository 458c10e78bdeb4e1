"""Monte Carlo trial simulation, used as an independent check on the quadrature.

Replicate ``i`` under seed ``k`` always draws its two normals from Philox
block ``i`` keyed by ``k``, so any chunking or worker split gives identical
draws.  Success is decided by evaluating the posterior probability directly,
not through the critical treatment mean used by the quadrature path.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .inference import TrialDesign, is_success, posterior_median_delta, delta_posterior, success_probability
from .numerics import std_normal_quantile
from .rmp import posterior_weight

_U53 = 2.0 ** -53
CHUNK = 1 << 17


@dataclass(frozen=True)
class McConfig:
    n_reps: int = 1_000_000
    seed: int = 20240601
    chunk: int = CHUNK

    def __post_init__(self):
        if self.n_reps < 1:
            raise ValueError("n_reps must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    se: float
    mean_posterior_weight: float
    n_reps: int
    successes: int


@dataclass(frozen=True)
class SimulatedTrial:
    x_c: float
    x_t: float
    success: bool
    delta_hat: float


def standard_normals(seed: int, start: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Two standard normals per replicate for replicates ``start .. start+count-1``."""
    raw = np.random.Philox(key=seed, counter=start).random_raw(4 * count).reshape(count, 4)
    u = ((raw[:, :2] >> np.uint64(11)).astype(np.float64) + 0.5) * _U53
    z = std_normal_quantile(u)
    return z[:, 0], z[:, 1]


def simulate_trial(design: TrialDesign, theta_c: float, theta_t: float, replicate: int,
                   seed: int = McConfig.seed) -> SimulatedTrial:
    zc, zt = standard_normals(seed, replicate, 1)
    x_c = theta_c + math.sqrt(design.sigma2_c) * float(zc[0])
    x_t = theta_t + math.sqrt(design.sigma2_t) * float(zt[0])
    dp = delta_posterior(design, x_c, x_t)
    return SimulatedTrial(x_c, x_t, is_success(design, x_c, x_t), posterior_median_delta(dp))


def _chunk_counts(design, theta_c, theta_t, seed, start, count):
    zc, zt = standard_normals(seed, start, count)
    x_c = theta_c + math.sqrt(design.sigma2_c) * zc
    x_t = theta_t + math.sqrt(design.sigma2_t) * zt
    prob = success_probability(design, x_c, x_t)
    w = posterior_weight(design.control_prior, x_c, design.control_sampling)
    return int(np.count_nonzero(prob > 1.0 - design.eta)), float(np.sum(w))


def _chunk_job(args):
    return _chunk_counts(*args)


def mc_estimate(design: TrialDesign, D: float, delta_star: float = 0.0, cfg: McConfig = McConfig(),
                workers: int = 1) -> McEstimate:
    """Rejection rate at theta_c = mu_inf + D, theta_t = theta_c + delta_star."""
    theta_c = design.mu_inf + D
    theta_t = theta_c + delta_star
    jobs = [
        (design, theta_c, theta_t, cfg.seed, start, min(cfg.chunk, cfg.n_reps - start))
        for start in range(0, cfg.n_reps, cfg.chunk)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk_job, jobs))
    else:
        parts = [_chunk_job(j) for j in jobs]
    hits = sum(p[0] for p in parts)
    wsum = math.fsum(p[1] for p in parts)
    p_hat = hits / cfg.n_reps
    return McEstimate(p_hat, math.sqrt(p_hat * (1 - p_hat) / cfg.n_reps), wsum / cfg.n_reps, cfg.n_reps, hits)
