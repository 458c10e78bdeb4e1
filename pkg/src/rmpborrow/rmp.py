"""Normal robust mixture priors and their exact conjugate updating.

Weights are updated through a difference of log prior-predictive densities,
so robust variances up to ~1e300 are fine.  Functions taking an observed
mean ``x`` accept scalars or numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .numerics import bisect_increasing, find_root_bracketed, normal_logpdf, std_normal_cdf


@dataclass(frozen=True)
class NormalComponent:
    mean: float
    variance: float

    def __post_init__(self):
        if not np.isfinite(self.mean):
            raise ValueError("component mean must be finite")
        if not (np.isfinite(self.variance) and self.variance > 0):
            raise ValueError(f"component variance must be positive and finite, got {self.variance}")

    @property
    def sd(self) -> float:
        return float(np.sqrt(self.variance))


@dataclass(frozen=True)
class SamplingModel:
    """Known sampling variance of the observed arm mean (s^2 / n)."""

    sampling_variance: float

    def __post_init__(self):
        if not (np.isfinite(self.sampling_variance) and self.sampling_variance > 0):
            raise ValueError("sampling_variance must be positive and finite")

    @classmethod
    def from_arm(cls, s: float, n: float) -> "SamplingModel":
        return cls(s * s / n)


@dataclass(frozen=True)
class RobustMixturePrior:
    """``weight * informative + (1 - weight) * robust`` on the control mean."""

    weight: float
    informative: NormalComponent
    robust: NormalComponent

    def __post_init__(self):
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError(f"prior weight must lie in [0, 1], got {self.weight}")
        if self.robust.variance < self.informative.variance:
            raise ValueError(
                "robust component must be less informative than the informative one "
                f"(robust variance {self.robust.variance} < informative variance {self.informative.variance})"
            )

    @property
    def prior_odds(self) -> float:
        if self.weight >= 1.0:
            return np.inf
        return self.weight / (1.0 - self.weight)


@dataclass(frozen=True)
class PredictiveSpec:
    v2_inf: float
    v2_rob: float

    @property
    def ratio(self) -> float:
        """Ratio of predictive SDs, robust over informative."""
        return float(np.sqrt(self.v2_rob / self.v2_inf))


def predictive_spec(rmp: RobustMixturePrior, sampling: SamplingModel) -> PredictiveSpec:
    sv = sampling.sampling_variance
    return PredictiveSpec(rmp.informative.variance + sv, rmp.robust.variance + sv)


@dataclass(frozen=True)
class PosteriorMixture:
    weight: float | np.ndarray
    informative_post: NormalComponent
    robust_post: NormalComponent

    def components(self):
        return (self.informative_post, self.robust_post)


def _update_arrays(prior_mean, prior_var, x, sampling_var):
    # precision form keeps prior_var ~ 1e300 from overflowing
    prec = 1.0 / prior_var + 1.0 / sampling_var
    post_var = 1.0 / prec
    post_mean = (x / sampling_var + prior_mean / prior_var) * post_var
    return post_mean, post_var


def conjugate_update(prior: NormalComponent, x: float, sampling: SamplingModel) -> NormalComponent:
    m, v = _update_arrays(prior.mean, prior.variance, x, sampling.sampling_variance)
    return NormalComponent(float(m), float(v))


def log_prior_predictive(comp: NormalComponent, x, sampling: SamplingModel):
    return normal_logpdf(x, comp.mean, comp.variance + sampling.sampling_variance)


def posterior_log_odds(rmp: RobustMixturePrior, x, sampling: SamplingModel):
    """Log posterior odds of the informative component after observing ``x``."""
    if not 0.0 < rmp.weight < 1.0:
        raise ValueError("posterior log-odds undefined for prior weight 0 or 1")
    log_prior_odds = np.log(rmp.weight) - np.log1p(-rmp.weight)
    return (
        log_prior_odds
        + log_prior_predictive(rmp.informative, x, sampling)
        - log_prior_predictive(rmp.robust, x, sampling)
    )


def posterior_weight(rmp: RobustMixturePrior, x, sampling: SamplingModel):
    if rmp.weight in (0.0, 1.0):
        w = np.full(np.shape(x), float(rmp.weight))
        return float(w) if w.ndim == 0 else w
    w = expit(posterior_log_odds(rmp, x, sampling))
    return float(w) if np.ndim(w) == 0 else w


def update_posterior(rmp: RobustMixturePrior, x: float, sampling: SamplingModel) -> PosteriorMixture:
    return PosteriorMixture(
        posterior_weight(rmp, x, sampling),
        conjugate_update(rmp.informative, x, sampling),
        conjugate_update(rmp.robust, x, sampling),
    )


def mixture_cdf(pm: PosteriorMixture, t):
    a, b = pm.informative_post, pm.robust_post
    return pm.weight * std_normal_cdf((t - a.mean) / a.sd) + (1.0 - pm.weight) * std_normal_cdf(
        (t - b.mean) / b.sd
    )


def _quantile_bracket(means, sds):
    return min(means) - 12.0 * max(sds), max(means) + 12.0 * max(sds)


def mixture_quantile(pm: PosteriorMixture, p: float, tol: float = 1e-12) -> float:
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    comps = pm.components()
    lo, hi = _quantile_bracket([c.mean for c in comps], [c.sd for c in comps])
    return find_root_bracketed(lambda t: mixture_cdf(pm, t) - p, lo, hi, tol)


def two_normal_quantile(weight, m1, s1, m2, s2, p: float = 0.5, tol: float = 1e-12):
    """Vectorized quantile of ``weight*N(m1,s1^2) + (1-weight)*N(m2,s2^2)``.

    All arguments broadcast; used wherever many mixture medians are needed
    at once (quadrature nodes, simulated replicates).
    """
    weight, m1, s1, m2, s2 = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (weight, m1, s1, m2, s2)))
    smax = np.maximum(s1, s2)
    lo = np.minimum(m1, m2) - 12.0 * smax
    hi = np.maximum(m1, m2) + 12.0 * smax

    def f(t):
        return weight * std_normal_cdf((t - m1) / s1) + (1.0 - weight) * std_normal_cdf((t - m2) / s2) - p

    return bisect_increasing(f, lo, hi, tol=tol)
