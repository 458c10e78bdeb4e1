"""Posterior of the treatment difference and the one-sided success rule.

The control arm carries a robust mixture prior, the treatment arm a single
normal prior; the posterior of ``delta = theta_t - theta_c`` is then a
two-component normal mixture whose weight depends on ``x_c`` only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import bisect_increasing, expand_bracket, std_normal_cdf
from .rmp import (
    NormalComponent,
    PosteriorMixture,
    RobustMixturePrior,
    SamplingModel,
    _update_arrays,
    mixture_quantile,
    posterior_weight,
    update_posterior,
)

THRESHOLD_TOL = 1e-10


@dataclass(frozen=True)
class TrialDesign:
    n_c: float
    n_t: float
    s: float
    eta: float
    control_prior: RobustMixturePrior
    treatment_prior: NormalComponent

    def __post_init__(self):
        if self.n_c < 1 or self.n_t < 1:
            raise ValueError("arm sizes must be >= 1")
        if not self.s > 0:
            raise ValueError("endpoint SD must be positive")
        if not 0.0 < self.eta < 1.0:
            raise ValueError("eta must lie in (0, 1)")

    @property
    def sigma2_c(self) -> float:
        return self.s ** 2 / self.n_c

    @property
    def sigma2_t(self) -> float:
        return self.s ** 2 / self.n_t

    @property
    def K(self) -> float:
        return self.sigma2_t / self.sigma2_c

    @property
    def control_sampling(self) -> SamplingModel:
        return SamplingModel(self.sigma2_c)

    @property
    def treatment_sampling(self) -> SamplingModel:
        return SamplingModel(self.sigma2_t)

    @property
    def mu_inf(self) -> float:
        return self.control_prior.informative.mean


@dataclass(frozen=True)
class DeltaPosterior:
    weight: float
    informative: NormalComponent
    robust: NormalComponent

    def as_mixture(self) -> PosteriorMixture:
        return PosteriorMixture(self.weight, self.informative, self.robust)


def delta_posterior(design: TrialDesign, x_c: float, x_t: float) -> DeltaPosterior:
    ctrl = update_posterior(design.control_prior, x_c, design.control_sampling)
    mt, vt = _update_arrays(design.treatment_prior.mean, design.treatment_prior.variance, x_t, design.sigma2_t)
    return DeltaPosterior(
        float(ctrl.weight),
        NormalComponent(float(mt - ctrl.informative_post.mean), float(vt + ctrl.informative_post.variance)),
        NormalComponent(float(mt - ctrl.robust_post.mean), float(vt + ctrl.robust_post.variance)),
    )


def prob_delta_positive(dp: DeltaPosterior) -> float:
    a, b = dp.informative, dp.robust
    return float(dp.weight * std_normal_cdf(a.mean / a.sd) + (1.0 - dp.weight) * std_normal_cdf(b.mean / b.sd))


def is_success(design: TrialDesign, x_c: float, x_t: float) -> bool:
    return prob_delta_positive(delta_posterior(design, x_c, x_t)) > 1.0 - design.eta


def posterior_median_delta(dp: DeltaPosterior) -> float:
    return mixture_quantile(dp.as_mixture(), 0.5)


# -- vectorized kernels used by quadrature and simulation ----------------------------


@dataclass(frozen=True)
class ControlPosterior:
    """Array form of the control posterior mixture at many ``x_c``."""

    weight: np.ndarray
    m_inf: np.ndarray
    v_inf: float
    m_rob: np.ndarray
    v_rob: float


def control_posterior(design: TrialDesign, x_c) -> ControlPosterior:
    x_c = np.asarray(x_c, dtype=float)
    rmp, sv = design.control_prior, design.sigma2_c
    w = np.asarray(posterior_weight(rmp, x_c, design.control_sampling), dtype=float)
    m1, v1 = _update_arrays(rmp.informative.mean, rmp.informative.variance, x_c, sv)
    m2, v2 = _update_arrays(rmp.robust.mean, rmp.robust.variance, x_c, sv)
    return ControlPosterior(w, m1, float(v1), m2, float(v2))


def treatment_posterior_mean(design: TrialDesign, x_t):
    mt, _ = _update_arrays(design.treatment_prior.mean, design.treatment_prior.variance, np.asarray(x_t, float), design.sigma2_t)
    return mt


def treatment_posterior_variance(design: TrialDesign) -> float:
    return float(1.0 / (1.0 / design.treatment_prior.variance + 1.0 / design.sigma2_t))


def success_probability(design: TrialDesign, x_c, x_t, ctrl: ControlPosterior | None = None):
    """P(delta > 0 | x_c, x_t), broadcasting over arrays."""
    if ctrl is None:
        ctrl = control_posterior(design, x_c)
    mt = treatment_posterior_mean(design, x_t)
    vt = treatment_posterior_variance(design)
    p1 = std_normal_cdf((mt - ctrl.m_inf) / np.sqrt(vt + ctrl.v_inf))
    p2 = std_normal_cdf((mt - ctrl.m_rob) / np.sqrt(vt + ctrl.v_rob))
    return ctrl.weight * p1 + (1.0 - ctrl.weight) * p2


def critical_treatment_mean(design: TrialDesign, x_c, tol: float = THRESHOLD_TOL):
    """Smallest-above threshold x_t* with success iff x_t > x_t*.

    Unique because the control posterior does not involve ``x_t`` and both
    component means of ``delta`` increase strictly with it.
    """
    x_c_arr = np.asarray(x_c, dtype=float)
    ctrl = control_posterior(design, x_c_arr)
    target = 1.0 - design.eta

    def f(x_t):
        return success_probability(design, x_c_arr, x_t, ctrl) - target

    lo, hi = expand_bracket(f, x_c_arr - 10.0 * design.s, x_c_arr + 10.0 * design.s)
    root = bisect_increasing(f, lo, hi, tol=tol)
    return float(root) if root.ndim == 0 else root
