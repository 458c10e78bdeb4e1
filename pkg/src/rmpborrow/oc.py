"""Deterministic operating characteristics: type I error, power, averages, sweet spot.

The double integral of the success indicator over ``(x_c, x_t)`` is reduced to
a single smooth integral over ``x_c``: for fixed ``x_c`` success happens iff
``x_t`` exceeds :func:`~rmpborrow.inference.critical_treatment_mean`, so the
inner integral is a normal tail probability.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import optimize

from .inference import (
    TrialDesign,
    control_posterior,
    critical_treatment_mean,
    treatment_posterior_variance,
    treatment_posterior_mean,
)
from .numerics import (
    DEFAULT_QUAD,
    QuadratureSpec,
    find_root_bracketed,
    hermite_nodes,
    integrate_against_normal,
    integrate_uniform,
    std_normal_cdf,
)
from .rmp import RobustMixturePrior, posterior_weight, two_normal_quantile

# Beyond this many endpoint units from the informative mean, x_c +/- a few
# sigma_c is no longer resolvable in double precision for the designs of interest.
MAX_RESOLVABLE_DRIFT = 1e6


@dataclass(frozen=True)
class DriftScenario:
    D: float
    delta_true: float = 0.0

    def theta(self, design: TrialDesign) -> tuple[float, float]:
        """True (theta_c, theta_t)."""
        H = self.D + design.mu_inf
        return H, H + self.delta_true


@dataclass(frozen=True)
class DesignPrior:
    """Distribution of the common true mean used to average the type I error.

    ``kind`` is one of ``point``, ``normal``, ``rmp`` or ``flat``; parameters
    live in ``params`` and are on the scale of the mean itself, not the drift.
    """

    kind: str
    params: tuple

    @classmethod
    def point_mass(cls, theta: float) -> "DesignPrior":
        return cls("point", (float(theta),))

    @classmethod
    def normal(cls, mean: float, variance: float) -> "DesignPrior":
        if not variance > 0:
            raise ValueError("design prior variance must be positive")
        return cls("normal", (float(mean), float(variance)))

    @classmethod
    def from_rmp(cls, rmp: RobustMixturePrior) -> "DesignPrior":
        return cls("rmp", (rmp,))

    @classmethod
    def truncated_flat(cls, lo: float, hi: float) -> "DesignPrior":
        if not lo < hi:
            raise ValueError("truncated-flat design prior needs lo < hi")
        return cls("flat", (float(lo), float(hi)))


@dataclass(frozen=True)
class SweetSpot:
    lo: float
    hi: float
    width: float
    intervals: tuple = ()


@dataclass(frozen=True)
class OCResult:
    alpha: float
    power: float
    alpha_avg: float
    alpha_max: float
    sweet_spot: SweetSpot


@dataclass(frozen=True)
class EstimationMetrics:
    bias: float
    variance: float
    mse: float


class OCRow(NamedTuple):
    D: float
    alpha: float
    power: float
    mean_posterior_weight: float


# -- core kernel ---------------------------------------------------------------------


def rejection_probability(design: TrialDesign, theta_c, theta_t, quad: QuadratureSpec = DEFAULT_QUAD):
    """P(success) when X_c ~ N(theta_c, sigma_c^2), X_t ~ N(theta_t, sigma_t^2).

    Broadcasts over ``theta_c`` and ``theta_t``.
    """
    theta_c, theta_t = np.broadcast_arrays(np.asarray(theta_c, float), np.asarray(theta_t, float))
    sd_c, sd_t = math.sqrt(design.sigma2_c), math.sqrt(design.sigma2_t)

    if quad.scheme == "gauss-hermite":
        z, w = hermite_nodes(quad.order)
        x_c = theta_c[..., None] + sd_c * z
        x_star = critical_treatment_mean(design, x_c)
        tail = std_normal_cdf((theta_t[..., None] - x_star) / sd_t)
        out = tail @ w
    else:
        out = np.empty(theta_c.shape)
        for idx in np.ndindex(theta_c.shape):
            tc, tt = theta_c[idx], theta_t[idx]
            out[idx] = integrate_against_normal(
                lambda xc: std_normal_cdf((tt - critical_treatment_mean(design, xc)) / sd_t), tc, sd_c, quad
            )
    out = np.clip(out, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def type_one_error(design: TrialDesign, D, quad: QuadratureSpec = DEFAULT_QUAD):
    H = np.asarray(D, dtype=float) + design.mu_inf
    return rejection_probability(design, H, H, quad)


def power(design: TrialDesign, D, delta_star: float, quad: QuadratureSpec = DEFAULT_QUAD):
    if delta_star < 0:
        raise ValueError("delta_star must be non-negative")
    H = np.asarray(D, dtype=float) + design.mu_inf
    return rejection_probability(design, H, H + delta_star, quad)


def mean_posterior_weight(design: TrialDesign, D, quad: QuadratureSpec = DEFAULT_QUAD):
    H = np.asarray(D, dtype=float) + design.mu_inf
    z, w = hermite_nodes(quad.order)
    x_c = H[..., None] + math.sqrt(design.sigma2_c) * z
    out = np.asarray(posterior_weight(design.control_prior, x_c, design.control_sampling)) @ w
    return float(out) if np.ndim(out) == 0 else out


# -- averages and summaries ----------------------------------------------------------


def _average_over_normal(design, mean, variance, quad):
    sd = math.sqrt(variance)
    aquad = quad.adaptive()
    mu = design.mu_inf

    def alpha_at(theta):
        return type_one_error(design, theta - mu, quad)

    if aquad.half_width * sd <= MAX_RESOLVABLE_DRIFT:
        return integrate_against_normal(alpha_at, mean, sd, aquad)
    # Effectively flat over every resolvable drift: average over the truncated window.
    warnings.warn(
        f"design prior sd {sd:.3g} exceeds the resolvable range; truncating to +/-{MAX_RESOLVABLE_DRIFT:g}",
        stacklevel=3,
    )
    lo, hi = mean - MAX_RESOLVABLE_DRIFT, mean + MAX_RESOLVABLE_DRIFT
    z_lo, z_hi = (lo - mean) / sd, (hi - mean) / sd
    mass = std_normal_cdf(z_hi) - std_normal_cdf(z_lo)
    if mass < 1e-12:
        return integrate_uniform(alpha_at, lo, hi, aquad, points=(mu,))
    pdf = lambda t: math.exp(-0.5 * ((t - mean) / sd) ** 2) / (sd * math.sqrt(2 * math.pi))  # noqa: E731
    return integrate_uniform(lambda t: alpha_at(t) * pdf(t) * (hi - lo), lo, hi, aquad, points=(mu,)) / mass


def average_type_one_error(design: TrialDesign, dp: DesignPrior, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Type I error averaged over a design prior for the common null mean.

    Uses adaptive quadrature in the design-prior variable: the type I error
    curve has features much narrower than a diffuse design prior.
    """
    mu = design.mu_inf
    if dp.kind == "point":
        return float(type_one_error(design, dp.params[0] - mu, quad))
    if dp.kind == "normal":
        return _average_over_normal(design, dp.params[0], dp.params[1], quad)
    if dp.kind == "rmp":
        rmp: RobustMixturePrior = dp.params[0]
        total = 0.0
        if rmp.weight > 0:
            total += rmp.weight * _average_over_normal(design, rmp.informative.mean, rmp.informative.variance, quad)
        if rmp.weight < 1:
            total += (1 - rmp.weight) * _average_over_normal(design, rmp.robust.mean, rmp.robust.variance, quad)
        return total
    if dp.kind == "flat":
        lo, hi = dp.params
        return integrate_uniform(lambda t: type_one_error(design, t - mu, quad), lo, hi, quad.adaptive(), points=(mu,))
    raise ValueError(f"unknown design prior kind {dp.kind!r}")


def drift_grid(d_range, step: float) -> np.ndarray:
    lo, hi = d_range
    if not lo < hi:
        raise ValueError("drift range needs lo < hi")
    if not step > 0:
        raise ValueError("step must be positive")
    n = int(math.floor((hi - lo) / step + 1e-9))
    return lo + step * np.arange(n + 1)


def max_type_one_error(design: TrialDesign, d_range=(-5.0, 5.0), step: float = 0.01,
                       quad: QuadratureSpec = DEFAULT_QUAD) -> tuple[float, float]:
    """(alpha_max, argmax D): grid search, then golden-section refinement."""
    grid = drift_grid(d_range, step)
    alphas = type_one_error(design, grid, quad)
    i = int(np.argmax(alphas))
    best_D, best = float(grid[i]), float(alphas[i])
    neg = lambda d: -type_one_error(design, d, quad)  # noqa: E731
    if 0 < i < len(grid) - 1 and alphas[i] > alphas[i - 1] and alphas[i] > alphas[i + 1]:
        res = optimize.minimize_scalar(neg, bracket=(grid[i - 1], grid[i], grid[i + 1]), method="golden",
                                       options={"xtol": 1e-6})
    else:
        a = grid[max(i - 1, 0)]
        b = grid[min(i + 1, len(grid) - 1)]
        res = optimize.minimize_scalar(neg, bounds=(a, b), method="bounded", options={"xatol": 1e-6})
    if -res.fun > best and d_range[0] <= res.x <= d_range[1]:
        best_D, best = float(res.x), float(-res.fun)
    return best, best_D


def sweet_spot(design: TrialDesign, delta_star: float, nominal_alpha: float = 0.05,
               nominal_power: float = 0.60, d_range=(-5.0, 5.0), step: float = 0.01,
               quad: QuadratureSpec = DEFAULT_QUAD, margin: float | None = None) -> SweetSpot:
    """Widest drift interval with type I error below and power above nominal.

    Strict inequalities are applied with a numerical ``margin`` (default:
    the quadrature tolerance) so a curve that equals its nominal level up to
    rounding does not count as inside.
    """
    if not (0 < nominal_alpha < 1 and 0 < nominal_power < 1):
        raise ValueError("nominal levels must lie in (0, 1)")
    eps = quad.abs_tol if margin is None else margin

    def slack(D):
        a = type_one_error(design, D, quad)
        p = power(design, D, delta_star, quad)
        return np.minimum(nominal_alpha - eps - a, p - nominal_power - eps)

    grid = drift_grid(d_range, step)
    inside = slack(grid) > 0
    if not inside.any():
        return SweetSpot(float("nan"), float("nan"), 0.0, ())

    def edge(a, b):
        return find_root_bracketed(lambda d: float(slack(d)), a, b, tol=1e-9)

    intervals = []
    i, n = 0, len(grid)
    while i < n:
        if not inside[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and inside[j + 1]:
            j += 1
        lo = grid[i] if i == 0 else edge(grid[i - 1], grid[i])
        hi = grid[j] if j == n - 1 else edge(grid[j], grid[j + 1])
        intervals.append((float(lo), float(hi)))
        i = j + 1
    lo, hi = max(intervals, key=lambda iv: iv[1] - iv[0])
    return SweetSpot(lo, hi, hi - lo, tuple(intervals))


def estimation_metrics(design: TrialDesign, D: float, delta_true: float = 0.0,
                       quad: QuadratureSpec = DEFAULT_QUAD) -> EstimationMetrics:
    """Bias, variance and MSE of the posterior median of delta.

    Nested Gauss-Hermite rule: outer over x_c, inner over x_t.
    """
    theta_c, theta_t = DriftScenario(D, delta_true).theta(design)
    z, w = hermite_nodes(quad.order)
    x_c = theta_c + math.sqrt(design.sigma2_c) * z
    x_t = theta_t + math.sqrt(design.sigma2_t) * z
    ctrl = control_posterior(design, x_c)
    mt = treatment_posterior_mean(design, x_t)
    vt = treatment_posterior_variance(design)
    m1 = mt[None, :] - ctrl.m_inf[:, None]
    m2 = mt[None, :] - ctrl.m_rob[:, None]
    est = two_normal_quantile(ctrl.weight[:, None], m1, math.sqrt(vt + ctrl.v_inf), m2, math.sqrt(vt + ctrl.v_rob))
    W = np.outer(w, w)
    mean_est = float(np.sum(W * est))
    bias = mean_est - delta_true
    variance = float(np.sum(W * (est - mean_est) ** 2))
    mse = float(np.sum(W * (est - delta_true) ** 2))
    return EstimationMetrics(bias, variance, mse)


def oc_curve(design: TrialDesign, D_grid, delta_star: float, quad: QuadratureSpec = DEFAULT_QUAD) -> list[OCRow]:
    D = np.asarray(D_grid, dtype=float)
    if D.size == 0:
        raise ValueError("drift grid is empty")
    a = np.atleast_1d(type_one_error(design, D, quad))
    p = np.atleast_1d(power(design, D, delta_star, quad))
    mw = np.atleast_1d(mean_posterior_weight(design, D, quad))
    return [OCRow(float(d), float(x), float(y), float(m)) for d, x, y, m in zip(np.atleast_1d(D), a, p, mw)]


def summarize(design: TrialDesign, D: float, delta_star: float, dp: DesignPrior,
              d_range=(-5.0, 5.0), step: float = 0.01, quad: QuadratureSpec = DEFAULT_QUAD,
              nominal_alpha: float | None = None, nominal_power: float = 0.60) -> OCResult:
    nominal_alpha = design.eta if nominal_alpha is None else nominal_alpha
    return OCResult(
        alpha=float(type_one_error(design, D, quad)),
        power=float(power(design, D, delta_star, quad)),
        alpha_avg=average_type_one_error(design, dp, quad),
        alpha_max=max_type_one_error(design, d_range, step, quad)[0],
        sweet_spot=sweet_spot(design, delta_star, nominal_alpha, nominal_power, d_range, step, quad),
    )
