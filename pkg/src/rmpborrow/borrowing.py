"""Borrowing strength, (weight, robust variance) level sets and weight elicitation.

The borrowing strength ``B`` used here is the exact posterior odds of the
informative component when the observed control mean equals the common
location of both components: ``B = Omega * R``.  The reciprocal ``1/B`` is
carried alongside as ``paper_beta`` for the inverse-odds convention.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy.special import expit

from .rmp import (
    NormalComponent,
    RobustMixturePrior,
    SamplingModel,
    log_prior_predictive,
    predictive_spec,
)


@dataclass(frozen=True)
class BorrowingStrength:
    B: float
    exact: bool = True

    def __post_init__(self):
        if not (self.B > 0 and math.isfinite(self.B)):
            raise ValueError("borrowing strength must be positive and finite")

    @property
    def paper_beta(self) -> float:
        return 1.0 / self.B


@dataclass(frozen=True)
class ElicitationSpec:
    """Inputs of the elicitation routine.

    ``d_star`` is the observed control drift (relative to the informative
    mean) at which the posterior weight should be one half.
    """

    d_star: float
    sigma_rob: float
    mu_rob: float | None = None  # None: centre the robust component on the informative mean

    def __post_init__(self):
        if not math.isfinite(self.d_star):
            raise ValueError("d_star must be finite")
        if not self.sigma_rob > 0:
            raise ValueError("sigma_rob must be positive")


def borrowing_strength(rmp: RobustMixturePrior, sampling: SamplingModel) -> BorrowingStrength:
    if not 0.0 < rmp.weight < 1.0:
        raise ValueError("borrowing strength undefined for prior weight 0 or 1")
    ratio = predictive_spec(rmp, sampling).ratio
    return BorrowingStrength(rmp.prior_odds * ratio, exact=rmp.robust.mean == rmp.informative.mean)


def weight_for_strength(B: float, sigma2_rob: float, informative: NormalComponent,
                        sampling: SamplingModel) -> float:
    """Prior weight giving borrowing strength ``B`` for robust variance ``sigma2_rob``."""
    if not B > 0:
        raise ValueError("B must be positive")
    if not sigma2_rob > informative.variance:
        raise ValueError("robust variance must exceed the informative variance")
    sv = sampling.sampling_variance
    ratio = math.sqrt((sigma2_rob + sv) / (informative.variance + sv))
    odds = B / ratio
    return odds / (1.0 + odds)


def level_set(B: float, n0_list, informative: NormalComponent, sampling: SamplingModel,
              s: float = 1.0) -> list[tuple[float, float]]:
    """(weight, n0) pairs sharing borrowing strength ``B``; robust variance is s^2/n0."""
    pairs = []
    for n0 in n0_list:
        if not n0 > 0:
            raise ValueError("effective sample sizes must be positive")
        pairs.append((weight_for_strength(B, s * s / n0, informative, sampling), float(n0)))
    return pairs


def elicit_prior_weight(spec: ElicitationSpec, informative: NormalComponent,
                        sampling: SamplingModel) -> tuple[float, BorrowingStrength]:
    """Prior weight that puts the posterior weight at 0.5 for x = mu_inf + d_star.

    Inverts the exact weight update: the prior odds equal the ratio of robust
    to informative prior-predictive densities at that point.
    """
    mu_rob = informative.mean if spec.mu_rob is None else spec.mu_rob
    robust = NormalComponent(mu_rob, spec.sigma_rob ** 2)
    pred = predictive_spec(RobustMixturePrior(0.5, informative, robust), sampling)
    if pred.ratio < 10:
        warnings.warn(f"robust component is not diffuse (R = {pred.ratio:.3g} < 10)", stacklevel=2)
    x_star = informative.mean + spec.d_star
    log_odds = float(log_prior_predictive(robust, x_star, sampling) - log_prior_predictive(informative, x_star, sampling))
    log_B = log_odds + math.log(pred.ratio)
    if log_B > 700:
        raise ValueError(f"d_star={spec.d_star} is so extreme that the elicited weight rounds to 1")
    return float(expit(log_odds)), BorrowingStrength(math.exp(log_B), exact=mu_rob == informative.mean)
