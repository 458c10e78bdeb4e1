"""Executable checks of the asymptotic results on large-variance robust components.

Each check returns a :class:`PropertyResult` carrying the measured value, the
threshold it is compared to, and the scenario that produced it, so a failure
can be reproduced from the report alone.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import expit

from .borrowing import weight_for_strength
from .numerics import DEFAULT_QUAD, QuadratureSpec
from .oc import type_one_error
from .rmp import NormalComponent, RobustMixturePrior, mixture_cdf, posterior_weight, update_posterior
from .scenarios import ILLUSTRATIVE, TrialSettings, anchor_strength, make_design


@dataclass(frozen=True)
class PropertyResult:
    theorem: int
    name: str
    passed: bool
    value: float
    threshold: float
    scenario: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} theorem {self.theorem} {self.name}: value={self.value:.6g} threshold={self.threshold:.6g}"
        if not self.passed:
            text += " scenario=" + json.dumps(self.scenario, sort_keys=True)
        return text


def _informative_and_sampling(trial: TrialSettings):
    d = make_design(0.5, trial.s ** 2, trial.mu_inf, trial)
    return d.control_prior.informative, d.control_sampling


def _level_weight(B, sigma2_rob, trial):
    informative, sampling = _informative_and_sampling(trial)
    return weight_for_strength(B, sigma2_rob, informative, sampling)


def theorem1(trial: TrialSettings = ILLUSTRATIVE, quad: QuadratureSpec = DEFAULT_QUAD) -> list[PropertyResult]:
    out = []
    B = anchor_strength(trial).B
    s2 = 1e6
    for label, w in (("level-set weight", _level_weight(B, s2, trial)), ("fixed weight 0.5", 0.5)):
        d = make_design(w, s2, trial.mu_inf, trial)
        a = float(type_one_error(d, 1e3, quad))
        out.append(PropertyResult(1, f"alpha(1e3) near eta, sigma2_rob=1e6, {label}", abs(a - trial.eta) <= 0.002,
                                  abs(a - trial.eta), 0.002, {"omega": w, "sigma2_rob": s2, "D": 1e3, "alpha": a}))
    uip = make_design(0.5, trial.s ** 2, trial.mu_inf, trial)
    a50 = float(type_one_error(uip, 50.0, quad))
    out.append(PropertyResult(1, "UIP alpha(50) inflated", a50 >= 0.99, a50, 0.99,
                              {"omega": 0.5, "sigma2_rob": trial.s ** 2, "D": 50.0}))
    am50 = float(type_one_error(uip, -50.0, quad))
    out.append(PropertyResult(1, "UIP alpha(-50) deflated", am50 <= 0.001, am50, 0.001,
                              {"omega": 0.5, "sigma2_rob": trial.s ** 2, "D": -50.0}))
    return out


def location_cdf_gap(omega: float = 0.5, sigma2_rob: float = 1e100, locations=(-2.0, 2.0),
                     trial: TrialSettings = ILLUSTRATIVE, grid=None) -> float:
    """Sup-distance between posterior CDFs of two RMPs differing only in mu_rob."""
    informative, sampling = _informative_and_sampling(trial)
    grid = np.linspace(-10, 10, 201) if grid is None else grid
    cdfs = []
    for loc in locations:
        rmp = RobustMixturePrior(omega, informative, NormalComponent(loc, sigma2_rob))
        cdfs.append(np.array([mixture_cdf(update_posterior(rmp, x, sampling), grid) for x in grid]))
    return float(np.max(np.abs(cdfs[0] - cdfs[1])))


def location_alpha_gap(n0: float = 1 / 32, locations=(-2.0, 2.0), trial: TrialSettings = ILLUSTRATIVE,
                       quad: QuadratureSpec = DEFAULT_QUAD, d_grid=None) -> float:
    """Sup over D of |alpha(D; mu_rob=a) - alpha(D; mu_rob=b)| on a level-set pair."""
    d_grid = np.linspace(-5, 5, 201) if d_grid is None else d_grid
    s2 = trial.s ** 2 / n0
    w = _level_weight(anchor_strength(trial).B, s2, trial)
    curves = [type_one_error(make_design(w, s2, loc, trial), d_grid, quad) for loc in locations]
    return float(np.max(np.abs(curves[0] - curves[1])))


def theorem2(trial: TrialSettings = ILLUSTRATIVE, quad: QuadratureSpec = DEFAULT_QUAD) -> list[PropertyResult]:
    gap = location_cdf_gap(trial=trial)
    agap = location_alpha_gap(trial=trial, quad=quad)
    return [
        PropertyResult(2, "posterior CDF independent of mu_rob at sigma2_rob=1e100", gap <= 1e-8, gap, 1e-8,
                       {"omega": 0.5, "sigma2_rob": 1e100, "mu_rob": [-2, 2]}),
        PropertyResult(2, "alpha(D) curves overlap for n0=1/32 level-set pair", agap <= 0.01, agap, 0.01,
                       {"n0": 1 / 32, "mu_rob": [-2, 2], "D": [-5, 5]}),
    ]


def lindley_min_weight(omega: float = 0.5, sigma2_rob: float = 1e100, half_width: float = 10.0,
                       trial: TrialSettings = ILLUSTRATIVE) -> float:
    informative, sampling = _informative_and_sampling(trial)
    rmp = RobustMixturePrior(omega, informative, NormalComponent(informative.mean, sigma2_rob))
    x = informative.mean + np.linspace(-half_width, half_width, 401)
    return float(np.min(posterior_weight(rmp, x, sampling)))


def strength_profiles(B: float, variances=(1e6, 1e12, 1e100), trial: TrialSettings = ILLUSTRATIVE,
                      x=None) -> np.ndarray:
    informative, sampling = _informative_and_sampling(trial)
    x = informative.mean + np.linspace(-10, 10, 2001) if x is None else x
    rows = []
    for s2 in variances:
        w = weight_for_strength(B, s2, informative, sampling)
        rmp = RobustMixturePrior(w, informative, NormalComponent(informative.mean, s2))
        rows.append(posterior_weight(rmp, x, sampling))
    return np.array(rows)


def theorem3(trial: TrialSettings = ILLUSTRATIVE) -> list[PropertyResult]:
    out = []
    wmin = lindley_min_weight(trial=trial)
    out.append(PropertyResult(3, "fixed weight 0.5, sigma2_rob=1e100: posterior weight > 1-1e-10 on |x-mu_inf|<=10",
                              wmin > 1 - 1e-10, 1 - wmin, 1e-10,
                              {"omega": 0.5, "sigma2_rob": 1e100, "x_range": [-10, 10]}))
    # Smallest window the limit is already visible on at this variance.
    wmin2 = lindley_min_weight(half_width=2.0, trial=trial)
    out.append(PropertyResult(3, "fixed weight 0.5, sigma2_rob=1e100: posterior weight > 1-1e-10 on |x-mu_inf|<=2",
                              wmin2 > 1 - 1e-10, 1 - wmin2, 1e-10,
                              {"omega": 0.5, "sigma2_rob": 1e100, "x_range": [-2, 2]}))
    B = anchor_strength(trial).B
    prof = strength_profiles(B, trial=trial)
    spread = float(np.max(prof.max(axis=0) - prof.min(axis=0)))
    out.append(PropertyResult(3, "fixed borrowing strength: profiles agree across sigma2_rob", spread <= 1e-6,
                              spread, 1e-6, {"B": B, "sigma2_rob": [1e6, 1e12, 1e100]}))
    cap = float(expit(math.log(B)))
    excess = float(np.max(prof) - cap)
    out.append(PropertyResult(3, "fixed borrowing strength: posterior weight bounded by expit(log B)",
                              excess <= 1e-12, excess, 1e-12, {"B": B}))
    return out


SUITES = {1: theorem1, 2: theorem2, 3: theorem3}


def run(theorems=(1, 2, 3), trial: TrialSettings = ILLUSTRATIVE, quad: QuadratureSpec = DEFAULT_QUAD):
    results = []
    for t in theorems:
        fn = SUITES[t]
        results.extend(fn(trial) if t == 3 else fn(trial, quad))
    return results


def scenario_json(result: PropertyResult) -> str:
    return json.dumps(asdict(result), sort_keys=True)
