"""The illustrative hybrid-control trial and the level-set table built on it."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .borrowing import BorrowingStrength, borrowing_strength, level_set
from .inference import TrialDesign
from .numerics import DEFAULT_QUAD, QuadratureSpec
from .oc import (
    DesignPrior,
    average_type_one_error,
    max_type_one_error,
    power,
    sweet_spot,
    type_one_error,
)
from .rmp import NormalComponent, RobustMixturePrior


@dataclass(frozen=True)
class TrialSettings:
    n_c: float = 50
    n_t: float = 150
    s: float = 1.0
    eta: float = 0.05
    delta_star: float = 0.31
    mu_inf: float = 0.0
    n_inf: float = 100


ILLUSTRATIVE = TrialSettings()
TABLE1_N0 = tuple(0.5 ** k for k in range(7))
NO_BORROWING_N0 = 1e-100
NOMINAL_POWER = 0.60


def make_design(omega: float, sigma2_rob: float, mu_rob: float = 0.0,
                trial: TrialSettings = ILLUSTRATIVE,
                treatment_prior: NormalComponent | None = None,
                sigma2_inf: float | None = None) -> TrialDesign:
    """Trial design whose treatment prior defaults to N(mu_rob, sigma2_rob)."""
    s2 = trial.s ** 2
    informative = NormalComponent(trial.mu_inf, s2 / trial.n_inf if sigma2_inf is None else sigma2_inf)
    robust = NormalComponent(mu_rob, sigma2_rob)
    if treatment_prior is None:
        treatment_prior = NormalComponent(mu_rob, sigma2_rob)
    return TrialDesign(trial.n_c, trial.n_t, trial.s, trial.eta,
                       RobustMixturePrior(omega, informative, robust), treatment_prior)


def anchor_strength(trial: TrialSettings = ILLUSTRATIVE) -> BorrowingStrength:
    """Borrowing strength of the unit-information RMP with weight 0.5."""
    d = make_design(0.5, trial.s ** 2, trial.mu_inf, trial)
    return borrowing_strength(d.control_prior, d.control_sampling)


def table1_pairs(trial: TrialSettings = ILLUSTRATIVE, n0_list=TABLE1_N0) -> list[tuple[float, float]]:
    """The no-borrowing reference row followed by the level-set pairs."""
    d = make_design(0.5, trial.s ** 2, trial.mu_inf, trial)
    pairs = level_set(anchor_strength(trial).B, n0_list, d.control_prior.informative, d.control_sampling, trial.s)
    return [(0.0, NO_BORROWING_N0)] + pairs


@dataclass(frozen=True)
class Table1Row:
    omega: float
    n0: float
    B: float
    paper_beta: float
    alpha_max: float
    alpha_50: float
    alpha_avg_vag: float
    alpha_avg_inf: float
    alpha_avg_rmp: float
    pow_0: float
    sweet_spot_width: float

    COLUMNS = ("omega", "n0", "B", "paper_beta", "alpha_max", "alpha_50", "alpha_avg_vag",
               "alpha_avg_inf", "alpha_avg_rmp", "pow_0", "sweet_spot_width")

    def values(self) -> tuple:
        return tuple(getattr(self, c) for c in self.COLUMNS)


def table1_row(omega: float, n0: float, trial: TrialSettings = ILLUSTRATIVE,
               quad: QuadratureSpec = DEFAULT_QUAD, vag_range=(-50.0, 50.0),
               d_range=(-5.0, 5.0), step: float = 0.01) -> Table1Row:
    design = make_design(omega, trial.s ** 2 / n0, trial.mu_inf, trial)
    rmp = design.control_prior
    if 0 < omega < 1:
        B = borrowing_strength(rmp, design.control_sampling).B
    else:
        B = math.nan
    mu = trial.mu_inf
    return Table1Row(
        omega=omega,
        n0=n0,
        B=B,
        paper_beta=1.0 / B if B == B else math.nan,
        alpha_max=max_type_one_error(design, d_range, step, quad)[0],
        alpha_50=float(type_one_error(design, 50.0, quad)),
        alpha_avg_vag=average_type_one_error(design, DesignPrior.truncated_flat(mu + vag_range[0], mu + vag_range[1]), quad),
        alpha_avg_inf=average_type_one_error(design, DesignPrior.normal(rmp.informative.mean, rmp.informative.variance), quad),
        alpha_avg_rmp=average_type_one_error(design, DesignPrior.from_rmp(rmp), quad),
        pow_0=float(power(design, 0.0, trial.delta_star, quad)),
        sweet_spot_width=sweet_spot(design, trial.delta_star, trial.eta, NOMINAL_POWER, d_range, step, quad).width,
    )


def _row_job(args):
    return table1_row(*args)


def table1(trial: TrialSettings = ILLUSTRATIVE, quad: QuadratureSpec = DEFAULT_QUAD,
           vag_range=(-50.0, 50.0), workers: int = 1) -> list[Table1Row]:
    jobs = [(w, n0, trial, quad, vag_range) for w, n0 in table1_pairs(trial)]
    if workers <= 1:
        return [_row_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_row_job, jobs))
