"""Robust mixture prior borrowing for hybrid-control trials with normal endpoints."""

from .borrowing import BorrowingStrength, ElicitationSpec, borrowing_strength, elicit_prior_weight, level_set, weight_for_strength
from .inference import TrialDesign, delta_posterior, is_success, posterior_median_delta, prob_delta_positive
from .numerics import BracketError, NonConvergenceError, NumericalError, QuadratureSpec
from .oc import (
    DesignPrior,
    average_type_one_error,
    estimation_metrics,
    max_type_one_error,
    oc_curve,
    power,
    sweet_spot,
    type_one_error,
)
from .rmp import NormalComponent, RobustMixturePrior, SamplingModel, posterior_weight, update_posterior
from .scenarios import ILLUSTRATIVE, TrialSettings, make_design

__version__ = "0.1.0"
