"""Black-box estimation of local (Renyi) differential privacy from samples."""

from .core import (
    EstimateReport, InfeasiblePlanError, PlanError, TheoremInapplicableError,
    concentration_f, min_n_satisfying,
)
from .ldp import (
    estimate_discrete_ldp, estimate_grid_ldp, estimate_pair_ldp, plan_grid_ldp, plan_ldp,
    practical_ldp_plan,
)
from .lrdp import (
    estimate_grid_lrdp, estimate_pair_lrdp, plan_grid_lrdp, plan_lrdp, practical_lrdp_plan,
)
from .mechanisms import (
    AdversarialBernoulliPair, Interval, KRandomizedResponse, TruncatedGaussian,
    TruncatedLaplace, lipschitz_constants,
)
from .safety import SafetyConfig, run_safety_protocol

__version__ = "0.1.0"

__all__ = [
    "AdversarialBernoulliPair", "EstimateReport", "InfeasiblePlanError", "Interval",
    "KRandomizedResponse", "PlanError", "SafetyConfig", "TheoremInapplicableError",
    "TruncatedGaussian", "TruncatedLaplace", "concentration_f", "estimate_discrete_ldp",
    "estimate_grid_ldp", "estimate_grid_lrdp", "estimate_pair_ldp", "estimate_pair_lrdp",
    "lipschitz_constants", "min_n_satisfying", "plan_grid_ldp", "plan_grid_lrdp", "plan_ldp",
    "plan_lrdp", "practical_ldp_plan", "practical_lrdp_plan", "run_safety_protocol",
]
