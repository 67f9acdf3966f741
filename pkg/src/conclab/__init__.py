"""conclab: a numerical laboratory for measure concentration on spheres,
free-group counterexamples, and amenability experiments."""

__version__ = "0.1.0"

from .betainc import NonConvergenceError, betainc, log_betainc
from .sphere import (
    DEFAULT_LEVY,
    LevyConstants,
    MeasureValue,
    SphereQuery,
    cap_measure,
    exponential_decay_ratio,
    levy_lower_bound,
    recursive_tube_lower_bound,
    tube_measure,
)
from .streams import Estimate, SampleStream, pool_estimates

__all__ = [
    "__version__",
    "NonConvergenceError",
    "betainc",
    "log_betainc",
    "DEFAULT_LEVY",
    "LevyConstants",
    "MeasureValue",
    "SphereQuery",
    "cap_measure",
    "exponential_decay_ratio",
    "levy_lower_bound",
    "recursive_tube_lower_bound",
    "tube_measure",
    "Estimate",
    "SampleStream",
    "pool_estimates",
]
