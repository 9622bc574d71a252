"""Bottleneck identification and capacity-constraint relaxation for
project scheduling with time-variant resource capacities."""

from .model import (
    FeasibilityReport,
    InstanceError,
    Job,
    ProblemInstance,
    Resource,
    Schedule,
    consumption_timeline,
    validate,
    weighted_tardiness,
)

__version__ = "0.1.0"

__all__ = [
    "FeasibilityReport",
    "InstanceError",
    "Job",
    "ProblemInstance",
    "Resource",
    "Schedule",
    "consumption_timeline",
    "validate",
    "weighted_tardiness",
    "__version__",
]
