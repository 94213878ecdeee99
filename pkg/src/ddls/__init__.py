"""Deferrable-load scheduling toolkit.

Quantized service-request encoding, receding-horizon LP dispatch of
appliance start times against a zero-incremental-cost supply profile,
anonymized threshold feedback, and a benchmark harness comparing the
direct scheduler with uncontrolled, distributed, and price-reactive
operation.
"""

from .errors import ConfigurationError, FeasibilityError, SolverError

__all__ = ["ConfigurationError", "FeasibilityError", "SolverError"]
__version__ = "0.1.0"
