"""Result records shared by the recovery algorithms."""

from dataclasses import dataclass, field

import numpy as np

HALT_RESIDUAL_ZERO = "residual_zero"
HALT_SUPPORT_FULL = "support_full"
HALT_MAX_ITERATIONS = "max_iterations"
HALT_SAMPLE_NORM = "sample_norm_criterion"
HALT_PROXY_INFNORM = "proxy_infnorm_criterion"

HALT_REASONS = (
    HALT_RESIDUAL_ZERO,
    HALT_SUPPORT_FULL,
    HALT_MAX_ITERATIONS,
    HALT_SAMPLE_NORM,
    HALT_PROXY_INFNORM,
)


@dataclass
class RecoveryReport:
    """Outcome of one recovery run.

    ``residual_history`` holds the residual 2-norm after each completed
    iteration.  The optional histories are populated when a run is asked to
    keep them (per-iteration selections, estimates, or errors against a
    caller-supplied reference).
    """

    estimate: np.ndarray
    support: np.ndarray
    iterations: int
    residual_history: list = field(default_factory=list)
    halt_reason: str = HALT_MAX_ITERATIONS
    selection_history: list | None = None
    estimate_history: list | None = None
    reference_errors: list | None = None
