"""
Fitted constants for inequalities with non-explicit constants.

Each instance contributes the smallest constant that makes it pass. The
fitted constant is the maximum over the fitting instances, and every
instance is then re-checked against it.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, Final

import numpy as np

# relative slack when re-checking instances against the fitted constant
FIT_RTOL: Final = 1e-9


@dataclass(frozen=True)
class ConstantFit:
    """
    Attributes:
        constant: fitted C
        instances: number of checked instances
        fit_instances: number of instances the fit used
        violations: checked instances whose required C exceeds the fit
    """

    constant: float
    instances: int
    fit_instances: int
    violations: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "fitted_C": self.constant,
            "instances": self.instances,
            "fit_instances": self.fit_instances,
            "violations": self.violations,
        }


def fit_constant(
    required: Sequence[float], fit_mask: Sequence[bool] | None = None
) -> ConstantFit:
    """Fit C = max(required[fit_mask], 0) and count instances above it."""
    values = np.asarray(required, dtype=float)
    mask = (
        np.ones(values.size, dtype=bool) if fit_mask is None else np.asarray(fit_mask)
    )
    fitted = values[mask]
    constant = max(0.0, float(fitted.max())) if fitted.size else 0.0
    limit = constant * (1.0 + FIT_RTOL) + FIT_RTOL
    return ConstantFit(
        constant=constant,
        instances=int(values.size),
        fit_instances=int(mask.sum()),
        violations=int(np.count_nonzero(values > limit)),
    )
