from .schedule import (
    ConvergenceResult,
    CostConstant,
    LRSchedule,
    absorption_crossover,
    convergence_test,
    cost_constant,
    lambda_threshold,
    psi_inverse,
    schedule,
    t0_threshold,
    tail_integral_bound,
    tau,
    tau_of_mu,
)
from .telescoping import TelescopingReport, telescoping_check

__all__ = [
    "ConvergenceResult",
    "CostConstant",
    "LRSchedule",
    "TelescopingReport",
    "absorption_crossover",
    "convergence_test",
    "cost_constant",
    "lambda_threshold",
    "psi_inverse",
    "schedule",
    "t0_threshold",
    "tail_integral_bound",
    "tau",
    "tau_of_mu",
    "telescoping_check",
]
