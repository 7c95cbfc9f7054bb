"""Explicitly solvable systems of first-order ODEs with homogeneous
polynomial right-hand sides, their periodic complexified variants, and an
independent numerical-integration oracle for verifying both."""

from .closedform import ClosedFormSolution, blow_up_time, eval_closed_form
from .constraints import (
    RATE_K,
    CoefficientSlot,
    RateK,
    SolvableInstance,
    UnknownSelection,
    constraint_residual,
    jacobian,
    newton_solve_initial_data,
    solve_linear_selection,
)
from .generate import generate_random_instance
from .oracle import (
    IntegratorConfig,
    integrate,
    integrate_rk4,
    verify_instance,
    verify_periodic,
)
from .periodic import (
    PeriodicClosedForm,
    PeriodicSystem,
    PeriodReport,
    detect_period,
    eval_periodic_closed_form,
    eval_periodic_rhs,
    periodize,
)
from .polysys import (
    PolynomialSystem,
    enumerate_multi_indices,
    evaluate_rhs,
    scale_state,
)
from .trajectory import StepStats, Trajectory

__all__ = [
    "ClosedFormSolution",
    "CoefficientSlot",
    "IntegratorConfig",
    "PeriodReport",
    "PeriodicClosedForm",
    "PeriodicSystem",
    "PolynomialSystem",
    "RATE_K",
    "RateK",
    "SolvableInstance",
    "StepStats",
    "Trajectory",
    "UnknownSelection",
    "blow_up_time",
    "constraint_residual",
    "detect_period",
    "enumerate_multi_indices",
    "eval_closed_form",
    "eval_periodic_closed_form",
    "eval_periodic_rhs",
    "evaluate_rhs",
    "generate_random_instance",
    "integrate",
    "integrate_rk4",
    "jacobian",
    "newton_solve_initial_data",
    "periodize",
    "scale_state",
    "solve_linear_selection",
    "verify_instance",
    "verify_periodic",
]

__version__ = "0.1.0"
