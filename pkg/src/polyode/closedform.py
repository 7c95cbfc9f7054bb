"""Explicit solution of a solvable instance on the real time axis:

    z_n(t) = z_n(0) * (1 + K t)^(1/(1-M)) ,

valid for t >= 0 up to the blow-up time (the positive real root of
1 + K t = 0, which exists only for real negative K).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constraints import SolvableInstance
from .errors import NegativeTime, SingularTime, ValidationError
from .polysys import as_state

BRACKET_GUARD = 1e-12


@dataclass(frozen=True, eq=False)
class ClosedFormSolution:
    z0: np.ndarray
    k: complex
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise ValidationError(f"degree must be >= 2, got {self.m}")
        object.__setattr__(self, "z0", as_state(self.z0, len(self.z0)))
        object.__setattr__(self, "k", complex(self.k))

    @classmethod
    def from_instance(cls, instance: SolvableInstance) -> "ClosedFormSolution":
        return cls(instance.z0, instance.k, instance.system.m)


def blow_up_time(sol: ClosedFormSolution) -> float | None:
    """Positive real root of 1 + K t = 0, or None when there is none.

    Exists exactly when K is real (|Im K| < 1e-14) and negative; for
    complex or nonnegative-real K the bracket never vanishes for t >= 0.
    """
    k = sol.k
    if abs(k.imag) < 1e-14 and k.real < 0:
        return -1.0 / k.real
    return None


def eval_closed_form(sol: ClosedFormSolution, t: float) -> np.ndarray:
    """Evaluate the closed-form solution at time t >= 0.

    Uses the principal branch of the complex power; on [0, t*) the bracket
    1 + K t never crosses the negative real axis, so the branch is
    continuous there. Refuses |1 + K t| < 1e-12 and t at or beyond blow-up.
    """
    t = float(t)
    if t < 0:
        raise NegativeTime(f"closed form is defined for t >= 0, got t={t}")
    if t == 0:
        return sol.z0.copy()
    t_star = blow_up_time(sol)
    if t_star is not None and t >= t_star - BRACKET_GUARD:
        raise SingularTime(f"t={t} at or beyond blow-up time t*={t_star}")
    bracket = 1 + sol.k * t
    if abs(bracket) < BRACKET_GUARD:
        raise SingularTime(f"|1 + K t| = {abs(bracket):.3e} below guard at t={t}")
    return sol.z0 * bracket ** (1.0 / (1 - sol.m))
