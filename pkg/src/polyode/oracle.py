"""Independent numerical integration used to verify the closed forms.

The single adaptive oracle is a Dormand-Prince 5(4) embedded pair with
proportional step control and 4th-order dense output. Complex states are
integrated as 2N real components. A fixed-step classical RK4 is included
as a cross-check mode only. The integrator consumes only right-hand-side
callables; it never touches the closed-form formulas.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closedform import ClosedFormSolution, blow_up_time, eval_closed_form
from .constraints import SolvableInstance
from .errors import MaxStepsExceeded, StepUnderflow, ValidationError
from .periodic import PeriodicClosedForm, eval_periodic_closed_form, eval_periodic_rhs
from .polysys import evaluate_rhs
from .trajectory import SOURCE_INTEGRATED, StepStats, Trajectory

# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# 5th-order minus embedded 4th-order weights (local error estimator).
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)
# Dense-output polynomial (4th order in the step fraction).
_P = np.array(
    [
        [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    initial_step: float = 1e-3
    max_steps: int = 10_000_000
    min_step: float = 1e-12

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "initial_step", "max_steps", "min_step"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be positive")
        if self.rel_tol < 1e-14:
            raise ValidationError(f"rel_tol must be >= 1e-14, got {self.rel_tol}")


def _pack(z: np.ndarray) -> np.ndarray:
    return np.concatenate([z.real, z.imag])


def _unpack(y: np.ndarray) -> np.ndarray:
    half = y.size // 2
    return y[:half] + 1j * y[half:]


def integrate(
    rhs,
    z0,
    t_end: float,
    config: IntegratorConfig | None = None,
    t_eval=None,
) -> Trajectory:
    """Integrate dz/dt = rhs(z) from t=0 to t_end.

    ``rhs`` maps a complex state vector to a complex state vector. When
    ``t_eval`` is given, states are produced at those times via the dense
    output interpolant; otherwise the accepted step points are returned.
    Deterministic given the configuration.
    """
    if config is None:
        config = IntegratorConfig()
    t_end = float(t_end)
    if t_end <= 0:
        raise ValidationError(f"t_end must be positive, got {t_end}")
    z0 = np.asarray(z0, dtype=complex)
    if z0.ndim != 1:
        raise ValidationError("initial state must be one-dimensional")

    def f(y):
        return _pack(np.asarray(rhs(_unpack(y)), dtype=complex))

    dim = 2 * z0.size
    y = _pack(z0)
    t = 0.0
    h = min(config.initial_step, t_end)
    stats = StepStats()
    k1 = f(y)
    step_t0: list[float] = []
    step_h: list[float] = []
    step_y0: list[np.ndarray] = []
    step_stages: list[np.ndarray] = []

    while t < t_end:
        if h < config.min_step:
            raise StepUnderflow(t)
        final = h >= t_end - t
        h_step = t_end - t if final else h
        stages = np.empty((7, dim))
        stages[0] = k1
        for i in range(1, 7):
            y_stage = y + h_step * (_A[i] @ stages[:i])
            stages[i] = f(y_stage)
        y_new = y + h_step * (_B @ stages)
        err = h_step * (_E @ stages)
        scale = config.abs_tol + config.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = float(np.max(np.abs(err) / scale))

        if err_norm <= 1.0:
            step_t0.append(t)
            step_h.append(h_step)
            step_y0.append(y)
            step_stages.append(stages)
            t = t_end if final else t + h_step
            y = y_new
            k1 = stages[6]
            stats.accepted += 1
            stats.min_step = min(stats.min_step, h_step)
        else:
            stats.rejected += 1
        if stats.accepted + stats.rejected > config.max_steps:
            raise MaxStepsExceeded(f"exceeded {config.max_steps} steps at t={t}")
        factor = 0.9 * err_norm ** -0.2 if err_norm > 0 else 5.0
        h = h_step * min(5.0, max(0.2, factor))

    ends = np.array(step_t0) + np.array(step_h)
    if t_eval is None:
        times = np.concatenate([[0.0], ends])
        states = np.vstack([_unpack(step_y0[0])[None, :]]
                           + [_unpack(s + step_h[i] * (_B @ step_stages[i]))[None, :]
                              for i, s in enumerate(step_y0)])
        return Trajectory(times, states, SOURCE_INTEGRATED, meta=stats)

    times = np.asarray(t_eval, dtype=float)
    if np.any(times < 0) or np.any(times > t_end + 1e-12 * max(1.0, t_end)):
        raise ValidationError("t_eval must lie within [0, t_end]")
    states = np.empty((times.size, z0.size), dtype=complex)
    for i, s in enumerate(times):
        if s >= t_end:
            states[i] = _unpack(y)
            continue
        idx = min(int(np.searchsorted(ends, s, side="left")), len(step_t0) - 1)
        theta = (s - step_t0[idx]) / step_h[idx]
        p = np.array([theta, theta**2, theta**3, theta**4])
        y_s = step_y0[idx] + step_h[idx] * ((_P @ p) @ step_stages[idx])
        states[i] = _unpack(y_s)
    return Trajectory(times, states, SOURCE_INTEGRATED, meta=stats)


def integrate_rk4(rhs, z0, t_end: float, steps: int) -> Trajectory:
    """Fixed-step classical RK4; cross-check mode only."""
    if steps < 1:
        raise ValidationError("steps must be >= 1")
    z0 = np.asarray(z0, dtype=complex)
    h = float(t_end) / steps
    times = np.linspace(0.0, float(t_end), steps + 1)
    states = np.empty((steps + 1, z0.size), dtype=complex)
    states[0] = z0
    z = z0.copy()
    for i in range(steps):
        k1 = np.asarray(rhs(z))
        k2 = np.asarray(rhs(z + 0.5 * h * k1))
        k3 = np.asarray(rhs(z + 0.5 * h * k2))
        k4 = np.asarray(rhs(z + h * k3))
        z = z + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        states[i + 1] = z
    return Trajectory(times, states, SOURCE_INTEGRATED)


def _deviation(integrated: np.ndarray, reference: np.ndarray) -> float:
    return float(np.max(np.abs(integrated - reference) / (1 + np.abs(reference))))


def verify_instance(
    instance: SolvableInstance,
    t_end: float,
    samples: int,
    config: IntegratorConfig | None = None,
) -> float:
    """Integrate the base system and compare against the closed form at
    uniform sample times; returns the max relative deviation
    |z_int - z_cf| / (1 + |z_cf|)."""
    sol = ClosedFormSolution.from_instance(instance)
    t_star = blow_up_time(sol)
    if t_star is not None and t_end >= t_star:
        raise ValidationError(f"t_end={t_end} not below blow-up time {t_star}")
    times = np.linspace(0.0, float(t_end), samples)
    traj = integrate(
        lambda z: evaluate_rhs(instance.system, z), instance.z0, t_end, config, t_eval=times
    )
    reference = np.vstack([eval_closed_form(sol, s) for s in times])
    return _deviation(traj.states, reference)


def verify_periodic(
    pcf: PeriodicClosedForm,
    periods: int,
    samples: int,
    config: IntegratorConfig | None = None,
) -> float:
    """Integrate the complexified system over whole base periods and compare
    against the periodic closed form on the same grid."""
    if periods < 1:
        raise ValidationError("periods must be >= 1")
    t_end = periods * pcf.base_period
    times = np.linspace(0.0, t_end, samples)
    reference = eval_periodic_closed_form(pcf, times)
    psys = pcf.system()
    traj = integrate(
        lambda w: eval_periodic_rhs(psys, w), pcf.z0, t_end, config, t_eval=times
    )
    return _deviation(traj.states, reference.states)
