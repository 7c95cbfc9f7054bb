import numpy as np
import pytest

from polyode.constraints import SolvableInstance
from polyode.errors import MaxStepsExceeded, StepUnderflow, ValidationError
from polyode.generate import generate_random_instance
from polyode.oracle import (
    IntegratorConfig,
    integrate,
    integrate_rk4,
    verify_instance,
    verify_periodic,
)
from polyode.periodic import PeriodicClosedForm
from polyode.polysys import PolynomialSystem, evaluate_rhs


def riccati_decay_system():
    # z1' = -z1^2 embedded in N=2; exact solution 1/(1+t).
    return PolynomialSystem(2, 2, {(1, (2, 0)): -1.0})


def riccati_blowup_system():
    # z1' = +z1^2; blows up at t = 1 from z1(0) = 1.
    return PolynomialSystem(2, 2, {(1, (2, 0)): 1.0})


class TestIntegrate:
    def test_known_decay_solution(self):
        sys = riccati_decay_system()
        traj = integrate(
            lambda z: evaluate_rhs(sys, z), np.array([1, 0], dtype=complex), 1.0,
            t_eval=np.array([0.0, 0.5, 1.0]),
        )
        np.testing.assert_allclose(traj.states[:, 0], 1 / (1 + traj.times), atol=1e-8)
        np.testing.assert_array_equal(traj.states[:, 1], 0)

    def test_blow_up_raises_step_underflow(self):
        sys = riccati_blowup_system()
        with pytest.raises(StepUnderflow) as excinfo:
            integrate(lambda z: evaluate_rhs(sys, z), np.array([1, 0], dtype=complex), 1.0)
        assert excinfo.value.t_reached < 1.0
        assert excinfo.value.t_reached > 0.9

    def test_zero_initial_state(self):
        sys = riccati_blowup_system()
        traj = integrate(lambda z: evaluate_rhs(sys, z), np.zeros(2, dtype=complex), 1.0)
        assert np.all(traj.states == 0)

    def test_max_steps_exceeded(self):
        sys = riccati_decay_system()
        config = IntegratorConfig(max_steps=3, initial_step=1e-6)
        with pytest.raises(MaxStepsExceeded):
            integrate(lambda z: evaluate_rhs(sys, z), np.array([1, 0], dtype=complex), 1.0, config)

    def test_step_stats_recorded(self):
        sys = riccati_decay_system()
        traj = integrate(lambda z: evaluate_rhs(sys, z), np.array([1, 0], dtype=complex), 1.0)
        assert traj.meta.accepted > 0
        assert traj.meta.min_step < 1.0
        assert traj.source == "integrated"

    def test_rejects_nonpositive_t_end(self):
        with pytest.raises(ValidationError):
            integrate(lambda z: z, np.array([1 + 0j]), 0.0)

    def test_deterministic(self):
        sys = riccati_decay_system()
        ts = np.linspace(0, 1, 17)
        a = integrate(lambda z: evaluate_rhs(sys, z), np.array([1, 0], dtype=complex), 1.0, t_eval=ts)
        b = integrate(lambda z: evaluate_rhs(sys, z), np.array([1, 0], dtype=complex), 1.0, t_eval=ts)
        assert np.array_equal(a.states, b.states)

    def test_time_reversal(self):
        instance = generate_random_instance(2, 3, 9)
        rhs = lambda z: evaluate_rhs(instance.system, z)
        t_end = 0.5
        fwd = integrate(rhs, instance.z0, t_end, t_eval=np.array([0.0, t_end]))
        back = integrate(
            lambda z: -rhs(z), fwd.states[-1], t_end, t_eval=np.array([0.0, t_end])
        )
        one_way = np.abs(fwd.states[-1] - instance.z0).max()  # scale reference only
        assert np.abs(back.states[-1] - instance.z0).max() < 10 * 1e-8

    def test_rk4_cross_check(self):
        sys = riccati_decay_system()
        traj = integrate_rk4(
            lambda z: evaluate_rhs(sys, z), np.array([1, 0], dtype=complex), 1.0, 2000
        )
        np.testing.assert_allclose(traj.states[-1, 0], 0.5, atol=1e-10)


class TestConfig:
    def test_rejects_nonpositive_fields(self):
        with pytest.raises(ValidationError):
            IntegratorConfig(rel_tol=0)
        with pytest.raises(ValidationError):
            IntegratorConfig(min_step=-1)

    def test_rejects_too_tight_rel_tol(self):
        with pytest.raises(ValidationError):
            IntegratorConfig(rel_tol=1e-15)


class TestVerifyInstance:
    def riccati_instance(self):
        sys = PolynomialSystem(2, 2, {(1, (2, 0)): 1.0})
        return SolvableInstance(sys, [1, 0], -1)

    def test_riccati_deviation_small(self):
        assert verify_instance(self.riccati_instance(), 0.5, 64) < 1e-8

    def test_broken_k_detected(self):
        sys = PolynomialSystem(2, 2, {(1, (2, 0)): 1.0})
        broken = SolvableInstance(sys, [1, 0], -1 + 1e-2, tol=1.0)
        assert verify_instance(broken, 0.5, 64) > 1e-4

    def test_zero_instance(self):
        sys = PolynomialSystem(2, 2, {(1, (2, 0)): 1.0})
        inst = SolvableInstance(sys, [0, 0], -1)
        assert verify_instance(inst, 0.5, 16) == 0

    def test_rejects_t_end_past_blow_up(self):
        with pytest.raises(ValidationError):
            verify_instance(self.riccati_instance(), 1.5, 16)

    def test_order_check(self):
        instance = generate_random_instance(2, 4, 3)
        base = IntegratorConfig()
        tighter = IntegratorConfig(rel_tol=base.rel_tol / 2, abs_tol=base.abs_tol / 2)
        d1 = verify_instance(instance, 0.5, 64, base)
        d2 = verify_instance(instance, 0.5, 64, tighter)
        assert d2 <= 2 * d1 + 1e-13


class TestVerifyPeriodic:
    def test_small_k_one_period(self):
        inst = generate_random_instance(2, 4, 5, k_cap=0.1)
        pcf = PeriodicClosedForm.from_instance(inst, 1.0)
        assert verify_periodic(pcf, 1, 1025) < 1e-6

    def test_k_zero_pure_rotation(self):
        inst = SolvableInstance(PolynomialSystem(2, 4, {}), [1 + 0j, -0.5j], 0.0)
        pcf = PeriodicClosedForm.from_instance(inst, 1.0)
        assert verify_periodic(pcf, 3, 2049) < 1e-10

    def test_integrated_closure_at_detected_period(self):
        from polyode.periodic import detect_period, eval_periodic_rhs

        inst = generate_random_instance(2, 4, 5, k_cap=0.1)
        pcf = PeriodicClosedForm.from_instance(inst, 1.0)
        report = detect_period(pcf)
        psys = pcf.system()
        traj = integrate(
            lambda w: eval_periodic_rhs(psys, w), pcf.z0, report.T,
            t_eval=np.array([0.0, report.T]),
        )
        assert np.abs(traj.states[-1] - pcf.z0).max() < 1e-6
