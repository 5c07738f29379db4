"""Adaptive Cash-Karp Runge-Kutta integration of the dynamics."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

from collections import namedtuple

import numpy as np

from .defaults import (
    EPS, H_INIT, H_MAX, H_MIN, N_STEP_MAX, SAFETY, T_MAX, TRACE_MAX_POINTS)
from .dynamics import ContinuousState, DynamicsOverflow, DynamicsParams
from .formula import Assignment
from .logger import get_logger

log = get_logger('ctds_sat.integrator')

__all__ = [
    'SOLVED',
    'TIME_BUDGET_EXCEEDED',
    'STEP_BUDGET_EXCEEDED',
    'OVERFLOW',
    'StepControl',
    'RunOutcome',
    'TrajectoryPoint',
    'cash_karp_step',
    'step_cash_karp',
    'CashKarpIntegrator',
    'integrate',
    'rounded_assignment',
]

SOLVED = 'Solved'
TIME_BUDGET_EXCEEDED = 'TimeBudgetExceeded'
STEP_BUDGET_EXCEEDED = 'StepBudgetExceeded'
OVERFLOW = 'Overflow'

# Cash-Karp tableau
C = np.array([0, 1/5, 3/10, 3/5, 1, 7/8])
A = [
    np.array([]),
    np.array([1/5]),
    np.array([3/40, 9/40]),
    np.array([3/10, -9/10, 6/5]),
    np.array([-11/54, 5/2, -70/27, 35/27]),
    np.array([1631/55296, 175/512, 575/13824, 44275/110592, 253/4096]),
]
B5 = np.array([37/378, 0, 250/621, 125/594, 0, 512/1771])
B4 = np.array([2825/27648, 0, 18575/48384, 13525/55296, 277/14336, 1/4])
E = B5 - B4

TINY = 1e-30
MAX_FACTOR = 5.0
MIN_FACTOR = 0.1


class StepControl(namedtuple('_StepControlBase', [
        'eps', 'h_init', 'h_min', 'h_max', 't_max', 'n_step_max', 'safety',
        'trace_max_points'])):

    def __new__(cls, eps=EPS, h_init=H_INIT, h_min=H_MIN, h_max=H_MAX, t_max=T_MAX,
                n_step_max=N_STEP_MAX, safety=SAFETY,
                trace_max_points=TRACE_MAX_POINTS):
        eps, h_init = float(eps), float(h_init)
        h_min, h_max = float(h_min), float(h_max)
        if not eps > 0:
            raise ValueError("eps must be positive, got {0!r}".format(eps))
        if not 0 < h_min <= h_init <= h_max:
            raise ValueError(
                "need 0 < h_min <= h_init <= h_max, got {0!r}, {1!r}, {2!r}".format(
                    h_min, h_init, h_max))
        if not 0 < safety < 1:
            raise ValueError("safety must be in (0, 1), got {0!r}".format(safety))
        if trace_max_points < 2:
            raise ValueError("trace_max_points must be at least 2")
        return super(StepControl, cls).__new__(
            cls, eps, h_init, h_min, h_max, float(t_max), int(n_step_max),
            float(safety), int(trace_max_points))

    def to_dict(self):
        return dict(self._asdict())


class RunOutcome(namedtuple('_RunOutcomeBase', [
        'status', 't_final', 'n_step', 'length_L', 'witness', 'trace',
        'n_rejected', 'max_excursion', 'final_state'])):
    """
    ``n_step`` counts accepted steps; rejected trials are in ``n_rejected``.
    ``max_excursion`` is the largest pre-clamp overshoot max(|s_i| - 1).
    """

    @property
    def solved(self):
        return self.status == SOLVED


class TrajectoryPoint(namedtuple('_TrajectoryPointBase', [
        't', 's', 'log_a', 'E', 'V', 'speed', 'accel', 'velocity'])):
    """
    ``s`` and ``log_a`` hold the selected coordinates; ``velocity`` is the full
    ds/dt; ``accel`` is the backward difference between accepted steps.
    """
    pass


def rounded_assignment(s):
    """sigma_i = +1 if s_i >= 0 else -1"""
    return Assignment.from_array(np.where(np.asarray(s) >= 0, 1, -1))


def cash_karp_step(fun, y, h, k1=None):
    """
    One embedded 4(5) step of ``dy/dt = fun(y)``.

    Returns
    -------
    (y_new, error, k1) : (array, float, array)
        The 5th order solution, the scaled error
        max |y5 - y4| / (|y| + |h k1| + tiny), and the slope at ``y``.
    """
    if k1 is None:
        k1 = fun(y)
    K = np.empty((6, len(y)))
    K[0] = k1
    for i in range(1, 6):
        K[i] = fun(y + h * np.dot(A[i], K[:i]))
    y_new = y + h * np.dot(B5, K)
    scale = np.abs(y) + np.abs(h * k1) + TINY
    error = float(np.max(np.abs(h * np.dot(E, K)) / scale)) if len(y) else 0.0
    return y_new, error, k1


def step_cash_karp(formula, state, h, log_a_cap=None):
    """
    Returns
    -------
    (proposed_state, error_estimate) : (ContinuousState, float)
    """
    params = DynamicsParams(formula) if log_a_cap is None else \
        DynamicsParams(formula, log_a_cap)
    y_new, error, _ = cash_karp_step(params.derivative, state.to_vector(), h)
    return ContinuousState.from_vector(y_new, formula.num_vars, state.t + h), error


class _Stepper(object):
    """
    Mutable integration state for one trajectory.
    """
    def __init__(self, system, control, y, t, clamp):
        self.system = system
        self.control = control
        self.clamp = clamp
        self.n = system.num_vars
        self.y = np.array(y, dtype=np.float64)
        self.t = float(t)
        self.h = min(control.h_init, control.h_max)
        self.k1 = system.derivative(self.y)
        self.n_step = 0
        self.n_rejected = 0
        self.max_excursion = 0.0
        self.length = 0.0
        self.floor_hits = 0

    def advance(self, t_stop):
        """
        Take one accepted step without passing ``t_stop``.
        """
        control = self.control
        while True:
            h = min(self.h, t_stop - self.t)
            at_floor = h <= control.h_min
            y_new, error, _ = cash_karp_step(self.system.derivative, self.y, h, self.k1)
            if error <= control.eps or at_floor:
                break
            self.n_rejected += 1
            factor = max(control.safety * (control.eps / error) ** 0.25, MIN_FACTOR)
            self.h = max(h * factor, control.h_min)
        if at_floor and error > control.eps:
            self.floor_hits += 1
            log.debug("step size floor hit at t={0:g} (error {1:g})".format(
                self.t, error))

        s_old = self.y[:self.n]
        if self.clamp:
            s_new = y_new[:self.n]
            excursion = float(np.max(np.abs(s_new))) - 1.0 if self.n else 0.0
            self.max_excursion = max(self.max_excursion, excursion)
            np.clip(s_new, -1.0, 1.0, out=s_new)
        self.length += float(np.linalg.norm(y_new[:self.n] - s_old))
        self.y = y_new
        self.t += h
        self.n_step += 1
        self.k1 = self.system.derivative(self.y)

        if error > 0:
            factor = control.safety * (control.eps / error) ** 0.2
        else:
            factor = MAX_FACTOR
        if h == self.h or factor < 1:
            self.h = h * min(max(factor, MIN_FACTOR), MAX_FACTOR)
        self.h = min(max(self.h, control.h_min), control.h_max)


class CashKarpIntegrator(object):
    """
    Integrates the dynamics with solution detection by rounding after every
    accepted step.

    Parameters
    ----------
    system : DynamicsParams
        Or any object with ``num_vars`` and ``derivative(y)``; only
        ``integrate`` needs the formula.

    control : StepControl, optional

    record_trace : bool, optional (default=False)

    trace_vars, trace_clauses : sequence of int, optional
        The s_i and b_m recorded in trace points. Defaults to the first ten.

    clamp : bool, optional (default=True)
        Clip the first ``num_vars`` components to [-1, 1] after each step.
    """
    def __init__(self, system, control=None, record_trace=False,
                 trace_vars=None, trace_clauses=None, clamp=True):
        self.system = system
        self.control = control if control is not None else StepControl()
        self.record_trace = record_trace
        self.clamp = clamp
        formula = getattr(system, 'formula', None)
        if trace_vars is None:
            trace_vars = range(min(system.num_vars, 10))
        if trace_clauses is None:
            trace_clauses = range(min(formula.num_clauses, 10)) if formula else ()
        self.trace_vars = np.array(list(trace_vars), dtype=np.intp)
        self.trace_clauses = np.array(list(trace_clauses), dtype=np.intp)

    def _point(self, stepper, prev_velocity, prev_t):
        y = stepper.y
        n = stepper.n
        velocity = stepper.k1[:n].copy()
        energy, potential = self.system.energies(y)
        if prev_velocity is None or stepper.t <= prev_t:
            accel = 0.0
        else:
            accel = float(np.linalg.norm(velocity - prev_velocity) /
                          (stepper.t - prev_t))
        return TrajectoryPoint(
            t=stepper.t,
            s=y[:n][self.trace_vars].copy(),
            log_a=y[n:][self.trace_clauses].copy(),
            E=energy, V=potential,
            speed=float(np.linalg.norm(velocity)),
            accel=accel,
            velocity=velocity)

    def integrate(self, state):
        """
        Returns
        -------
        outcome : RunOutcome
            Failure modes (budgets, overflow) are statuses.
        """
        formula = self.system.formula
        control = self.control
        t0 = float(state.t)
        y0 = state.to_vector()
        trace = [] if self.record_trace else None

        def outcome(status, stepper, y, t, witness=None):
            if stepper is None:
                n_step, length, rejected, excursion = 0, 0.0, 0, 0.0
            else:
                n_step, length = stepper.n_step, stepper.length
                rejected, excursion = stepper.n_rejected, stepper.max_excursion
            final = ContinuousState.from_vector(y, formula.num_vars, t)
            return RunOutcome(status, t, n_step, length, witness, trace,
                              rejected, max(excursion, 0.0), final)

        sigma = rounded_assignment(y0[:formula.num_vars])
        if formula.satisfied_by(sigma):
            return outcome(SOLVED, None, y0, t0, sigma)
        try:
            stepper = _Stepper(self.system, control, y0, t0, self.clamp)
        except DynamicsOverflow:
            return outcome(OVERFLOW, None, y0, t0)

        spacing = 0.0
        last_recorded = None
        prev_velocity, prev_t = None, None
        if trace is not None:
            trace.append(self._point(stepper, None, t0))
            last_recorded = t0

        while True:
            if stepper.t >= control.t_max:
                status = TIME_BUDGET_EXCEEDED
                break
            if stepper.n_step >= control.n_step_max:
                status = STEP_BUDGET_EXCEEDED
                break
            prev_velocity, prev_t = stepper.k1[:stepper.n].copy(), stepper.t
            try:
                stepper.advance(control.t_max)
            except DynamicsOverflow:
                log.debug("overflow at t={0:g} after {1:d} steps".format(
                    stepper.t, stepper.n_step))
                status = OVERFLOW
                break
            sigma = rounded_assignment(stepper.y[:stepper.n])
            solved = formula.satisfied_by(sigma)
            if trace is not None and (solved or stepper.t - last_recorded >= spacing):
                trace.append(self._point(stepper, prev_velocity, prev_t))
                last_recorded = stepper.t
                if len(trace) > control.trace_max_points:
                    newest = trace[-1]
                    trace[:] = trace[::2]
                    if trace[-1] is not newest:
                        trace[-1] = newest
                    spacing = 2.0 * (trace[-1].t - trace[0].t) / max(len(trace) - 1, 1)
            if solved:
                return outcome(SOLVED, stepper, stepper.y, stepper.t, sigma)
        return outcome(status, stepper, stepper.y, stepper.t)

    def sample(self, state, times):
        """
        Integrate through the increasing observation ``times`` without
        stopping on solutions, landing exactly on each one.

        Returns
        -------
        samples : array, shape (len(times), num_vars)
            NaN rows after an overflow or once the step budget is spent.
        """
        n = self.system.num_vars
        y0 = state.to_vector() if hasattr(state, 'to_vector') else np.asarray(state)
        t0 = getattr(state, 't', 0.0)
        samples = np.full((len(times), n), np.nan)
        try:
            stepper = _Stepper(self.system, self.control, y0, t0, self.clamp)
        except DynamicsOverflow:
            return samples
        for j, target in enumerate(times):
            try:
                while stepper.t < target:
                    if stepper.n_step >= self.control.n_step_max:
                        return samples
                    stepper.advance(target)
            except DynamicsOverflow:
                return samples
            samples[j] = stepper.y[:n]
        return samples


def integrate(formula, initial_state, control=None, record_trace=False, **kwargs):
    """
    Integrate ``formula`` from ``initial_state``; see CashKarpIntegrator.
    ``initial_state`` may also be a plain spin vector (a_m(0) = 1).
    """
    log_a_cap = kwargs.pop('log_a_cap', None)
    params = DynamicsParams(formula) if log_a_cap is None else \
        DynamicsParams(formula, log_a_cap)
    if not isinstance(initial_state, ContinuousState):
        initial_state = ContinuousState.initial(formula, initial_state)
    integrator = CashKarpIntegrator(params, control, record_trace, **kwargs)
    return integrator.integrate(initial_state)
