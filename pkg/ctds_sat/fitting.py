"""Survival functions and the decay and scaling-law fits.

  ExpDecay      p(x) = r exp(-lam x)          (x = t, n_step or length_L)
  RateLaw       lam(N) = b N**-beta
  StepPowerLaw  p(n) = u (v + n)**-eta
  EtaLaw        eta(N) = d N**-delta

Every fit is an ordinary least-squares line on transformed axes; the
goodness of fit is R**2 on those axes.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import math
from collections import OrderedDict

import numpy as np
from scipy import stats

from .defaults import FIT_WINDOW, SatError
from .integrator import SOLVED
from .logger import get_logger

log = get_logger('ctds_sat.fitting')

__all__ = [
    'InsufficientData',
    'DegenerateWindow',
    'ScalingFit',
    'survival_function',
    'fit_exponential_decay',
    'fit_rate_scaling',
    'fit_step_powerlaw',
    'fit_eta_scaling',
    'compare_decay_models',
    'fit_escape_rate',
]

EXP_DECAY = 'ExpDecay'
RATE_LAW = 'RateLaw'
STEP_POWER_LAW = 'StepPowerLaw'
ETA_LAW = 'EtaLaw'

MIN_SAMPLES = 50
MIN_SIZES = 3
V_GRID = np.concatenate([[0.0], np.logspace(-3, 3, 601)])

_RECORD_FIELDS = {
    't': 't_solve',
    'n_step': 'n_step_total',
    'length_L': 'length_L',
}


class InsufficientData(SatError, ValueError):
    pass


class DegenerateWindow(SatError, ValueError):
    pass


class ScalingFit(object):
    """
    A fitted model. Parameters are also attributes: ``fit.lam``, ``fit.beta``.
    """
    def __init__(self, model, params, window, r_squared, num_samples,
                 variable=None, num_points=None):
        self.model = model
        self.params = OrderedDict(params)
        self.window = tuple(window)
        self.r_squared = float(r_squared)
        self.num_samples = int(num_samples)
        self.variable = variable
        self.num_points = num_points
        for name, value in self.params.items():
            if not np.isfinite(value):
                raise DegenerateWindow(
                    "{0} fit gave non-finite {1}".format(model, name))

    def __getattr__(self, attr):
        params = self.__dict__.get('params')
        if params is not None and attr in params:
            return params[attr]
        raise AttributeError("`{0}` instance has no attribute `{1}`".format(
            self.__class__.__name__, attr))

    def survival(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self.model == EXP_DECAY:
            return self.r * np.exp(-self.lam * x)
        if self.model == STEP_POWER_LAW:
            return self.u * np.power(self.v + x, -self.eta)
        raise TypeError("{0} is not a survival model".format(self.model))

    def predict_time(self, p, num_vars, r=1.0):
        """Analog time to reach unsolved fraction p: N**beta / b * ln(r/p)"""
        if self.model != RATE_LAW:
            raise TypeError("predict_time needs a RateLaw fit")
        return num_vars ** self.beta / self.b * math.log(r / p)

    def predict_steps(self, p, num_vars, u=1.0, v=0.0):
        """Steps to reach unsolved fraction p: exp(N**delta / d * ln(u/p)) - v"""
        if self.model != ETA_LAW:
            raise TypeError("predict_steps needs an EtaLaw fit")
        return math.exp(num_vars ** self.delta / self.d * math.log(u / p)) - v

    def to_dict(self):
        d = OrderedDict()
        d['model'] = self.model
        d['variable'] = self.variable
        d['params'] = OrderedDict((k, float(v)) for k, v in self.params.items())
        d['window'] = [float(w) for w in self.window]
        d['r_squared'] = self.r_squared
        d['num_samples'] = self.num_samples
        d['num_points'] = self.num_points
        return d

    def __repr__(self):
        return '{0}({1}; R2={2:.4f}, n={3:d})'.format(
            self.model,
            ', '.join('{0}={1:.6g}'.format(k, v) for k, v in self.params.items()),
            self.r_squared, self.num_samples)


def _value(sample, field):
    if isinstance(sample, dict):
        status, value = sample.get('status'), sample.get(field)
    elif hasattr(sample, '_fields'):
        status, value = sample.status, getattr(sample, field)
    else:
        return sample
    return value if status == SOLVED else None


def _sample_values(samples, variable):
    field = _RECORD_FIELDS[variable]
    values = [_value(sample, field) for sample in samples]
    values = np.array([np.inf if v is None else float(v) for v in values],
                      dtype=np.float64)
    values[np.isnan(values)] = np.inf
    return values


def survival_function(samples, variable='t'):
    """
    Empirical fraction of samples not yet solved, p(x) = #{value > x} / n.

    ``samples`` are numbers (None or inf meaning unsolved) or SolveRecords.
    Unsolved samples stay in the denominator.

    Returns
    -------
    (x, p) : arrays
        The distinct solved values and p just after each of them.
    """
    values = _sample_values(samples, variable)
    total = len(values)
    if not total:
        return np.array([]), np.array([])
    solved = np.sort(values[np.isfinite(values)])
    x, counts = np.unique(solved, return_counts=True)
    p = 1.0 - np.cumsum(counts) / total
    return x, p


def _check_window(window):
    p_hi, p_lo = window
    if not 1 >= p_hi > p_lo > 0:
        raise ValueError("window must satisfy 1 >= p_hi > p_lo > 0, got {0!r}".format(
            window))
    return p_hi, p_lo


def _windowed(samples, window, variable):
    p_hi, p_lo = _check_window(window)
    values = _sample_values(samples, variable)
    if len(values) < MIN_SAMPLES:
        raise InsufficientData("need at least {0:d} samples, got {1:d}".format(
            MIN_SAMPLES, len(values)))
    x, p = survival_function(values)
    keep = (p >= p_lo) & (p <= p_hi)
    x, p = x[keep], p[keep]
    if len(np.unique(x)) < 2:
        raise DegenerateWindow(
            "fewer than two distinct {0} values with p in [{1:g}, {2:g}]".format(
                variable, p_lo, p_hi))
    if len(x) < 5:
        log.warning("fitting on only {0:d} points".format(len(x)))
    return x, p, len(values)


def fit_exponential_decay(samples, window=FIT_WINDOW, variable='t'):
    """
    Fit ln p = ln r - lam x over the survival window [p_lo, p_hi].

    Parameters
    ----------
    samples : sequence of SolveRecord or numbers

    window : (p_hi, p_lo), optional (default=(0.5, 0.02))

    variable : {'t', 'n_step', 'length_L'}, optional (default='t')
    """
    x, p, total = _windowed(samples, window, variable)
    fit = stats.linregress(x, np.log(p))
    return ScalingFit(
        EXP_DECAY, [('r', math.exp(fit.intercept)), ('lam', -fit.slope)],
        window, fit.rvalue ** 2, total, variable, len(x))


def fit_step_powerlaw(samples, window=FIT_WINDOW, variable='n_step', v_grid=V_GRID):
    """
    Fit ln p = ln u - eta ln(v + n), scanning v over ``v_grid`` and keeping
    the best R**2.
    """
    x, p, total = _windowed(samples, window, variable)
    log_p = np.log(p)
    best = None
    for v in v_grid:
        shifted = v + x
        if np.any(shifted <= 0):
            continue
        fit = stats.linregress(np.log(shifted), log_p)
        r_squared = fit.rvalue ** 2
        if best is None or r_squared > best[0]:
            best = (r_squared, v, fit)
    if best is None:
        raise DegenerateWindow("no admissible shift v for the power law")
    r_squared, v, fit = best
    return ScalingFit(
        STEP_POWER_LAW,
        [('u', math.exp(fit.intercept)), ('v', float(v)), ('eta', -fit.slope)],
        window, r_squared, total, variable, len(x))


def compare_decay_models(samples, window=FIT_WINDOW, variable='n_step'):
    """
    Returns
    -------
    (exp_fit, power_fit, winner) : (ScalingFit, ScalingFit, str)
        ``winner`` is 'exponential' or 'power', by R**2 on log axes.
    """
    exp_fit = fit_exponential_decay(samples, window, variable)
    power_fit = fit_step_powerlaw(samples, window, variable)
    winner = 'power' if power_fit.r_squared > exp_fit.r_squared else 'exponential'
    return exp_fit, power_fit, winner


def _log_law(pairs, model, names):
    pairs = [(float(n), float(y)) for n, y in pairs]
    kept = [(n, y) for n, y in pairs if n > 0 and y > 0]
    if len(kept) < len(pairs):
        log.warning("{0}: dropped {1:d} non-positive pair(s)".format(
            model, len(pairs) - len(kept)))
    sizes = sorted(set(n for n, _ in kept))
    if len(sizes) < MIN_SIZES:
        raise InsufficientData(
            "{0} needs at least {1:d} distinct N, got {2:d}".format(
                model, MIN_SIZES, len(sizes)))
    n, y = np.array(kept).T
    fit = stats.linregress(np.log(n), np.log(y))
    return ScalingFit(
        model, [(names[0], math.exp(fit.intercept)), (names[1], -fit.slope)],
        (sizes[0], sizes[-1]), fit.rvalue ** 2, len(kept), 'N', len(kept))


def fit_rate_scaling(pairs):
    """lam(N) = b N**-beta from (N, lam) pairs"""
    return _log_law(pairs, RATE_LAW, ('b', 'beta'))


def fit_eta_scaling(pairs):
    """eta(N) = d N**-delta from (N, eta) pairs"""
    return _log_law(pairs, ETA_LAW, ('d', 'delta'))


def fit_escape_rate(records, window=FIT_WINDOW):
    """
    Escape rate kappa of one instance from its many independent starts
    (see ``solver.escape_times``); ``fit.lam`` is kappa.
    """
    instances = set()
    for record in records:
        instances.add((record.N, record.M, record.seed))
    if len(instances) > 1:
        log.warning("escape-rate fit pools {0:d} different instances".format(
            len(instances)))
    return fit_exponential_decay(records, window, 't')
