"""Intermittency diagnostics of recorded trajectories."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

from collections import OrderedDict

import numpy as np
from scipy import stats

from .defaults import SatError
from .series import TimeSeries

__all__ = ['TraceTooShort', 'trajectory_diagnostics']

MIN_POINTS = 3


class TraceTooShort(SatError, ValueError):
    pass


def trajectory_diagnostics(trace, trace_vars=None, trace_clauses=None):
    """
    Aligned series of t, E, V, |ds/dt| and |d2s/dt2|, then the recorded
    s_i and a_m = exp(b_m) columns.

    The acceleration is the norm of the divided central difference of the
    recorded velocities (one-sided at the ends). The summary holds the excess
    kurtosis of the speed increments, a measure of intermittency.

    Parameters
    ----------
    trace : sequence of TrajectoryPoint

    trace_vars, trace_clauses : sequence of int, optional
        0-based indices of the recorded coordinates, used for column names.

    Returns
    -------
    series : TimeSeries
    """
    if len(trace) < MIN_POINTS:
        raise TraceTooShort("need at least {0:d} trace points, got {1:d}".format(
            MIN_POINTS, len(trace)))
    t = np.array([p.t for p in trace])
    velocity = np.array([p.velocity for p in trace])
    speed = np.linalg.norm(velocity, axis=1)
    accel = np.linalg.norm(np.gradient(velocity, t, axis=0), axis=1)

    series = TimeSeries()
    series['t'] = t
    series['E'] = np.array([p.E for p in trace])
    series['V'] = np.array([p.V for p in trace])
    series['speed'] = speed
    series['accel'] = accel
    s = np.array([p.s for p in trace])
    if trace_vars is None:
        trace_vars = range(s.shape[1])
    for j, i in enumerate(trace_vars):
        series['s_{0:d}'.format(i + 1)] = s[:, j]
    log_a = np.array([p.log_a for p in trace])
    if trace_clauses is None:
        trace_clauses = range(log_a.shape[1])
    for j, m in enumerate(trace_clauses):
        series['a_{0:d}'.format(m + 1)] = np.exp(log_a[:, j])

    increments = np.diff(speed)
    summary = OrderedDict()
    summary['num_points'] = len(t)
    summary['t_final'] = float(t[-1])
    summary['E_final'] = float(series['E'][-1])
    summary['mean_speed'] = float(speed.mean())
    summary['max_accel'] = float(accel.max())
    if np.ptp(increments) > 0:
        summary['speed_increment_kurtosis'] = float(stats.kurtosis(increments))
    else:
        summary['speed_increment_kurtosis'] = 0.0
    series.summary = summary
    return series
