"""This module evaluates the continuous-time dynamics of a CNF formula.

The state lives in the extended phase space: analog spins ``s`` in the box
[-1, 1]^N and one auxiliary weight per clause, stored as its logarithm
``b_m = ln a_m``. With

    K_m  = 2**-k_m * prod_i (1 - c_mi s_i)
    K_mi = K_m / (1 - c_mi s_i)              (evaluated by omitting the factor)

the flow is

    ds_i/dt = sum_m 2 a_m c_mi K_mi K_m      (= -dV/ds_i)
    db_m/dt = K_m

with E = sum_m K_m**2 and V = sum_m a_m K_m**2.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

from collections import namedtuple

import numpy as np

from .defaults import LOG_A_CAP, SatError

__all__ = [
    'IndexOutOfRange',
    'VariableNotInClause',
    'MixedClauseLengths',
    'DynamicsOverflow',
    'ContinuousState',
    'DynamicsParams',
    'constraint_value',
    'constraint_partial',
    'energy_E',
    'energy_V',
    'rhs',
    'guaranteed_basin_test',
    'radial_rate',
    'sample_guaranteed_state',
]


class IndexOutOfRange(SatError, IndexError):
    pass


class VariableNotInClause(SatError, ValueError):
    pass


class MixedClauseLengths(SatError, ValueError):
    pass


class DynamicsOverflow(SatError, ArithmeticError):
    """
    Raised when some b_m exceeds the cap or a flow term is not finite.
    """
    pass


class ContinuousState(namedtuple('_ContinuousStateBase', ['s', 'log_a', 't'])):

    def __new__(cls, s, log_a, t=0.0):
        s = np.array(s, dtype=np.float64)
        log_a = np.array(log_a, dtype=np.float64)
        if s.ndim != 1 or log_a.ndim != 1:
            raise ValueError("s and log_a must be vectors")
        if not np.all(np.isfinite(log_a)):
            raise ValueError("log_a must be finite")
        return super(ContinuousState, cls).__new__(cls, s, log_a, float(t))

    @classmethod
    def initial(cls, formula, s, t=0.0):
        """a_m(0) = 1 for every clause"""
        return cls(s, np.zeros(formula.num_clauses), t)

    @classmethod
    def from_vector(cls, y, num_vars, t=0.0):
        return cls(y[:num_vars], y[num_vars:], t)

    @property
    def num_vars(self):
        return len(self.s)

    def to_vector(self):
        return np.concatenate([self.s, self.log_a])


def _factors(table, s):
    # padding has sign 0, so its factor is exactly 1
    return 1.0 - table.signs * s[table.variables]


def constraint_values(formula, s):
    """Vector of all K_m"""
    table = formula.table
    s = np.asarray(s, dtype=np.float64)
    return table.scale * np.prod(_factors(table, s), axis=1)


def constraint_partials(formula, s):
    """
    Returns (K, K_partial) where K_partial[m, j] is K_mi for the j-th literal
    of clause m, built from prefix and suffix products.
    """
    table = formula.table
    s = np.asarray(s, dtype=np.float64)
    factors = _factors(table, s)
    ones = np.ones((factors.shape[0], 1))
    prefix = np.cumprod(np.hstack([ones, factors[:, :-1]]), axis=1)
    suffix = np.cumprod(np.hstack([ones, factors[:, :0:-1]]), axis=1)[:, ::-1]
    partial = table.scale[:, np.newaxis] * prefix * suffix
    k = table.scale * prefix[:, -1] * factors[:, -1]
    return k, partial


def _check_clause(formula, m):
    if not 0 <= m < formula.num_clauses:
        raise IndexOutOfRange(
            "clause {0:d} out of range for M={1:d}".format(m, formula.num_clauses))


def constraint_value(formula, s, m):
    """K_m in [0, 1], zero iff some literal of clause m is fully satisfied"""
    _check_clause(formula, m)
    value = 2.0 ** -len(formula.clauses[m])
    for lit in formula.clauses[m]:
        value *= 1.0 - lit.polarity * s[lit.variable]
    return value


def constraint_partial(formula, s, m, i):
    """K_mi: the product over the other literals of clause m"""
    _check_clause(formula, m)
    clause = formula.clauses[m]
    if clause.coefficient(i) == 0:
        raise VariableNotInClause(
            "variable {0:d} does not appear in clause {1:d}".format(i, m))
    value = 2.0 ** -len(clause)
    for lit in clause:
        if lit.variable != i:
            value *= 1.0 - lit.polarity * s[lit.variable]
    return value


def energy_E(formula, s):
    k = constraint_values(formula, s)
    return float(np.dot(k, k))


def _weights(log_a, log_a_cap):
    log_a = np.asarray(log_a, dtype=np.float64)
    if log_a.size and log_a.max() > log_a_cap:
        raise DynamicsOverflow(
            "log auxiliary {0:g} exceeds cap {1:g}".format(log_a.max(), log_a_cap))
    return np.exp(log_a)


def energy_V(formula, s, log_a, log_a_cap=LOG_A_CAP):
    k = constraint_values(formula, s)
    value = float(np.dot(_weights(log_a, log_a_cap), k * k))
    if not np.isfinite(value):
        raise DynamicsOverflow("V is not finite")
    return value


class DynamicsParams(namedtuple('_DynamicsParamsBase', ['formula', 'log_a_cap'])):
    """
    The formula and the overflow guard. ``derivative`` evaluates the flow on
    the flat vector y = (s, b).
    """

    def __new__(cls, formula, log_a_cap=LOG_A_CAP):
        log_a_cap = float(log_a_cap)
        if not log_a_cap > 0:
            raise ValueError("log_a_cap must be positive")
        return super(DynamicsParams, cls).__new__(cls, formula, log_a_cap)

    @property
    def num_vars(self):
        return self.formula.num_vars

    @property
    def dimension(self):
        return self.formula.num_vars + self.formula.num_clauses

    def split(self, y):
        n = self.formula.num_vars
        return y[:n], y[n:]

    def flow(self, s, log_a):
        """Returns (ds/dt, db/dt)"""
        table = self.formula.table
        weights = _weights(log_a, self.log_a_cap)
        k, partial = constraint_partials(self.formula, s)
        terms = (2.0 * weights * k)[:, np.newaxis] * table.signs * partial
        ds = np.bincount(table.variables.ravel(), weights=terms.ravel(),
                         minlength=self.formula.num_vars)
        if not np.all(np.isfinite(ds)):
            raise DynamicsOverflow("non-finite flow term")
        return ds, k

    def derivative(self, y):
        s, log_a = self.split(y)
        ds, db = self.flow(s, log_a)
        return np.concatenate([ds, db])

    def energies(self, y):
        """(E, V) at the flat vector y"""
        s, log_a = self.split(y)
        k = constraint_values(self.formula, s)
        k2 = k * k
        return float(k2.sum()), float(np.dot(_weights(log_a, self.log_a_cap), k2))


def rhs(formula, state, log_a_cap=LOG_A_CAP):
    """
    Returns
    -------
    (ds_dt, dlog_a_dt) : (array of N reals, array of M reals)
    """
    s, log_a = state[0], state[1]
    return DynamicsParams(formula, log_a_cap).flow(
        np.asarray(s, dtype=np.float64), log_a)


def radial_rate(formula, s, log_a, log_a_cap=LOG_A_CAP):
    """d(|s|^2)/dt = 2 sum_i s_i ds_i/dt"""
    s = np.asarray(s, dtype=np.float64)
    ds, _ = DynamicsParams(formula, log_a_cap).flow(s, log_a)
    return 2.0 * float(np.dot(s, ds))


def basin_sigma(k):
    return (k - 1.0) / (k + 1.0)


def _uniform_k(formula):
    k = formula.uniform_length
    if k is None:
        raise MixedClauseLengths(
            "attraction bound needs a uniform clause length, got {0}".format(
                sorted(set(formula.clause_lengths))))
    return k


def guaranteed_basin_test(formula, s, s_star):
    """
    True iff ``s`` lies in the orthant of ``s_star`` and
    sum(s**2) >= N - 1 + sigma**2, sigma = (k-1)/(k+1).
    """
    sigma = basin_sigma(_uniform_k(formula))
    s = np.asarray(s, dtype=np.float64)
    if not np.array_equal(np.sign(s), np.asarray(s_star, dtype=np.float64)):
        return False
    return bool(np.dot(s, s) >= len(s) - 1 + sigma * sigma)


def sample_guaranteed_state(s_star, k, rng):
    """
    Draw a state inside the guaranteed domain of ``s_star``: a total squared
    deficit below 1 - sigma**2 is split over the coordinates.
    """
    s_star = np.asarray(s_star, dtype=np.float64)
    sigma = basin_sigma(k)
    total = (1.0 - sigma * sigma) * rng.random()
    deficit = total * rng.dirichlet(np.ones(len(s_star)))
    return s_star * np.sqrt(1.0 - deficit)
