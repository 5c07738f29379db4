"""Seeded random instances for the random k-SAT, +1-in-3-SAT and k-XORSAT
ensembles, the XOR to CNF encoding, and XORSAT leaf removal.

Every generator is a deterministic function of its parameters and of the
substream ``(seed, index, INSTANCE_STREAM, n, attempt)`` (see ``ctds_sat.rng``).
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import itertools
import math
from collections import deque, namedtuple
from fractions import Fraction

import numpy as np
import six
from six.moves import range

from .defaults import SatError
from .formula import Clause, CnfFormula, CoreReport, Literal
from .registry import create, register
from .rng import INSTANCE_STREAM, substream

__all__ = [
    'InvalidDimensions',
    'EnsembleSpec',
    'XorInstance',
    'LopInstance',
    'gen_random_ksat',
    'gen_lop_1in3',
    'gen_xorsat',
    'encode_xorsat_cnf',
    'leaf_removal_core',
]


class InvalidDimensions(SatError, ValueError):
    pass


def _check_dimensions(n, m, k):
    if k < 2:
        raise InvalidDimensions("k={0:d} must be at least 2".format(k))
    if n < k:
        raise InvalidDimensions("n={0:d} is smaller than k={1:d}".format(n, k))
    if m < 1:
        raise InvalidDimensions("m={0:d} must be at least 1".format(m))


def k_subsets(rng, n, m, k):
    """
    Draw ``m`` uniform k-subsets of range(n) as an m x k array, in draw order.

    Rows with a repeated variable are redrawn until none is left.
    """
    out = rng.integers(0, n, size=(m, k))
    while True:
        ordered = np.sort(out, axis=1)
        bad = np.any(ordered[:, 1:] == ordered[:, :-1], axis=1)
        nbad = int(bad.sum())
        if not nbad:
            return out
        out[bad] = rng.integers(0, n, size=(nbad, k))


def gen_random_ksat(n, m, k, seed, index=0, attempt=0):
    """
    Random k-SAT: m clauses over uniform k-subsets with fair-coin polarities.
    Duplicate clauses are permitted.
    """
    _check_dimensions(n, m, k)
    rng = substream(seed, index, INSTANCE_STREAM, n, attempt)
    variables = k_subsets(rng, n, m, k)
    negated = rng.integers(0, 2, size=(m, k))
    clauses = []
    for row, signs in zip(variables, negated):
        clauses.append(Clause(Literal(v, -1 if b else 1) for v, b in zip(row, signs)))
    return CnfFormula(n, clauses)


class LopInstance(namedtuple('_LopInstanceBase', ['num_vars', 'triples'])):
    """
    Positive +1-in-3 constraints: exactly one variable of each triple is true.
    """

    def __new__(cls, num_vars, triples):
        triples = tuple(tuple(int(v) for v in t) for t in triples)
        for t in triples:
            if len(t) != 3 or len(set(t)) != 3:
                raise InvalidDimensions("bad triple {0!r}".format(t))
            if min(t) < 0 or max(t) >= num_vars:
                raise InvalidDimensions(
                    "triple {0!r} out of range for N={1:d}".format(t, num_vars))
        return super(LopInstance, cls).__new__(cls, int(num_vars), triples)

    @property
    def num_constraints(self):
        return len(self.triples)

    def satisfied_by(self, sigma):
        return all(sum(1 for v in t if sigma[v] > 0) == 1 for t in self.triples)

    def to_cnf(self):
        """(x v y v z) and the three pairwise exclusions per triple"""
        clauses = []
        for x, y, z in self.triples:
            clauses.append(Clause([(x, 1), (y, 1), (z, 1)]))
            clauses.append(Clause([(x, -1), (y, -1)]))
            clauses.append(Clause([(x, -1), (z, -1)]))
            clauses.append(Clause([(y, -1), (z, -1)]))
        return CnfFormula(self.num_vars, clauses)


def gen_lop_1in3(n, m, seed, index=0, attempt=0):
    """
    Returns
    -------
    (native, cnf) : (LopInstance, CnfFormula)
        The CNF holds 4 clauses per constraint, of lengths 3, 2, 2 and 2.
    """
    _check_dimensions(n, m, 3)
    rng = substream(seed, index, INSTANCE_STREAM, n, attempt)
    native = LopInstance(n, k_subsets(rng, n, m, 3).tolist())
    return native, native.to_cnf()


class XorInstance(object):
    """
    Parity checks ``x_i1 + ... + x_ik = y (mod 2)`` over 0-based variables.
    A variable is true when its spin is +1.
    """

    def __init__(self, num_vars, checks):
        num_vars = int(num_vars)
        normalized = []
        for variables, parity in checks:
            variables = tuple(int(v) for v in variables)
            parity = int(parity)
            if not variables or len(set(variables)) != len(variables):
                raise InvalidDimensions(
                    "check variables must be distinct: {0!r}".format(variables))
            if min(variables) < 0 or max(variables) >= num_vars:
                raise InvalidDimensions(
                    "check {0!r} out of range for N={1:d}".format(variables, num_vars))
            if parity not in (0, 1):
                raise InvalidDimensions(
                    "parity must be 0 or 1, got {0!r}".format(parity))
            normalized.append((variables, parity))
        if not normalized:
            raise InvalidDimensions("instance needs at least one check")
        self.num_vars = num_vars
        self.checks = tuple(normalized)

    @property
    def num_constraints(self):
        return len(self.checks)

    @property
    def density(self):
        """gamma = M/N"""
        return Fraction(len(self.checks), self.num_vars)

    def satisfied_by(self, sigma):
        for variables, parity in self.checks:
            if sum(1 for v in variables if sigma[v] > 0) % 2 != parity:
                return False
        return True

    def to_cnf(self):
        return encode_xorsat_cnf(self)

    def __eq__(self, other):
        return (isinstance(other, XorInstance) and
                self.num_vars == other.num_vars and self.checks == other.checks)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.num_vars, self.checks))

    def __repr__(self):
        return 'XorInstance(N={0:d}, M={1:d})'.format(self.num_vars, len(self.checks))


def gen_xorsat(n, m, k, seed, index=0, attempt=0):
    _check_dimensions(n, m, k)
    rng = substream(seed, index, INSTANCE_STREAM, n, attempt)
    variables = k_subsets(rng, n, m, k)
    parities = rng.integers(0, 2, size=m)
    return XorInstance(n, zip(variables.tolist(), parities.tolist()))


def encode_xorsat_cnf(instance):
    """
    One clause per falsifying parity pattern of each check (2**(k-1) clauses).

    A pattern assigns a bit to every variable of the check; its clause
    negates the variables whose bit is 1, so it excludes exactly that pattern.
    Patterns are emitted in lexicographic order with the first variable as the
    most significant bit.
    """
    clauses = []
    for variables, parity in instance.checks:
        for bits in itertools.product((0, 1), repeat=len(variables)):
            if sum(bits) % 2 == parity:
                continue
            clauses.append(Clause(
                (v, -1 if b else 1) for v, b in zip(variables, bits)))
    return CnfFormula(instance.num_vars, clauses)


def leaf_removal_core(instance):
    """
    Strip checks holding a degree-1 variable until none is left.

    Returns
    -------
    report : CoreReport
        The surviving checks (the hyperloop core) and their variables.
    """
    degree = np.zeros(instance.num_vars, dtype=np.intp)
    incident = [[] for _ in range(instance.num_vars)]
    for a, (variables, _) in enumerate(instance.checks):
        for v in variables:
            degree[v] += 1
            incident[v].append(a)
    alive = np.ones(len(instance.checks), dtype=bool)
    queue = deque(int(v) for v in np.flatnonzero(degree == 1))
    while queue:
        v = queue.popleft()
        if degree[v] != 1:
            continue
        a = next(a for a in incident[v] if alive[a])
        alive[a] = False
        for u in instance.checks[a][0]:
            degree[u] -= 1
            if degree[u] == 1:
                queue.append(u)
    remaining = frozenset(int(a) for a in np.flatnonzero(alive))
    remaining_vars = frozenset(
        v for a in remaining for v in instance.checks[a][0])
    return CoreReport(remaining, remaining_vars)


# Ensembles ====================================================================

def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, six.string_types):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def _nearest_int(x):
    return int(math.floor(x + Fraction(1, 2)))


class Ensemble(object):
    """
    Base class of the registered ensembles. ``density`` is alpha = M/N for
    k-SAT, l = 3M/N for +1-in-3-SAT and gamma = M/N for XORSAT.
    """
    name = None
    fixed_k = None

    def num_constraints(self, num_vars, density):
        return _nearest_int(density * num_vars)

    def generate(self, spec, index, attempt):
        raise NotImplementedError

    def to_formula(self, instance):
        return instance.to_cnf()


@register('ksat')
class KSatEnsemble(Ensemble):
    name = 'ksat'

    def generate(self, spec, index, attempt):
        return gen_random_ksat(spec.num_vars, spec.num_constraints, spec.k,
                               spec.seed, index, attempt)

    def to_formula(self, instance):
        return instance


@register('lop')
class LopEnsemble(Ensemble):
    name = 'lop'
    fixed_k = 3

    def num_constraints(self, num_vars, density):
        return _nearest_int(density * num_vars / 3)

    def generate(self, spec, index, attempt):
        native, _ = gen_lop_1in3(spec.num_vars, spec.num_constraints,
                                 spec.seed, index, attempt)
        return native


@register('xor')
class XorEnsemble(Ensemble):
    name = 'xor'

    def generate(self, spec, index, attempt):
        return gen_xorsat(spec.num_vars, spec.num_constraints, spec.k,
                          spec.seed, index, attempt)


class EnsembleSpec(namedtuple('_EnsembleSpecBase', [
        'ensemble', 'num_vars', 'density', 'seed', 'k', 'num_constraints'])):
    """
    Ensemble name, N, density and seed; M is the nearest integer to the
    density-implied count and is recorded explicitly.
    """

    def __new__(cls, ensemble, num_vars, density, seed=0, k=3, num_constraints=None):
        impl = create(ensemble)
        num_vars = int(num_vars)
        density = _as_fraction(density)
        k = int(impl.fixed_k or k)
        if density <= 0:
            raise InvalidDimensions("density must be positive, got {0}".format(density))
        if num_constraints is None:
            num_constraints = impl.num_constraints(num_vars, density)
        _check_dimensions(num_vars, num_constraints, k)
        return super(EnsembleSpec, cls).__new__(
            cls, impl.name, num_vars, density, int(seed), k, int(num_constraints))

    def _replace(self, **kwargs):
        # M follows N and the density unless given
        fields = self._asdict()
        if 'num_constraints' not in kwargs:
            fields.pop('num_constraints')
        fields.update(kwargs)
        return EnsembleSpec(**fields)

    def with_num_vars(self, num_vars):
        return self._replace(num_vars=num_vars)

    def generate(self, index=0, attempt=0):
        """The native instance (CnfFormula, LopInstance or XorInstance)"""
        return create(self.ensemble).generate(self, index, attempt)

    def formula(self, index=0, attempt=0):
        impl = create(self.ensemble)
        return impl.to_formula(impl.generate(self, index, attempt))

    def to_dict(self):
        return {
            'ensemble': self.ensemble,
            'N': self.num_vars,
            'M': self.num_constraints,
            'k': self.k,
            'density': float(self.density),
            'seed': self.seed,
        }
