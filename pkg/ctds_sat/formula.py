"""This module provides the CNF data model.

Variables are 0-based everywhere in the package. The DIMACS readers and
writers in ``ctds_sat.io`` are the only place where the 1-based external
convention appears (``Literal.from_dimacs`` / ``Literal.to_dimacs``).
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

from collections import deque, namedtuple
from fractions import Fraction

import numpy as np
from six.moves import range

from .defaults import SatError


class FormulaError(SatError, ValueError):
    pass


class MalformedHeader(FormulaError):
    pass


class VariableOutOfRange(FormulaError):
    pass


class DuplicateVariableInClause(FormulaError):
    pass


class TautologicalClause(FormulaError):
    pass


class ClauseCountMismatch(FormulaError):
    pass


class LengthMismatch(FormulaError):
    pass


class Literal(namedtuple('_LiteralBase', ['variable', 'polarity'])):
    """
    A variable (0-based) with polarity +1 (direct) or -1 (negated).
    The polarity is the coefficient c_mi of the variable in its clause.
    """

    def __new__(cls, variable, polarity):
        variable = int(variable)
        polarity = int(polarity)
        if variable < 0:
            raise VariableOutOfRange(
                "negative variable index {0:d}".format(variable))
        if polarity not in (1, -1):
            raise FormulaError(
                "polarity must be +1 or -1, got {0!r}".format(polarity))
        return super(Literal, cls).__new__(cls, variable, polarity)

    @classmethod
    def from_dimacs(cls, lit):
        lit = int(lit)
        if lit == 0:
            raise FormulaError("0 is not a literal")
        return cls(abs(lit) - 1, 1 if lit > 0 else -1)

    def to_dimacs(self):
        return (self.variable + 1) * self.polarity

    def __neg__(self):
        return Literal(self.variable, -self.polarity)

    def __repr__(self):
        return '{0}x{1:d}'.format('' if self.polarity > 0 else '~', self.variable)


class Clause(tuple):
    """
    An ordered disjunction of literals over distinct variables.
    """

    def __new__(cls, literals):
        literals = [lit if isinstance(lit, Literal) else Literal(*lit)
                    for lit in literals]
        if not literals:
            raise FormulaError("empty clause")
        seen = {}
        for lit in literals:
            if lit.variable in seen:
                if seen[lit.variable] != lit.polarity:
                    raise TautologicalClause(
                        "variable {0:d} appears with both polarities".format(
                            lit.variable + 1))
                raise DuplicateVariableInClause(
                    "variable {0:d} repeated in clause".format(lit.variable + 1))
            seen[lit.variable] = lit.polarity
        return super(Clause, cls).__new__(cls, literals)

    @classmethod
    def from_dimacs(cls, lits):
        return cls([Literal.from_dimacs(lit) for lit in lits])

    @property
    def variables(self):
        return tuple(lit.variable for lit in self)

    def coefficient(self, variable):
        for lit in self:
            if lit.variable == variable:
                return lit.polarity
        return 0

    def to_dimacs(self):
        return [lit.to_dimacs() for lit in self]

    def __repr__(self):
        return 'Clause({0})'.format(' v '.join(repr(lit) for lit in self))


class ClauseTable(namedtuple('_ClauseTableBase',
                             ['variables', 'signs', 'lengths', 'scale'])):
    """
    Padded array view of a formula: ``variables`` and ``signs`` are M x k_max,
    padding has sign 0 (factor 1 in every product), ``scale`` is 2**-k_m.
    """
    pass


class CnfFormula(object):
    """
    N variables and a non-empty sequence of clauses.
    """
    def __init__(self, num_vars, clauses):
        num_vars = int(num_vars)
        clauses = tuple(c if isinstance(c, Clause) else Clause(c) for c in clauses)
        if num_vars < 1:
            raise FormulaError("formula needs at least one variable")
        if not clauses:
            raise FormulaError("formula needs at least one clause")
        for m, clause in enumerate(clauses):
            for lit in clause:
                if lit.variable >= num_vars:
                    raise VariableOutOfRange(
                        "variable {0:d} in clause {1:d} exceeds N={2:d}".format(
                            lit.variable + 1, m, num_vars))
        self._num_vars = num_vars
        self._clauses = clauses
        self._table = None

    @property
    def num_vars(self):
        return self._num_vars

    @property
    def clauses(self):
        return self._clauses

    @property
    def num_clauses(self):
        return len(self._clauses)

    @property
    def density(self):
        """alpha = M/N"""
        return Fraction(self.num_clauses, self.num_vars)

    @property
    def clause_lengths(self):
        return tuple(len(c) for c in self._clauses)

    @property
    def uniform_length(self):
        """The common clause length k, or None for mixed lengths"""
        lengths = set(self.clause_lengths)
        if len(lengths) == 1:
            return lengths.pop()
        return None

    def coefficient(self, m, i):
        """c_mi"""
        return self._clauses[m].coefficient(i)

    def coefficient_matrix(self):
        c = np.zeros((self.num_clauses, self.num_vars), dtype=np.int8)
        for m, clause in enumerate(self._clauses):
            for lit in clause:
                c[m, lit.variable] = lit.polarity
        return c

    @property
    def table(self):
        if self._table is None:
            k_max = max(self.clause_lengths)
            variables = np.zeros((self.num_clauses, k_max), dtype=np.intp)
            signs = np.zeros((self.num_clauses, k_max), dtype=np.float64)
            for m, clause in enumerate(self._clauses):
                for j, lit in enumerate(clause):
                    variables[m, j] = lit.variable
                    signs[m, j] = lit.polarity
            lengths = np.array(self.clause_lengths, dtype=np.intp)
            scale = np.power(2.0, -lengths.astype(np.float64))
            for array in (variables, signs, lengths, scale):
                array.setflags(write=False)
            self._table = ClauseTable(variables, signs, lengths, scale)
        return self._table

    def satisfied_by(self, sigma):
        """
        True if the +/-1 vector ``sigma`` satisfies every clause
        """
        table = self.table
        lit_true = (table.signs * np.asarray(sigma)[table.variables]) > 0
        return bool(np.all(np.any(lit_true, axis=1)))

    def __eq__(self, other):
        return (isinstance(other, CnfFormula) and
                self._num_vars == other._num_vars and
                self._clauses == other._clauses)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self._num_vars, self._clauses))

    def __len__(self):
        return self.num_clauses

    def __iter__(self):
        return iter(self._clauses)

    def __repr__(self):
        return 'CnfFormula(N={0:d}, M={1:d})'.format(self.num_vars, self.num_clauses)


class Assignment(tuple):
    """
    A discrete spin vector sigma in {-1, +1}^N.
    """

    def __new__(cls, values):
        values = tuple(int(v) for v in values)
        for v in values:
            if v not in (1, -1):
                raise FormulaError(
                    "assignment entries must be +1 or -1, got {0!r}".format(v))
        return super(Assignment, cls).__new__(cls, values)

    @classmethod
    def from_code(cls, code, num_vars):
        return cls(1 if (code >> i) & 1 else -1 for i in range(num_vars))

    @classmethod
    def from_array(cls, array):
        return cls(np.where(np.asarray(array) > 0, 1, -1))

    @property
    def values(self):
        return tuple(self)

    @property
    def code(self):
        """Bit i is set iff sigma_i = +1"""
        code = 0
        for i, v in enumerate(self):
            if v > 0:
                code |= 1 << i
        return code

    def to_array(self):
        return np.array(self, dtype=np.float64)

    def hamming(self, other):
        return sum(1 for a, b in zip(self, other) if a != b)

    def __repr__(self):
        return 'Assignment({0})'.format(
            ''.join('+' if v > 0 else '-' for v in self))


class CoreReport(namedtuple('_CoreReportBase',
                            ['remaining_clauses', 'remaining_vars'])):

    @property
    def is_empty(self):
        return not self.remaining_clauses

    def to_dict(self):
        return {
            'remaining_clauses': sorted(self.remaining_clauses),
            'remaining_vars': sorted(self.remaining_vars),
            'is_empty': self.is_empty,
        }


def evaluate(formula, assignment):
    """
    Evaluate ``formula`` under ``assignment``.

    Returns
    -------
    (satisfied, violated_count) : (bool, int)
    """
    if len(assignment) != formula.num_vars:
        raise LengthMismatch(
            "assignment of length {0:d} for N={1:d}".format(
                len(assignment), formula.num_vars))
    violated = 0
    for clause in formula:
        if not any(assignment[lit.variable] == lit.polarity for lit in clause):
            violated += 1
    return violated == 0, violated


def pure_literal_core(formula, order=None):
    """
    Remove clauses containing pure literals until no pure literal remains.

    Parameters
    ----------
    formula : CnfFormula

    order : sequence of int, optional (default=None)
        Variable visiting order for the initial scan. The fixed point does not
        depend on it; it is exposed for testing that property.
    """
    n = formula.num_vars
    # occurrences[polarity][variable] -> set of clause indices
    occurrences = {1: [set() for _ in range(n)], -1: [set() for _ in range(n)]}
    for m, clause in enumerate(formula):
        for lit in clause:
            occurrences[lit.polarity][lit.variable].add(m)
    remaining = set(range(formula.num_clauses))

    def is_pure(i):
        pos, neg = occurrences[1][i], occurrences[-1][i]
        return bool(pos) != bool(neg)

    if order is None:
        order = range(n)
    queue = deque(i for i in order if is_pure(i))
    while queue:
        i = queue.popleft()
        if not is_pure(i):
            continue
        removed = occurrences[1][i] | occurrences[-1][i]
        for m in removed:
            remaining.discard(m)
            for lit in formula.clauses[m]:
                occurrences[lit.polarity][lit.variable].discard(m)
                if lit.variable != i and is_pure(lit.variable):
                    queue.append(lit.variable)
    remaining_vars = set()
    for m in remaining:
        remaining_vars.update(formula.clauses[m].variables)
    return CoreReport(frozenset(remaining), frozenset(remaining_vars))


def iter_clause_codes(formula):
    """
    Yield (positive_mask, negative_mask) bit masks per clause.
    A code x violates the clause iff x & pos == 0 and x & neg == neg.
    """
    for clause in formula:
        pos = neg = 0
        for lit in clause:
            if lit.polarity > 0:
                pos |= 1 << lit.variable
            else:
                neg |= 1 << lit.variable
        yield pos, neg


def formula_from_dimacs_lists(num_vars, clause_lists):
    return CnfFormula(num_vars, [Clause.from_dimacs(c) for c in clause_lists])


