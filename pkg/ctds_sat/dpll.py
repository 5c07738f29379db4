"""A small complete DPLL search, used as the ground-truth oracle."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import itertools
from collections import Counter, namedtuple

from .defaults import DPLL_BUDGET, log
from .formula import Assignment, evaluate

SAT = 'Sat'
UNSAT = 'Unsat'
BUDGET_EXCEEDED = 'BudgetExceeded'


class DpllResult(namedtuple('_DpllResultBase', ['status', 'witness', 'decisions'])):
    """
    ``status`` is one of ``'Sat'``, ``'Unsat'`` or ``'BudgetExceeded'``;
    ``witness`` is an Assignment for Sat and None otherwise.
    """

    @property
    def is_sat(self):
        return self.status == SAT

    @property
    def is_unsat(self):
        return self.status == UNSAT

    def __repr__(self):
        return 'DpllResult({0}, decisions={1:d})'.format(self.status, self.decisions)


class _BudgetExceeded(Exception):
    pass


def _clause_lists(formula):
    return [tuple(clause.to_dimacs()) for clause in formula]


def _assign(clauses, lit):
    """
    Set ``lit`` true. Returns the reduced clause list, or None on conflict.
    """
    reduced = []
    for clause in clauses:
        if lit in clause:
            continue
        if -lit in clause:
            clause = tuple(x for x in clause if x != -lit)
            if not clause:
                return None
        reduced.append(clause)
    return reduced


def _propagate(clauses, trail, pure_literals):
    while True:
        if not clauses:
            return clauses
        unit = None
        for clause in clauses:
            if len(clause) == 1:
                unit = clause[0]
                break
        if unit is not None:
            trail.append(unit)
            clauses = _assign(clauses, unit)
            if clauses is None:
                return None
            continue
        if pure_literals:
            seen = set(itertools.chain.from_iterable(clauses))
            pure = sorted((x for x in seen if -x not in seen), key=abs)
            if pure:
                for lit in pure:
                    trail.append(lit)
                    clauses = _assign(clauses, lit)
                continue
        return clauses


def _branch_variable(clauses):
    # Most frequent remaining variable; ties go to the lowest index
    counts = Counter(abs(x) for clause in clauses for x in clause)
    return min(counts, key=lambda v: (-counts[v], v))


class _Search(object):
    def __init__(self, budget):
        self.budget = budget
        self.decisions = 0

    def solve(self, clauses, trail):
        clauses = _propagate(clauses, trail, pure_literals=True)
        if clauses is None:
            return None
        if not clauses:
            return trail
        var = _branch_variable(clauses)
        for lit in (var, -var):
            if self.decisions >= self.budget:
                raise _BudgetExceeded()
            self.decisions += 1
            reduced = _assign(clauses, lit)
            if reduced is None:
                continue
            found = self.solve(reduced, trail + [lit])
            if found is not None:
                return found
        return None

    def models(self, clauses, trail):
        clauses = _propagate(clauses, trail, pure_literals=False)
        if clauses is None:
            return
        if not clauses:
            yield trail
            return
        var = _branch_variable(clauses)
        for lit in (var, -var):
            reduced = _assign(clauses, lit)
            if reduced is None:
                continue
            for model in self.models(reduced, trail + [lit]):
                yield model


def _trail_to_assignment(trail, num_vars):
    values = [1] * num_vars
    for lit in trail:
        values[abs(lit) - 1] = 1 if lit > 0 else -1
    return Assignment(values)


def dpll_solve(formula, decision_budget=DPLL_BUDGET):
    """
    Decide ``formula`` by backtracking with unit propagation and pure-literal
    elimination. Branches on the most frequent remaining variable, positive
    polarity first. Unassigned variables in a witness are set to +1.

    Parameters
    ----------
    formula : CnfFormula

    decision_budget : int, optional
        Maximum number of branching decisions. Propagation is free.

    Returns
    -------
    result : DpllResult
    """
    if decision_budget < 0:
        raise ValueError("decision_budget must be non-negative")
    search = _Search(decision_budget)
    try:
        trail = search.solve(_clause_lists(formula), [])
    except _BudgetExceeded:
        log.debug("DPLL gave up after {0:d} decisions on {1!r}".format(
            search.decisions, formula))
        return DpllResult(BUDGET_EXCEEDED, None, search.decisions)
    if trail is None:
        return DpllResult(UNSAT, None, search.decisions)
    witness = _trail_to_assignment(trail, formula.num_vars)
    assert evaluate(formula, witness)[0]
    return DpllResult(SAT, witness, search.decisions)


def enumerate_models(formula):
    """
    Iterate over every satisfying Assignment exactly once.

    Pure-literal elimination is disabled here since it discards models.
    """
    n = formula.num_vars
    search = _Search(None)
    for trail in search.models(_clause_lists(formula), []):
        fixed = dict((abs(lit), lit > 0) for lit in trail)
        free = [v for v in range(1, n + 1) if v not in fixed]
        for bits in itertools.product((1, -1), repeat=len(free)):
            values = [0] * n
            for v, positive in fixed.items():
                values[v - 1] = 1 if positive else -1
            for v, b in zip(free, bits):
                values[v - 1] = b
            yield Assignment(values)


def count_models(formula):
    n = formula.num_vars
    search = _Search(None)
    total = 0
    for trail in search.models(_clause_lists(formula), []):
        total += 2 ** (n - len(set(abs(lit) for lit in trail)))
    return total
