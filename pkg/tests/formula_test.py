"""Testing CnfFormula."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import itertools

import numpy as np
import pytest

from ctds_sat.formula import (
    Assignment, Clause, CnfFormula, DuplicateVariableInClause, FormulaError,
    LengthMismatch, Literal, TautologicalClause, VariableOutOfRange, evaluate,
    formula_from_dimacs_lists, pure_literal_core)
from ctds_sat.generators import gen_random_ksat


def test_literal():
    lit = Literal.from_dimacs(-3)
    assert lit.variable == 2
    assert lit.polarity == -1
    assert lit.to_dimacs() == -3
    assert (-lit).polarity == 1
    with pytest.raises(FormulaError):
        Literal.from_dimacs(0)
    with pytest.raises(FormulaError):
        Literal(0, 2)


def test_clause_checks():
    with pytest.raises(DuplicateVariableInClause):
        Clause.from_dimacs([1, 1, 2])
    with pytest.raises(TautologicalClause):
        Clause.from_dimacs([1, -1])
    with pytest.raises(FormulaError):
        Clause([])


def test_formula():
    f = formula_from_dimacs_lists(2, [[1, -2]])
    assert f.num_vars == 2
    assert f.num_clauses == 1
    assert f.coefficient(0, 0) == 1
    assert f.coefficient(0, 1) == -1
    assert f.uniform_length == 2
    with pytest.raises(VariableOutOfRange):
        formula_from_dimacs_lists(2, [[1, 3]])
    with pytest.raises(FormulaError):
        CnfFormula(2, [])


def test_table_padding():
    f = formula_from_dimacs_lists(3, [[1], [1, -2, 3]])
    table = f.table
    assert table.variables.shape == (2, 3)
    assert list(table.signs[0]) == [1.0, 0.0, 0.0]
    assert list(table.lengths) == [1, 3]
    assert table.scale[0] == 0.5
    assert table.scale[1] == 0.125
    assert f.uniform_length is None


def test_evaluate():
    f = formula_from_dimacs_lists(2, [[1, -2]])
    assert evaluate(f, (1, 1)) == (True, 0)
    g = formula_from_dimacs_lists(2, [[1, 2]])
    assert evaluate(g, (-1, -1)) == (False, 1)
    with pytest.raises(LengthMismatch):
        evaluate(g, (1,))


@pytest.mark.parametrize('seed', [1, 2, 3])
def test_evaluate_brute_force(seed):
    f = gen_random_ksat(10, 42, 3, seed)
    c = f.coefficient_matrix()
    for sigma in itertools.product((-1, 1), repeat=f.num_vars):
        lit_true = (c * np.array(sigma)) > 0
        violated = int(np.sum(~np.any(lit_true, axis=1)))
        assert evaluate(f, sigma) == (violated == 0, violated)
        assert f.satisfied_by(sigma) == (violated == 0)


def test_assignment():
    a = Assignment((1, -1, 1))
    assert a.code == 0b101
    assert Assignment.from_code(0b101, 3) == a
    assert Assignment.from_array([0.2, -0.3, 0.7]) == a
    assert a.hamming(Assignment((-1, -1, -1))) == 2
    with pytest.raises(FormulaError):
        Assignment((1, 0))


def test_pure_literal_core():
    single = formula_from_dimacs_lists(3, [[1, 2, 3]])
    assert pure_literal_core(single).is_empty

    full = formula_from_dimacs_lists(2, [[1, 2], [-1, 2], [-2, 1], [-1, -2]])
    core = pure_literal_core(full)
    assert core.remaining_clauses == frozenset(range(4))
    assert core.remaining_vars == frozenset([0, 1])


def test_pure_literal_core_order():
    rng = np.random.default_rng(2024)
    for seed in range(100):
        f = gen_random_ksat(20, 60, 3, seed)
        expected = pure_literal_core(f)
        order = rng.permutation(f.num_vars)
        assert pure_literal_core(f, order) == expected
