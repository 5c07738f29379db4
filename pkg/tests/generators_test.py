"""Testing the instance generators."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import itertools
from fractions import Fraction

import numpy as np
import pytest

from ctds_sat.clusters import enumerate_solutions
from ctds_sat.formula import Assignment
from ctds_sat.generators import (
    EnsembleSpec, InvalidDimensions, LopInstance, XorInstance, encode_xorsat_cnf,
    gen_lop_1in3, gen_random_ksat, gen_xorsat, leaf_removal_core)
from ctds_sat.registry import UnknownEnsemble, names


def _all_sigmas(n):
    return [Assignment(s) for s in itertools.product((-1, 1), repeat=n)]


def test_invalid_dimensions():
    with pytest.raises(InvalidDimensions):
        gen_random_ksat(10, 0, 3, 1)
    with pytest.raises(InvalidDimensions):
        gen_random_ksat(2, 5, 3, 1)
    with pytest.raises(InvalidDimensions):
        gen_xorsat(10, 5, 1, 1)


def test_determinism():
    assert gen_random_ksat(20, 85, 3, 7) == gen_random_ksat(20, 85, 3, 7)
    assert gen_random_ksat(20, 85, 3, 7) != gen_random_ksat(20, 85, 3, 8)
    assert gen_random_ksat(20, 85, 3, 7, index=1) != gen_random_ksat(20, 85, 3, 7)
    assert gen_lop_1in3(30, 23, 3)[0] == gen_lop_1in3(30, 23, 3)[0]
    assert gen_xorsat(15, 9, 3, 4) == gen_xorsat(15, 9, 3, 4)


def test_ksat_clauses():
    f = gen_random_ksat(100, 3334, 3, 11)
    assert f.uniform_length == 3
    for clause in f:
        assert len(set(clause.variables)) == 3
    # occurrences are uniform over variables
    counts = np.bincount(f.table.variables.ravel(), minlength=100)
    expected = 3 * 3334 / 100.0
    chi2 = np.sum((counts - expected) ** 2 / expected)
    # 99 degrees of freedom, far tail
    assert chi2 < 99 + 3 * np.sqrt(2 * 99)


def test_lop_encoding():
    native = LopInstance(3, [(0, 1, 2)])
    cnf = native.to_cnf()
    assert cnf.num_clauses == 4
    satisfying = [s for s in _all_sigmas(3) if cnf.satisfied_by(s)]
    assert len(satisfying) == 3
    assert all(sum(1 for v in s if v > 0) == 1 for s in satisfying)


def test_lop_density():
    spec = EnsembleSpec('lop', 30, '2.28', seed=1)
    assert spec.num_constraints == 23
    assert spec.k == 3
    native = spec.generate()
    assert native.num_constraints == 23
    assert spec.formula().num_clauses == 92


@pytest.mark.parametrize('parity', [0, 1])
def test_xor_encoding_single(parity):
    instance = XorInstance(3, [((0, 1, 2), parity)])
    cnf = encode_xorsat_cnf(instance)
    assert cnf.num_clauses == 4
    satisfying = [s for s in _all_sigmas(3) if cnf.satisfied_by(s)]
    assert len(satisfying) == 4
    for s in satisfying:
        assert sum(1 for v in s if v > 0) % 2 == parity


def test_xor_encoding_clauses():
    cnf = encode_xorsat_cnf(XorInstance(3, [((0, 1, 2), 1)]))
    assert [c.to_dimacs() for c in cnf] == [
        [1, 2, 3], [1, -2, -3], [-1, 2, -3], [-1, -2, 3]]


def test_encodings_preserve_solutions():
    for seed in range(20):
        instance = gen_xorsat(10, 6, 3, seed)
        expected = frozenset(s for s in _all_sigmas(10) if instance.satisfied_by(s))
        assert enumerate_solutions(instance.to_cnf()) == expected

        native, cnf = gen_lop_1in3(10, 4, seed)
        expected = frozenset(s for s in _all_sigmas(10) if native.satisfied_by(s))
        assert enumerate_solutions(cnf) == expected


def test_xorsat_checks():
    instance = gen_xorsat(15, 9, 3, 2)
    assert instance.density == Fraction(3, 5)
    for variables, parity in instance.checks:
        assert len(set(variables)) == 3
        assert parity in (0, 1)


def test_leaf_removal_chain():
    chain = XorInstance(7, [((0, 1, 2), 0), ((2, 3, 4), 1), ((4, 5, 6), 0)])
    assert leaf_removal_core(chain).is_empty


def test_leaf_removal_triangle():
    triangle = XorInstance(3, [((0, 1), 0), ((1, 2), 1), ((2, 0), 0)])
    core = leaf_removal_core(triangle)
    assert core.remaining_clauses == frozenset([0, 1, 2])
    assert core.remaining_vars == frozenset([0, 1, 2])


def test_leaf_removal_transition():
    sparse = sum(leaf_removal_core(gen_xorsat(3000, 2100, 3, seed)).is_empty
                 for seed in range(10))
    dense = sum(leaf_removal_core(gen_xorsat(3000, 2610, 3, seed)).is_empty
                for seed in range(10))
    assert sparse >= 9
    assert dense <= 1


def test_ensemble_spec():
    spec = EnsembleSpec('ksat', 50, 4.25, seed=7)
    assert spec.num_constraints == 213
    assert spec.density == Fraction(17, 4)
    assert spec.with_num_vars(20).num_constraints == 85
    assert spec.formula() == gen_random_ksat(50, 213, 3, 7)
    assert EnsembleSpec('xor', 15, 0.6).num_constraints == 9
    assert sorted(names()) == ['ksat', 'lop', 'xor']
    with pytest.raises(UnknownEnsemble):
        EnsembleSpec('nosuch', 10, 1.0)
    with pytest.raises(InvalidDimensions):
        EnsembleSpec('ksat', 10, 0)
