"""Testing solution clusters."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import pytest

from ctds_sat.clusters import (
    TooLarge, approximate_clusters, cluster_solutions, enumerate_solutions,
    solution_codes)
from ctds_sat.formula import Assignment, formula_from_dimacs_lists
from ctds_sat.generators import gen_random_ksat


def _bfs_clusters(solutions):
    remaining = set(solutions)
    clusters = []
    while remaining:
        start = remaining.pop()
        cluster = set([start])
        frontier = [start]
        while frontier:
            s = frontier.pop()
            for i in range(len(s)):
                t = Assignment(s[:i] + (-s[i],) + s[i + 1:])
                if t in remaining:
                    remaining.discard(t)
                    cluster.add(t)
                    frontier.append(t)
        clusters.append(frozenset(cluster))
    return set(clusters)


def test_single_clause():
    f = formula_from_dimacs_lists(2, [[1, 2]])
    solutions = enumerate_solutions(f)
    assert len(solutions) == 3
    clusters = cluster_solutions(solutions)
    assert len(clusters) == 1
    assert clusters.num_solutions == 3
    assert clusters.cluster_id(Assignment((1, 1))) == 0
    assert Assignment((-1, -1)) not in clusters


def test_two_clusters():
    f = formula_from_dimacs_lists(2, [[1, 2], [-1, -2]])
    clusters = cluster_solutions(enumerate_solutions(f))
    assert len(clusters) == 2
    # ordered by smallest code: (+1, -1) has code 1
    assert clusters.cluster_id(Assignment((1, -1))) == 0
    assert clusters.cluster_id(Assignment((-1, 1))) == 1
    assert clusters.solution_id(Assignment((1, -1))) == 0


def test_empty():
    f = formula_from_dimacs_lists(1, [[1], [-1]])
    clusters = cluster_solutions(enumerate_solutions(f))
    assert len(clusters) == 0
    assert clusters.num_solutions == 0


def test_agrees_with_bfs():
    for seed in range(10):
        f = gen_random_ksat(12, 48, 3, seed)
        solutions = enumerate_solutions(f)
        clusters = cluster_solutions(solutions)
        assert set(clusters.clusters) == _bfs_clusters(solutions)
        assert sorted(solution_codes(f)) == sorted(s.code for s in solutions)


def test_approximate():
    clusters = approximate_clusters([(1, 1, 1), (1, 1, -1), (-1, -1, -1)])
    assert clusters.approximate
    assert len(clusters) == 2
    assert 'approximate' in repr(clusters)


def test_too_large():
    f = formula_from_dimacs_lists(30, [[1, 2, 3]])
    with pytest.raises(TooLarge):
        enumerate_solutions(f, max_vars=20)
