"""Exhaustive solution enumeration and solution clusters."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .defaults import ENUMERATION_MAX_VARS, SatError
from .formula import Assignment, iter_clause_codes

__all__ = [
    'TooLarge',
    'ClusterSet',
    'solution_codes',
    'enumerate_solutions',
    'cluster_solutions',
    'approximate_clusters',
]

CHUNK_BITS = 20


class TooLarge(SatError, ValueError):
    pass


def solution_codes(formula, max_vars=ENUMERATION_MAX_VARS):
    """
    Sorted int64 array of the codes (bit i set iff x_i = +1) of every
    satisfying assignment.
    """
    n = formula.num_vars
    if n > max_vars:
        raise TooLarge(
            "exhaustive enumeration needs N <= {0:d}, got N={1:d}".format(max_vars, n))
    masks = [(np.int64(pos), np.int64(neg)) for pos, neg in iter_clause_codes(formula)]
    total = 1 << n
    chunk = 1 << min(n, CHUNK_BITS)
    found = []
    for begin in range(0, total, chunk):
        x = np.arange(begin, min(begin + chunk, total), dtype=np.int64)
        ok = np.ones(len(x), dtype=bool)
        for pos, neg in masks:
            ok &= ~(((x & pos) == 0) & ((x & neg) == neg))
        found.append(x[ok])
    return np.concatenate(found)


def enumerate_solutions(formula, max_vars=ENUMERATION_MAX_VARS):
    n = formula.num_vars
    return frozenset(Assignment.from_code(int(code), n)
                     for code in solution_codes(formula, max_vars))


class ClusterSet(object):
    """
    Solutions partitioned into the connected components of their
    Hamming-distance-1 graph. Solutions are ordered by code and clusters by
    their smallest code.
    """
    def __init__(self, solutions, labels, approximate=False):
        self.solutions = tuple(solutions)
        self.labels = tuple(int(label) for label in labels)
        self.approximate = approximate
        self._index = dict((s, j) for j, s in enumerate(self.solutions))
        num_clusters = max(self.labels) + 1 if self.labels else 0
        members = [[] for _ in range(num_clusters)]
        for s, label in zip(self.solutions, self.labels):
            members[label].append(s)
        self.clusters = tuple(frozenset(m) for m in members)

    def __len__(self):
        return len(self.clusters)

    @property
    def num_solutions(self):
        return len(self.solutions)

    def solution_id(self, assignment):
        """Index of ``assignment`` in code order, or None"""
        return self._index.get(Assignment(assignment))

    def cluster_id(self, assignment):
        j = self.solution_id(assignment)
        if j is None:
            return None
        return self.labels[j]

    def __contains__(self, assignment):
        return self.solution_id(assignment) is not None

    def __repr__(self):
        return 'ClusterSet({0:d} solutions, {1:d} clusters{2})'.format(
            self.num_solutions, len(self),
            ', approximate' if self.approximate else '')


def _edges_int64(codes, n):
    rows, cols = [], []
    for bit in range(n):
        flipped = codes ^ np.int64(1 << bit)
        j = np.searchsorted(codes, flipped)
        j = np.minimum(j, len(codes) - 1)
        hit = codes[j] == flipped
        rows.append(np.flatnonzero(hit))
        cols.append(j[hit])
    return np.concatenate(rows), np.concatenate(cols)


def _edges_dict(codes, n):
    index = dict((c, j) for j, c in enumerate(codes))
    rows, cols = [], []
    for j, c in enumerate(codes):
        for bit in range(n):
            other = index.get(c ^ (1 << bit))
            if other is not None:
                rows.append(j)
                cols.append(other)
    return np.array(rows, dtype=np.intp), np.array(cols, dtype=np.intp)


def cluster_solutions(solutions, approximate=False):
    """
    Returns
    -------
    clusters : ClusterSet
    """
    solutions = sorted(set(Assignment(s) for s in solutions), key=lambda s: s.code)
    if not solutions:
        return ClusterSet((), (), approximate)
    n = len(solutions[0])
    if any(len(s) != n for s in solutions):
        raise ValueError("solutions must share one length")
    if n < 63:
        codes = np.array([s.code for s in solutions], dtype=np.int64)
        rows, cols = _edges_int64(codes, n)
    else:
        rows, cols = _edges_dict([s.code for s in solutions], n)
    size = len(solutions)
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))
    _, raw = connected_components(graph, directed=False)
    # renumber by smallest member code
    order = {}
    labels = []
    for label in raw:
        if label not in order:
            order[label] = len(order)
        labels.append(order[label])
    return ClusterSet(solutions, labels, approximate)


def approximate_clusters(solutions):
    """
    Clusters of observed solutions only (for N beyond exhaustive reach);
    flagged approximate.
    """
    return cluster_solutions(solutions, approximate=True)
