"""Testing basin maps, FSLE fields and box counting."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np
import pytest

from ctds_sat.defaults import slow_tests_enabled
from ctds_sat.dpll import dpll_solve
from ctds_sat.formula import formula_from_dimacs_lists
from ctds_sat.generators import (
    gen_lop_1in3, gen_random_ksat, gen_xorsat, leaf_removal_core)
from ctds_sat.integrator import CashKarpIntegrator, StepControl
from ctds_sat.maps import (
    LABEL_BY_CLUSTER, LABEL_BY_SOLUTION, UNRESOLVED, NoBoundary, PlaneSpec,
    UnresolvedCells, basin_map, boundary_dimension, dyadic_scales,
    finite_size_lyapunov, fsle_map, wada_probe)
from ctds_sat.solver import SolveConfig

UNIT = formula_from_dimacs_lists(2, [[1]])
QUICK = SolveConfig(control=StepControl(t_max=200.0))


class LinearFlow(object):
    """dy/dt = rate * y"""
    def __init__(self, rate, num_vars=1):
        self.rate = rate
        self.num_vars = num_vars

    def derivative(self, y):
        return self.rate * y


def test_plane_spec():
    plane = PlaneSpec(0, 1, grid=(4, 2))
    xs, ys = plane.coordinates()
    assert np.allclose(xs, [-0.75, -0.25, 0.25, 0.75])
    assert np.allclose(ys, [-0.5, 0.5])
    assert plane.contains((-0.5, 0.5, -0.5, 0.5))
    assert not plane.contains((-0.5, 1.5, -0.5, 0.5))
    with pytest.raises(ValueError):
        PlaneSpec(1, 1)
    with pytest.raises(ValueError):
        PlaneSpec(0, 1, window=(0.5, -0.5, -1.0, 1.0))
    with pytest.raises(ValueError):
        plane.background(1)
    assert np.array_equal(plane.background(5), plane.background(5))


def test_single_basin():
    basin = basin_map(UNIT, PlaneSpec(0, 1, grid=(8, 8)), QUICK, LABEL_BY_CLUSTER)
    assert basin.labels.shape == (8, 8)
    assert np.all(basin.labels == 0)
    assert np.all(np.isfinite(basin.times))
    assert basin.inventory() == frozenset([0])
    assert basin.unresolved_fraction == 0.0
    assert not basin.approximate


def test_basin_deterministic():
    f = gen_random_ksat(8, 24, 3, 3)
    plane = PlaneSpec(0, 1, grid=(6, 6), background_seed=4)
    a = basin_map(f, plane, QUICK, LABEL_BY_SOLUTION)
    b = basin_map(f, plane, QUICK, LABEL_BY_SOLUTION)
    assert np.array_equal(a.labels, b.labels)
    assert a.keys == b.keys
    assert list(a.keys) == sorted(a.keys)
    assert a.approximate
    with pytest.raises(ValueError):
        basin_map(f, plane, QUICK, 'nosuch')


def test_basin_threads():
    f = gen_random_ksat(8, 24, 3, 5)
    plane = PlaneSpec(2, 5, grid=(4, 4))
    one = basin_map(f, plane, QUICK, LABEL_BY_CLUSTER)
    two = basin_map(f, plane, QUICK, LABEL_BY_CLUSTER, threads=2)
    assert np.array_equal(one.labels, two.labels)
    assert np.array_equal(one.times, two.times, equal_nan=True)


def test_dyadic_scales():
    assert dyadic_scales(256, 256) == [2, 4, 8, 16, 32, 64]
    assert dyadic_scales(64, 32) == [2, 4, 8]
    assert dyadic_scales(6, 6) == []


def test_vertical_boundary():
    labels = np.zeros((256, 256), dtype=np.int64)
    labels[:, 101:] = 1
    dimension, counts = boundary_dimension(labels)
    assert dimension == pytest.approx(1.0)
    assert counts[2] == 128
    assert counts[64] == 4


def test_no_boundary():
    with pytest.raises(NoBoundary) as excinfo:
        boundary_dimension(np.zeros((64, 64), dtype=np.int64))
    assert list(excinfo.value.counts.values()) == [0, 0, 0, 0]


def test_boundary_at_one_scale():
    # column 8 is a box edge at g = 2, 4, 8 so only g = 16 sees both labels
    labels = np.zeros((64, 64), dtype=np.int64)
    labels[:, 8:] = 1
    with pytest.raises(ValueError) as excinfo:
        boundary_dimension(labels)
    assert not isinstance(excinfo.value, NoBoundary)
    assert 'too few scales' in str(excinfo.value)
    assert 'g=16' in str(excinfo.value)


def test_unresolved():
    labels = np.full((64, 64), UNRESOLVED, dtype=np.int64)
    with pytest.raises(UnresolvedCells):
        boundary_dimension(labels)
    with pytest.raises(ValueError):
        boundary_dimension(np.zeros((8, 8), dtype=np.int64))


def test_fsle_linear_flow():
    integrator = CashKarpIntegrator(LinearFlow(0.5), StepControl(eps=1e-9), clamp=False)
    times = np.arange(1, 101) * 0.1
    phi = finite_size_lyapunov(integrator, [0.0], [np.array([1.0])], 1e-3, 10.0, times)
    assert phi == pytest.approx(0.5, rel=1e-3)


def test_fsle_contracting_flow():
    integrator = CashKarpIntegrator(LinearFlow(-0.5), clamp=False)
    times = np.arange(1, 51) * 0.1
    assert finite_size_lyapunov(integrator, [0.0], [np.array([1.0])], 1e-3, 10.0,
                                times) == 0.0


def test_fsle_map():
    plane = PlaneSpec(0, 1, grid=(3, 2))
    fsle = fsle_map(UNIT, plane, num_directions=2, horizon=2.0, sample_dt=0.5)
    assert fsle.phi.shape == (2, 3)
    assert np.all(np.isfinite(fsle.phi))
    again = fsle_map(UNIT, plane, num_directions=2, horizon=2.0, sample_dt=0.5)
    assert np.array_equal(fsle.phi, again.phi)
    with pytest.raises(ValueError):
        fsle_map(UNIT, plane, ratio=1.0)


def test_wada_single_attractor():
    plane = PlaneSpec(0, 1, grid=(4, 4))
    report = wada_probe(UNIT, plane, [(-0.5, 0.5, -0.5, 0.5)], QUICK, LABEL_BY_CLUSTER)
    assert report.windows == ((-1.0, 1.0, -1.0, 1.0), (-0.5, 0.5, -0.5, 0.5))
    assert report.label_counts == [1, 1]
    assert not report.consistent
    assert report.persistent() == frozenset([0])
    with pytest.raises(ValueError):
        wada_probe(UNIT, plane, [(-0.5, 0.5, -0.5, 0.5), (0.0, 0.9, 0.0, 0.4)], QUICK)


def test_wada_two_basins():
    # (1, -1) and (-1, 1) differ in two spins: two clusters, one per basin
    pair = formula_from_dimacs_lists(2, [[1, 2], [-1, -2]])
    # a 7 x 8 grid keeps every cell off the diagonal separatrix
    plane = PlaneSpec(0, 1, grid=(7, 8))
    report = wada_probe(pair, plane, [(-0.5, 0.5, -0.5, 0.5)], QUICK,
                        LABEL_BY_CLUSTER)
    assert report.label_counts == [2, 2]
    assert report.persistent() == frozenset([0, 1])
    assert not report.consistent


def _first_satisfiable(formulas):
    for f in formulas:
        if dpll_solve(f).is_sat:
            return f
    raise AssertionError("no satisfiable draw")


def _fsle_contrast(num_vars, grid, num_directions):
    plane = PlaneSpec(0, 1, grid=grid, background_seed=3)
    fields = []
    for alpha in (4.25, 3.0):
        m = int(round(alpha * num_vars))
        f = _first_satisfiable(gen_random_ksat(num_vars, m, 3, seed)
                               for seed in range(50))
        fields.append(fsle_map(f, plane, num_directions=num_directions))
    return fields


def test_fsle_hard_vs_easy():
    hard, easy = _fsle_contrast(20, (3, 3), 4)
    assert np.all(np.isfinite(hard.phi))
    assert np.all(easy.phi >= 0)
    assert easy.mean <= hard.mean


@pytest.mark.skipif(not slow_tests_enabled(), reason='slow')
def test_fsle_hard_vs_easy_full():
    hard, easy = _fsle_contrast(50, (64, 64), 50)
    assert hard.mean > 0
    assert hard.mean >= 2 * easy.mean


def _xorsat_pair(num_vars):
    no_core = next(x for x in (gen_xorsat(num_vars, 9, 3, seed) for seed in range(200))
                   if leaf_removal_core(x).is_empty)
    with_core = next(
        x for x in (gen_xorsat(num_vars, 14, 3, seed) for seed in range(200))
        if not leaf_removal_core(x).is_empty and dpll_solve(x.to_cnf()).is_sat)
    return no_core.to_cnf(), with_core.to_cnf()


@pytest.mark.skipif(not slow_tests_enabled(), reason='slow')
def test_boundary_dimension_core_contrast():
    no_core, with_core = _xorsat_pair(15)
    plane = PlaneSpec(0, 1, grid=(512, 512), background_seed=1)
    d_plain, _ = boundary_dimension(basin_map(no_core, plane, threads=4))
    d_core, _ = boundary_dimension(basin_map(with_core, plane, threads=4))
    assert d_plain <= 1.15
    assert d_core - d_plain >= 0.1


def _zoom_windows(center, levels, window=(-1.0, 1.0, -1.0, 1.0)):
    windows = []
    for _ in range(levels):
        x_lo, x_hi, y_lo, y_hi = window
        half_x, half_y = (x_hi - x_lo) / 4, (y_hi - y_lo) / 4
        x = min(max(center[0], x_lo + half_x), x_hi - half_x)
        y = min(max(center[1], y_lo + half_y), y_hi - half_y)
        window = (x - half_x, x + half_x, y - half_y, y + half_y)
        windows.append(window)
    return windows


def _meeting_point(basin, size=4):
    """Centre of the first size x size block holding three or more labels"""
    labels = basin.labels
    xs, ys = basin.plane.coordinates()
    for r in range(labels.shape[0] - size + 1):
        for c in range(labels.shape[1] - size + 1):
            block = labels[r:r + size, c:c + size]
            if len(set(block[block != UNRESOLVED].tolist())) >= 3:
                return (xs[c:c + size].mean(), ys[r:r + size].mean())
    return None


@pytest.mark.skipif(not slow_tests_enabled(), reason='slow')
def test_wada_three_basins():
    # +1-in-3 at N = 30 and l = 2.28 has M = 23 constraints
    plane = PlaneSpec(0, 1, grid=(64, 64), background_seed=2)
    for seed in range(20):
        _, cnf = gen_lop_1in3(30, 23, seed)
        if not dpll_solve(cnf).is_sat:
            continue
        basin = basin_map(cnf, plane, QUICK, LABEL_BY_SOLUTION, threads=4)
        center = _meeting_point(basin)
        if center is None:
            continue
        report = wada_probe(cnf, plane, _zoom_windows(center, 4), QUICK,
                            LABEL_BY_SOLUTION, threads=4)
        if report.consistent:
            assert len(report.label_counts) == 5
            return
    pytest.fail("no instance kept three basins through four zooms")
