"""Two-dimensional slices of the spin box: basin maps, search-time maps,
finite-size Lyapunov exponent fields, boundary box counting and Wada probes.

A plane fixes every coordinate except ``s_i`` (columns) and ``s_j`` (rows,
increasing with the row index) to a background drawn from
``background_seed``. Cells are sampled at their centers.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import math
from collections import OrderedDict, namedtuple

import numpy as np
from scipy import stats

from .clusters import approximate_clusters, cluster_solutions, enumerate_solutions
from .defaults import (
    FSLE_DIRECTIONS, FSLE_EPS0, FSLE_HORIZON, FSLE_RATIO, FSLE_SAMPLE_DT,
    UNRESOLVED_THRESHOLD, SatError)
from .dynamics import ContinuousState, DynamicsParams
from .formula import Assignment
from .integrator import CashKarpIntegrator, StepControl
from .logger import get_logger
from .rng import BACKGROUND_STREAM, DIRECTION_STREAM, substream
from .solver import SolveConfig
from .workqueue import WorkQueue

log = get_logger('ctds_sat.maps')

__all__ = [
    'UnresolvedCells',
    'NoBoundary',
    'PlaneSpec',
    'BasinMap',
    'FsleMap',
    'WadaReport',
    'basin_map',
    'fsle_map',
    'finite_size_lyapunov',
    'boundary_dimension',
    'wada_probe',
]

UNRESOLVED = -1
LABEL_BY_SOLUTION = 'solution'
LABEL_BY_CLUSTER = 'cluster'

MIN_SCALES = 4
MIN_BOXES_PER_SIDE = 4


class UnresolvedCells(SatError, ValueError):
    pass


class NoBoundary(SatError, ValueError):
    """
    No box at any scale straddles two labels; the dimension is undefined.
    """
    def __init__(self, message, counts=None):
        super(NoBoundary, self).__init__(message)
        self.counts = counts


class PlaneSpec(namedtuple('_PlaneSpecBase', [
        'var_i', 'var_j', 'window', 'grid', 'background_seed'])):
    """
    ``window`` is (i_min, i_max, j_min, j_max) inside [-1, 1]**2 and ``grid``
    is (W, H).
    """

    def __new__(cls, var_i, var_j, window=(-1.0, 1.0, -1.0, 1.0), grid=(64, 64),
                background_seed=0):
        var_i, var_j = int(var_i), int(var_j)
        if var_i == var_j or var_i < 0 or var_j < 0:
            raise ValueError(
                "plane needs two distinct variables, got {0:d}, {1:d}".format(
                    var_i, var_j))
        window = tuple(float(w) for w in window)
        i_min, i_max, j_min, j_max = window
        if not (-1 <= i_min < i_max <= 1 and -1 <= j_min < j_max <= 1):
            raise ValueError(
                "window {0!r} is not a box inside [-1, 1]^2".format(window))
        grid = tuple(int(g) for g in grid)
        if len(grid) != 2 or min(grid) < 1:
            raise ValueError(
                "grid must be two positive integers, got {0!r}".format(grid))
        return super(PlaneSpec, cls).__new__(
            cls, var_i, var_j, window, grid, int(background_seed))

    @property
    def width(self):
        return self.grid[0]

    @property
    def height(self):
        return self.grid[1]

    def coordinates(self):
        """(column centers along s_i, row centers along s_j)"""
        i_min, i_max, j_min, j_max = self.window
        xs = i_min + (np.arange(self.width) + 0.5) * (i_max - i_min) / self.width
        ys = j_min + (np.arange(self.height) + 0.5) * (j_max - j_min) / self.height
        return xs, ys

    def background(self, num_vars):
        if max(self.var_i, self.var_j) >= num_vars:
            raise ValueError(
                "plane variables out of range for N={0:d}".format(num_vars))
        rng = substream(self.background_seed, 0, BACKGROUND_STREAM, num_vars)
        return rng.uniform(-1.0, 1.0, num_vars)

    def contains(self, window):
        i_min, i_max, j_min, j_max = self.window
        a, b, c, d = window
        return i_min <= a < b <= i_max and j_min <= c < d <= j_max

    def zoom(self, window):
        return PlaneSpec(self.var_i, self.var_j, window, self.grid,
                         self.background_seed)

    def to_dict(self):
        return OrderedDict([
            ('var_i', self.var_i), ('var_j', self.var_j),
            ('window', list(self.window)), ('grid', list(self.grid)),
            ('background_seed', self.background_seed)])


class BasinMap(object):
    """
    ``labels`` is an H x W int array (-1 = Unresolved) and ``times`` the
    matching analog solve times (NaN where unresolved). ``keys`` maps each
    label to a map-independent identity: the solution code in solution mode,
    the cluster id in cluster mode.
    """
    def __init__(self, plane, labels, times, label_by, keys, clusters=None):
        self.plane = plane
        self.labels = labels
        self.times = times
        self.label_by = label_by
        self.keys = tuple(keys)
        self.clusters = clusters

    @property
    def approximate(self):
        return bool(self.clusters is not None and self.clusters.approximate)

    @property
    def unresolved_fraction(self):
        return float(np.mean(self.labels == UNRESOLVED))

    def inventory(self):
        """The set of keys of the labels present"""
        present = np.unique(self.labels[self.labels != UNRESOLVED])
        return frozenset(self.keys[label] for label in present)


class FsleMap(namedtuple('_FsleMapBase', [
        'plane', 'phi', 'eps0', 'ratio', 'num_directions'])):

    @property
    def mean(self):
        return float(np.mean(self.phi))


def _cell_state(plane, background, x, y):
    s = background.copy()
    s[plane.var_i] = x
    s[plane.var_j] = y
    return s


def _basin_row(context, row):
    formula, plane, control, log_a_cap, background = context
    integrator = CashKarpIntegrator(DynamicsParams(formula, log_a_cap), control)
    xs, ys = plane.coordinates()
    cells = []
    for x in xs:
        s = _cell_state(plane, background, x, ys[row])
        state = ContinuousState.initial(formula, s)
        outcome = integrator.integrate(state)
        if outcome.solved:
            cells.append((outcome.witness.code, outcome.t_final))
        else:
            cells.append((None, None))
    return cells


def _render(formula, plane, config, threads, worker, name):
    background = plane.background(formula.num_vars)
    context = (formula, plane, config.control, config.log_a_cap, background)
    queue = WorkQueue(context, threads=threads, name=name)
    return list(queue.map(worker, range(plane.height)))


def basin_map(formula, plane, config=None, label_by=LABEL_BY_CLUSTER, threads=1):
    """
    Integrate from every cell and label it by the solution (or its cluster)
    reached.

    In cluster mode the clusters come from exhaustive enumeration, which
    raises TooLarge beyond its size guard. In solution mode solution ids
    follow the sorted solution codes and ``clusters`` holds the approximate
    clustering of the observed solutions.
    """
    if config is None:
        config = SolveConfig()
    if label_by not in (LABEL_BY_SOLUTION, LABEL_BY_CLUSTER):
        raise ValueError("label_by must be 'solution' or 'cluster', got {0!r}".format(
            label_by))
    clusters = None
    if label_by == LABEL_BY_CLUSTER:
        clusters = cluster_solutions(enumerate_solutions(formula))
    rows = _render(formula, plane, config, threads, _basin_row, 'rows')

    height, width = plane.height, plane.width
    labels = np.full((height, width), UNRESOLVED, dtype=np.int64)
    times = np.full((height, width), np.nan)
    n = formula.num_vars
    if label_by == LABEL_BY_SOLUTION:
        codes = sorted(set(code for row in rows for code, _ in row if code is not None))
        ids = dict((code, j) for j, code in enumerate(codes))
        keys = codes
        clusters = approximate_clusters(Assignment.from_code(c, n) for c in codes)
    else:
        keys = range(len(clusters))
    for r, row in enumerate(rows):
        for c, (code, t) in enumerate(row):
            if code is None:
                continue
            if label_by == LABEL_BY_SOLUTION:
                labels[r, c] = ids[code]
            else:
                labels[r, c] = clusters.cluster_id(Assignment.from_code(code, n))
            times[r, c] = t
    basin = BasinMap(plane, labels, times, label_by, keys, clusters)
    log.info("basin map {0:d}x{1:d}: {2:d} labels, {3:.1%} unresolved".format(
        width, height, len(basin.inventory()), basin.unresolved_fraction))
    return basin


def random_directions(rng, count, num_vars):
    u = rng.standard_normal((count, num_vars))
    return u / np.linalg.norm(u, axis=1)[:, np.newaxis]


def _crossing_time(times, separation, eps0, target):
    """
    First time the separation reaches ``target``, interpolating ln(separation)
    linearly between checkpoints; None if it never does.
    """
    hit = np.flatnonzero(separation >= target)
    if not len(hit):
        return None
    j = hit[0]
    if j == 0:
        t_prev, d_prev = 0.0, eps0
    else:
        t_prev, d_prev = times[j - 1], separation[j - 1]
    t_next, d_next = times[j], separation[j]
    if d_next <= d_prev:
        return t_next
    frac = (math.log(target) - math.log(d_prev)) / (math.log(d_next) - math.log(d_prev))
    return t_prev + frac * (t_next - t_prev)


def finite_size_lyapunov(integrator, y0, directions, eps0, ratio, times):
    """
    phi = mean over directions of ln(ratio) / tau, tau being the first time a
    perturbation of size ``eps0`` along the direction grows to ``ratio * eps0``.
    Directions that never get there contribute 0.

    The perturbation acts on the first ``num_vars`` components of ``y0``;
    components that would leave [-1, 1] are reflected.
    """
    n = integrator.system.num_vars
    y0 = np.asarray(y0, dtype=np.float64)
    times = np.asarray(times, dtype=np.float64)
    reference = integrator.sample(y0, times)
    target = ratio * eps0
    s0 = y0[:n]
    total = 0.0
    for u in directions:
        u = np.where(np.abs(s0 + eps0 * u) > 1.0, -u, u)
        perturbed = y0.copy()
        perturbed[:n] += eps0 * u
        separation = np.linalg.norm(
            integrator.sample(perturbed, times) - reference, axis=1)
        separation[~np.isfinite(separation)] = 0.0
        tau = _crossing_time(times, separation, eps0, target)
        if tau is not None and tau > 0:
            total += math.log(ratio) / tau
    return total / len(directions)


def _fsle_row(context, row):
    (formula, plane, control, log_a_cap, background), fsle = context
    eps0, ratio, num_directions, times = fsle
    integrator = CashKarpIntegrator(DynamicsParams(formula, log_a_cap), control)
    xs, ys = plane.coordinates()
    n = formula.num_vars
    phi = []
    for c, x in enumerate(xs):
        s = _cell_state(plane, background, x, ys[row])
        y0 = np.concatenate([s, np.zeros(formula.num_clauses)])
        rng = substream(plane.background_seed, row * plane.width + c,
                        DIRECTION_STREAM, n)
        directions = random_directions(rng, num_directions, n)
        phi.append(finite_size_lyapunov(integrator, y0, directions, eps0, ratio, times))
    return phi


def fsle_map(formula, plane, eps0=FSLE_EPS0, ratio=FSLE_RATIO,
             num_directions=FSLE_DIRECTIONS, control=None, horizon=FSLE_HORIZON,
             sample_dt=FSLE_SAMPLE_DT, threads=1, log_a_cap=None):
    """
    Finite-size Lyapunov exponent at every cell. Separation is measured in
    s only; perturbed runs start with the same a_m(0) = 1.

    Returns
    -------
    fsle : FsleMap
    """
    if not eps0 > 0:
        raise ValueError("eps0 must be positive, got {0!r}".format(eps0))
    if not ratio > 1:
        raise ValueError("ratio must exceed 1, got {0!r}".format(ratio))
    if num_directions < 1:
        raise ValueError("num_directions must be at least 1")
    if control is None:
        control = StepControl()
    params = DynamicsParams(formula) if log_a_cap is None else \
        DynamicsParams(formula, log_a_cap)
    times = np.arange(1, int(round(horizon / sample_dt)) + 1) * sample_dt
    background = plane.background(formula.num_vars)
    context = ((formula, plane, control, params.log_a_cap, background),
               (eps0, ratio, int(num_directions), times))
    queue = WorkQueue(context, threads=threads, name='rows')
    phi = np.array(list(queue.map(_fsle_row, range(plane.height))), dtype=np.float64)
    log.info("FSLE map {0:d}x{1:d}: mean phi {2:.4g}".format(
        plane.width, plane.height, float(phi.mean())))
    return FsleMap(plane, phi, float(eps0), float(ratio), int(num_directions))


def dyadic_scales(width, height):
    scales = []
    g = 2
    while width % g == 0 and height % g == 0 and \
            min(width, height) // g >= MIN_BOXES_PER_SIDE:
        scales.append(g)
        g *= 2
    return scales


def _boundary_boxes(labels, g):
    height, width = labels.shape
    blocks = labels.reshape(height // g, g, width // g, g).swapaxes(1, 2)
    blocks = blocks.reshape(height // g, width // g, g * g)
    # unresolved cells count as no label
    big = np.iinfo(labels.dtype).max
    lo = np.where(blocks == UNRESOLVED, big, blocks).min(axis=2)
    hi = blocks.max(axis=2)
    return int(np.count_nonzero((hi != UNRESOLVED) & (lo != big) & (hi > lo)))


def boundary_dimension(basin, threshold=UNRESOLVED_THRESHOLD):
    """
    Box-counting dimension of the basin boundary.

    A g x g box of cells is a boundary box if it holds at least two distinct
    resolved labels; boxes run over dyadic g with at least four boxes per
    side.

    Returns
    -------
    (dimension, counts) : (float, OrderedDict of g -> B(g))
    """
    labels = np.asarray(basin.labels if hasattr(basin, 'labels') else basin)
    unresolved = float(np.mean(labels == UNRESOLVED))
    if unresolved > threshold:
        raise UnresolvedCells(
            "{0:.1%} of cells unresolved (threshold {1:.1%})".format(
                unresolved, threshold))
    if unresolved > threshold / 2:
        log.warning("{0:.1%} of cells unresolved".format(unresolved))
    height, width = labels.shape
    scales = dyadic_scales(width, height)
    if len(scales) < MIN_SCALES:
        raise ValueError(
            "a {0:d}x{1:d} map gives {2:d} dyadic scales, need {3:d}".format(
                width, height, len(scales), MIN_SCALES))
    counts = OrderedDict((g, _boundary_boxes(labels, g)) for g in scales)
    positive = [(g, b) for g, b in counts.items() if b > 0]
    if not positive:
        raise NoBoundary("no boundary boxes at any of {0:d} scales".format(
            len(scales)), counts)
    if len(positive) < 2:
        raise ValueError(
            "boundary boxes only at g={0:d}; too few scales to fit a slope".format(
                positive[0][0]))
    g, b = np.array(positive, dtype=np.float64).T
    fit = stats.linregress(np.log(g), np.log(b))
    return -fit.slope, counts


class WadaReport(namedtuple('_WadaReportBase', ['windows', 'inventories'])):
    """
    Per magnification level, the window and the set of basin keys present.
    """

    @property
    def label_counts(self):
        return [len(inv) for inv in self.inventories]

    @property
    def consistent(self):
        """At least three labels at every level"""
        return bool(self.inventories) and min(self.label_counts) >= 3

    def persistent(self):
        """Keys present at every level"""
        if not self.inventories:
            return frozenset()
        return frozenset.intersection(*self.inventories)


def wada_probe(formula, base_plane, zoom_sequence, config=None,
               label_by=LABEL_BY_SOLUTION, threads=1):
    """
    Re-render the basin map at each nested window of ``zoom_sequence`` and
    report the label inventory per level (the base window first).
    """
    windows = [base_plane.window]
    plane = base_plane
    for window in zoom_sequence:
        if not plane.contains(tuple(float(w) for w in window)):
            raise ValueError("zoom window {0!r} is not nested in {1!r}".format(
                tuple(window), plane.window))
        plane = plane.zoom(window)
        windows.append(plane.window)
    inventories = []
    for window in windows:
        basin = basin_map(formula, base_plane.zoom(window), config, label_by, threads)
        inventories.append(basin.inventory())
        log.info("window {0}: {1:d} labels".format(
            ', '.join('{0:.6g}'.format(w) for w in window), len(inventories[-1])))
    return WadaReport(tuple(windows), tuple(inventories))
