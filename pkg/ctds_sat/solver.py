"""Trajectory orchestration: initial conditions, overflow restarts, parallel
starts, and batches over instance ensembles."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import time
from collections import OrderedDict, namedtuple

import numpy as np

from .defaults import DPLL_BUDGET, LOG_A_CAP, SCHEMA_VERSION, SatError
from .dpll import SAT, UNSAT, dpll_solve
from .dynamics import ContinuousState, DynamicsParams
from .filters import UNKNOWN, OracleBudgetExhausted, SatOracleFilter
from .generators import EnsembleSpec
from .integrator import (
    OVERFLOW, SOLVED, CashKarpIntegrator, StepControl)
from .io import read_jsonl, write_jsonl
from .logger import get_logger
from .rng import START_STREAM, substream
from .workqueue import WorkQueue

log = get_logger('ctds_sat.solver')

__all__ = [
    'OracleBudgetExhausted',
    'SolveConfig',
    'SolveRecord',
    'BatchSpec',
    'initial_state',
    'solve',
    'run_batch',
    'escape_times',
    'write_records',
    'read_records',
]

MAX_ORACLE_ATTEMPTS = 1000


class SolveConfig(namedtuple('_SolveConfigBase', [
        'control', 'num_parallel_starts', 'max_restarts_on_overflow', 'seed',
        'oracle_budget', 'log_a_cap'])):

    def __new__(cls, control=None, num_parallel_starts=1, max_restarts_on_overflow=3,
                seed=0, oracle_budget=DPLL_BUDGET, log_a_cap=LOG_A_CAP):
        if control is None:
            control = StepControl()
        if num_parallel_starts < 1:
            raise ValueError("num_parallel_starts must be at least 1")
        if max_restarts_on_overflow < 0:
            raise ValueError("max_restarts_on_overflow must be non-negative")
        if oracle_budget < 0:
            raise ValueError("oracle_budget must be non-negative")
        return super(SolveConfig, cls).__new__(
            cls, control, int(num_parallel_starts), int(max_restarts_on_overflow),
            int(seed), int(oracle_budget), float(log_a_cap))

    def to_dict(self):
        d = OrderedDict(self._asdict())
        d['control'] = self.control.to_dict()
        return d


class SolveRecord(namedtuple('_SolveRecordBase', [
        'instance_id', 'ensemble', 'N', 'M', 'k', 'density', 'sat_oracle',
        'status', 't_solve', 't_final', 'n_step_total', 'n_rejected', 'length_L',
        'starts', 'oracle_discards', 'wall_time', 'seed', 'eps',
        'schema_version'])):
    """
    One instance's outcome. ``t_solve`` is None unless ``status`` is
    ``'Solved'``; ``n_step_total`` sums every start and restart.
    """

    @property
    def solved(self):
        return self.status == SOLVED

    def to_dict(self):
        return OrderedDict(self._asdict())

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d.setdefault('schema_version', SCHEMA_VERSION)
        if d['schema_version'] != SCHEMA_VERSION:
            raise SatError("unsupported record schema version {0!r}".format(
                d['schema_version']))
        missing = [f for f in cls._fields if f not in d]
        if missing:
            raise SatError("record lacks field(s) {0}".format(', '.join(missing)))
        return cls(**dict((f, d[f]) for f in cls._fields))

    def without_wall_time(self):
        return self._replace(wall_time=None)


class BatchSpec(namedtuple('_BatchSpecBase', [
        'ensemble', 'num_vars_list', 'instances_per_n', 'config', 'oracle_filter'])):
    """
    ``ensemble`` is the EnsembleSpec template; its num_vars is replaced by
    each entry of ``num_vars_list``.
    """

    def __new__(cls, ensemble, num_vars_list, instances_per_n, config=None,
                oracle_filter=True):
        if not isinstance(ensemble, EnsembleSpec):
            raise TypeError("ensemble must be an EnsembleSpec")
        if instances_per_n < 0:
            raise ValueError("instances_per_n must be non-negative")
        if config is None:
            config = SolveConfig()
        return super(BatchSpec, cls).__new__(
            cls, ensemble, tuple(sorted(int(n) for n in num_vars_list)),
            int(instances_per_n), config, bool(oracle_filter))


def oracle_verdict(formula, budget):
    result = dpll_solve(formula, budget)
    if result.status in (SAT, UNSAT):
        return result.status
    return UNKNOWN


def initial_state(formula, seed, instance_id=0, start=0, restart=0, t0=0.0):
    """Uniform s(0) in (-1, 1)^N from the start substream, a_m(0) = 1"""
    rng = substream(seed, instance_id, START_STREAM, formula.num_vars, start, restart)
    s = rng.uniform(-1.0, 1.0, formula.num_vars)
    return ContinuousState.initial(formula, s, t0)


def _run_start(integrator, formula, config, instance_id, start, t_cap):
    """
    One start with its overflow restarts; the clock continues across restarts.
    Returns (outcome, n_step, n_rejected, length).
    """
    base = config.control
    t0 = 0.0
    n_step = n_rejected = 0
    length = 0.0
    for restart in range(config.max_restarts_on_overflow + 1):
        integrator.control = base._replace(
            t_max=t_cap, n_step_max=max(base.n_step_max - n_step, 0))
        state = initial_state(formula, config.seed, instance_id, start, restart, t0)
        outcome = integrator.integrate(state)
        n_step += outcome.n_step
        n_rejected += outcome.n_rejected
        length += outcome.length_L
        if outcome.status != OVERFLOW:
            break
        log.debug(
            "instance {0}: start {1:d} overflowed at t={2:g} (restart {3:d})".format(
                instance_id, start, outcome.t_final, restart))
        t0 = outcome.t_final
    return outcome, n_step, n_rejected, length


def solve(formula, config=None, instance_id=0, sat_oracle=None, ensemble=None,
          density=None, oracle_discards=0):
    """
    Run ``num_parallel_starts`` starts from i.i.d. uniform s(0) in (-1, 1)^N
    with a_m(0) = 1, on one shared analog clock.

    Starts run one after the other, each capped at the best solve time so far,
    so ``t_solve`` is the minimum over the starts that solve. When nothing
    solves, the reported status is that of the start reaching the largest
    analog time (the lowest index on ties).

    Returns
    -------
    record : SolveRecord
    """
    if config is None:
        config = SolveConfig()
    wall_start = time.time()
    if sat_oracle is None:
        sat_oracle = oracle_verdict(formula, config.oracle_budget)
    params = DynamicsParams(formula, config.log_a_cap)
    integrator = CashKarpIntegrator(params, config.control)

    best = None
    n_step_total = n_rejected_total = 0
    t_cap = config.control.t_max
    for start in range(config.num_parallel_starts):
        outcome, n_step, n_rejected, length = _run_start(
            integrator, formula, config, instance_id, start, t_cap)
        n_step_total += n_step
        n_rejected_total += n_rejected
        candidate = (outcome, length)
        if best is None:
            best = candidate
        elif outcome.solved:
            if not best[0].solved or outcome.t_final < best[0].t_final:
                best = candidate
        elif not best[0].solved and outcome.t_final > best[0].t_final:
            best = candidate
        if outcome.solved:
            assert formula.satisfied_by(outcome.witness)
            t_cap = min(t_cap, outcome.t_final)

    outcome, length = best
    return SolveRecord(
        instance_id=instance_id,
        ensemble=ensemble,
        N=formula.num_vars,
        M=formula.num_clauses,
        k=formula.uniform_length,
        density=float(formula.density if density is None else density),
        sat_oracle=sat_oracle,
        status=outcome.status,
        t_solve=outcome.t_final if outcome.solved else None,
        t_final=outcome.t_final,
        n_step_total=n_step_total,
        n_rejected=n_rejected_total,
        length_L=length,
        starts=config.num_parallel_starts,
        oracle_discards=oracle_discards,
        wall_time=time.time() - wall_start,
        seed=config.seed,
        eps=config.control.eps,
        schema_version=SCHEMA_VERSION)


def _solve_item(config, item):
    formula, instance_id, sat_oracle, ensemble, density, discards = item
    return solve(formula, config, instance_id, sat_oracle, ensemble, density, discards)


def _batch_items(batch, num_vars, oracle):
    spec = batch.ensemble.with_num_vars(num_vars)
    items = []
    for index in range(batch.instances_per_n):
        discards = 0
        for attempt in range(MAX_ORACLE_ATTEMPTS):
            formula = spec.formula(index, attempt)
            if oracle(formula):
                break
            discards += 1
        else:
            raise SatError(
                "no satisfiable instance for N={0:d}, index {1:d} in {2:d} "
                "attempts".format(num_vars, index, MAX_ORACLE_ATTEMPTS))
        items.append((formula, index, oracle.verdict, spec.ensemble,
                      float(spec.density), discards))
    return items


def run_batch(batch, threads=1):
    """
    Generate and solve ``instances_per_n`` instances for every N.

    With ``oracle_filter`` set, instances DPLL proves Unsat are regenerated
    (next attempt substream) and the discards are counted on the record.
    Records come out sorted by N, then instance index, for any ``threads``.
    """
    oracle = SatOracleFilter(batch.config.oracle_budget,
                             passthrough=not batch.oracle_filter)
    queue = WorkQueue(batch.config, threads=threads, name='instances')
    for num_vars in batch.num_vars_list:
        items = _batch_items(batch, num_vars, oracle)
        solved = 0
        for record in queue.map(_solve_item, items):
            solved += record.solved
            yield record
        log.info("N={0:d}: {1:d}/{2:d} solved".format(num_vars, solved, len(items)))
    oracle.finalize()


def escape_times(formula, config=None, num_starts=100, threads=1):
    """
    Many independent single starts on one instance; start j draws its initial
    condition from substream (seed, j). The record's ``instance_id`` is j.
    """
    if config is None:
        config = SolveConfig()
    config = config._replace(num_parallel_starts=1)
    sat_oracle = oracle_verdict(formula, config.oracle_budget)
    items = [(formula, j, sat_oracle, None, float(formula.density), 0)
             for j in range(num_starts)]
    queue = WorkQueue(config, threads=threads, name='starts')
    return list(queue.map(_solve_item, items))


def write_records(records, stream):
    return write_jsonl((r.to_dict() for r in records), stream)


def read_records(stream):
    return [SolveRecord.from_dict(d) for d in read_jsonl(stream)]
