"""Testing solve and run_batch."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import io

import numpy as np
import pytest

from ctds_sat.defaults import SCHEMA_VERSION, SatError, slow_tests_enabled
from ctds_sat.dpll import SAT, UNSAT, dpll_solve
from ctds_sat.fitting import (
    compare_decay_models, fit_exponential_decay, fit_rate_scaling)
from ctds_sat.formula import formula_from_dimacs_lists
from ctds_sat.generators import EnsembleSpec, gen_random_ksat
from ctds_sat.integrator import SOLVED, StepControl
from ctds_sat.solver import (
    BatchSpec, SolveConfig, SolveRecord, escape_times, initial_state,
    read_records, run_batch, solve, write_records)

SHORT = SolveConfig(control=StepControl(t_max=500.0), seed=1)


def test_solve_config():
    config = SolveConfig()
    assert config.num_parallel_starts == 1
    assert config.max_restarts_on_overflow == 3
    assert config.control.eps == 1e-3
    with pytest.raises(ValueError):
        SolveConfig(num_parallel_starts=0)
    assert config.to_dict()['control']['eps'] == 1e-3


def test_initial_state():
    f = gen_random_ksat(10, 30, 3, 1)
    a = initial_state(f, 5)
    b = initial_state(f, 5)
    assert (a.s == b.s).all()
    assert (abs(a.s) < 1).all()
    assert not a.log_a.any()
    assert (initial_state(f, 5, start=1).s != a.s).any()


def test_solve_easy():
    f = next(g for g in (gen_random_ksat(30, 90, 3, seed) for seed in range(4, 40))
             if dpll_solve(g).is_sat)
    record = solve(f, SHORT)
    assert record.status == SOLVED
    assert record.sat_oracle == SAT
    assert record.t_solve == record.t_final
    assert record.N == 30
    assert record.M == 90
    assert record.k == 3
    assert record.density == 3.0
    assert record.schema_version == SCHEMA_VERSION


def test_solve_unsat():
    f = formula_from_dimacs_lists(1, [[1], [-1]])
    record = solve(f, SolveConfig(control=StepControl(t_max=20.0)))
    assert not record.solved
    assert record.t_solve is None
    assert record.sat_oracle == UNSAT


def test_solve_deterministic():
    f = gen_random_ksat(20, 85, 3, 2)
    a = solve(f, SHORT)
    b = solve(f, SHORT)
    assert a.without_wall_time() == b.without_wall_time()


def test_parallel_starts_minimum():
    f = gen_random_ksat(20, 85, 3, 5)
    single = solve(f, SHORT)
    multi = solve(f, SHORT._replace(num_parallel_starts=3))
    assert multi.starts == 3
    assert multi.n_step_total >= single.n_step_total
    if single.solved:
        assert multi.solved
        assert multi.t_solve <= single.t_solve


def test_overflow_restarts():
    f = formula_from_dimacs_lists(1, [[1], [-1]])
    config = SolveConfig(control=StepControl(t_max=200.0), log_a_cap=5.0,
                         max_restarts_on_overflow=2)
    record = solve(f, config)
    assert record.status == 'Overflow'
    # every restart continues the clock
    assert record.t_final > 10.0


def test_run_batch():
    spec = EnsembleSpec('ksat', 20, 4.25, seed=3)
    batch = BatchSpec(spec, [20, 16], 6, SHORT)
    assert batch.num_vars_list == (16, 20)
    records = list(run_batch(batch))
    assert [r.N for r in records] == [16] * 6 + [20] * 6
    assert [r.instance_id for r in records] == list(range(6)) * 2
    assert all(r.sat_oracle == SAT for r in records)
    assert all(r.ensemble == 'ksat' for r in records)
    again = list(run_batch(batch))
    assert [r.without_wall_time() for r in records] == \
        [r.without_wall_time() for r in again]


def test_run_batch_threads():
    spec = EnsembleSpec('ksat', 12, 4.0, seed=8)
    batch = BatchSpec(spec, [12], 4, SHORT)
    one = [r.without_wall_time() for r in run_batch(batch, threads=1)]
    two = [r.without_wall_time() for r in run_batch(batch, threads=2)]
    assert one == two


def test_run_batch_seed_isolation():
    spec = EnsembleSpec('ksat', 12, 4.25, seed=4)
    three = list(run_batch(BatchSpec(spec, [12], 3, SHORT)))
    five = list(run_batch(BatchSpec(spec, [12], 5, SHORT)))
    assert [r.without_wall_time() for r in three] == \
        [r.without_wall_time() for r in five[:3]]
    # another size in the batch leaves these records alone
    mixed = list(run_batch(BatchSpec(spec, [10, 12], 3, SHORT)))
    assert [r.without_wall_time() for r in mixed if r.N == 12] == \
        [r.without_wall_time() for r in three]


def test_run_batch_empty():
    batch = BatchSpec(EnsembleSpec('ksat', 20, 4.25), [], 10)
    assert list(run_batch(batch)) == []


def test_run_batch_oracle_discards():
    # dense enough that some draws are unsatisfiable
    spec = EnsembleSpec('ksat', 10, 6.0, seed=2)
    records = list(run_batch(BatchSpec(spec, [10], 10, SHORT)))
    assert all(r.sat_oracle == SAT for r in records)
    assert sum(r.oracle_discards for r in records) > 0
    for r in records:
        formula = spec.formula(r.instance_id, r.oracle_discards)
        assert formula.num_clauses == r.M


def test_records_io():
    f = gen_random_ksat(12, 40, 3, 6)
    records = [solve(f, SHORT, instance_id=j) for j in range(2)]
    stream = io.StringIO()
    assert write_records(records, stream) == 2
    assert read_records(stream.getvalue()) == records
    d = records[0].to_dict()
    d['schema_version'] = SCHEMA_VERSION + 1
    with pytest.raises(SatError):
        SolveRecord.from_dict(d)


def test_escape_times():
    f = gen_random_ksat(12, 40, 3, 7)
    records = escape_times(f, SHORT, num_starts=5)
    assert [r.instance_id for r in records] == list(range(5))
    assert len(set(r.t_final for r in records)) > 1


@pytest.mark.skipif(not slow_tests_enabled(), reason='slow')
def test_easy_phase_completeness():
    spec = EnsembleSpec('ksat', 100, 3.0, seed=11)
    records = list(run_batch(BatchSpec(spec, [100], 200, SolveConfig(seed=11))))
    solved = [r for r in records if r.solved]
    assert len(solved) >= 0.99 * len(records)
    for r in solved:
        formula = spec.formula(r.instance_id, r.oracle_discards)
        assert formula.num_vars == 100
    fit = fit_exponential_decay(records)
    assert fit.r_squared >= 0.98


def _rate_law(sizes, instances, alpha=4.25, seed=5):
    spec = EnsembleSpec('ksat', sizes[0], alpha, seed=seed)
    records = list(run_batch(BatchSpec(spec, sizes, instances, SolveConfig(seed=seed))))
    pairs = []
    for n in sizes:
        pairs.append((n, fit_exponential_decay([r for r in records if r.N == n]).lam))
    return fit_rate_scaling(pairs)


def test_rate_scaling_from_batch():
    fit = _rate_law([8, 10, 12], 60)
    assert fit.num_points == 3
    assert np.isfinite(fit.beta)
    assert fit.b > 0


@pytest.mark.skipif(not slow_tests_enabled(), reason='slow')
def test_rate_scaling_exponent():
    fit = _rate_law([20, 30, 40, 50], 200)
    assert 1.0 <= fit.beta <= 2.3


@pytest.mark.skipif(not slow_tests_enabled(), reason='slow')
def test_decay_models_by_phase():
    hard = EnsembleSpec('ksat', 30, 4.25, seed=6)
    records = list(run_batch(BatchSpec(hard, [30], 500, SolveConfig(seed=6))))
    assert compare_decay_models(records)[2] == 'power'
    easy = EnsembleSpec('ksat', 200, 3.0, seed=7)
    records = list(run_batch(BatchSpec(easy, [200], 200, SolveConfig(seed=7))))
    assert compare_decay_models(records)[2] == 'exponential'


@pytest.mark.skipif(not slow_tests_enabled(), reason='slow')
def test_rate_insensitive_to_eps():
    spec = EnsembleSpec('ksat', 20, 4.25, seed=8)
    rates = []
    for eps in (1e-4, 1e-3, 1e-2):
        config = SolveConfig(control=StepControl(eps=eps), seed=8)
        records = list(run_batch(BatchSpec(spec, [20], 300, config)))
        rates.append(fit_exponential_decay(records).lam)
    assert (max(rates) - min(rates)) / np.mean(rates) <= 0.25
