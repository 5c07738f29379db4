"""The ``ctds-sat`` command line.

Every subcommand is a pure transformation from input files to output files.
Runs that write to ``--out`` also write ``<out>.manifest.json`` holding the
resolved configuration, the arguments, the schema version and the RNG
algorithm. Exit codes: 0 on success, 1 on usage errors, 2 on runtime errors.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import argparse
import contextlib
import sys
from collections import OrderedDict

import six

from .config import TypeMismatch, UnknownKey, load_config
from .defaults import RNG_ALGORITHM, SCHEMA_VERSION, SatError
from .diagnostics import trajectory_diagnostics
from .dynamics import DynamicsParams
from .fitting import (
    RATE_LAW, InsufficientData, DegenerateWindow, fit_eta_scaling, fit_escape_rate,
    fit_exponential_decay, fit_rate_scaling, fit_step_powerlaw)
from .formula import CnfFormula, pure_literal_core
from .generators import EnsembleSpec, XorInstance, leaf_removal_core
from .integrator import CashKarpIntegrator
from .io import (
    DoesNotExist, label_pixels, ramp_pixels, read_instance, sat_open, write_csv,
    write_dimacs, write_json, write_map_csv, write_ppm, write_trace_csv,
    write_xor)
from .logger import get_logger
from .maps import (
    LABEL_BY_CLUSTER, LABEL_BY_SOLUTION, NoBoundary, PlaneSpec, UnresolvedCells,
    basin_map, boundary_dimension, fsle_map)
from .registry import names as ensemble_names
from .solver import (
    BatchSpec, escape_times, initial_state, read_records, run_batch, solve,
    write_records)
from .version import __version__

log = get_logger('ctds_sat.cli')

__all__ = ['UsageError', 'dispatch', 'main']

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

FIT_MODES = ('exp', 'rate', 'steppow', 'eta')
FIT_COLUMNS = ('N', 'eps', 'model', 'variable', 'r', 'lam', 'u', 'v', 'eta',
               'b', 'beta', 'd', 'delta', 'r_squared', 'num_samples', 'num_points',
               'window_lo', 'window_hi')


class UsageError(SatError):
    pass


class CommandFailed(SatError):
    """A runtime failure tied to the file being processed."""
    def __init__(self, path, error):
        super(CommandFailed, self).__init__("{0}: {1}".format(path, error))
        self.path = path
        self.error = error


@contextlib.contextmanager
def _failing_path(path):
    try:
        yield
    except CommandFailed:
        raise
    except (SatError, DoesNotExist, IOError, OSError, ValueError, KeyError) as e:
        raise CommandFailed(path, e)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _global_flags():
    # SUPPRESS keeps unset flags from shadowing each other between the main
    # parser and the subcommand parsers
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument('--seed', type=int, default=argparse.SUPPRESS,
                        help='master seed (default: 0)')
    parent.add_argument('--eps', type=float, default=argparse.SUPPRESS,
                        help='local error tolerance of the integrator')
    parent.add_argument('--threads', type=int, default=argparse.SUPPRESS,
                        help='worker processes (output does not depend on it)')
    parent.add_argument('--out', default=argparse.SUPPRESS,
                        help='output path or prefix (default: stdout)')
    parent.add_argument('--config', default=argparse.SUPPRESS,
                        help='key=value configuration file')
    return parent


def _add_ensemble_flags(p):
    p.add_argument('--ensemble', required=True, choices=sorted(ensemble_names()))
    p.add_argument('--k', type=int, default=3)
    p.add_argument('--alpha', '--density', dest='density', required=True,
                   help='alpha (ksat), l (lop) or gamma (xor)')


def _add_plane_flags(p):
    p.add_argument('input')
    p.add_argument('--var-i', type=int, default=1, help='1-based first plane variable')
    p.add_argument('--var-j', type=int, default=2, help='1-based second plane variable')
    p.add_argument('--window', type=float, nargs=4, default=(-1.0, 1.0, -1.0, 1.0),
                   metavar=('I_MIN', 'I_MAX', 'J_MIN', 'J_MAX'))
    p.add_argument('--grid', type=int, nargs=2, default=(64, 64), metavar=('W', 'H'))
    p.add_argument('--background-seed', type=int, default=None,
                   help='seed of the off-plane coordinates (default: --seed)')


def build_parser():
    parent = _global_flags()
    parser = _Parser(prog='ctds-sat', parents=[parent],
                     description='Continuous-time dynamical SAT solver toolkit')
    parser.add_argument('--version', action='version',
                        version='%(prog)s {0}'.format(__version__))
    subparsers = parser.add_subparsers(dest='command', parser_class=_Parser)
    subparsers.required = True

    p = subparsers.add_parser('gen', parents=[parent], help='generate an instance')
    _add_ensemble_flags(p)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--index', type=int, default=0)

    p = subparsers.add_parser('solve', parents=[parent], help='solve a DIMACS file')
    p.add_argument('input')
    p.add_argument('--starts', type=int, default=None)

    p = subparsers.add_parser('batch', parents=[parent], help='solve an ensemble')
    _add_ensemble_flags(p)
    p.add_argument('--n', type=int, nargs='+', required=True)
    p.add_argument('--instances', type=int, required=True)
    p.add_argument('--no-oracle-filter', action='store_true')

    p = subparsers.add_parser('fit', parents=[parent], help='fit solve records')
    p.add_argument('records', nargs='+')
    p.add_argument('--mode', choices=FIT_MODES, default='exp')
    p.add_argument('--variable', choices=('t', 'n_step', 'length_L'), default=None)

    p = subparsers.add_parser('basin', parents=[parent], help='basin map')
    _add_plane_flags(p)
    p.add_argument('--label-by', choices=(LABEL_BY_SOLUTION, LABEL_BY_CLUSTER),
                   default=LABEL_BY_CLUSTER)

    p = subparsers.add_parser('fsle', parents=[parent], help='FSLE map')
    _add_plane_flags(p)

    p = subparsers.add_parser('core', parents=[parent], help='core of an instance')
    p.add_argument('input')

    p = subparsers.add_parser('traj', parents=[parent], help='trajectory diagnostics')
    p.add_argument('input')
    p.add_argument('--vars', type=int, nargs='+', default=None,
                   help='1-based variables to record (default: first ten)')
    p.add_argument('--clauses', type=int, nargs='+', default=None,
                   help='1-based clauses to record (default: first ten)')

    p = subparsers.add_parser('escape', parents=[parent],
                              help='per-instance escape rate from many starts')
    p.add_argument('input')
    p.add_argument('--num-starts', type=int, default=1000)
    return parser


# Output helpers ===============================================================

@contextlib.contextmanager
def _output(path, suffix=''):
    if path is None:
        yield sys.stdout
        return
    with _failing_path(path + suffix):
        with sat_open(path + suffix, 'w') as f:
            yield f


def _write_manifest(args, config, extra=None):
    if config.out is None:
        return
    arguments = OrderedDict()
    for key in sorted(vars(args)):
        if key in ('seed', 'eps', 'threads', 'out', 'config'):
            continue
        value = getattr(args, key)
        arguments[key] = list(value) if isinstance(value, tuple) else value
    manifest = OrderedDict()
    manifest['program'] = 'ctds-sat'
    manifest['version'] = __version__
    manifest['schema_version'] = SCHEMA_VERSION
    manifest['rng_algorithm'] = RNG_ALGORITHM
    manifest['command'] = args.command
    manifest['arguments'] = arguments
    manifest['config'] = config.to_manifest()
    if extra:
        manifest.update(extra)
    with _output(config.out, '.manifest.json') as f:
        write_json(manifest, f)


def _read(path, cnf=False):
    with _failing_path(path):
        instance = read_instance(path)
        if cnf and not isinstance(instance, CnfFormula):
            instance = instance.to_cnf()
        return instance


def _require_out(config, command):
    if config.out is None:
        raise UsageError(
            "`{0}` writes several files; --out is required".format(command))


# Subcommands ==================================================================

def cmd_gen(args, config):
    spec = EnsembleSpec(args.ensemble, args.n, args.density, config.seed, args.k)
    instance = spec.generate(args.index)
    with _output(config.out) as f:
        if isinstance(instance, XorInstance):
            write_xor(instance, f)
        else:
            write_dimacs(instance if isinstance(instance, CnfFormula)
                         else instance.to_cnf(), f)
    _write_manifest(args, config, {'ensemble': spec.to_dict()})


def cmd_solve(args, config):
    if args.starts is not None:
        config['starts'] = args.starts
    formula = _read(args.input, cnf=True)
    with _failing_path(args.input):
        record = solve(formula, config.solve_config())
    with _output(config.out) as f:
        write_records([record], f)
    _write_manifest(args, config)
    return record


def cmd_batch(args, config):
    spec = EnsembleSpec(args.ensemble, args.n[0], args.density, config.seed, args.k)
    batch = BatchSpec(spec, args.n, args.instances, config.solve_config(),
                      oracle_filter=not args.no_oracle_filter)
    with _output(config.out) as f:
        for record in run_batch(batch, threads=config.threads):
            write_records([record], f)
            f.flush()
    _write_manifest(args, config, {'ensemble': spec.to_dict()})


def _fit_row(fit, num_vars=None, eps=None):
    row = dict((name, None) for name in FIT_COLUMNS)
    row.update(fit.params)
    row['N'] = num_vars
    row['eps'] = eps
    row['model'] = fit.model
    row['variable'] = fit.variable
    row['r_squared'] = fit.r_squared
    row['num_samples'] = fit.num_samples
    row['num_points'] = fit.num_points
    row['window_hi'], row['window_lo'] = fit.window[0], fit.window[-1]
    return row


def _prediction(law, num_vars, fit, p):
    """Cost to reach unsolved fraction p at size N from the scaling law"""
    d = OrderedDict([('N', num_vars), ('p', p)])
    try:
        if law.model == RATE_LAW:
            d['t'] = law.predict_time(p, num_vars, fit.r)
        else:
            d['n_step'] = law.predict_steps(p, num_vars, fit.u, fit.v)
    except OverflowError:
        d['n_step'] = None
    return d


def cmd_fit(args, config):
    records = []
    for path in args.records:
        with _failing_path(path):
            with sat_open(path) as f:
                records.extend(read_records(f))
    groups = OrderedDict()
    for record in sorted(records, key=lambda r: (r.N, r.eps)):
        groups.setdefault((record.N, record.eps), []).append(record)
    if not groups:
        raise CommandFailed(args.records[0], InsufficientData("no records"))

    window = config.fit_window
    if args.mode in ('exp', 'rate'):
        variable = args.variable or 't'
        fitter = fit_exponential_decay
    else:
        variable = args.variable or 'n_step'
        fitter = fit_step_powerlaw
    rows, summary = [], OrderedDict([('mode', args.mode), ('groups', [])])
    by_eps = OrderedDict()
    for (num_vars, eps), group in six.iteritems(groups):
        try:
            fit = fitter(group, window, variable)
        except (InsufficientData, DegenerateWindow) as e:
            log.warning("N={0:d}, eps={1:g}: {2}".format(num_vars, eps, e))
            if args.mode in ('exp', 'steppow'):
                raise CommandFailed(args.records[0], e)
            continue
        rows.append(_fit_row(fit, num_vars, eps))
        entry = fit.to_dict()
        entry['N'], entry['eps'] = num_vars, eps
        summary['groups'].append(entry)
        by_eps.setdefault(eps, []).append((num_vars, fit))

    if args.mode in ('rate', 'eta'):
        law = fit_rate_scaling if args.mode == 'rate' else fit_eta_scaling
        summary['laws'] = []
        for eps, fits in six.iteritems(by_eps):
            pairs = [(n, f.lam if args.mode == 'rate' else f.eta) for n, f in fits]
            with _failing_path(args.records[0]):
                fit = law(pairs)
            rows.append(_fit_row(fit, None, eps))
            entry = fit.to_dict()
            entry['eps'] = eps
            entry['predictions'] = [_prediction(fit, n, f, window[-1]) for n, f in fits]
            summary['laws'].append(entry)

    columns = OrderedDict((name, [row[name] for row in rows]) for name in FIT_COLUMNS)
    if config.out is None:
        write_json(summary, sys.stdout)
    else:
        with _output(config.out, '.csv') as f:
            write_csv(columns, f)
        with _output(config.out, '.json') as f:
            write_json(summary, f)
    _write_manifest(args, config)
    return summary


def _plane(args, config, formula):
    background_seed = args.background_seed
    if background_seed is None:
        background_seed = config.seed
    with _failing_path(args.input):
        plane = PlaneSpec(args.var_i - 1, args.var_j - 1, args.window, args.grid,
                          background_seed)
        plane.background(formula.num_vars)
    return plane


def _write_map(config, suffix, plane, values, name, pixels):
    with _output(config.out, suffix + '.csv') as f:
        write_map_csv(plane, values, f, name)
    with _output(config.out, suffix + '.ppm') as f:
        write_ppm(pixels, f)


def cmd_basin(args, config):
    _require_out(config, 'basin')
    formula = _read(args.input, cnf=True)
    plane = _plane(args, config, formula)
    with _failing_path(args.input):
        basin = basin_map(formula, plane, config.solve_config(), args.label_by,
                          threads=config.threads)
    _write_map(config, '.labels', plane, basin.labels, 'label',
               label_pixels(basin.labels))
    _write_map(config, '.times', plane, basin.times, 't_solve',
               ramp_pixels(basin.times, log_scale=True))

    summary = OrderedDict()
    summary['plane'] = plane.to_dict()
    summary['label_by'] = basin.label_by
    summary['keys'] = [int(key) for key in basin.keys]
    summary['approximate'] = basin.approximate
    summary['unresolved_fraction'] = basin.unresolved_fraction
    try:
        dimension, counts = boundary_dimension(basin)
        summary['boundary_dimension'] = float(dimension)
        summary['box_counts'] = OrderedDict((str(g), b) for g, b in counts.items())
    except (UnresolvedCells, NoBoundary, ValueError) as e:
        log.warning("boundary dimension unavailable: {0}".format(e))
        summary['boundary_dimension'] = None
        summary['box_counts'] = OrderedDict(
            (str(g), b) for g, b in (getattr(e, 'counts', None) or {}).items())
    with _output(config.out, '.json') as f:
        write_json(summary, f)
    _write_manifest(args, config)
    return basin


def cmd_fsle(args, config):
    _require_out(config, 'fsle')
    formula = _read(args.input, cnf=True)
    plane = _plane(args, config, formula)
    with _failing_path(args.input):
        fsle = fsle_map(formula, plane, config.fsle_eps0, config.fsle_ratio,
                        config.fsle_directions, config.step_control(),
                        config.fsle_horizon, config.fsle_sample_dt,
                        threads=config.threads, log_a_cap=config.log_a_cap)
    _write_map(config, '.phi', plane, fsle.phi, 'phi', ramp_pixels(fsle.phi))
    summary = OrderedDict([
        ('plane', plane.to_dict()), ('mean_phi', fsle.mean),
        ('eps0', fsle.eps0), ('ratio', fsle.ratio),
        ('num_directions', fsle.num_directions)])
    with _output(config.out, '.json') as f:
        write_json(summary, f)
    _write_manifest(args, config)
    return fsle


def cmd_core(args, config):
    instance = _read(args.input)
    with _failing_path(args.input):
        if isinstance(instance, XorInstance):
            report = leaf_removal_core(instance)
        else:
            report = pure_literal_core(instance)
    with _output(config.out) as f:
        write_json(report.to_dict(), f)
    _write_manifest(args, config)
    return report


def cmd_traj(args, config):
    formula = _read(args.input, cnf=True)
    trace_vars = None if args.vars is None else [v - 1 for v in args.vars]
    trace_clauses = None if args.clauses is None else [m - 1 for m in args.clauses]
    with _failing_path(args.input):
        params = DynamicsParams(formula, config.log_a_cap)
        integrator = CashKarpIntegrator(params, config.step_control(), True,
                                        trace_vars, trace_clauses)
        outcome = integrator.integrate(initial_state(formula, config.seed))
        series = trajectory_diagnostics(outcome.trace, integrator.trace_vars,
                                        integrator.trace_clauses)
    summary = OrderedDict(series.summary)
    summary['status'] = outcome.status
    summary['n_step'] = outcome.n_step
    summary['length_L'] = outcome.length_L
    if config.out is None:
        write_trace_csv(series, sys.stdout)
    else:
        with _output(config.out, '.csv') as f:
            write_trace_csv(series, f)
        with _output(config.out, '.json') as f:
            write_json(summary, f)
    _write_manifest(args, config)
    return series


def cmd_escape(args, config):
    formula = _read(args.input, cnf=True)
    with _failing_path(args.input):
        records = escape_times(formula, config.solve_config(), args.num_starts,
                               threads=config.threads)
        fit = fit_escape_rate(records, config.fit_window)
    summary = fit.to_dict()
    summary['kappa'] = fit.lam
    if config.out is None:
        write_json(summary, sys.stdout)
    else:
        with _output(config.out, '.jsonl') as f:
            write_records(records, f)
        with _output(config.out, '.json') as f:
            write_json(summary, f)
    _write_manifest(args, config)
    return fit


COMMANDS = {
    'gen': cmd_gen,
    'solve': cmd_solve,
    'batch': cmd_batch,
    'fit': cmd_fit,
    'basin': cmd_basin,
    'fsle': cmd_fsle,
    'core': cmd_core,
    'traj': cmd_traj,
    'escape': cmd_escape,
}


def dispatch(argv=None):
    """
    Run one subcommand.

    Returns
    -------
    code : int
        0 on success, 1 on usage errors, 2 on runtime errors.
    """
    parser = build_parser()
    args = None
    try:
        args = parser.parse_args(argv)
        overrides = dict((key, getattr(args, key, None))
                         for key in ('seed', 'eps', 'threads', 'out'))
        config_path = getattr(args, 'config', None)
        try:
            config = load_config(config_path, overrides)
        except (UnknownKey, TypeMismatch) as e:
            raise UsageError(str(e))
        except DoesNotExist as e:
            raise CommandFailed(config_path, e)
        if config.threads < 1:
            raise UsageError("--threads must be at least 1")
        COMMANDS[args.command](args, config)
    except SystemExit as e:
        return e.code or EXIT_OK
    except UsageError as e:
        sys.stderr.write("ctds-sat: usage error: {0}\n".format(e))
        return EXIT_USAGE
    except CommandFailed as e:
        log.error(str(e))
        return EXIT_RUNTIME
    except (SatError, DoesNotExist, EnvironmentError, ValueError) as e:
        path = getattr(args, 'input', None) or getattr(args, 'out', None) or '-'
        log.error("{0}: {1}".format(path, e))
        return EXIT_RUNTIME
    return EXIT_OK


def main():
    sys.exit(dispatch())
