"""Run configuration: defaults < key=value file < command-line flags."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import re
from collections import OrderedDict

import six

from . import defaults
from .defaults import SatError
from .integrator import StepControl
from .io import sat_open
from .solver import SolveConfig

__all__ = [
    'UnknownKey',
    'TypeMismatch',
    'CliConfig',
    'load_config',
]


class UnknownKey(SatError, KeyError):
    def __str__(self):
        return RuntimeError.__str__(self)


class TypeMismatch(SatError, ValueError):
    pass


# name -> (type, default)
KEYS = OrderedDict([
    ('seed', (int, 0)),
    ('eps', (float, defaults.EPS)),
    ('threads', (int, 1)),
    ('out', (str, None)),
    ('h_init', (float, defaults.H_INIT)),
    ('h_min', (float, defaults.H_MIN)),
    ('h_max', (float, defaults.H_MAX)),
    ('t_max', (float, defaults.T_MAX)),
    ('n_step_max', (int, defaults.N_STEP_MAX)),
    ('safety', (float, defaults.SAFETY)),
    ('trace_max_points', (int, defaults.TRACE_MAX_POINTS)),
    ('starts', (int, 1)),
    ('max_restarts', (int, 3)),
    ('oracle_budget', (int, defaults.DPLL_BUDGET)),
    ('log_a_cap', (float, defaults.LOG_A_CAP)),
    ('fit_p_hi', (float, defaults.FIT_WINDOW[0])),
    ('fit_p_lo', (float, defaults.FIT_WINDOW[1])),
    ('fsle_eps0', (float, defaults.FSLE_EPS0)),
    ('fsle_ratio', (float, defaults.FSLE_RATIO)),
    ('fsle_directions', (int, defaults.FSLE_DIRECTIONS)),
    ('fsle_horizon', (float, defaults.FSLE_HORIZON)),
    ('fsle_sample_dt', (float, defaults.FSLE_SAMPLE_DT)),
])

# keys that never reach the manifest
VOLATILE_KEYS = ('threads',)

LINE_PATTERN = re.compile(
    r'^\s*(?P<key>[A-Za-z_][A-Za-z0-9_\-]*)\s*=\s*(?P<value>.*?)\s*$')


def _convert(key, value):
    vtype = KEYS[key][0]
    if value is None:
        return None
    if isinstance(value, six.string_types):
        value = value.strip()
        if len(value) >= 2 and value[0] == value[-1] and value[0] in '"\'':
            value = value[1:-1]
        elif vtype is not str and value.lower() in ('none', ''):
            return None
    try:
        if vtype is int:
            if isinstance(value, six.integer_types) and not isinstance(value, bool):
                return int(value)
            if isinstance(value, six.string_types) and re.match(r'^[+-]?\d+$', value):
                return int(value)
            number = float(value)
            if not number.is_integer():
                raise ValueError
            return int(number)
        return vtype(value)
    except (TypeError, ValueError):
        raise TypeMismatch("config key `{0}` expects {1}, got {2!r}".format(
            key, vtype.__name__, value))


class CliConfig(OrderedDict):
    """
    The fully resolved run configuration. Keys are also attributes.
    """
    def __init__(self, values=None):
        super(CliConfig, self).__init__()
        for key, (_, default) in six.iteritems(KEYS):
            super(CliConfig, self).__setitem__(key, default)
        if values:
            self.update(values)

    def __setitem__(self, key, value):
        key = key.replace('-', '_')
        if key not in KEYS:
            raise UnknownKey("unknown config key `{0}`".format(key))
        super(CliConfig, self).__setitem__(key, _convert(key, value))

    def update(self, values):
        for key, value in six.iteritems(dict(values)):
            self[key] = value

    def __getattr__(self, attr):
        try:
            return self[attr]
        except KeyError:
            raise AttributeError("`{0}` instance has no attribute `{1}`".format(
                self.__class__.__name__, attr))

    @property
    def fit_window(self):
        return (self.fit_p_hi, self.fit_p_lo)

    def step_control(self):
        return StepControl(
            eps=self.eps, h_init=self.h_init, h_min=self.h_min, h_max=self.h_max,
            t_max=self.t_max, n_step_max=self.n_step_max, safety=self.safety,
            trace_max_points=self.trace_max_points)

    def solve_config(self):
        return SolveConfig(
            control=self.step_control(), num_parallel_starts=self.starts,
            max_restarts_on_overflow=self.max_restarts, seed=self.seed,
            oracle_budget=self.oracle_budget, log_a_cap=self.log_a_cap)

    def to_manifest(self):
        return OrderedDict((k, v) for k, v in six.iteritems(self)
                           if k not in VOLATILE_KEYS)


def parse_config(text):
    """
    Parse ``key = value`` lines; ``#`` starts a comment. Returns an ordered
    mapping of the raw values in file order.
    """
    values = OrderedDict()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        match = re.match(LINE_PATTERN, line)
        if not match:
            raise TypeMismatch("config line {0:d} is not `key = value`: {1!r}".format(
                lineno, line))
        key = match.group('key').replace('-', '_')
        if key not in KEYS:
            raise UnknownKey(
                "unknown config key `{0}` (line {1:d})".format(key, lineno))
        values[key] = match.group('value')
    return values


def load_config(path=None, overrides=None):
    """
    Resolve the run configuration.

    Parameters
    ----------
    path : string, optional
        A key=value file. Missing keys keep their defaults.

    overrides : dict, optional
        Command-line values; entries that are None are treated as unset.

    Returns
    -------
    config : CliConfig
    """
    config = CliConfig()
    if path is not None:
        with sat_open(path) as f:
            config.update(parse_config(f.read()))
    if overrides:
        config.update(dict((k, v) for k, v in six.iteritems(overrides)
                           if v is not None))
    return config
