"""This module provides the default configurations."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import os
from collections import namedtuple

import numpy as np

from .logger import log

# Integration
EPS = 1e-3
H_INIT = 1e-2
H_MIN = 1e-10
H_MAX = 1.0
T_MAX = 1e4
N_STEP_MAX = 10 ** 7
SAFETY = 0.9
LOG_A_CAP = 600.0
TRACE_MAX_POINTS = 10 ** 5

# Analysis
FIT_WINDOW = (0.5, 0.02)
FSLE_EPS0 = 1e-6
FSLE_RATIO = 30.0
FSLE_DIRECTIONS = 50
FSLE_HORIZON = 25.0
FSLE_SAMPLE_DT = 0.05
ENUMERATION_MAX_VARS = 26
UNRESOLVED_THRESHOLD = 0.05
DPLL_BUDGET = 10 ** 6

# Reproducibility
RNG_ALGORITHM = 'PCG64'
SCHEMA_VERSION = 1

SLOW_ENV = 'CTDS_SAT_SLOW'


class NumpyVersion(namedtuple('_NumpyVersionBase',
                              ['major', 'minor', 'micro'])):

    def __new__(cls, version):
        parts = []
        for token in version.split('.')[:3]:
            digits = ''.join(c for c in token if c.isdigit())
            parts.append(int(digits) if digits else 0)
        while len(parts) < 3:
            parts.append(0)
        return super(NumpyVersion, cls).__new__(cls, *parts)

    def __repr__(self):
        return str(self)

    def __str__(self):
        return '{0:d}.{1:d}.{2:d}'.format(*self)


NUMPY_VERSION = NumpyVersion(np.__version__)


def configure_defaults():
    """
    This function is executed immediately when the package is imported
    """
    if NUMPY_VERSION < (1, 17, 0) or not hasattr(np.random, RNG_ALGORITHM):
        raise ImportError(
            "numpy {0} does not provide the {1} bit generator".format(
                NUMPY_VERSION, RNG_ALGORITHM))
    log.debug("numpy {0} with {1} substreams".format(NUMPY_VERSION, RNG_ALGORITHM))


configure_defaults()


def slow_tests_enabled():
    return bool(os.environ.get(SLOW_ENV, False))


class SatError(RuntimeError):
    """
    Exception class from which every ctds_sat error derives.
    """
    pass
