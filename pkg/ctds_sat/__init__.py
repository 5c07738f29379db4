from .defaults import NUMPY_VERSION, SatError
from .dpll import count_models, dpll_solve, enumerate_models
from .dynamics import ContinuousState, DynamicsParams, rhs
from .formula import Assignment, Clause, CnfFormula, Literal, evaluate
from .generators import (
    EnsembleSpec, encode_xorsat_cnf, gen_lop_1in3, gen_random_ksat, gen_xorsat,
    leaf_removal_core)
from .integrator import CashKarpIntegrator, StepControl, integrate
from .io import read_dimacs, read_instance, sat_open, write_dimacs
from .logger import get_logger
from .solver import BatchSpec, SolveConfig, SolveRecord, run_batch, solve
from .version import __version__


__all__ = [
    'NUMPY_VERSION',
    'SatError',
    'Assignment',
    'BatchSpec',
    'CashKarpIntegrator',
    'Clause',
    'CnfFormula',
    'ContinuousState',
    'DynamicsParams',
    'EnsembleSpec',
    'Literal',
    'SolveConfig',
    'SolveRecord',
    'StepControl',
    'count_models',
    'dpll_solve',
    'encode_xorsat_cnf',
    'enumerate_models',
    'evaluate',
    'gen_lop_1in3',
    'gen_random_ksat',
    'gen_xorsat',
    'get_logger',
    'integrate',
    'leaf_removal_core',
    'read_dimacs',
    'read_instance',
    'rhs',
    'run_batch',
    'sat_open',
    'solve',
    'write_dimacs',
]
