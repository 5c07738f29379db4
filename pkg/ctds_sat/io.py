"""This module provides every file format used by ctds_sat."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import csv
import io
import json
import math
import os

import numpy as np
import six

from .defaults import log
from .formula import (
    Clause, CnfFormula, ClauseCountMismatch, FormulaError, MalformedHeader,
    VariableOutOfRange)


class DoesNotExist(Exception):
    """
    This exception is raised if an attempt is made to read an input file
    that does not exist.
    """
    pass


def _expand_path(s):
    return os.path.expanduser(os.path.expandvars(s))


def sat_open(filename, mode='r'):
    """
    Open a text file after expanding ``~`` and environment variables.

    Parameters
    ----------
    filename : string
        The absolute or relative path to the file.

    mode : string, optional (default='r')
        Same meaning as for the built-in ``open()`` function.

    Returns
    -------
    stream : file object
    """
    filename = _expand_path(filename)
    if 'r' in mode and not os.path.exists(filename):
        raise DoesNotExist("could not open file: '{0}'".format(filename))
    log.debug("Opening file '{0}' ({1})".format(filename, mode))
    if 'w' in mode or 'a' in mode:
        dirname = os.path.dirname(filename)
        if dirname and not os.path.isdir(dirname):
            os.makedirs(dirname)
    if 'b' in mode:
        return io.open(filename, mode)
    return io.open(filename, mode, encoding='utf-8', errors='replace', newline='')


def _as_text(text):
    if hasattr(text, 'read'):
        text = text.read()
    if isinstance(text, six.binary_type):
        # comments may carry any encoding; undecodable bytes become U+FFFD
        text = text.decode('utf-8', 'replace')
    return text


def _check_ascii(line, lineno):
    try:
        line.encode('ascii')
    except UnicodeError:
        raise FormulaError(
            "non-ASCII characters on line {0:d}: `{1}`".format(lineno, line))


# DIMACS CNF ===================================================================

def parse_dimacs(text):
    """
    Parse a DIMACS CNF document.

    Parameters
    ----------
    text : str, bytes or readable stream
        Optional ``c`` comment lines, one ``p cnf N M`` header and M
        zero-terminated clauses. A ``%`` line ends the clause data.

    Returns
    -------
    formula : CnfFormula
    """
    text = _as_text(text)
    num_vars = num_clauses = None
    clauses = []
    current = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith('c'):
            continue
        if line.startswith('%'):
            break
        _check_ascii(line, lineno)
        if line.startswith('p'):
            tokens = line.split()
            if num_vars is not None:
                raise MalformedHeader(
                    "second header on line {0:d}".format(lineno))
            if len(tokens) != 4 or tokens[0] != 'p' or tokens[1] != 'cnf':
                raise MalformedHeader(
                    "garbled header on line {0:d}: `{1}`".format(lineno, line))
            try:
                num_vars, num_clauses = int(tokens[2]), int(tokens[3])
            except ValueError:
                raise MalformedHeader(
                    "garbled header on line {0:d}: `{1}`".format(lineno, line))
            if num_vars < 1 or num_clauses < 1:
                raise MalformedHeader(
                    "header declares N={0:d}, M={1:d}".format(num_vars, num_clauses))
            continue
        if num_vars is None:
            raise MalformedHeader(
                "clause data before `p cnf` header on line {0:d}".format(lineno))
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise FormulaError(
                    "bad literal `{0}` on line {1:d}".format(token, lineno))
            if lit == 0:
                clauses.append(Clause.from_dimacs(current))
                current = []
            elif abs(lit) > num_vars:
                raise VariableOutOfRange(
                    "literal {0:d} on line {1:d} exceeds N={2:d}".format(
                        lit, lineno, num_vars))
            else:
                current.append(lit)
    if num_vars is None:
        raise MalformedHeader("missing `p cnf` header")
    if current:
        raise ClauseCountMismatch("last clause is not 0-terminated")
    if len(clauses) != num_clauses:
        raise ClauseCountMismatch(
            "header declares {0:d} clauses, found {1:d}".format(
                num_clauses, len(clauses)))
    return CnfFormula(num_vars, clauses)


def write_dimacs(formula, stream=None):
    """
    Emit canonical DIMACS: header, then one clause per line, no comments.
    Returns the text; also writes it to ``stream`` if given.
    """
    lines = ['p cnf {0:d} {1:d}'.format(formula.num_vars, formula.num_clauses)]
    for clause in formula:
        lines.append(' '.join(str(lit) for lit in clause.to_dimacs() + [0]))
    text = '\n'.join(lines) + '\n'
    if stream is not None:
        stream.write(text)
    return text


def read_dimacs(filename):
    with sat_open(filename) as f:
        return parse_dimacs(f.read())


# XOR instances ================================================================

def parse_xor(text):
    """
    Parse ``p xor N M`` followed by M lines ``i j k : y`` (1-based variables).
    """
    from .generators import XorInstance

    text = _as_text(text)
    num_vars = num_checks = None
    checks = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith('c'):
            continue
        _check_ascii(line, lineno)
        if line.startswith('p'):
            tokens = line.split()
            if len(tokens) != 4 or tokens[1] != 'xor' or num_vars is not None:
                raise MalformedHeader(
                    "garbled header on line {0:d}: `{1}`".format(lineno, line))
            try:
                num_vars, num_checks = int(tokens[2]), int(tokens[3])
            except ValueError:
                raise MalformedHeader(
                    "garbled header on line {0:d}: `{1}`".format(lineno, line))
            continue
        if num_vars is None:
            raise MalformedHeader("check before `p xor` header")
        if ':' not in line:
            raise FormulaError(
                "missing parity on line {0:d}: `{1}`".format(lineno, line))
        lhs, rhs = line.split(':', 1)
        try:
            variables = tuple(int(tok) - 1 for tok in lhs.split())
            parity = int(rhs)
        except ValueError:
            raise FormulaError("bad check on line {0:d}: `{1}`".format(lineno, line))
        for v in variables:
            if v < 0 or v >= num_vars:
                raise VariableOutOfRange(
                    "variable {0:d} on line {1:d} exceeds N={2:d}".format(
                        v + 1, lineno, num_vars))
        checks.append((variables, parity))
    if num_vars is None:
        raise MalformedHeader("missing `p xor` header")
    if len(checks) != num_checks:
        raise ClauseCountMismatch(
            "header declares {0:d} checks, found {1:d}".format(num_checks, len(checks)))
    return XorInstance(num_vars, checks)


def read_xor(filename):
    with sat_open(filename) as f:
        return parse_xor(f.read())


def write_xor(instance, stream=None):
    lines = ['p xor {0:d} {1:d}'.format(instance.num_vars, len(instance.checks))]
    for variables, parity in instance.checks:
        lines.append('{0} : {1:d}'.format(
            ' '.join(str(v + 1) for v in variables), parity))
    text = '\n'.join(lines) + '\n'
    if stream is not None:
        stream.write(text)
    return text


def read_instance(filename):
    """
    Read a DIMACS CNF or xor file, decided by its header.
    """
    with sat_open(filename) as f:
        text = f.read()
    for line in text.splitlines():
        tokens = line.split()
        if tokens and tokens[0] == 'p':
            if len(tokens) > 1 and tokens[1] == 'xor':
                return parse_xor(text)
            break
    return parse_dimacs(text)


# JSON lines ===================================================================

def write_jsonl(objects, stream):
    n = 0
    for obj in objects:
        stream.write(json.dumps(obj, sort_keys=True) + '\n')
        n += 1
    return n


def read_jsonl(stream):
    objects = []
    for lineno, line in enumerate(_as_text(stream).splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            objects.append(json.loads(line))
        except ValueError:
            raise FormulaError("line {0:d} is not JSON".format(lineno))
    return objects


def write_json(obj, stream):
    stream.write(json.dumps(obj, sort_keys=True, indent=2) + '\n')


# CSV ==========================================================================

def write_csv(columns, stream):
    """
    Write an ordered mapping of equal-length columns with a header row.
    """
    names = list(columns.keys())
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(names)
    arrays = [columns[name] for name in names]
    length = len(arrays[0]) if arrays else 0
    for row in six.moves.range(length):
        writer.writerow([_format_value(a[row]) for a in arrays])


def write_trace_csv(series, stream):
    """
    Write trajectory diagnostics (t, E, V, speed, accel, s_i..., a_m...).
    """
    for name in ('t', 'E', 'V', 'speed', 'accel'):
        if name not in series:
            raise KeyError("trace series has no `{0}` column".format(name))
    write_csv(series, stream)


def _format_value(value):
    if value is None:
        return ''
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return ''
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def write_map_csv(plane, values, stream, name='value'):
    """
    Write a W x H map row-major, one line per cell with its plane coordinates.
    """
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(['row', 'col', 's_{0:d}'.format(plane.var_i + 1),
                     's_{0:d}'.format(plane.var_j + 1), name])
    xs, ys = plane.coordinates()
    height, width = values.shape
    for r in six.moves.range(height):
        for c in six.moves.range(width):
            writer.writerow([r, c, repr(float(xs[c])), repr(float(ys[r])),
                             _format_value(values[r, c])])


# Pixmaps ======================================================================

UNRESOLVED_RGB = (0, 0, 0)
MISSING_RGB = (255, 255, 255)


def palette(label):
    """
    Deterministic label -> RGB: Knuth multiplicative hash of the label id,
    ``((label + 1) * 2654435761) mod 2**24`` split into red, green and blue bytes.
    Negative labels (Unresolved) are black.
    """
    label = int(label)
    if label < 0:
        return UNRESOLVED_RGB
    h = ((label + 1) * 2654435761) & 0xFFFFFF
    return ((h >> 16) & 0xFF, (h >> 8) & 0xFF, h & 0xFF)


def ramp(fraction):
    """Blue (0) to yellow (1)"""
    fraction = min(max(fraction, 0.0), 1.0)
    level = int(round(255 * fraction))
    return (level, level, 255 - level)


def label_pixels(labels):
    height, width = labels.shape
    return [[palette(labels[r, c]) for c in six.moves.range(width)]
            for r in six.moves.range(height)]


def ramp_pixels(values, log_scale=False):
    """
    Map finite values onto the blue-yellow ramp (log10 if ``log_scale``);
    non-finite cells are white.
    """
    values = np.asarray(values, dtype=np.float64)
    finite = np.isfinite(values)
    if log_scale:
        finite &= values > 0
    scaled = np.full(values.shape, np.nan)
    if log_scale:
        scaled[finite] = np.log10(values[finite])
    else:
        scaled[finite] = values[finite]
    if finite.any():
        lo, hi = scaled[finite].min(), scaled[finite].max()
    else:
        lo = hi = 0.0
    span = hi - lo if hi > lo else 1.0
    height, width = values.shape
    pixels = []
    for r in six.moves.range(height):
        row = []
        for c in six.moves.range(width):
            if finite[r, c]:
                row.append(ramp((scaled[r, c] - lo) / span))
            else:
                row.append(MISSING_RGB)
        pixels.append(row)
    return pixels


def write_ppm(pixels, stream):
    """
    Write rows of RGB triples as a plain (P3) portable pixmap.
    """
    height = len(pixels)
    width = len(pixels[0]) if height else 0
    stream.write('P3\n{0:d} {1:d}\n255\n'.format(width, height))
    for row in pixels:
        stream.write(' '.join('{0:d} {1:d} {2:d}'.format(*rgb) for rgb in row))
        stream.write('\n')
