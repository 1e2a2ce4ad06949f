"""
Plain-text files for covariance matrices and Gaussian mixtures.

A covariance file starts with ``n_modes <k>`` followed by the 2k rows of the
matrix and, optionally, one line with the mean vector. A mixture file starts
with ``branches <k> modes <n>``; every branch is then a weight line, a mean
line and 2n covariance rows. Values are whitespace separated; blank lines and
``#`` comments are ignored. Numbers are written with 17 significant digits so
that reading a written file recovers the same floats.

"""
import io

import numpy as np

from . import symplectic as sp
from .mixture import GaussianMixture

FLOAT_FORMAT = '%.17g'


def _rows(f):
    for lineno, raw in enumerate(f, start=1):
        line = raw.split('#', 1)[0].split()
        if line:
            yield lineno, line


def _floats(fields, lineno, count=None):
    try:
        values = [float(v) for v in fields]
    except ValueError:
        raise ValueError("line {}: expected numbers, got "
                         "'{}'".format(lineno, ' '.join(fields)))
    if count is not None and len(values) != count:
        raise ValueError("line {}: expected {} values, got "
                         "{}".format(lineno, count, len(values)))
    return values


def _header(rows, keys):
    try:
        lineno, fields = next(rows)
    except StopIteration:
        raise ValueError("empty file")
    if len(fields) != 2 * len(keys) or fields[::2] != list(keys):
        raise ValueError("line {}: expected header '{}'".format(
            lineno, ' '.join('{} <int>'.format(k) for k in keys)))
    try:
        values = [int(v) for v in fields[1::2]]
    except ValueError:
        raise ValueError("line {}: header counts must be integers".format(
            lineno))
    if any(v < 1 for v in values):
        raise ValueError("line {}: header counts must be positive".format(
            lineno))
    return values


def _take(rows, n, what):
    out = []
    for _ in range(n):
        try:
            out.append(next(rows))
        except StopIteration:
            raise ValueError("file ended while reading {}".format(what))
    return out


def _matrix(rows, dim):
    return np.array([_floats(fields, lineno, dim)
                     for lineno, fields in _take(rows, dim, 'a covariance '
                                                 'matrix')])


def _format_row(values):
    return ' '.join(FLOAT_FORMAT % v for v in values)


def _lines(path):
    with io.open(path, 'r', encoding='utf-8') as f:
        return f.readlines()


def read_state(path):
    """Read a covariance file; the mean defaults to zero."""
    rows = _rows(_lines(path))
    n_modes, = _header(rows, ('n_modes',))
    dim = 2 * n_modes
    cov = _matrix(rows, dim)
    rest = list(rows)
    if len(rest) > 1:
        raise ValueError("line {}: unexpected data after the "
                         "mean".format(rest[1][0]))
    mean = np.zeros(dim)
    if rest:
        lineno, fields = rest[0]
        mean = np.array(_floats(fields, lineno, dim))
    return sp.GaussianState(mean, cov)


def write_state(path, state):
    lines = ['n_modes {}'.format(state.n_modes)]
    lines += [_format_row(row) for row in state.cov]
    lines.append(_format_row(state.mean))
    with io.open(path, 'w', encoding='utf-8') as f:
        f.write(u'\n'.join(lines) + u'\n')


def read_mixture(path):
    """Read a mixture file into a normalized or subnormalized mixture."""
    rows = _rows(_lines(path))
    n_branches, n_modes = _header(rows, ('branches', 'modes'))
    dim = 2 * n_modes
    branches = []
    for _ in range(n_branches):
        (wline, wfields), (mline, mfields) = _take(rows, 2, 'a branch')
        weight, = _floats(wfields, wline, 1)
        mean = np.array(_floats(mfields, mline, dim))
        branches.append((weight, sp.GaussianState(mean, _matrix(rows, dim))))
    for lineno, _ in rows:
        raise ValueError("line {}: unexpected data after the last "
                         "branch".format(lineno))
    total = sum(w for w, _ in branches)
    return GaussianMixture(branches, normalized=abs(total - 1) <= 1e-9)


def write_mixture(path, m):
    lines = ['branches {} modes {}'.format(len(m), m.n_modes)]
    for weight, state in m:
        lines.append(FLOAT_FORMAT % weight)
        lines.append(_format_row(state.mean))
        lines += [_format_row(row) for row in state.cov]
    with io.open(path, 'w', encoding='utf-8') as f:
        f.write(u'\n'.join(lines) + u'\n')


def read_input(path):
    """Read either file kind, telling them apart by the header."""
    for _, fields in _rows(_lines(path)):
        if fields[0] == 'branches':
            return read_mixture(path)
        return read_state(path)
    raise ValueError("empty file")
