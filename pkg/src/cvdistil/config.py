"""
Experiment configuration files.

A configuration is flat ``key = value`` text. ``#`` starts a comment. Values
are numbers, bare words, lists ``[a, b, c]`` or linear ranges
``(start, stop, count)``::

    # multi-copy squeezing distillation
    protocol = multicopy_squeeze
    r = 0.7
    p = 0.5
    d_over_sigma = (0, 30, 61)
    N_list = [2, 3, 4, 5]

"""
import io
import logging

import numpy as np

from . import names

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Invalid configuration, with the offending key and line if known."""

    def __init__(self, message, key=None, lineno=None):
        self.key = key
        self.lineno = lineno
        self.message = message
        prefix = ''
        if lineno is not None:
            prefix += 'line {}: '.format(lineno)
        if key is not None:
            prefix += "'{}': ".format(key)
        super(ConfigError, self).__init__(prefix + message)


ALIASES = {'t_list': 'transmissivity_list'}

DEFAULTS = {
    'N_list': [],
    'transmissivity_list': [],
    'delta_prime': None,
    'grid_points': names.DEFAULT_GRID_POINTS,
    'prune_tol': names.DEFAULT_PRUNE_TOL,
    'output': None,
}

REQUIRED = ('protocol', 'r', 'p', 'd_over_sigma')

HELP = {
    'protocol': "one of {}".format(', '.join(names.PROTOCOLS)),
    'r': "squeezing parameter, r > 0",
    'p': "displacement probability in [0, 1]",
    'd_over_sigma': "displacements in units of exp(-2r); list or range",
    'N_list': "copy counts for multi-copy protocols, each >= 2",
    'transmissivity_list': "beam splitter transmissivities for the "
                           "one-shot protocol (alias t_list)",
    'delta_prime': "acceptance half-width; number or one per iteration "
                   "(default exp(-r))",
    'grid_points': "Gauss-Legendre nodes per branch (default {}, at least "
                   "{})".format(names.DEFAULT_GRID_POINTS,
                                names.MIN_GRID_POINTS),
    'prune_tol': "relative branch-weight pruning threshold "
                 "(default {:g})".format(names.DEFAULT_PRUNE_TOL),
    'output': "CSV output path (default: standard output)",
}
"""One-line descriptions of every key, shown by ``cvdistil simulate -h``."""


def _number(text, key, lineno):
    try:
        value = float(text)
    except ValueError:
        raise ConfigError("'{}' is not a number".format(text), key, lineno)
    if not np.isfinite(value):
        raise ConfigError("value must be finite", key, lineno)
    return value


def _items(text):
    return [item.strip() for item in text.split(',') if item.strip()]


def parse_value(text, key=None, lineno=None):
    """Parse the right-hand side of one ``key = value`` line."""
    text = text.strip()
    if text.startswith('['):
        if not text.endswith(']'):
            raise ConfigError("unterminated list", key, lineno)
        return [_number(item, key, lineno) for item in _items(text[1:-1])]
    if text.startswith('('):
        if not text.endswith(')'):
            raise ConfigError("unterminated range", key, lineno)
        parts = _items(text[1:-1])
        if len(parts) != 3:
            raise ConfigError("range needs (start, stop, count)", key, lineno)
        start, stop, count = [_number(item, key, lineno) for item in parts]
        if count < 1 or count != int(count):
            raise ConfigError("range count must be a positive integer",
                              key, lineno)
        return list(np.linspace(start, stop, int(count)))
    if not text:
        raise ConfigError("missing value", key, lineno)
    try:
        return _number(text, key, lineno)
    except ConfigError:
        return text


class ExperimentConfig(object):
    """Validated parameters of one sweep.

    Parameters
    ----------
    protocol : str
        One of :data:`cvdistil.names.PROTOCOLS`.
    r, p : float
        Squeezing parameter and displacement probability.
    d_over_sigma : list of float
        Sweep abscissa.
    N_list : list of int
        Copy counts; used by the multi-copy protocols.
    transmissivity_list : list of float
        Transmissivities; used by the one-shot protocol.
    delta_prime : float or list of float, optional
        Acceptance half-width override.
    grid_points : int
        Gauss-Legendre nodes per branch.
    prune_tol : float
        Relative pruning threshold.
    output : str, optional
        CSV output path.
    """

    def __init__(self, protocol, r, p, d_over_sigma, N_list=None,
                 transmissivity_list=None, delta_prime=None,
                 grid_points=names.DEFAULT_GRID_POINTS,
                 prune_tol=names.DEFAULT_PRUNE_TOL, output=None, lines=None):
        self.protocol = protocol
        self.r = r
        self.p = p
        self.d_over_sigma = list(np.atleast_1d(d_over_sigma))
        self.N_list = list(N_list or [])
        self.transmissivity_list = list(transmissivity_list or [])
        self.delta_prime = delta_prime
        self.grid_points = grid_points
        self.prune_tol = prune_tol
        self.output = output
        self._lines = dict(lines or {})
        self.validate()

    def __repr__(self):
        return "<ExperimentConfig({}, {} points)>".format(self.protocol,
                                                          self.n_points)

    def _fail(self, key, message):
        raise ConfigError(message, key, self._lines.get(key))

    def validate(self):
        """Check ranges and normalize types; raises :exc:`ConfigError`."""
        if self.protocol not in names.PROTOCOLS:
            self._fail('protocol', "unknown protocol '{}'; expected one of "
                       "{}".format(self.protocol, ', '.join(names.PROTOCOLS)))
        for key in ('r', 'p', 'prune_tol', 'grid_points'):
            if not isinstance(getattr(self, key), (int, float)):
                self._fail(key, "must be a number")
        self.r = float(self.r)
        self.p = float(self.p)
        if not self.r > 0:
            self._fail('r', "must be positive")
        if not 0 <= self.p <= 1:
            self._fail('p', "must lie in [0, 1]")

        if not self.d_over_sigma:
            self._fail('d_over_sigma', "must not be empty")
        self.d_over_sigma = [float(v) for v in self.d_over_sigma]

        if self.grid_points != int(self.grid_points) or \
                self.grid_points < names.MIN_GRID_POINTS:
            self._fail('grid_points', "must be an integer >= {}".format(
                names.MIN_GRID_POINTS))
        self.grid_points = int(self.grid_points)
        if self.prune_tol < 0:
            self._fail('prune_tol', "must be non-negative")
        self.prune_tol = float(self.prune_tol)

        if self.delta_prime is not None:
            values = np.atleast_1d(self.delta_prime)
            if values.dtype.kind not in 'fi' or not len(values) or \
                    np.any(values <= 0):
                self._fail('delta_prime', "must be positive")

        if self.protocol == 'one_shot_squeeze':
            if not self.transmissivity_list:
                self._fail('transmissivity_list', "must not be empty")
            if any(not 0 < t < 1 for t in self.transmissivity_list):
                self._fail('transmissivity_list',
                           "transmissivities must lie in (0, 1)")
            self.transmissivity_list = [float(t)
                                        for t in self.transmissivity_list]
        else:
            if not self.N_list:
                self._fail('N_list', "must not be empty")
            if any(n != int(n) or n < 2 for n in self.N_list):
                self._fail('N_list', "copy counts must be integers >= 2")
            self.N_list = [int(n) for n in self.N_list]
            if isinstance(self.delta_prime, list) and \
                    len(self.delta_prime) < max(self.N_list) - 1:
                self._fail('delta_prime', "need one threshold per iteration, "
                           "{} in total".format(max(self.N_list) - 1))

    @property
    def settings(self):
        """Transmissivities or copy counts, depending on the protocol."""
        if self.protocol == 'one_shot_squeeze':
            return self.transmissivity_list
        return self.N_list

    @property
    def n_points(self):
        return len(self.settings) * len(self.d_over_sigma)

    @property
    def effective_delta_prime(self):
        if self.delta_prime is None:
            return float(np.exp(-self.r))
        return self.delta_prime

    def to_dict(self):
        """Plain-JSON representation, as stored with a run."""
        return {'protocol': self.protocol,
                'r': self.r,
                'p': self.p,
                'd_over_sigma': list(self.d_over_sigma),
                'N_list': list(self.N_list),
                'transmissivity_list': list(self.transmissivity_list),
                'delta_prime': self.delta_prime,
                'grid_points': self.grid_points,
                'prune_tol': self.prune_tol,
                'output': self.output}

    @classmethod
    def from_dict(cls, state):
        return cls(**state)


def parse_lines(lines):
    """Build an :class:`ExperimentConfig` from an iterable of text lines."""
    values = {}
    where = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError("expected 'key = value'", lineno=lineno)
        key, text = line.split('=', 1)
        key = key.strip()
        key = ALIASES.get(key, key)
        if key not in HELP:
            raise ConfigError("unknown key", key, lineno)
        if key in values:
            raise ConfigError("duplicate key (first set on line "
                              "{})".format(where[key]), key, lineno)
        values[key] = parse_value(text, key, lineno)
        where[key] = lineno

    for key in REQUIRED:
        if key not in values:
            raise ConfigError("missing required key", key)

    for key in ('d_over_sigma', 'N_list', 'transmissivity_list'):
        if key in values and not isinstance(values[key], list):
            values[key] = [values[key]]
    if isinstance(values.get('output'), float):
        raise ConfigError("must be a path", 'output', where['output'])

    kwargs = dict(DEFAULTS)
    kwargs.update(values)
    return ExperimentConfig(lines=where, **kwargs)


def parse_config(path):
    """Read and validate the configuration file at `path`."""
    try:
        with io.open(path, 'r', encoding='utf-8') as f:
            lines = f.readlines()
    except (IOError, OSError) as e:
        raise ConfigError("cannot read '{}': {}".format(path, e))
    config = parse_lines(lines)
    logger.debug("parsed %s: %r", path, config)
    return config
