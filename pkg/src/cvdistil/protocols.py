"""
Squeezing and entanglement distillation protocols built on
:mod:`cvdistil.mixture`.

Every protocol starts from a noisy input: a squeezed state (single-mode or
two-mode) that receives, with probability `p`, a displacement `d` along x.
The abscissa reported for all sweeps is ``d / sigma`` with
``sigma = exp(-2 r)`` the x-variance of the squeezed state.

"""
import logging
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pandas as pd

from . import names
from . import symplectic as sp
from . import mixture as mx

from .monotones import kappa

logger = logging.getLogger(__name__)


class EngineError(RuntimeError):
    """A protocol failed at a sweep point."""


class SqueezeNoiseModel(object):
    """Single-mode squeezed vacuum displaced by `d` with probability `p`.

    Parameters
    ----------
    r : float
        Squeezing parameter; x is squeezed for r > 0.
    p : float
        Displacement probability in [0, 1].
    d : float
        Displacement along x.
    """
    n_modes = 1

    def __init__(self, r, p, d):
        if not np.isfinite(r) or r < 0:
            raise ValueError("Squeezing parameter must be finite and "
                             "non-negative, not {!r}".format(r))
        if not 0 <= p <= 1:
            raise ValueError("Displacement probability must lie in [0, 1], "
                             "not {!r}".format(p))
        if not np.isfinite(d):
            raise ValueError("Displacement must be finite")
        self.r = float(r)
        self.p = float(p)
        self.d = float(d)

    @classmethod
    def from_ratio(cls, r, p, d_over_sigma):
        return cls(r, p, d_over_sigma * np.exp(-2 * r))

    def __repr__(self):
        return "<{}(r={}, p={}, d={})>".format(type(self).__name__,
                                               self.r, self.p, self.d)

    @property
    def sigma(self):
        return np.exp(-2 * self.r)

    @property
    def d_over_sigma(self):
        return self.d / self.sigma

    def target(self):
        return sp.squeezed_state(self.r)

    def displaced(self, state):
        return sp.apply(sp.displacement([self.d, 0.0], mode=0,
                                        n_modes=state.n_modes), state)

    def input_mixture(self):
        """``(1 - p) |target> + p D(d) |target>`` as a mixture."""
        target = self.target()
        branches = [(1 - self.p, target), (self.p, self.displaced(target))]
        return mx.GaussianMixture([(w, s) for w, s in branches if w > 0])

    def target_functional(self):
        """Quadrature whose variance is reported: x."""
        return np.array([1.0, 0.0])


class EntNoiseModel(SqueezeNoiseModel):
    """Two-mode squeezed vacuum whose first mode (Bob's) is displaced along
    x by `d` with probability `p`."""
    n_modes = 2

    def target(self):
        return sp.tmsv(self.r)

    def target_functional(self):
        """Quadrature whose variance is reported: ``(x_1 + x_2)/sqrt(2)``."""
        return np.array([1.0, 0.0, 1.0, 0.0]) / np.sqrt(2)


class IterationRecord(object):
    """Outcome of one protocol iteration."""

    def __init__(self, index, mixture, success_prob, step_prob, fidelity,
                 variance):
        self.index = index
        self.mixture = mixture
        self.success_prob = success_prob
        self.step_prob = step_prob
        self.fidelity = fidelity
        self.variance = variance

    def __repr__(self):
        return ("<IterationRecord({}: fidelity={:.6g}, variance={:.6g}, "
                "success={:.6g})>".format(self.index, self.fidelity,
                                          self.variance, self.success_prob))


class ProtocolResult(object):
    """Per-iteration outputs of a protocol run plus a summary row.

    Parameters
    ----------
    protocol : str
        Protocol name.
    model : SqueezeNoiseModel
        Noise model the run started from.
    t : float
        Beam splitter transmissivity used.
    copies : int
        Number of copies of the noisy input consumed.
    iterations : list of IterationRecord
        In order; cumulative success probability is non-increasing.
    """

    def __init__(self, protocol, model, t, copies, iterations):
        self.protocol = protocol
        self.model = model
        self.t = t
        self.copies = copies
        self.iterations = list(iterations)

        rho = model.input_mixture()
        self.input_fidelity = mx.fidelity_to_pure(rho, model.target())
        self.input_variance = mx.quadrature_variance(
            rho, model.target_functional())

    def __repr__(self):
        return "<ProtocolResult({}, N={}, d/sigma={:.6g})>".format(
            self.protocol, self.copies, self.model.d_over_sigma)

    @property
    def final(self):
        return self.iterations[-1]

    @property
    def mixture(self):
        return self.final.mixture

    @property
    def fidelity(self):
        return self.final.fidelity

    @property
    def variance(self):
        return self.final.variance

    @property
    def success_prob(self):
        return self.final.success_prob

    def summary_row(self):
        return {'protocol': self.protocol,
                'r': self.model.r,
                'p': self.model.p,
                't': self.t,
                'N': self.copies,
                'd_over_sigma': self.model.d_over_sigma,
                'fidelity': self.fidelity,
                'x_variance': self.variance,
                'success_prob': self.success_prob}


def _record(index, m, model, success, step):
    return IterationRecord(
        index, m, success, step,
        mx.fidelity_to_pure(m, model.target()),
        mx.quadrature_variance(m, model.target_functional()))


def max_branch_kappa(m, spec=None):
    """Largest ``kappa`` over the branches of a mixture."""
    return max(kappa(s.cov, spec).value for s in m.states)


def one_shot_squeeze(model, theta, grid=None,
                     prune_tol=names.DEFAULT_PRUNE_TOL):
    """Deterministic one-shot squeezing distillation.

    The noisy state is mixed with a vacuum pointer on a beam splitter of
    transmissivity ``cos(theta)**2``. The pointer's x outcome is compared with
    ``-(d/2) sin(theta)``: at or below it the system is displaced back by
    ``-d cos(theta)``, above it the system is left alone. Both outcome
    regions are kept, so the protocol always succeeds.
    """
    t = np.cos(theta) ** 2
    if not 1e-15 < t < 1 - 1e-15:
        raise ValueError("Beam splitter angle must give a transmissivity "
                         "strictly between 0 and 1")
    if not isinstance(model, SqueezeNoiseModel) or model.n_modes != 1:
        raise TypeError("one_shot_squeeze needs a SqueezeNoiseModel")

    joint = mx.append_vacuum_mix(model.input_mixture())
    joint = mx.apply_op(sp.beam_splitter(theta, 0, 1), joint)

    threshold = -0.5 * model.d * np.sin(theta)
    spec = mx.HomodyneSpec.x(1, 2, (-np.inf, threshold))
    (low, p_low), (high, p_high) = mx.condition_regions(
        joint, spec, [threshold], grid=grid)
    logger.debug("one_shot_squeeze: threshold %.6g, P(low)=%.6g, "
                 "P(high)=%.6g", threshold, p_low, p_high)

    parts = []
    if low is not None:
        correction = sp.displacement([-model.d * np.cos(theta), 0.0])
        parts.append(mx.apply_op(correction, low))
    if high is not None:
        parts.append(high)
    out = parts[0]
    for part in parts[1:]:
        out = mx.merge(out, part)
    out = mx.prune(mx.renormalize_mix(out), prune_tol)

    return ProtocolResult('one_shot_squeeze', model, t, 1,
                          [_record(1, out, model, 1.0, 1.0)])


def _thresholds(delta_prime, r, iterations):
    if delta_prime is None:
        delta_prime = np.exp(-r)
    values = np.atleast_1d(np.asarray(delta_prime, dtype=float))
    if values.size == 1:
        values = np.repeat(values, iterations)
    if values.size < iterations:
        raise ValueError("Need {} acceptance thresholds, got "
                         "{}".format(iterations, values.size))
    if np.any(values <= 0):
        raise ValueError("Acceptance thresholds must be positive")
    return values[:iterations]


def _multicopy(protocol, model, copies, delta_prime, grid, prune_tol,
               combine, spec_for):
    copies = int(copies)
    if copies < 2:
        raise ValueError("Multi-copy protocols need at least 2 copies, "
                         "not {}".format(copies))
    thresholds = _thresholds(delta_prime, model.r, copies - 1)

    rho = model.input_mixture()
    system = rho
    success = 1.0
    records = []
    for k, delta in enumerate(thresholds, start=1):
        joint = combine(mx.tensor_mix(system, rho))
        kept, step = mx.homodyne_condition(joint, spec_for(delta), grid=grid,
                                           path='exact')
        success *= step
        system = mx.prune(mx.renormalize_mix(kept), prune_tol)
        records.append(_record(k, system, model, success, step))
        logger.debug("%s: iteration %d, %d branches, step %.6g, "
                     "cumulative %.6g", protocol, k, len(system), step,
                     success)

    return ProtocolResult(protocol, model, 0.5, copies, records)


def multicopy_squeeze(model, copies, delta_prime=None, grid=None,
                      prune_tol=names.DEFAULT_PRUNE_TOL):
    """Probabilistic multi-copy squeezing distillation.

    Each of the ``copies - 1`` iterations mixes the current system with a
    fresh noisy copy on a 50:50 beam splitter oriented so that the second
    output (the pointer) carries the sum of the two displacements. The
    pointer's x is accepted in ``(-delta', delta']``; the first output
    proceeds. `delta_prime` defaults to ``exp(-r)`` and may be a list with
    one threshold per iteration.
    """
    if not isinstance(model, SqueezeNoiseModel) or model.n_modes != 1:
        raise TypeError("multicopy_squeeze needs a SqueezeNoiseModel")
    splitter = sp.beam_splitter(np.pi / 4, 1, 0)

    def combine(joint):
        return mx.apply_op(splitter, joint)

    def spec_for(delta):
        return mx.HomodyneSpec.x(1, 2, (-delta, delta))

    return _multicopy('multicopy_squeeze', model, copies, delta_prime, grid,
                      prune_tol, combine, spec_for)


MEASUREMENTS = ('x_plus', 'x_local')


def multicopy_ent(model, copies, delta_prime=None, grid=None,
                  prune_tol=names.DEFAULT_PRUNE_TOL, measurement='x_plus'):
    """Probabilistic multi-copy entanglement distillation.

    The current two-mode system (modes 0, 1) and a fresh noisy copy
    (modes 2, 3) are combined by local 50:50 beam splitters on Bob's modes
    (0, 2) and Alice's modes (1, 3). Modes 2, 3 proceed when the measured
    quadrature falls in ``(-delta', delta']``.

    Parameters
    ----------
    measurement : {'x_plus', 'x_local'}
        ``'x_plus'`` measures the joint quadrature ``(x_0 + x_1)/sqrt(2)`` of
        the first pair; ``'x_local'`` measures Bob's ``x_0`` alone and
        discards Alice's mode 1.
    """
    if not isinstance(model, EntNoiseModel):
        raise TypeError("multicopy_ent needs an EntNoiseModel")
    if measurement not in MEASUREMENTS:
        raise ValueError("Unknown measurement '{}'; expected one of "
                         "{}".format(measurement, ', '.join(MEASUREMENTS)))
    bob = sp.beam_splitter(np.pi / 4, 0, 2, n_modes=4)
    alice = sp.beam_splitter(np.pi / 4, 1, 3, n_modes=4)
    splitters = alice.compose(bob)

    if measurement == 'x_plus':
        def combine(joint):
            return mx.apply_op(splitters, joint)

        def spec_for(delta):
            return mx.HomodyneSpec.x_plus(0, 1, 4, (-delta, delta))
    else:
        def combine(joint):
            return mx.partial_trace_mix(mx.apply_op(splitters, joint),
                                        [0, 2, 3])

        def spec_for(delta):
            return mx.HomodyneSpec.x(0, 3, (-delta, delta))

    return _multicopy('multicopy_ent', model, copies, delta_prime, grid,
                      prune_tol, combine, spec_for)


def run_point(protocol, r, p, setting, d_over_sigma, delta_prime=None,
              grid_points=names.DEFAULT_GRID_POINTS,
              prune_tol=names.DEFAULT_PRUNE_TOL):
    """Run one sweep point and return its :class:`ProtocolResult`.

    `setting` is the transmissivity for the one-shot protocol and the number
    of copies otherwise.
    """
    grid = mx.GridPolicy(grid_points)
    if protocol == 'one_shot_squeeze':
        model = SqueezeNoiseModel.from_ratio(r, p, d_over_sigma)
        theta = np.arccos(np.sqrt(setting))
        return one_shot_squeeze(model, theta, grid=grid, prune_tol=prune_tol)
    if protocol == 'multicopy_squeeze':
        model = SqueezeNoiseModel.from_ratio(r, p, d_over_sigma)
        return multicopy_squeeze(model, setting, delta_prime, grid=grid,
                                 prune_tol=prune_tol)
    if protocol == 'multicopy_ent':
        model = EntNoiseModel.from_ratio(r, p, d_over_sigma)
        return multicopy_ent(model, setting, delta_prime, grid=grid,
                             prune_tol=prune_tol)
    raise ValueError("Unknown protocol '{}'".format(protocol))


def _run(args):
    protocol, setting, ratio = args[0], args[3], args[4]
    try:
        return run_point(*args)
    except Exception as e:
        raise EngineError("{} failed at setting={}, d_over_sigma={}: "
                          "{}".format(protocol, setting, ratio, e))


def sweep_points(config):
    """Argument tuples for :func:`run_point`, in input-grid order.

    Raises :exc:`~cvdistil.config.ConfigError` if `config` is invalid.
    """
    config.validate()
    return [(config.protocol, config.r, config.p, setting, ratio,
             config.delta_prime, config.grid_points, config.prune_tol)
            for setting in config.settings for ratio in config.d_over_sigma]


def run_sweep(config, workers=1):
    """Run every sweep point of `config`.

    Points are independent and may be spread over `workers` processes; the
    results always come back in input-grid order.

    Returns
    -------
    list of ProtocolResult
    """
    points = sweep_points(config)
    logger.info("sweep: %s, %d points, %d worker(s)", config.protocol,
                len(points), workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run, points))
    return [_run(point) for point in points]


def table(results):
    """Sweep table with columns :data:`cvdistil.names.CSV_COLUMNS`."""
    return pd.DataFrame([result.summary_row() for result in results],
                        columns=list(names.CSV_COLUMNS))


def sweep(config, workers=1):
    """:func:`run_sweep` summarized as a :class:`pandas.DataFrame`, one row
    per point."""
    return table(run_sweep(config, workers=workers))
