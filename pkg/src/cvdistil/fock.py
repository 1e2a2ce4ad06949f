"""
Truncated number-basis oracle for one and two modes.

States are amplitude vectors in the number basis; quadrature statistics are
computed by integrating position wavefunctions. Everything here is brute
force and exists to cross-check the Gaussian formulas of
:mod:`cvdistil.symplectic` and :mod:`cvdistil.mixture`.

Quadratures follow ``x = a + a^dagger`` so that the vacuum has unit x
variance.

"""
import logging
import warnings

import numpy as np
from scipy.integrate import quad, quad_vec

from . import symplectic as sp
from . import mixture as mx

logger = logging.getLogger(__name__)

NORM_DEFICIT_TOL = 1e-8
INTEGRATION_LIMIT = 10.0
INTEGRATION_TOL = 1e-9

PINNED_R = (0.0, 0.35, 0.7)
PINNED_D = (0.0, 1.0, 2.0, 4.0)
PINNED_INTERVALS = ((-np.inf, 0.0), (-1.0, 1.0), (0.5, 2.0))


def hermite_functions(n_max, x):
    """Number-state position wavefunctions ``psi_0 ... psi_n_max`` at `x`.

    Evaluated with the normalized three-term recurrence, which stays finite
    for large `n_max` where factorial formulas overflow.

    Returns
    -------
    numpy.ndarray
        Shape ``(n_max + 1,) + shape(x)``.
    """
    x = np.asarray(x, dtype=float)
    u = x / np.sqrt(2)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-u ** 2 / 2)
    if n_max > 0:
        out[1] = np.sqrt(2) * u * out[0]
    for n in range(1, n_max):
        out[n + 1] = (np.sqrt(2. / (n + 1)) * u * out[n] -
                      np.sqrt(n / (n + 1.)) * out[n - 1])
    return out * 2 ** -0.25


class FockVector(object):
    """Pure state of one or two modes truncated at `cutoff` photons per mode.

    Parameters
    ----------
    coefficients : array_like
        Amplitudes, shape ``(cutoff + 1,)`` for one mode and
        ``(cutoff + 1, cutoff + 1)`` for two.
    """

    def __init__(self, coefficients):
        coefficients = np.asarray(coefficients, dtype=complex)
        if coefficients.ndim not in (1, 2) or \
                len(set(coefficients.shape)) != 1:
            raise ValueError("Coefficients must be a vector or a square "
                             "matrix, not shape {}".format(coefficients.shape))
        if coefficients.shape[0] < 3:
            raise ValueError("Cutoff must be at least 2")
        self._coefficients = coefficients

    def __repr__(self):
        return "<FockVector({} mode(s), cutoff={})>".format(self.n_modes,
                                                             self.cutoff)

    @property
    def coefficients(self):
        return self._coefficients

    @property
    def cutoff(self):
        return self._coefficients.shape[0] - 1

    @property
    def n_modes(self):
        return self._coefficients.ndim

    @property
    def norm(self):
        return float(np.sum(np.abs(self._coefficients) ** 2))

    @property
    def norm_deficit(self):
        return 1 - self.norm

    def probabilities(self):
        return np.abs(self._coefficients) ** 2

    def check_norm(self, tol=NORM_DEFICIT_TOL):
        """Warn if the truncation loses more than `tol` of the norm."""
        deficit = self.norm_deficit
        if deficit > tol:
            warnings.warn("Cutoff {} loses {:.3g} of the norm; raise the "
                          "cutoff".format(self.cutoff, deficit))
            return False
        return True

    def wavefunction(self, x):
        """Position wavefunction of a single-mode vector at `x`."""
        if self.n_modes != 1:
            raise ValueError("Wavefunction requires a single-mode vector")
        return self._coefficients.dot(hermite_functions(self.cutoff, x))


def _check_cutoff(cutoff):
    if int(cutoff) != cutoff or cutoff < 2:
        raise ValueError("Cutoff must be an integer >= 2, not "
                         "{!r}".format(cutoff))
    return int(cutoff)


def fock_squeezed_displaced(r, d, cutoff):
    """Number-basis amplitudes of ``D(d) S(r) |0>``.

    Obtained by projecting the Gaussian wavefunction with x mean `d` and x
    variance ``exp(-2 r)`` onto the number-state wavefunctions.
    """
    cutoff = _check_cutoff(cutoff)
    variance = np.exp(-2 * r)

    def psi(x):
        return ((2 * np.pi * variance) ** -0.25 *
                np.exp(-(x - d) ** 2 / (4 * variance)))

    # number states up to the cutoff live inside |x| < 2 sqrt(cutoff + 1)
    half = max(2 * np.sqrt(cutoff + 1), abs(d)) + 12 * np.exp(abs(r))
    coefficients, _ = quad_vec(
        lambda x: hermite_functions(cutoff, x) * psi(x), -half, half,
        epsabs=1e-13, epsrel=1e-12, points=[d])
    v = FockVector(coefficients)
    v.check_norm()
    return v


def fock_tmsv(r, cutoff):
    """Two-mode squeezed vacuum ``sech r sum_n (-tanh r)^n |n, n>``.

    The sign makes ``x_0 + x_1`` the squeezed quadrature, matching
    :func:`cvdistil.symplectic.tmsv`.
    """
    cutoff = _check_cutoff(cutoff)
    n = np.arange(cutoff + 1)
    v = FockVector(np.diag((-np.tanh(r)) ** n / np.cosh(r)))
    v.check_norm()
    return v


def oracle_overlap(a, b):
    """``|<a|b>|^2`` by direct inner product."""
    if a.coefficients.shape != b.coefficients.shape:
        raise ValueError("Cannot compare vectors of shapes {} and "
                         "{}".format(a.coefficients.shape,
                                     b.coefficients.shape))
    return float(abs(np.vdot(a.coefficients, b.coefficients)) ** 2)


def _clip(interval):
    lo, hi = interval
    if lo > hi:
        raise ValueError("Interval bounds out of order: ({}, {}]".format(
            lo, hi))
    return (max(lo, -INTEGRATION_LIMIT), min(hi, INTEGRATION_LIMIT))


def oracle_interval_prob(v, interval):
    """Probability that x of a single-mode vector lies in `interval`."""
    if v.n_modes != 1:
        raise ValueError("oracle_interval_prob takes a single-mode vector; "
                         "use oracle_condition for two modes")
    lo, hi = _clip(interval)
    if lo >= hi:
        return 0.0
    value, _ = quad(lambda x: abs(v.wavefunction(x)) ** 2, lo, hi,
                    epsabs=INTEGRATION_TOL, limit=200)
    return float(value)


def _ladder(cutoff):
    return np.diag(np.sqrt(np.arange(1, cutoff + 1)), 1)


def fock_moments(rho):
    """Mean and covariance of a single-mode state.

    Parameters
    ----------
    rho : FockVector or numpy.ndarray
        Single-mode vector or density matrix.
    """
    if isinstance(rho, FockVector):
        if rho.n_modes != 1:
            raise ValueError("fock_moments takes a single-mode state")
        c = rho.coefficients
        rho = np.outer(c, c.conj())
    rho = np.asarray(rho, dtype=complex) / np.trace(rho).real
    a = _ladder(rho.shape[0] - 1)
    ops = [a + a.T, -1j * (a - a.T)]

    def expect(op):
        return np.trace(rho.dot(op)).real

    mean = np.array([expect(op) for op in ops])
    cov = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            sym = 0.5 * (ops[i].dot(ops[j]) + ops[j].dot(ops[i]))
            cov[i, j] = expect(sym) - mean[i] * mean[j]
    return mean, cov


class ConditionedFock(object):
    """Kept mode after interval post-selection, as a density matrix."""

    def __init__(self, rho, prob):
        self.rho = rho
        self.prob = prob
        self.mean, self.cov = fock_moments(rho)

    def __repr__(self):
        return "<ConditionedFock(prob={:.6g})>".format(self.prob)


def oracle_condition(v, interval, mode=1):
    """Condition a two-mode vector on x of `mode` lying in `interval`.

    Returns
    -------
    state : ConditionedFock or FockVector
        Normalized state of the other mode; a pure vector when `interval`
        is a single outcome.
    prob : float
        Acceptance probability; zero for a single outcome.
    """
    if v.n_modes != 2:
        raise ValueError("oracle_condition takes a two-mode vector")
    if mode not in (0, 1):
        raise ValueError("Measured mode must be 0 or 1")
    c = v.coefficients if mode == 1 else v.coefficients.T
    n = v.cutoff + 1

    def branch(x):
        return c.dot(hermite_functions(v.cutoff, x))

    lo, hi = interval
    if lo == hi:
        amplitudes = branch(lo)
        amplitudes = amplitudes / np.linalg.norm(amplitudes)
        return FockVector(amplitudes), 0.0

    lo, hi = _clip(interval)
    if lo >= hi:
        raise mx.PostSelectionError("Interval outside the integration range")

    def projector(x):
        psi = branch(x)
        outer = np.outer(psi, psi.conj())
        return np.concatenate([outer.real.ravel(), outer.imag.ravel()])

    flat, _ = quad_vec(projector, lo, hi, epsabs=INTEGRATION_TOL)
    rho = (flat[:n * n] + 1j * flat[n * n:]).reshape(n, n)
    prob = float(np.trace(rho).real)
    if prob <= 0:
        raise mx.PostSelectionError("Zero acceptance probability")
    return ConditionedFock(rho / prob, prob), prob


def validate_oracle(cutoff=60, grid=None):
    """Compare the Gaussian engine with the oracle on a pinned matrix.

    Covers overlaps and interval probabilities of squeezed displaced states
    and interval conditioning of two-mode squeezed vacua.

    Returns
    -------
    dict
        Largest absolute deviation per quantity.
    """
    deviations = {'overlap': 0.0, 'interval_prob': 0.0,
                  'conditioned_moments': 0.0}
    for r in PINNED_R:
        target = sp.squeezed_state(r)
        target_fock = fock_squeezed_displaced(r, 0.0, cutoff)
        for d in PINNED_D:
            state = sp.squeezed_state(r, d)
            fock = fock_squeezed_displaced(r, d, cutoff)
            deviations['overlap'] = max(
                deviations['overlap'],
                abs(sp.pure_overlap(state, target) -
                    oracle_overlap(fock, target_fock)))
            means, variances = mx.outcome_density(
                mx.GaussianMixture.from_state(state), [1.0, 0.0])
            for lo, hi in PINNED_INTERVALS:
                engine = mx.interval_mass(means[0], variances[0], lo, hi)
                oracle = oracle_interval_prob(fock, (lo, hi))
                deviations['interval_prob'] = max(
                    deviations['interval_prob'], abs(engine - oracle))

        pair = mx.GaussianMixture.from_state(sp.tmsv(r))
        pair_fock = fock_tmsv(r, cutoff)
        for interval in PINNED_INTERVALS:
            spec = mx.HomodyneSpec.x(1, 2, interval)
            kept, _ = mx.homodyne_condition(pair, spec, grid=grid,
                                            renormalize=True)
            mean, cov = mx.moments(kept)
            conditioned, _ = oracle_condition(pair_fock, interval)
            deviations['conditioned_moments'] = max(
                deviations['conditioned_moments'],
                np.max(np.abs(mean - conditioned.mean)),
                np.max(np.abs(cov - conditioned.cov)))

    logger.info("validate_oracle: %s", deviations)
    return deviations
