"""
Resource measures for the Gaussian theories of squeezing and of two-mode
entanglement, extended to mixtures of Gaussian states.

``kappa`` is the least scaling ``t >= 1`` bringing a covariance matrix into
the free set. For mixtures only the upper bound given by the mixture's own
decomposition is computed (:func:`kappa_tilde_ub`); the convex-roof infimum
over all Gaussian decompositions is not.

"""
import logging
import warnings

import numpy as np

from . import names
from . import symplectic as sp
from .mixture import moments

logger = logging.getLogger(__name__)

SQUEEZING = 'squeezing'
ENTANGLEMENT = 'entanglement_1x1'

_PARTIAL_TRANSPOSE = np.diag([1., 1., 1., -1.])


class FreeSetSpec(object):
    """Which free set a monotone refers to.

    Parameters
    ----------
    theory : {'squeezing', 'entanglement_1x1'}
        Squeezing: ``V >= 1``. Entanglement: separable two-mode covariance
        matrices for the bipartition mode 0 | mode 1.
    """

    def __init__(self, theory=SQUEEZING):
        if theory not in (SQUEEZING, ENTANGLEMENT):
            raise ValueError("Unknown resource theory '{}'".format(theory))
        self.theory = theory

    def __repr__(self):
        return "<FreeSetSpec('{}')>".format(self.theory)

    def __eq__(self, other):
        return isinstance(other, FreeSetSpec) and other.theory == self.theory

    def __hash__(self):
        return hash(self.theory)

    def contains(self, cov):
        """Whether `cov` lies in the free set."""
        if self.theory == SQUEEZING:
            cov = sp._check_symmetric(cov)
            return np.linalg.eigvalsh(cov).min() >= 1 - names.PHYSICALITY_TOL
        return is_separable_1x1(cov)


class MonotoneReport(object):
    """Value of a monotone together with the data that witnesses it.

    Parameters
    ----------
    measure : str
        Name of the monotone.
    value : float
        Its value.
    witness : dict
        Scaling factor, minimizing direction or decomposition behind the
        value.
    """

    def __init__(self, measure, value, witness=None):
        self.measure = measure
        self.value = float(value)
        self.witness = dict(witness or {})

    def __repr__(self):
        return "<MonotoneReport({}={!r})>".format(self.measure, self.value)

    def __float__(self):
        return self.value

    def line(self):
        """Single-line rendering ``measure=... value=... witness=...``."""
        parts = []
        for key in sorted(self.witness):
            value = self.witness[key]
            if isinstance(value, (list, tuple, np.ndarray)):
                value = '[' + ','.join('{:.9g}'.format(v)
                                       for v in np.ravel(value)) + ']'
            elif isinstance(value, float):
                value = '{:.9g}'.format(value)
            parts.append('{}={}'.format(key, value))
        return "measure={} value={:.9g} witness={}".format(
            self.measure, self.value, ';'.join(parts))


def _valid(cov):
    cov = sp._check_symmetric(cov)
    if not sp.is_valid_cm(cov):
        raise sp.PhysicalityError("Not a valid covariance matrix")
    return cov


def kappa_squeeze(cov):
    """Least ``t >= 1`` with ``t V >= 1``; equals ``max(1, 1/lambda_min)``."""
    cov = _valid(cov)
    lam = np.linalg.eigvalsh(cov).min()
    t = max(1.0, 1.0 / lam)
    return MonotoneReport('kappa_squeeze', t,
                          {'t': t, 'lambda_min': float(lam)})


def _ppt_matrix(cov):
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (4, 4):
        raise ValueError("Separability test needs a two-mode (4x4) "
                         "covariance matrix, not {}".format(cov.shape))
    return _PARTIAL_TRANSPOSE.dot(cov).dot(_PARTIAL_TRANSPOSE)


def is_separable_1x1(cov, tol=names.SEPARABILITY_TOL):
    """Partial-transpose test for a two-mode Gaussian state."""
    cov = _valid(cov)
    ppt = _ppt_matrix(cov)
    omega = sp.symplectic_form(2)
    return np.linalg.eigvalsh(ppt + 1j * omega).min() >= -tol


def ppt_min_eigenvalue(cov):
    """Smallest symplectic eigenvalue of the partially transposed matrix."""
    return float(sp.symplectic_eigenvalues(_ppt_matrix(_valid(cov)))[0])


def kappa_ent(cov, tol=names.KAPPA_BISECTION_TOL, max_doublings=60):
    """Least ``t >= 1`` for which ``t V`` is separable, by bisection."""
    cov = _valid(cov)
    nu = ppt_min_eigenvalue(cov)
    if is_separable_1x1(cov):
        return MonotoneReport('kappa_ent', 1.0, {'t': 1.0, 'ppt_nu': nu})

    lo, hi = 1.0, 2.0
    for _ in range(max_doublings):
        if is_separable_1x1(hi * cov):
            break
        lo, hi = hi, 2 * hi
    else:
        warnings.warn("kappa_ent bracket did not close after {} doublings; "
                      "reporting the last bound".format(max_doublings))

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if is_separable_1x1(mid * cov):
            hi = mid
        else:
            lo = mid

    return MonotoneReport('kappa_ent', hi, {'t': hi, 'ppt_nu': nu})


def kappa(cov, spec=None):
    """``kappa`` for the free set named by `spec` (squeezing by default)."""
    spec = spec or FreeSetSpec()
    if spec.theory == SQUEEZING:
        return kappa_squeeze(cov)
    return kappa_ent(cov)


def kappa_scan(cov, spec=None, t_max=10.0, step=1e-4):
    """Dense scan for the least ``t`` on the grid with ``t V`` free.

    Independent of the closed form and the bisection; returns ``inf`` if no
    grid point up to `t_max` is free.
    """
    spec = spec or FreeSetSpec()
    cov = _valid(cov)
    n = int(round((t_max - 1.0) / step))
    for k in range(n + 1):
        t = 1.0 + k * step
        if spec.contains(t * cov):
            return t
    return np.inf


def kappa_tilde_ub(m, spec=None):
    """Upper bound on the convex-roof ``kappa`` from the explicit
    decomposition of `m`: ``sum_lambda w_lambda kappa(V_lambda)``."""
    if not m.normalized:
        raise ValueError("kappa_tilde_ub requires a normalized mixture")
    spec = spec or FreeSetSpec()
    values = np.array([kappa(s.cov, spec).value for s in m.states])
    bound = float(np.dot(m.weights, values))
    return MonotoneReport('kappa_tilde_ub', bound,
                          {'theory': spec.theory,
                           'weights': m.weights,
                           'kappas': values})


def m_var(m):
    """Minimum quadrature variance: least eigenvalue of the aggregate
    covariance matrix."""
    _, cov = moments(m)
    evals, evecs = np.linalg.eigh(cov)
    return MonotoneReport('m_var', evals[0], {'direction': evecs[:, 0]})


def m_var_bar(m):
    """``min(1, m_var)``."""
    report = m_var(m)
    return MonotoneReport('m_var_bar', min(1.0, report.value),
                          report.witness)


MEASURES = {
    'kappa_squeeze': kappa_squeeze,
    'kappa_ent': kappa_ent,
    'kappa_tilde_ub': kappa_tilde_ub,
    'kappa_tilde_ub_ent': lambda m: kappa_tilde_ub(m, FreeSetSpec(
        ENTANGLEMENT)),
    'm_var': m_var,
    'm_var_bar': m_var_bar,
}
"""Measures by name; the first two take a covariance matrix, the rest a
mixture."""
