"""
Finite weighted mixtures of Gaussian states and their evolution under
Gaussian ops and interval post-selected homodyne measurements.

Continuous conditioning is always represented by a discretization: each
Gauss-Legendre node of the accepted outcome interval spawns one branch.

"""
import logging
import warnings

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import ndtr
from scipy.stats import norm

from . import names
from . import symplectic as sp

logger = logging.getLogger(__name__)

PRUNE_WARN_FRACTION = 1e-6


class PostSelectionError(ValueError):
    """Raised when post-selection cannot produce a mixture."""


class GaussianMixture(object):
    """A finite convex (or subnormalized) combination of Gaussian states.

    Parameters
    ----------
    branches : iterable
        Pairs ``(weight, state)`` with positive weights and
        :class:`~cvdistil.symplectic.GaussianState` states on the same number
        of modes.
    normalized : bool
        If ``True`` the weights must sum to one; otherwise the mixture is
        subnormalized and its total weight lies in (0, 1].
    """

    def __init__(self, branches, normalized=True):
        branches = list(branches)
        if not branches:
            raise ValueError("A mixture needs at least one branch")

        weights = np.array([float(w) for w, _ in branches])
        states = tuple(s for _, s in branches)

        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise ValueError("Branch weights must be positive and finite")
        n_modes = states[0].n_modes
        if any(s.n_modes != n_modes for s in states):
            raise ValueError("All branches must share the same mode count")

        total = weights.sum()
        if normalized and abs(total - 1) > names.NORMALIZATION_TOL:
            raise ValueError("Weights of a normalized mixture must sum to "
                             "one, not {!r}".format(total))
        if not normalized and total > 1 + names.NORMALIZATION_TOL:
            raise ValueError("Weights of a subnormalized mixture cannot "
                             "exceed one; got {!r}".format(total))

        weights.setflags(write=False)
        self._weights = weights
        self._states = states
        self._normalized = bool(normalized)

    @classmethod
    def from_state(cls, state):
        return cls([(1.0, state)])

    def __repr__(self):
        return "<GaussianMixture({} branches, {} modes, {})>".format(
            len(self), self.n_modes, self.norm_flag)

    def __len__(self):
        return len(self._states)

    def __iter__(self):
        return zip(self._weights, self._states)

    @property
    def weights(self):
        return self._weights

    @property
    def states(self):
        return self._states

    @property
    def n_modes(self):
        return self._states[0].n_modes

    @property
    def total_weight(self):
        return float(self._weights.sum())

    @property
    def normalized(self):
        return self._normalized

    @property
    def norm_flag(self):
        return 'normalized' if self._normalized else 'subnormalized'

    def validate(self):
        """Raise :exc:`PhysicalityError` if any branch is unphysical."""
        for state in self._states:
            if not sp.is_valid_cm(state.cov):
                raise sp.PhysicalityError(
                    "Mixture branch violates the uncertainty relation")


def _require_normalized(m, what):
    if not m.normalized:
        raise ValueError("{} requires a normalized mixture; "
                         "renormalize first".format(what))


class HomodyneSpec(object):
    """Post-selected homodyne measurement of one quadrature combination.

    Parameters
    ----------
    functional : array_like
        Vector ``l`` of length 2n; the measured observable is ``l^T x``.
    accept_interval : tuple
        ``(lo, hi)``, accepting outcomes in ``(lo, hi]``; ``lo`` may be
        ``-inf`` and ``hi`` may be ``+inf``. ``lo == hi`` conditions on the
        exact outcome.
    measured_modes : iterable of int
        Modes removed after the measurement; `functional` must be supported
        on their quadratures only.
    """

    def __init__(self, functional, accept_interval, measured_modes):
        functional = np.asarray(functional, dtype=float)
        if functional.ndim != 1 or functional.shape[0] % 2:
            raise ValueError("Functional must be a vector of even length")
        layout = sp.QuadratureLayout(functional.shape[0] // 2)

        measured_modes = tuple(sorted(set(measured_modes)))
        if not measured_modes:
            raise ValueError("At least one mode must be measured")
        measured_idx = layout.indices(measured_modes)

        if not np.any(functional):
            raise ValueError("Functional must be nonzero")
        outside = np.delete(functional, measured_idx)
        if np.any(outside):
            raise ValueError("Functional has support outside the measured "
                             "modes {}".format(measured_modes))

        lo, hi = (float(v) for v in accept_interval)
        if np.isnan(lo) or np.isnan(hi) or lo > hi or \
                (lo == hi and not np.isfinite(lo)):
            raise PostSelectionError(
                "Empty accept interval ({}, {}]".format(lo, hi))

        functional.setflags(write=False)
        self._functional = functional
        self._interval = (lo, hi)
        self._measured = measured_modes
        self._layout = layout

    @classmethod
    def x(cls, mode, n_modes, accept_interval):
        """Measure the x quadrature of `mode`."""
        layout = sp.QuadratureLayout(n_modes)
        functional = np.zeros(layout.dim)
        functional[layout.x(mode)] = 1.0
        return cls(functional, accept_interval, [mode])

    @classmethod
    def x_plus(cls, mode_a, mode_b, n_modes, accept_interval):
        """Measure ``(x_a + x_b)/sqrt(2)`` jointly on two modes."""
        layout = sp.QuadratureLayout(n_modes)
        functional = np.zeros(layout.dim)
        functional[layout.x(mode_a)] = 1 / np.sqrt(2)
        functional[layout.x(mode_b)] = 1 / np.sqrt(2)
        return cls(functional, accept_interval, [mode_a, mode_b])

    def __repr__(self):
        return "<HomodyneSpec(modes={}, interval=({}, {}])>".format(
            self._measured, *self._interval)

    @property
    def functional(self):
        return self._functional

    @property
    def accept_interval(self):
        return self._interval

    @property
    def measured_modes(self):
        return self._measured

    @property
    def kept_modes(self):
        return tuple(m for m in range(self._layout.n_modes)
                     if m not in self._measured)

    @property
    def kept_indices(self):
        """Phase-space indices of the kept modes."""
        return self._layout.indices(self.kept_modes)

    @property
    def degenerate(self):
        return self._interval[0] == self._interval[1]

    def with_interval(self, accept_interval):
        return HomodyneSpec(self._functional, accept_interval,
                            self._measured)


class GridPolicy(object):
    """Discretization of continuous homodyne outcomes.

    Parameters
    ----------
    points : int
        Gauss-Legendre nodes per branch and accept interval.
    support_sigmas : float
        The accept interval is clipped to this many standard deviations of
        the widest branch around each branch's outcome mean.
    """

    def __init__(self, points=names.DEFAULT_GRID_POINTS,
                 support_sigmas=names.SUPPORT_SIGMAS):
        points = int(points)
        if points < 1:
            raise ValueError("Grid needs at least one node")
        if support_sigmas <= 0:
            raise ValueError("Support truncation must be positive")
        self.points = points
        self.support_sigmas = float(support_sigmas)

    def __repr__(self):
        return "<GridPolicy(points={}, support_sigmas={})>".format(
            self.points, self.support_sigmas)

    def nodes(self, lo, hi):
        """Nodes and weights of the rule on ``[lo, hi]``."""
        x, w = leggauss(self.points)
        half = 0.5 * (hi - lo)
        return half * x + 0.5 * (hi + lo), half * w


def apply_op(op, m):
    """Apply a Gaussian unitary to every branch."""
    return GaussianMixture(((w, sp.apply(op, s)) for w, s in m),
                           normalized=m.normalized)


def tensor_mix(a, b):
    """Product mixture; branch counts multiply, weights multiply."""
    return GaussianMixture(((wa * wb, sp.tensor(sa, sb))
                            for wa, sa in a for wb, sb in b),
                           normalized=a.normalized and b.normalized)


def partial_trace_mix(m, keep_modes):
    return GaussianMixture(((w, sp.partial_trace(s, keep_modes))
                            for w, s in m), normalized=m.normalized)


def append_vacuum_mix(m, n_modes=1):
    return GaussianMixture(((w, sp.append_vacuum(s, n_modes)) for w, s in m),
                           normalized=m.normalized)


def outcome_density(m, functional):
    """Mean and variance of ``l^T x`` in every branch.

    Returns
    -------
    means, variances : numpy.ndarray
        One entry per branch; each branch's outcome is
        ``Normal(mean, variance)``.
    """
    functional = np.asarray(functional, dtype=float)
    if not np.any(functional):
        raise ValueError("Functional must be nonzero")
    if functional.shape != (2 * m.n_modes,):
        raise ValueError("Functional of shape {} does not match {} "
                         "modes".format(functional.shape, m.n_modes))
    means = np.array([functional.dot(s.mean) for s in m.states])
    variances = np.array([functional.dot(s.cov).dot(functional)
                          for s in m.states])
    return means, variances


def interval_mass(mean, variance, lo, hi):
    """Normal probability of ``(lo, hi]``."""
    std = np.sqrt(variance)
    return ndtr((hi - mean) / std) - ndtr((lo - mean) / std)


def is_uncorrelated(m, spec, tol=names.CROSS_BLOCK_TOL):
    """Whether the kept modes of every branch are uncorrelated with the
    measured quadrature."""
    kept_idx = spec.kept_indices
    for state in m.states:
        cross = state.cov[kept_idx, :].dot(spec.functional)
        if np.max(np.abs(cross)) > tol:
            return False
    return True


class _Conditioner(object):
    """Conditioning of one branch on the measured quadrature.

    Uses the partial homodyne update ``V' = A - B (P C P)^+ B^T`` with
    ``P`` the projector on the measured direction, and the matching
    conditional mean ``m' = m_A + B (P C P)^+ (q u - P m_B)``.
    """

    def __init__(self, state, spec):
        kept = spec.kept_indices
        measured = state.layout.indices(spec.measured_modes)

        functional = spec.functional[measured]
        scale = np.linalg.norm(functional)
        self.direction = functional / scale
        self.scale = scale

        V = state.cov
        A = V[np.ix_(kept, kept)]
        B = V[np.ix_(kept, measured)]
        C = V[np.ix_(measured, measured)]
        P = np.outer(self.direction, self.direction)

        self.gain = B.dot(np.linalg.pinv(P.dot(C).dot(P), rcond=1e-10))
        cov = A - self.gain.dot(B.T)
        self.cov = 0.5 * (cov + cov.T)
        self.kept_mean = state.mean[kept]
        self.projected_mean = P.dot(state.mean[measured])

    def state(self, outcome):
        """Kept-mode state given outcome ``l^T x = outcome``."""
        q = outcome / self.scale
        mean = self.kept_mean + self.gain.dot(q * self.direction -
                                              self.projected_mean)
        return sp.GaussianState(mean, self.cov, check=False)


def homodyne_condition(m, spec, grid=None, renormalize=False, path='auto'):
    """Post-select `m` on the outcome of `spec` falling in its interval.

    Parameters
    ----------
    m : GaussianMixture
        Normalized input mixture.
    spec : HomodyneSpec
        Measured functional, accept interval and modes to remove.
    grid : GridPolicy, optional
        Discretization used when conditioning changes the kept states.
    renormalize : bool
        If ``True`` return the accepted mixture renormalized; otherwise it is
        subnormalized with total weight equal to the success probability.
    path : {'auto', 'exact', 'grid'}
        ``'exact'`` requires the kept modes to be uncorrelated with the
        measured quadrature in every branch and raises
        :exc:`PostSelectionError` otherwise; ``'grid'`` always discretizes.

    Returns
    -------
    mixture : GaussianMixture
        State of the kept modes after acceptance.
    success_prob : float
        Probability of acceptance; zero for exact-outcome conditioning.
    """
    _require_normalized(m, "homodyne_condition")
    if spec.functional.shape != (2 * m.n_modes,):
        raise ValueError("Homodyne spec for {} modes applied to a mixture "
                         "of {} modes".format(spec.functional.shape[0] // 2,
                                              m.n_modes))
    if not spec.kept_modes:
        raise ValueError("Homodyne measurement must keep at least one mode")
    if path not in ('auto', 'exact', 'grid'):
        raise ValueError("Unknown conditioning path '{}'".format(path))
    if grid is None:
        grid = GridPolicy()

    lo, hi = spec.accept_interval
    means, variances = outcome_density(m, spec.functional)

    if spec.degenerate:
        return _condition_on_outcome(m, spec, lo, means, variances)

    masses = interval_mass(means, variances, lo, hi)
    success = float(np.clip(np.dot(m.weights, masses), 0.0, 1.0))
    if success <= 0:
        raise PostSelectionError("Zero success probability for accept "
                                 "interval ({}, {}]".format(lo, hi))

    uncorrelated = is_uncorrelated(m, spec)
    if path == 'exact' and not uncorrelated:
        raise PostSelectionError("Kept modes are correlated with the "
                                 "measured quadrature; exact path invalid")

    if path == 'grid' or not uncorrelated:
        branches = _grid_branches(m, spec, grid, means, variances,
                                  masses)
        chosen = 'grid'
    else:
        branches = [(w * mass, sp.partial_trace(s, spec.kept_modes))
                    for (w, s), mass in zip(m, masses) if w * mass > 0]
        chosen = 'exact'

    if not branches:
        raise PostSelectionError("No branch survives post-selection")

    logger.debug("homodyne_condition: %s path, %d -> %d branches, "
                 "success %.6g", chosen, len(m), len(branches), success)

    out = GaussianMixture(branches, normalized=False)
    if renormalize:
        out = renormalize_mix(out)
    return out, success


def _grid_branches(m, spec, grid, means, variances, masses):
    """Node branches of every input branch; the node weights of a branch
    are rescaled to sum to its exact accepted mass."""
    lo, hi = spec.accept_interval
    halfwidth = grid.support_sigmas * np.sqrt(variances.max())
    branches = []
    for (w, state), mean, var, mass in zip(m, means, variances, masses):
        a = max(lo, mean - halfwidth)
        b = min(hi, mean + halfwidth)
        if a >= b or w * mass <= 0:
            continue
        conditioner = _Conditioner(state, spec)
        nodes, node_weights = grid.nodes(a, b)
        weights = node_weights * norm.pdf(nodes, loc=mean,
                                          scale=np.sqrt(var))
        total = weights.sum()
        if total <= 0:
            continue
        weights *= w * mass / total
        for q, weight in zip(nodes, weights):
            if weight > 0:
                branches.append((weight, conditioner.state(q)))
    return branches


def _condition_on_outcome(m, spec, outcome, means, variances):
    densities = norm.pdf(outcome, loc=means, scale=np.sqrt(variances))
    posterior = m.weights * densities
    if posterior.sum() <= 0:
        raise PostSelectionError("Outcome {} has zero density in every "
                                 "branch".format(outcome))
    posterior = posterior / posterior.sum()
    branches = [(p, _Conditioner(s, spec).state(outcome))
                for p, s in zip(posterior, m.states) if p > 0]
    return GaussianMixture(branches), 0.0


def condition_regions(m, spec, cuts, grid=None):
    """Condition on each region of the partition of the real line given by
    the increasing `cuts`.

    Returns
    -------
    list
        ``(mixture, probability)`` per region, in order; regions with zero
        probability are returned as ``(None, 0.0)``.
    """
    edges = [-np.inf] + sorted(float(c) for c in cuts) + [np.inf]
    out = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        try:
            out.append(homodyne_condition(m, spec.with_interval((lo, hi)),
                                          grid=grid))
        except PostSelectionError:
            out.append((None, 0.0))
    return out


def moments(m, renormalize=False):
    """Aggregate mean and covariance of the mixture."""
    if not m.normalized:
        if not renormalize:
            raise ValueError("moments requires a normalized mixture; pass "
                             "renormalize=True")
        m = renormalize_mix(m)
    w = m.weights
    means = np.array([s.mean for s in m.states])
    mean = w.dot(means)
    second = sum(wi * (s.cov + np.outer(s.mean, s.mean))
                 for wi, s in m)
    cov = second - np.outer(mean, mean)
    return mean, 0.5 * (cov + cov.T)


def quadrature_variance(m, functional, renormalize=False):
    """Variance of ``l^T x`` in the mixture."""
    functional = np.asarray(functional, dtype=float)
    _, cov = moments(m, renormalize=renormalize)
    return float(functional.dot(cov).dot(functional))


def fidelity_to_pure(m, target):
    """Fidelity ``<psi|rho|psi>`` of the mixture to a pure Gaussian target.

    Affine in the mixture: the sum of the branch overlaps
    ``Tr[rho_lambda rho_target]``.
    """
    _require_normalized(m, "fidelity_to_pure")
    if not sp.is_pure(target.cov):
        raise ValueError("Fidelity target must be a pure state")
    value = sum(w * sp.overlap(s, target) for w, s in m)
    return float(min(max(value, 0.0), 1.0))


def prune(m, tol=names.DEFAULT_PRUNE_TOL):
    """Drop branches lighter than `tol` times the total weight.

    A normalized mixture stays normalized.
    """
    if tol < 0:
        raise ValueError("Pruning tolerance must be non-negative")
    if tol == 0:
        return m
    cutoff = tol * m.total_weight
    kept = [(w, s) for w, s in m if w >= cutoff]
    if not kept:
        raise PostSelectionError("Pruning removed every branch")
    if len(kept) == len(m):
        return m
    removed = 1 - sum(w for w, _ in kept) / m.total_weight
    if removed > PRUNE_WARN_FRACTION:
        warnings.warn("Pruning removed {:.3g} of the mixture weight; lower "
                      "the pruning tolerance".format(removed))
    logger.debug("prune: %d -> %d branches", len(m), len(kept))
    out = GaussianMixture(kept, normalized=False)
    return renormalize_mix(out) if m.normalized else out


def renormalize_mix(m):
    """Divide weights by their total and flag the mixture normalized."""
    total = m.total_weight
    return GaussianMixture(((w / total, s) for w, s in m))


def merge(a, b, alpha=None):
    """Combine the branches of two mixtures.

    With `alpha` given, both inputs must be normalized and the result is the
    convex combination ``alpha a + (1 - alpha) b``. Otherwise branches are
    concatenated with their weights; the result is normalized only if the
    weights sum to one.
    """
    if a.n_modes != b.n_modes:
        raise ValueError("Cannot merge mixtures of {} and {} "
                         "modes".format(a.n_modes, b.n_modes))
    if alpha is None:
        branches = list(a) + list(b)
        total = sum(w for w, _ in branches)
        return GaussianMixture(
            branches,
            normalized=abs(total - 1) <= names.NORMALIZATION_TOL)

    if not 0 <= alpha <= 1:
        raise ValueError("Mixing weight must lie in [0, 1]")
    _require_normalized(a, "merge")
    _require_normalized(b, "merge")
    branches = [(alpha * w, s) for w, s in a if alpha * w > 0]
    branches += [((1 - alpha) * w, s) for w, s in b if (1 - alpha) * w > 0]
    return GaussianMixture(branches)
