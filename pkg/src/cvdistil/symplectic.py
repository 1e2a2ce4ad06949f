"""
Exact algebra of single Gaussian states.

Quadratures are ordered ``x_1, p_1, ..., x_n, p_n`` and the convention is
hbar = 2, so the vacuum has the identity as covariance matrix and a valid
covariance matrix satisfies ``V + i Omega >= 0``.

"""
import logging

import numpy as np
from scipy import linalg

from . import names

logger = logging.getLogger(__name__)

_OMEGA_BLOCK = np.array([[0., 1.], [-1., 0.]])


class PhysicalityError(ValueError):
    """Raised when a matrix violates the uncertainty relation or a transform
    is not symplectic."""


def symplectic_form(n_modes):
    """The symplectic form for `n_modes` modes in xpxp ordering."""
    return np.kron(np.eye(n_modes), _OMEGA_BLOCK)


def _frozen(array):
    out = np.array(array, dtype=float)
    out.setflags(write=False)
    return out


def _check_square(cov):
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError("Covariance matrix must be square, "
                         "not of shape {}".format(cov.shape))
    if cov.shape[0] % 2:
        raise ValueError("Covariance matrix dimension must be even, "
                         "not {}".format(cov.shape[0]))
    return cov


def _check_symmetric(cov, tol=names.SYMMETRY_TOL):
    cov = _check_square(cov)
    if np.max(np.abs(cov - cov.T)) > tol:
        raise ValueError("Covariance matrix is not symmetric")
    return cov


class QuadratureLayout(object):
    """Index bookkeeping for the xpxp ordering of `n_modes` modes.

    Parameters
    ----------
    n_modes : int
        Number of bosonic modes; must be positive.
    """

    def __init__(self, n_modes):
        n_modes = int(n_modes)
        if n_modes < 1:
            raise ValueError("Number of modes must be positive, "
                             "not {}".format(n_modes))
        self._n_modes = n_modes

    def __repr__(self):
        return "<QuadratureLayout({})>".format(self._n_modes)

    @property
    def n_modes(self):
        return self._n_modes

    @property
    def dim(self):
        return 2 * self._n_modes

    @property
    def omega(self):
        return symplectic_form(self._n_modes)

    def check_mode(self, mode):
        if not 0 <= mode < self._n_modes:
            raise ValueError("Mode index {} out of range for {} "
                             "modes".format(mode, self._n_modes))
        return mode

    def x(self, mode):
        return 2 * self.check_mode(mode)

    def p(self, mode):
        return 2 * self.check_mode(mode) + 1

    def indices(self, modes):
        """Quadrature indices of the given modes, in the given order."""
        out = []
        for mode in modes:
            out.extend((self.x(mode), self.p(mode)))
        return np.array(out, dtype=int)


class GaussianState(object):
    """A Gaussian state given by its first and second moments.

    Values are immutable; every operation returns a new state.

    Parameters
    ----------
    mean : array_like
        Mean vector of length 2n.
    cov : array_like
        Symmetric 2n x 2n covariance matrix.
    check : bool
        If ``True`` (default), reject non-symmetric or unphysical covariance
        matrices.
    """

    def __init__(self, mean, cov, check=True):
        cov = _check_square(cov)
        mean = np.asarray(mean, dtype=float)
        if mean.shape != (cov.shape[0],):
            raise ValueError("Mean vector of shape {} does not match "
                             "covariance of shape {}".format(mean.shape,
                                                             cov.shape))
        if check:
            _check_symmetric(cov)
            if not is_valid_cm(cov):
                raise PhysicalityError(
                    "Covariance matrix violates the uncertainty relation")

        self._mean = _frozen(mean)
        self._cov = _frozen(cov)
        self._layout = QuadratureLayout(cov.shape[0] // 2)

    def __repr__(self):
        return "<GaussianState({} modes)>".format(self.n_modes)

    @property
    def mean(self):
        return self._mean

    @property
    def cov(self):
        return self._cov

    @property
    def layout(self):
        return self._layout

    @property
    def n_modes(self):
        return self._layout.n_modes

    def is_close(self, other, atol=1e-9):
        """Whether `other` has the same moments within `atol`."""
        return (self.n_modes == other.n_modes and
                np.allclose(self.mean, other.mean, rtol=0, atol=atol) and
                np.allclose(self.cov, other.cov, rtol=0, atol=atol))


class SymplecticOp(object):
    """A Gaussian unitary: symplectic matrix plus displacement.

    Acts on states as ``mean -> S mean + d`` and ``cov -> S cov S^T``.

    Parameters
    ----------
    S : array_like
        Real 2n x 2n symplectic matrix.
    d : array_like, optional
        Displacement vector of length 2n; zero if not given.
    """

    def __init__(self, S, d=None):
        S = _check_square(S)
        omega = symplectic_form(S.shape[0] // 2)
        if np.max(np.abs(S.dot(omega).dot(S.T) - omega)) > \
                names.SYMPLECTIC_TOL:
            raise PhysicalityError("Matrix is not symplectic")

        if d is None:
            d = np.zeros(S.shape[0])
        d = np.asarray(d, dtype=float)
        if d.shape != (S.shape[0],):
            raise ValueError("Displacement of shape {} does not match "
                             "matrix of shape {}".format(d.shape, S.shape))

        self._S = _frozen(S)
        self._d = _frozen(d)

    def __repr__(self):
        return "<SymplecticOp({} modes)>".format(self.n_modes)

    @property
    def S(self):
        return self._S

    @property
    def d(self):
        return self._d

    @property
    def n_modes(self):
        return self._S.shape[0] // 2

    def compose(self, other):
        """The op applying `other` first, then this one."""
        if other.n_modes != self.n_modes:
            raise ValueError("Cannot compose ops on {} and {} "
                             "modes".format(self.n_modes, other.n_modes))
        return SymplecticOp(self._S.dot(other.S),
                            self._S.dot(other.d) + self._d)


def _embed(block, modes, n_modes):
    """Identity on `n_modes` with `block` acting on `modes`."""
    layout = QuadratureLayout(n_modes)
    if len(set(modes)) != len(modes):
        raise ValueError("Mode indices must be distinct, "
                         "not {}".format(tuple(modes)))
    idx = layout.indices(modes)
    S = np.eye(layout.dim)
    S[np.ix_(idx, idx)] = block
    return S


def _n_modes_for(modes, n_modes):
    if n_modes is None:
        n_modes = max(modes) + 1
    return n_modes


def identity(n_modes):
    return SymplecticOp(np.eye(2 * n_modes))


def displacement(d, mode=None, n_modes=None):
    """Phase-space translation.

    Parameters
    ----------
    d : array_like
        Full displacement vector of length 2n if `mode` is ``None``;
        otherwise the ``(x, p)`` displacement of `mode`.
    mode : int, optional
        Mode receiving the displacement.
    n_modes : int, optional
        Total number of modes; defaults to ``mode + 1``.
    """
    d = np.asarray(d, dtype=float)
    if mode is None:
        return SymplecticOp(np.eye(d.shape[0]), d)

    n_modes = _n_modes_for([mode], n_modes)
    layout = QuadratureLayout(n_modes)
    full = np.zeros(layout.dim)
    full[layout.indices([mode])] = d
    return SymplecticOp(np.eye(layout.dim), full)


def single_mode_squeezer(r, mode=0, n_modes=None):
    """Squeezer ``diag(exp(-r), exp(r))`` on `mode`; squeezes x for r > 0."""
    if not np.isfinite(r):
        raise ValueError("Squeezing parameter must be finite")
    block = np.diag([np.exp(-r), np.exp(r)])
    return SymplecticOp(_embed(block, [mode], _n_modes_for([mode], n_modes)))


def two_mode_squeezer(r, mode_a=0, mode_b=1, n_modes=None):
    """Two-mode squeezer; on the vacuum it gives the state squeezed in
    ``(x_a + x_b)/sqrt(2)`` and ``(p_a - p_b)/sqrt(2)``."""
    if not np.isfinite(r):
        raise ValueError("Squeezing parameter must be finite")
    ch, sh = np.cosh(r), np.sinh(r)
    z = np.diag([1., -1.])
    block = np.block([[ch * np.eye(2), -sh * z],
                      [-sh * z, ch * np.eye(2)]])
    modes = [mode_a, mode_b]
    return SymplecticOp(_embed(block, modes, _n_modes_for(modes, n_modes)))


def beam_splitter(theta, mode_a=0, mode_b=1, n_modes=None):
    """Beam splitter with transmissivity ``cos(theta)**2``.

    The transmitted amplitude stays on `mode_a`; the reflected amplitude
    enters `mode_b` with a negative sign, so a mean ``(d, 0)`` on `mode_a`
    maps to ``d cos(theta)`` on `mode_a` and ``-d sin(theta)`` on `mode_b`.
    """
    if mode_a == mode_b:
        raise ValueError("Beam splitter needs two distinct modes")
    c, s = np.cos(theta), np.sin(theta)
    block = np.block([[c * np.eye(2), s * np.eye(2)],
                      [-s * np.eye(2), c * np.eye(2)]])
    modes = [mode_a, mode_b]
    return SymplecticOp(_embed(block, modes, _n_modes_for(modes, n_modes)))


def phase_shift(phi, mode=0, n_modes=None):
    """Rotation by `phi` in the (x, p) plane of `mode`."""
    c, s = np.cos(phi), np.sin(phi)
    block = np.array([[c, s], [-s, c]])
    return SymplecticOp(_embed(block, [mode], _n_modes_for([mode], n_modes)))


def vacuum(n_modes):
    """The n-mode vacuum: zero mean, identity covariance."""
    layout = QuadratureLayout(n_modes)
    return GaussianState(np.zeros(layout.dim), np.eye(layout.dim),
                         check=False)


def thermal(n_modes, nbar):
    """Thermal state with mean photon number `nbar` in every mode."""
    if nbar < 0:
        raise ValueError("Mean photon number must be non-negative")
    layout = QuadratureLayout(n_modes)
    return GaussianState(np.zeros(layout.dim),
                         (2 * nbar + 1) * np.eye(layout.dim), check=False)


def apply(op, state):
    """Apply a Gaussian unitary to a state."""
    if op.n_modes != state.n_modes:
        raise ValueError("Op on {} modes cannot act on a state of {} "
                         "modes".format(op.n_modes, state.n_modes))
    S = op.S
    cov = S.dot(state.cov).dot(S.T)
    cov = 0.5 * (cov + cov.T)
    return GaussianState(S.dot(state.mean) + op.d, cov, check=False)


def squeezed_state(r, d=0.0):
    """The single-mode squeezed coherent state with x-mean `d`."""
    state = apply(single_mode_squeezer(r), vacuum(1))
    return apply(displacement([d, 0.0]), state)


def tmsv(r):
    """The two-mode squeezed vacuum."""
    return apply(two_mode_squeezer(r), vacuum(2))


def tensor(a, b):
    """Direct sum of the moments of two states."""
    return GaussianState(np.concatenate([a.mean, b.mean]),
                         linalg.block_diag(a.cov, b.cov), check=False)


def append_vacuum(state, n_modes=1):
    return tensor(state, vacuum(n_modes))


def partial_trace(state, keep_modes):
    """Reduced state on `keep_modes`, in the order given."""
    keep_modes = list(keep_modes)
    if not keep_modes:
        raise ValueError("Must keep at least one mode")
    idx = state.layout.indices(keep_modes)
    if len(set(keep_modes)) != len(keep_modes):
        raise ValueError("Kept modes must be distinct")
    return GaussianState(state.mean[idx], state.cov[np.ix_(idx, idx)],
                         check=False)


def is_valid_cm(cov, tol=names.PHYSICALITY_TOL):
    """Whether ``cov + i Omega`` is positive semidefinite within `tol`.

    Raises :exc:`ValueError` for non-symmetric input.
    """
    cov = _check_symmetric(cov)
    omega = symplectic_form(cov.shape[0] // 2)
    return np.linalg.eigvalsh(cov + 1j * omega).min() >= -tol


def symplectic_eigenvalues(cov):
    """Symplectic eigenvalues of `cov`, ascending, one per mode."""
    cov = _check_symmetric(cov)
    omega = symplectic_form(cov.shape[0] // 2)
    ev = np.sort(np.abs(np.linalg.eigvals(1j * omega.dot(cov))))
    return ev[::2]


def is_pure(cov, tol=names.PURITY_TOL):
    """Whether every symplectic eigenvalue of `cov` equals one."""
    return bool(np.all(np.abs(symplectic_eigenvalues(cov) - 1) <= tol))


def wigner(state, point):
    """Wigner function of `state` at phase-space `point`.

    Normalized to unit integral over phase space; with vacuum covariance
    ``1`` the vacuum takes ``1/(2 pi)`` at the origin. `point` may stack
    several points along its leading axes.
    """
    point = np.asarray(point, dtype=float)
    if point.shape[-1:] != state.mean.shape:
        raise ValueError("Point of shape {} does not match state of {} "
                         "modes".format(point.shape, state.n_modes))
    sign, logdet = np.linalg.slogdet(state.cov)
    if sign <= 0 or not np.isfinite(logdet):
        raise ValueError("Wigner function undefined for singular "
                         "covariance")
    delta = point - state.mean
    quad = np.einsum('...i,ij,...j->...', delta, np.linalg.inv(state.cov),
                     delta)
    value = np.exp(-0.5 * quad - 0.5 * logdet) / \
        (2 * np.pi) ** state.n_modes
    return value if value.ndim else float(value)


def overlap(a, b):
    """``Tr[rho_a rho_b]`` for two Gaussian states (mixed allowed)."""
    if a.n_modes != b.n_modes:
        raise ValueError("Cannot overlap states of {} and {} "
                         "modes".format(a.n_modes, b.n_modes))
    total = a.cov + b.cov
    delta = a.mean - b.mean
    quad = delta.dot(np.linalg.solve(total, delta))
    value = 2 ** a.n_modes / np.sqrt(np.linalg.det(total)) * \
        np.exp(-0.5 * quad)
    return float(min(max(value, 0.0), 1.0))


def pure_overlap(a, b):
    """``|<psi_a|psi_b>|**2`` for two pure Gaussian states."""
    if not (is_pure(a.cov) and is_pure(b.cov)):
        raise ValueError("pure_overlap requires pure states; use the "
                         "mixture fidelity for mixed states")
    return overlap(a, b)
