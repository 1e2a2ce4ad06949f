"""Tests for Gaussian mixtures and post-selected homodyne conditioning.

"""
import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import erf
from scipy.stats import truncnorm

from cvdistil import symplectic as sp
from cvdistil import mixture as mx
from cvdistil.tests import data


@pytest.fixture
def noisy():
    return data.noisy_squeezed(0.7, 0.5, 10.0)


class TestGaussianMixture:

    def test_from_state(self):
        m = mx.GaussianMixture.from_state(sp.vacuum(1))
        assert len(m) == 1
        assert m.normalized
        assert m.total_weight == 1.0

    def test_empty(self):
        with pytest.raises(ValueError):
            mx.GaussianMixture([])

    @pytest.mark.parametrize('w', [0.0, -0.5, np.nan])
    def test_bad_weight(self, w):
        with pytest.raises(ValueError):
            mx.GaussianMixture([(w, sp.vacuum(1)), (1 - w, sp.vacuum(1))],
                               normalized=False)

    def test_mode_mismatch(self):
        with pytest.raises(ValueError):
            mx.GaussianMixture([(0.5, sp.vacuum(1)), (0.5, sp.vacuum(2))])

    def test_not_normalized(self):
        with pytest.raises(ValueError):
            mx.GaussianMixture([(0.5, sp.vacuum(1))])

    def test_subnormalized(self):
        m = mx.GaussianMixture([(0.5, sp.vacuum(1))], normalized=False)
        assert m.norm_flag == 'subnormalized'
        with pytest.raises(ValueError):
            mx.GaussianMixture([(0.7, sp.vacuum(1)), (0.7, sp.vacuum(1))],
                               normalized=False)

    def test_iter(self, noisy):
        weights = [w for w, _ in noisy]
        assert_allclose(weights, [0.5, 0.5])
        assert noisy.n_modes == 1

    def test_validate(self):
        bad = sp.GaussianState(np.zeros(2), 0.5 * np.eye(2), check=False)
        m = mx.GaussianMixture.from_state(bad)
        with pytest.raises(sp.PhysicalityError):
            m.validate()

    def test_immutable_weights(self, noisy):
        with pytest.raises(ValueError):
            noisy.weights[0] = 0.1


class TestHomodyneSpec:

    def test_x(self):
        spec = mx.HomodyneSpec.x(1, 3, (-1, 1))
        assert_allclose(spec.functional, [0, 0, 1, 0, 0, 0])
        assert spec.measured_modes == (1,)
        assert spec.kept_modes == (0, 2)
        assert list(spec.kept_indices) == [0, 1, 4, 5]
        assert not spec.degenerate

    def test_x_plus(self):
        spec = mx.HomodyneSpec.x_plus(0, 1, 4, (-1, 1))
        assert_allclose(spec.functional,
                        np.array([1, 0, 1, 0, 0, 0, 0, 0]) / np.sqrt(2))
        assert spec.kept_modes == (2, 3)

    def test_support_outside_measured(self):
        with pytest.raises(ValueError):
            mx.HomodyneSpec([1, 0, 1, 0], (-1, 1), [1])

    def test_zero_functional(self):
        with pytest.raises(ValueError):
            mx.HomodyneSpec([0, 0, 0, 0], (-1, 1), [1])

    def test_odd_functional(self):
        with pytest.raises(ValueError):
            mx.HomodyneSpec([1, 0, 0], (-1, 1), [0])

    @pytest.mark.parametrize('interval', [(1, -1), (np.inf, np.inf),
                                          (np.nan, 1)])
    def test_empty_interval(self, interval):
        with pytest.raises(mx.PostSelectionError):
            mx.HomodyneSpec.x(1, 2, interval)

    def test_degenerate(self):
        spec = mx.HomodyneSpec.x(1, 2, (0.5, 0.5))
        assert spec.degenerate
        assert spec.with_interval((0, 1)).accept_interval == (0.0, 1.0)


class TestGridPolicy:

    def test_nodes(self):
        nodes, weights = mx.GridPolicy(16).nodes(-2.0, 3.0)
        assert weights.sum() == pytest.approx(5.0)
        assert np.all((nodes > -2) & (nodes < 3))
        # exact for polynomials of degree < 2 * points
        assert weights.dot(nodes ** 5) == pytest.approx((3. ** 6 - 2. ** 6)
                                                        / 6)

    @pytest.mark.parametrize('kwargs', [{'points': 0},
                                        {'support_sigmas': 0}])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            mx.GridPolicy(**kwargs)


class TestOps:

    def test_apply_op(self, noisy):
        out = mx.apply_op(sp.displacement([-1.0, 0.0]), noisy)
        assert_allclose([s.mean[0] for s in out.states],
                        [s.mean[0] - 1 for s in noisy.states])
        assert_allclose(out.weights, noisy.weights)

    def test_tensor(self, noisy):
        joint = mx.tensor_mix(noisy, noisy)
        assert len(joint) == 4
        assert joint.n_modes == 2
        assert joint.total_weight == pytest.approx(1.0)

    def test_partial_trace(self):
        m = data.noisy_tmsv(0.7, 0.5, 10.0)
        reduced = mx.partial_trace_mix(m, [1])
        assert reduced.n_modes == 1
        assert_allclose([s.mean[0] for s in reduced.states], [0, 0])

    def test_append_vacuum(self, noisy):
        m = mx.append_vacuum_mix(noisy, 2)
        assert m.n_modes == 3


class TestMoments:

    def test_variance(self, noisy):
        r, p = 0.7, 0.5
        sigma = np.exp(-2 * r)
        d = 10.0 * sigma
        assert mx.quadrature_variance(noisy, [1, 0]) == \
            pytest.approx(sigma + p * (1 - p) * d ** 2)

    def test_mean(self, noisy):
        mean, cov = mx.moments(noisy)
        assert mean[0] == pytest.approx(0.5 * 10.0 * np.exp(-1.4))
        assert_allclose(cov, cov.T)

    def test_subnormalized(self):
        m = mx.GaussianMixture([(0.3, sp.squeezed_state(0.5))],
                               normalized=False)
        with pytest.raises(ValueError):
            mx.moments(m)
        _, cov = mx.moments(m, renormalize=True)
        assert_allclose(cov, sp.squeezed_state(0.5).cov)

    def test_fidelity(self, noisy):
        r, p, ratio = 0.7, 0.5, 10.0
        sigma = np.exp(-2 * r)
        expected = 1 - p + p * np.exp(-ratio ** 2 * sigma / 4)
        assert mx.fidelity_to_pure(noisy, sp.squeezed_state(r)) == \
            pytest.approx(expected)

    def test_fidelity_affine(self):
        a = data.noisy_squeezed(0.7, 0.2, 5.0)
        b = data.noisy_squeezed(0.7, 0.9, 15.0)
        target = sp.squeezed_state(0.7)
        mixed = mx.merge(a, b, alpha=0.3)
        assert mx.fidelity_to_pure(mixed, target) == pytest.approx(
            0.3 * mx.fidelity_to_pure(a, target) +
            0.7 * mx.fidelity_to_pure(b, target))

    def test_fidelity_needs_pure_target(self, noisy):
        with pytest.raises(ValueError):
            mx.fidelity_to_pure(noisy, sp.thermal(1, 0.1))


class TestHomodyneCondition:

    def test_exact_path(self):
        m = mx.GaussianMixture.from_state(
            sp.tensor(sp.squeezed_state(0.7), sp.vacuum(1)))
        spec = mx.HomodyneSpec.x(1, 2, (-1, 1))
        out, success = mx.homodyne_condition(m, spec, path='exact')

        assert success == pytest.approx(erf(1 / np.sqrt(2)))
        assert len(out) == 1
        assert not out.normalized
        assert out.total_weight == pytest.approx(success)
        assert out.states[0].is_close(sp.squeezed_state(0.7))

    def test_renormalize(self):
        m = mx.GaussianMixture.from_state(
            sp.tensor(sp.squeezed_state(0.7), sp.vacuum(1)))
        spec = mx.HomodyneSpec.x(1, 2, (-1, 1))
        out, _ = mx.homodyne_condition(m, spec, renormalize=True)
        assert out.normalized

    def test_exact_rejects_correlated(self):
        m = mx.GaussianMixture.from_state(sp.tmsv(0.5))
        spec = mx.HomodyneSpec.x(1, 2, (-1, 1))
        with pytest.raises(mx.PostSelectionError):
            mx.homodyne_condition(m, spec, path='exact')

    def test_point(self):
        m = mx.GaussianMixture.from_state(sp.tmsv(0.5))
        spec = mx.HomodyneSpec.x(1, 2, (0.0, 0.0))
        out, success = mx.homodyne_condition(m, spec)

        assert success == 0.0
        assert out.normalized
        assert_allclose(out.states[0].cov,
                        np.diag([1 / np.cosh(1.), np.cosh(1.)]))
        assert_allclose(out.states[0].mean, [0, 0], atol=1e-15)

    def test_point_mean(self):
        r, q = 0.5, 0.8
        m = mx.GaussianMixture.from_state(sp.tmsv(r))
        spec = mx.HomodyneSpec.x(1, 2, (q, q))
        out, _ = mx.homodyne_condition(m, spec)
        # x_0 regresses on x_1 with slope -tanh(2 r)
        assert out.states[0].mean[0] == pytest.approx(-np.tanh(2 * r) * q)

    def test_point_posterior(self, noisy):
        joint = mx.append_vacuum_mix(noisy)
        joint = mx.apply_op(sp.beam_splitter(np.pi / 4, 0, 1), joint)
        spec = mx.HomodyneSpec.x(1, 2, (0.0, 0.0))
        out, success = mx.homodyne_condition(joint, spec)
        assert success == 0.0
        assert out.total_weight == pytest.approx(1.0)
        # the undisplaced branch is favoured at outcome zero
        assert out.weights[0] > out.weights[1]

    def test_grid_interval(self):
        r, a = 0.5, 1.0
        m = mx.GaussianMixture.from_state(sp.tmsv(r))
        spec = mx.HomodyneSpec.x(1, 2, (-a, a))
        out, success = mx.homodyne_condition(m, spec,
                                             grid=mx.GridPolicy(64))

        s = np.sqrt(np.cosh(2 * r))
        assert success == pytest.approx(erf(a / s / np.sqrt(2)))
        assert len(out) == 64
        assert out.total_weight == pytest.approx(success)

        slope = np.tanh(2 * r)
        trunc = truncnorm(-a / s, a / s, scale=s).var()
        mean, cov = mx.moments(out, renormalize=True)
        assert_allclose(mean, [0, 0], atol=1e-10)
        assert cov[0, 0] == pytest.approx(1 / np.cosh(2 * r) +
                                          slope ** 2 * trunc, rel=1e-6)
        assert cov[1, 1] == pytest.approx(np.cosh(2 * r), rel=1e-9)

    def test_grid_forced(self):
        m = mx.GaussianMixture.from_state(
            sp.tensor(sp.squeezed_state(0.7), sp.vacuum(1)))
        spec = mx.HomodyneSpec.x(1, 2, (-1, 1))
        out, success = mx.homodyne_condition(m, spec, path='grid',
                                             grid=mx.GridPolicy(8))
        assert len(out) == 8
        assert out.total_weight == pytest.approx(success)
        for state in out.states:
            assert state.is_close(sp.squeezed_state(0.7))

    def test_grid_valid_branches(self):
        rng = np.random.RandomState(5)
        for _ in range(10):
            state = data.random_state(rng, 3)
            m = mx.GaussianMixture.from_state(state)
            spec = mx.HomodyneSpec.x_plus(0, 2, 3, (-0.5, 1.5))
            out, _ = mx.homodyne_condition(m, spec, grid=mx.GridPolicy(8))
            out.validate()
            assert out.n_modes == 1

    def test_free_set_preserved(self):
        # conditioning never takes a state above vacuum below it
        rng = np.random.RandomState(11)
        for _ in range(200):
            cov = data.above_vacuum(rng, 3)
            branches = [(w, sp.GaussianState(rng.randn(6), cov))
                        for w in rng.dirichlet(np.ones(2))]
            m = mx.GaussianMixture(branches)
            spec = mx.HomodyneSpec.x_plus(0, 2, 3, (-2.0, 2.0))
            out, _ = mx.homodyne_condition(m, spec, grid=mx.GridPolicy(8),
                                           path='grid')
            for state in out.states:
                assert np.linalg.eigvalsh(state.cov).min() >= 1 - 1e-9

    def test_zero_success(self):
        m = mx.GaussianMixture.from_state(sp.vacuum(2))
        spec = mx.HomodyneSpec.x(1, 2, (50, 60))
        with pytest.raises(mx.PostSelectionError):
            mx.homodyne_condition(m, spec)

    def test_requires_normalized(self):
        m = mx.GaussianMixture([(0.5, sp.vacuum(2))], normalized=False)
        with pytest.raises(ValueError):
            mx.homodyne_condition(m, mx.HomodyneSpec.x(1, 2, (-1, 1)))

    def test_must_keep_a_mode(self):
        m = mx.GaussianMixture.from_state(sp.vacuum(1))
        with pytest.raises(ValueError):
            mx.homodyne_condition(m, mx.HomodyneSpec.x(0, 1, (-1, 1)))

    def test_mode_mismatch(self):
        m = mx.GaussianMixture.from_state(sp.vacuum(3))
        with pytest.raises(ValueError):
            mx.homodyne_condition(m, mx.HomodyneSpec.x(1, 2, (-1, 1)))

    def test_unknown_path(self):
        m = mx.GaussianMixture.from_state(sp.vacuum(2))
        with pytest.raises(ValueError):
            mx.homodyne_condition(m, mx.HomodyneSpec.x(1, 2, (-1, 1)),
                                  path='fast')

    def test_regions(self):
        m = mx.GaussianMixture.from_state(sp.tmsv(0.4))
        spec = mx.HomodyneSpec.x(1, 2, (-np.inf, np.inf))
        regions = mx.condition_regions(m, spec, [0.5, -0.5],
                                       grid=mx.GridPolicy(16))
        assert len(regions) == 3
        assert sum(p for _, p in regions) == pytest.approx(1.0)
        s = np.sqrt(np.cosh(0.8))
        assert regions[1][1] == pytest.approx(erf(0.5 / s / np.sqrt(2)))

    def test_regions_empty(self):
        m = mx.GaussianMixture.from_state(sp.vacuum(2))
        spec = mx.HomodyneSpec.x(1, 2, (-np.inf, np.inf))
        regions = mx.condition_regions(m, spec, [60.0])
        assert regions[1] == (None, 0.0)
        assert regions[0][1] == pytest.approx(1.0)


class TestPrune:

    def test_drops_light_branches(self):
        m = mx.GaussianMixture([(1 - 1e-14, sp.vacuum(1)),
                                (1e-14, sp.squeezed_state(0.3))])
        with warnings.catch_warnings():
            warnings.simplefilter('error')
            out = mx.prune(m, 1e-12)
        assert len(out) == 1
        assert out.normalized
        assert out.total_weight == pytest.approx(1.0)

    def test_warns(self):
        m = mx.GaussianMixture([(0.95, sp.vacuum(1)),
                                (0.05, sp.squeezed_state(0.3))])
        with pytest.warns(UserWarning):
            out = mx.prune(m, 0.1)
        assert len(out) == 1

    def test_subnormalized_stays(self):
        m = mx.GaussianMixture([(0.5, sp.vacuum(1)),
                                (1e-20, sp.squeezed_state(0.3))],
                               normalized=False)
        out = mx.prune(m)
        assert not out.normalized
        assert out.total_weight == pytest.approx(0.5)

    def test_zero_tol(self, noisy):
        assert mx.prune(noisy, 0) is noisy

    def test_nothing_left(self, noisy):
        with pytest.raises(mx.PostSelectionError):
            mx.prune(noisy, 2.0)

    def test_negative_tol(self, noisy):
        with pytest.raises(ValueError):
            mx.prune(noisy, -1.0)


class TestMerge:

    def test_convex(self, noisy):
        other = mx.GaussianMixture.from_state(sp.vacuum(1))
        out = mx.merge(noisy, other, alpha=0.25)
        assert len(out) == 3
        assert_allclose(out.weights, [0.125, 0.125, 0.75])

    def test_concatenate(self):
        a = mx.GaussianMixture([(0.4, sp.vacuum(1))], normalized=False)
        b = mx.GaussianMixture([(0.6, sp.thermal(1, 0.1))], normalized=False)
        out = mx.merge(a, b)
        assert out.normalized

    def test_concatenate_partial(self):
        a = mx.GaussianMixture([(0.4, sp.vacuum(1))], normalized=False)
        out = mx.merge(a, a)
        assert not out.normalized
        assert mx.renormalize_mix(out).weights == pytest.approx([0.5, 0.5])

    def test_errors(self, noisy):
        with pytest.raises(ValueError):
            mx.merge(noisy, mx.GaussianMixture.from_state(sp.vacuum(2)))
        with pytest.raises(ValueError):
            mx.merge(noisy, noisy, alpha=1.5)
