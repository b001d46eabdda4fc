import numpy as np
import pytest

from pickseg.errors import (DegenerateInput, DegenerateWeights,
                            EmptyObservations, SeriesTooShort)
from pickseg.kinematics import PoseSeries
from pickseg.resample import (KernelConfig, VelocityResampler, VelocitySeries,
                              central_diff, differentiate, nw_estimate,
                              resample_pose, sup_normalize)


class TestNwEstimate:
    def test_constant_series(self):
        t = np.linspace(0, 1, 11)
        assert nw_estimate(t, np.ones(11), 0.37, 0.05) == pytest.approx(1.0)

    def test_symmetric_weights(self):
        assert nw_estimate([0.0, 1.0], [0.0, 2.0], 0.5, 0.2) \
            == pytest.approx(1.0)

    def test_single_observation(self):
        assert nw_estimate([0.3], [1.7], 0.31, 0.05) == pytest.approx(1.7)

    def test_empty_observations(self):
        with pytest.raises(EmptyObservations):
            nw_estimate([], [], 0.0, 0.05)

    def test_degenerate_weights(self):
        with pytest.raises(DegenerateWeights):
            nw_estimate([0.0], [1.0], 1e6, 1e-3)

    def test_convex_combination(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            t = np.sort(rng.uniform(0, 5, size=20))
            y = rng.normal(size=20)
            query = rng.uniform(0, 5)
            est = nw_estimate(t, y, query, 0.1)
            assert y.min() - 1e-12 <= est <= y.max() + 1e-12

    def test_linearity_in_observations(self):
        rng = np.random.default_rng(1)
        t = np.sort(rng.uniform(0, 3, size=15))
        y, z = rng.normal(size=15), rng.normal(size=15)
        a, b = 2.5, -1.3
        lhs = nw_estimate(t, a * y + b * z, 1.1, 0.2)
        rhs = a * nw_estimate(t, y, 1.1, 0.2) + b * nw_estimate(t, z, 1.1, 0.2)
        assert lhs == pytest.approx(rhs, abs=1e-12)


def constant_pose_series(duration=3.0, rate=500.0):
    t = np.arange(int(duration * rate) + 1) / rate
    p = np.tile([0.1, -0.2, 0.3], (len(t), 1))
    q = np.tile([1.0, 0, 0, 0], (len(t), 1))
    return PoseSeries(t, p, q)


class TestResamplePose:
    def test_constant_pose(self):
        out = resample_pose(constant_pose_series(), KernelConfig())
        assert len(out) == 61
        assert np.allclose(out.p, [0.1, -0.2, 0.3])
        assert np.allclose(out.q, [1, 0, 0, 0])

    def test_grid_size(self):
        out = resample_pose(constant_pose_series(3.0, 500),
                            KernelConfig(output_rate=20.0))
        assert len(out) == 61

    def test_too_short(self):
        t = np.array([0.0, 0.01])
        series = PoseSeries(t, np.zeros((2, 3)), np.tile([1.0, 0, 0, 0], (2, 1)))
        with pytest.raises(SeriesTooShort):
            resample_pose(series, KernelConfig())

    def test_linear_ramp_matches_brute_force(self):
        t = np.arange(0, 1501) / 500.0
        p = np.column_stack([0.1 * t, np.zeros_like(t), np.zeros_like(t)])
        q = np.tile([1.0, 0, 0, 0], (len(t), 1))
        out = resample_pose(PoseSeries(t, p, q), KernelConfig(sigma=0.05))
        interior = slice(3, -3)
        expected = 0.1 * out.t[interior]
        assert np.abs(out.p[interior, 0] - expected).max() \
            <= 0.02 * expected.max()
        # direct kernel-average oracle at every grid point
        for k in range(len(out)):
            brute = nw_estimate(t, 0.1 * t, out.t[k], 0.05)
            assert out.p[k, 0] == pytest.approx(brute, abs=1e-12)


class TestCentralDiff:
    def test_constant(self):
        assert np.allclose(central_diff(np.full(10, 3.3), 0.05),
                           np.zeros(10), atol=1e-12)

    def test_linear_exact(self):
        t = np.arange(20) * 0.05
        d = central_diff(3.0 * t, 0.05)
        assert np.abs(d - 3.0).max() < 1e-9

    def test_quadratic_exact(self):
        t = np.arange(41) * 0.05
        d = central_diff(t ** 2, 0.05)
        assert np.abs(d - 2 * t).max() < 1e-9  # incl. one-sided endpoints

    def test_too_short(self):
        with pytest.raises(SeriesTooShort):
            central_diff([1.0, 2.0], 0.1)


class TestDifferentiate:
    def test_constant_pose_zero_velocity(self):
        t = np.arange(61) / 20.0
        series = PoseSeries(t, np.ones((61, 3)),
                            np.tile([1.0, 0, 0, 0], (61, 1)))
        vs = differentiate(series)
        assert np.abs(vs.v).max() <= 1e-12
        assert vs.sup_translational == 0.0
        assert vs.sup_angular == 0.0

    def test_pure_translation(self):
        t = np.arange(61) / 20.0
        p = np.column_stack([0.1 * t, np.zeros_like(t), np.zeros_like(t)])
        series = PoseSeries(t, p, np.tile([1.0, 0, 0, 0], (61, 1)))
        vs = differentiate(series)
        assert np.abs(vs.v[1:-1] - [0.1, 0, 0, 0, 0, 0]).max() < 1e-6

    def test_constant_rotation_rate(self):
        # analytic quaternion path about x at 0.5 rad/s
        t = np.arange(61) / 20.0
        q = np.column_stack([np.cos(0.25 * t), np.sin(0.25 * t),
                             np.zeros_like(t), np.zeros_like(t)])
        series = PoseSeries(t, np.zeros((61, 3)), q)
        vs = differentiate(series)
        assert np.abs(vs.v[1:-1, 3:] - [0.5, 0, 0]).max() < 1e-3


def velocity_series(v, rate=20.0):
    v = np.asarray(v, dtype=float)
    t = np.arange(len(v)) / rate
    return VelocitySeries.from_arrays(t, v, rate)


class TestSupNormalize:
    def test_both_groups_normalized(self):
        v = np.zeros((40, 6))
        v[10, 0] = 0.2
        v[20, 4] = -0.5
        out = sup_normalize(velocity_series(v))
        assert out.sup_translational == pytest.approx(1.0)
        assert out.sup_angular == pytest.approx(1.0)

    def test_idempotent(self):
        rng = np.random.default_rng(2)
        v = rng.normal(size=(50, 6))
        once = sup_normalize(velocity_series(v))
        twice = sup_normalize(once)
        assert np.abs(once.v - twice.v).max() < 1e-12

    def test_pure_translation_leaves_angular(self):
        v = np.zeros((40, 6))
        v[:, 1] = 0.3
        out = sup_normalize(velocity_series(v))
        assert np.allclose(out.v[:, 1], 1.0)
        assert np.array_equal(out.v[:, 3:], np.zeros((40, 3)))

    def test_motionless_rejected(self):
        with pytest.raises(DegenerateInput):
            sup_normalize(velocity_series(np.zeros((30, 6))))

    def test_extrema_structure_preserved(self):
        rng = np.random.default_rng(3)
        v = rng.normal(size=(60, 6))
        out = sup_normalize(velocity_series(v))
        for axis in range(6):
            assert np.argmax(np.abs(out.v[:, axis])) \
                == np.argmax(np.abs(v[:, axis]))
            assert np.all(np.sign(out.v[:, axis]) == np.sign(v[:, axis]))


class TestVelocityResampler:
    def test_sklearn_params_roundtrip(self):
        est = VelocityResampler(sigma=0.1, output_rate=10.0)
        assert est.get_params() == {"sigma": 0.1, "output_rate": 10.0}
        est.set_params(sigma=0.2)
        assert est.get_params()["sigma"] == 0.2

    def test_transform_pose_series(self):
        series = constant_pose_series()
        vs = VelocityResampler().fit().transform(series)
        assert isinstance(vs, VelocitySeries)
        assert len(vs) == 61
        assert np.abs(vs.v).max() < 1e-9
