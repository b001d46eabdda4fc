import numpy as np
import pytest

from pickseg.errors import NonUnitQuaternion
from pickseg.kinematics import (IDENTITY_QUATERNION, PoseSample, PoseSeries,
                                enforce_sign_continuity, express_in_frame,
                                jq_matrix, quat_conjugate, quat_from_rotvec,
                                quat_multiply, quat_rate_to_omega,
                                quat_to_matrix, skew)


def random_unit_quaternions(n, seed=0):
    rng = np.random.default_rng(seed)
    q = rng.normal(size=(n, 4))
    return q / np.linalg.norm(q, axis=1)[:, None]


class TestSkew:
    def test_zero_vector(self):
        assert np.array_equal(skew([0, 0, 0]), np.zeros((3, 3)))

    def test_basis_vector(self):
        expected = np.array([[0, 0, 0], [0, 0, -1], [0, 1, 0]], dtype=float)
        assert np.array_equal(skew([1, 0, 0]), expected)

    def test_cross_product_identity(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            u, w = rng.normal(size=3), rng.normal(size=3)
            assert np.allclose(skew(u) @ w, np.cross(u, w))

    def test_self_cross_is_zero(self):
        u = np.array([0.3, -1.2, 2.5])
        assert np.allclose(skew(u) @ u, 0.0)

    def test_antisymmetry_exact(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            s = skew(rng.normal(size=3))
            assert np.array_equal(s + s.T, np.zeros((3, 3)))


class TestJqMatrix:
    def test_identity_quaternion(self):
        j = jq_matrix([1, 0, 0, 0])
        assert np.array_equal(j[0], np.zeros(3))
        assert np.array_equal(j[1:], np.eye(3))

    def test_x_half_turn(self):
        j = jq_matrix([0, 1, 0, 0])
        expected = np.array([[-1, 0, 0], [0, 0, 0], [0, 0, -1], [0, 1, 0]],
                            dtype=float)
        assert np.array_equal(j, expected)

    def test_orthonormal_columns(self):
        for q in random_unit_quaternions(200, seed=3):
            err = np.abs(jq_matrix(q).T @ jq_matrix(q) - np.eye(3)).max()
            assert err < 1e-12

    def test_rejects_non_unit(self):
        with pytest.raises(NonUnitQuaternion):
            jq_matrix([1.0, 0.1, 0, 0])


class TestQuatRateToOmega:
    def test_zero_rate(self):
        assert np.array_equal(
            quat_rate_to_omega([1, 0, 0, 0], np.zeros(4)), np.zeros(3))

    def test_identity_case(self):
        omega = quat_rate_to_omega([1, 0, 0, 0], [0, 0.5, 0, 0])
        assert np.allclose(omega, [1, 0, 0])

    def test_roundtrip_at_identity(self):
        q = np.array([1.0, 0, 0, 0])
        qdot = 0.5 * jq_matrix(q) @ np.array([0, 0, 2.0])
        assert np.allclose(quat_rate_to_omega(q, qdot), [0, 0, 2.0])

    def test_roundtrip_random(self):
        rng = np.random.default_rng(4)
        for q in random_unit_quaternions(200, seed=5):
            omega = rng.uniform(-10, 10, size=3)
            qdot = 0.5 * jq_matrix(q) @ omega
            assert np.abs(quat_rate_to_omega(q, qdot) - omega).max() < 1e-12


def make_series(t, p, q):
    return PoseSeries(np.asarray(t), np.asarray(p, dtype=float),
                      np.asarray(q, dtype=float))


class TestSignContinuity:
    def test_identity_series_unchanged(self):
        q = np.tile(IDENTITY_QUATERNION, (5, 1))
        s = make_series(np.arange(5.0), np.zeros((5, 3)), q)
        out = enforce_sign_continuity(s)
        assert np.array_equal(out.q, q)

    def test_single_flip_restored(self):
        q = np.tile(IDENTITY_QUATERNION, (5, 1))
        q[2] = -q[2]
        s = make_series(np.arange(5.0), np.zeros((5, 3)), q)
        out = enforce_sign_continuity(s)
        assert np.allclose(out.q, np.tile(IDENTITY_QUATERNION, (5, 1)))

    def test_rotations_preserved(self):
        rng = np.random.default_rng(6)
        q = random_unit_quaternions(50, seed=7)
        s = make_series(np.arange(50.0), rng.normal(size=(50, 3)), q)
        out = enforce_sign_continuity(s)
        for before, after in zip(s.q, out.q):
            assert np.abs(quat_to_matrix(before)
                          - quat_to_matrix(after)).max() < 1e-12
        dots = np.sum(out.q[:-1] * out.q[1:], axis=1)
        assert np.all(dots >= 0)

    def test_idempotent(self):
        q = random_unit_quaternions(30, seed=8)
        s = make_series(np.arange(30.0), np.zeros((30, 3)), q)
        once = enforce_sign_continuity(s)
        twice = enforce_sign_continuity(once)
        assert np.array_equal(once.q, twice.q)


class TestExpressInFrame:
    def test_identity_frame_is_noop(self):
        q = random_unit_quaternions(10, seed=9)
        s = make_series(np.arange(10.0), np.arange(30.0).reshape(10, 3), q)
        out = express_in_frame(s, PoseSample.identity())
        assert np.allclose(out.p, s.p)
        assert np.allclose(out.q, s.q)

    def test_self_relative_first_sample(self):
        q = random_unit_quaternions(10, seed=10)
        s = make_series(np.arange(10.0), np.arange(30.0).reshape(10, 3), q)
        out = express_in_frame(s, s.sample(0))
        assert np.allclose(out.p[0], 0.0, atol=1e-12)
        assert np.allclose(np.abs(out.q[0] @ IDENTITY_QUATERNION), 1.0)

    def test_inverse_roundtrip(self):
        rng = np.random.default_rng(11)
        q = random_unit_quaternions(20, seed=12)
        s = make_series(np.arange(20.0), rng.normal(size=(20, 3)), q)
        frame = PoseSample(0.0, rng.normal(size=3),
                           random_unit_quaternions(1, seed=13)[0])
        rel = express_in_frame(s, frame)
        # apply the frame transform back by expressing in the inverse frame
        rf = quat_to_matrix(frame.q)
        back_p = rel.p @ rf.T + frame.p
        back_q = np.array([quat_multiply(frame.q, qk) for qk in rel.q])
        assert np.abs(back_p - s.p).max() < 1e-9
        for a, b in zip(back_q, s.q):
            assert min(np.abs(a - b).max(), np.abs(a + b).max()) < 1e-9


class TestQuatHelpers:
    def test_conjugate_inverts(self):
        for q in random_unit_quaternions(20, seed=14):
            prod = quat_multiply(q, quat_conjugate(q))
            assert np.allclose(prod, IDENTITY_QUATERNION, atol=1e-12)

    def test_rotvec_roundtrip(self):
        q = quat_from_rotvec([0.0, 0.0, np.pi / 2])
        r = quat_to_matrix(q)
        assert np.allclose(r @ [1, 0, 0], [0, 1, 0], atol=1e-12)
