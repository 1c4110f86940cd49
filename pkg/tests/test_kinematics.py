import numpy as np
import pytest

from hullmpc.errors import InvalidLink, SingularParameterization
from hullmpc.geometry import HomTransform, rotation_about
from hullmpc.kinematics import (ControlInput, Joint, JointLimits,
                                SystemState, ee_transform, euler_step,
                                euler_xyz_from_matrix, forward_kinematics,
                                jacobian_end_effector, jacobian_point,
                                joint_transforms, matrix_from_euler_xyz,
                                state_from_q, velocity_kinematics)
from hullmpc.models import plate_robot, reference_carm

MODEL = reference_carm()


def fk_angles(q):
    return forward_kinematics(MODEL, q)[1]


class TestEulerAngles:
    def test_round_trip(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            ang = rng.uniform(-1.3, 1.3, 3)
            back = euler_xyz_from_matrix(matrix_from_euler_xyz(ang))
            assert np.allclose(back, ang, atol=1e-12)

    def test_rotation_validity(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            q = rng.uniform(-2, 2, 3)
            for H in joint_transforms(MODEL, q):
                assert np.allclose(H.rotation.T @ H.rotation, np.eye(3), atol=1e-9)


class TestForwardKinematics:
    def test_zero_configuration(self):
        tfs, x_e = forward_kinematics(MODEL, [0, 0, 0])
        assert np.allclose(x_e, 0, atol=1e-12)
        # link poses equal the composed nominal offsets
        H = HomTransform.identity()
        expected = []
        for joint in MODEL.joints:
            H = H @ joint.origin
            expected.append(H)
        for link, tf in zip(MODEL.links, tfs):
            ref = expected[link.joint]
            assert np.allclose(tf.rotation, ref.rotation, atol=1e-12)
            assert np.allclose(tf.translation, ref.translation, atol=1e-12)

    def test_first_joint_quarter_turn(self):
        # EE rotation equals the nominal one pre-rotated by pi/2 about joint-1 axis
        R_nominal = ee_transform(MODEL, [0, 0, 0]).rotation
        R = ee_transform(MODEL, [np.pi / 2, 0, 0]).rotation
        R_expected = rotation_about(MODEL.joints[0].axis, np.pi / 2) @ R_nominal
        assert np.allclose(R, R_expected, atol=1e-12)

    def test_total_outside_position_limits(self):
        q = MODEL.limits.position[:, 1] + 1.0  # outside upper bounds
        tfs, x_e = forward_kinematics(MODEL, q)
        assert np.all(np.isfinite(x_e))

    def test_state_from_q_is_consistent(self):
        st = state_from_q(MODEL, [0.3, -0.2, 0.5])
        assert np.allclose(st.x_e, fk_angles(st.q), atol=1e-9)


class TestEndEffectorJacobian:
    def test_zero_configuration_columns_are_axes(self):
        J = jacobian_end_effector(MODEL, [0, 0, 0])
        axes = np.column_stack([j.axis for j in MODEL.joints])
        assert np.allclose(J, axes, atol=1e-12)

    def test_linearity_at_zero_input(self):
        J = jacobian_end_effector(MODEL, [0.2, 0.1, -0.4])
        assert np.allclose(J @ np.zeros(3), 0)

    def test_finite_difference_agreement(self):
        rng = np.random.default_rng(2)
        checked = 0
        while checked < 100:
            q = rng.uniform(-1.0, 1.0, 3)
            try:
                J = jacobian_end_effector(MODEL, q)
            except SingularParameterization:
                continue
            delta = rng.normal(size=3)
            delta *= 1e-6 / np.linalg.norm(delta)
            # forward difference per the stated example
            diff = fk_angles(q + delta) - fk_angles(q)
            assert np.linalg.norm(J @ delta - diff) <= 1e-5
            # central difference, relative
            h = 1e-6
            J_fd = np.column_stack([
                (fk_angles(q + h * e) - fk_angles(q - h * e)) / (2 * h)
                for e in np.eye(3)])
            assert np.linalg.norm(J - J_fd) <= 1e-5 * max(1.0, np.linalg.norm(J))
            checked += 1

    def test_singularity_raises(self):
        # chain axes (z, x, y): phi_y = asin(cos q2 * sin q3) locks at q3 = pi/2
        with pytest.raises(SingularParameterization):
            jacobian_end_effector(MODEL, [0, 0, np.pi / 2])

    def test_jacobian_varies_with_configuration(self):
        J0 = jacobian_end_effector(MODEL, [0, 0, 0])
        J1 = jacobian_end_effector(MODEL, [0.3, 0.2, -0.4])
        assert not np.allclose(J0, J1, atol=1e-6)


class TestPointJacobian:
    def test_zero_lever_arm(self):
        # point at the last joint's origin: its column vanishes
        J = jacobian_point(MODEL, [0.1, -0.2, 0.3], np.zeros(3), 2)
        assert np.allclose(J[:, 2], 0, atol=1e-12)

    def test_downstream_joints_contribute_zero(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            q = rng.uniform(-1, 1, 3)
            r = rng.uniform(-0.5, 0.5, 3)
            J0 = jacobian_point(MODEL, q, r, 0)
            assert np.allclose(J0[:, 1:], 0)
            J1 = jacobian_point(MODEL, q, r, 1)
            assert np.allclose(J1[:, 2], 0)

    def test_finite_difference_agreement(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            q = rng.uniform(-1.2, 1.2, 3)
            r = rng.uniform(-0.6, 0.6, 3)
            link = int(rng.integers(0, 3))
            J = jacobian_point(MODEL, q, r, link)
            h = 1e-6

            def pos(qq):
                return joint_transforms(MODEL, qq)[MODEL.links[link].joint].apply(r)

            J_fd = np.column_stack([(pos(q + h * e) - pos(q - h * e)) / (2 * h)
                                    for e in np.eye(3)])
            assert np.linalg.norm(J - J_fd) <= 1e-5 * max(1.0, np.linalg.norm(J))

    def test_invalid_link(self):
        with pytest.raises(InvalidLink):
            jacobian_point(MODEL, [0, 0, 0], np.zeros(3), 5)


class TestEulerStep:
    def setup_method(self):
        self.f = velocity_kinematics(MODEL)
        self.x0 = state_from_q(MODEL, [0.1, 0.2, -0.1]).as_vector()

    def test_zero_input_is_identity(self):
        x1 = euler_step(self.x0, np.zeros(3), 0.1, self.f)
        assert np.allclose(x1, self.x0)

    def test_step_is_ts_times_f(self):
        u = np.array([0.1, -0.2, 0.3])
        x1 = euler_step(self.x0, u, 0.1, self.f)
        assert np.allclose(x1 - self.x0, 0.1 * self.f(self.x0, u), atol=1e-15)

    def test_half_steps_against_fine_integration(self):
        u = np.array([0.3, 0.25, -0.2])
        Ts = 0.1
        full = euler_step(self.x0, u, Ts, self.f)
        half = euler_step(euler_step(self.x0, u, Ts / 2, self.f), u, Ts / 2, self.f)
        # fine reference integration at 1e-4 steps
        x = self.x0.copy()
        n = int(Ts / 1e-4)
        for _ in range(n):
            x = euler_step(x, u, 1e-4, self.f)
        err_full = np.linalg.norm(full - x)
        err_half = np.linalg.norm(half - x)
        assert err_half < err_full           # halving shrinks the O(Ts^2) error
        assert err_full < 10 * 0.5 * np.linalg.norm(u) ** 2 * Ts ** 2

    def test_nonpositive_ts_rejected(self):
        with pytest.raises(ValueError):
            euler_step(self.x0, np.zeros(3), 0.0, self.f)


class TestModelValidation:
    def test_reference_model_shape(self):
        assert len(MODEL.joints) == 3
        assert MODEL.hull_count == 13
        for j in MODEL.joints:
            assert abs(np.linalg.norm(j.axis) - 1.0) <= 1e-12
        assert np.all(MODEL.limits.position[:, 0] < MODEL.limits.position[:, 1])

    def test_plate_model(self):
        m = plate_robot()
        assert m.hull_count == 1
        _, x_e = forward_kinematics(m, [0, 0, 0])
        assert np.allclose(x_e, 0, atol=1e-12)

    def test_bad_axis_rejected(self):
        with pytest.raises(ValueError):
            Joint(HomTransform.identity(), np.array([0.0, 0.0, 2.0]))

    def test_unordered_limits_rejected(self):
        with pytest.raises(ValueError):
            JointLimits(position=[[1, -1]] * 3, velocity=[[-1, 1]] * 3,
                        acceleration=[[-1, 1]] * 3, jerk=[[-1, 1]] * 3)

    def test_state_and_input_validation(self):
        with pytest.raises(ValueError):
            SystemState([np.nan, 0, 0], [0, 0, 0])
        with pytest.raises(ValueError):
            ControlInput([np.inf, 0, 0])
        v = SystemState([1, 2, 3], [4, 5, 6]).as_vector()
        assert np.allclose(v, [1, 2, 3, 4, 5, 6])
