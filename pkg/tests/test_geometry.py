import math
import unittest

import logging
# se desabilita el sistema de logs
logging.disable(logging.CRITICAL)

import numpy as np
from scipy.spatial.transform import Rotation

from posebank.core.geometry import (camera_position, enumerate_grid, generate_rays,
                                    grid_bins, grid_index, nearest_bin, pose_index,
                                    pose_to_extrinsics, ray_box_intersection)
from posebank.models.camera import CameraPose, Intrinsics, PoseGrid
from posebank.models.run import grid_preset


class TestCamera(unittest.TestCase):
    def test_camera_position_on_equator(self):
        position = camera_position(CameraPose(theta=0.0, phi=math.pi / 2, r=4.0))
        np.testing.assert_allclose(position, [4.0, 0.0, 0.0], atol=1e-12)

    def test_extrinsics_are_orthonormal_and_look_at_origin(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            pose = CameraPose(theta=rng.uniform(0, 2 * math.pi), phi=rng.uniform(0.1, 3.0),
                              gamma=rng.uniform(-math.pi, math.pi), r=rng.uniform(1, 6))
            extrinsics = pose_to_extrinsics(pose)
            rotation = extrinsics[:3, :3]
            np.testing.assert_allclose(rotation.T @ rotation, np.eye(3), atol=1e-12)
            self.assertAlmostEqual(np.linalg.det(rotation), 1.0, places=12)
            forward = -extrinsics[:3, 3] / np.linalg.norm(extrinsics[:3, 3])
            np.testing.assert_allclose(rotation[:, 2], forward, atol=1e-12)

    def test_in_plane_rotation_matches_rotation_about_optical_axis(self):
        base = CameraPose(theta=0.7, phi=1.2, r=3.0)
        look_at = pose_to_extrinsics(base)[:3, :3]
        forward = look_at[:, 2]
        for gamma in (-2.0, -0.3, 0.4, 1.5):
            rotated = pose_to_extrinsics(base.model_copy(update={'gamma': gamma}))[:3, :3]
            expected = Rotation.from_rotvec(-gamma * forward).as_matrix() @ look_at
            np.testing.assert_allclose(rotated, expected, atol=1e-12)

    def test_pole_pose_is_well_defined(self):
        for phi in (0.0, math.pi):
            rotation = pose_to_extrinsics(CameraPose(theta=1.0, phi=phi, r=2.0))[:3, :3]
            self.assertTrue(np.all(np.isfinite(rotation)))
            np.testing.assert_allclose(rotation.T @ rotation, np.eye(3), atol=1e-12)

    def test_pose_normalization(self):
        pose = CameraPose(theta=-0.5, phi=4.0, gamma=4.0, r=2.0)
        self.assertAlmostEqual(pose.theta, 2 * math.pi - 0.5)
        self.assertEqual(pose.phi, math.pi)
        self.assertAlmostEqual(pose.gamma, 4.0 - 2 * math.pi)


class TestRays(unittest.TestCase):
    def test_center_pixel_looks_along_the_optical_axis(self):
        pose = CameraPose(theta=0.3, phi=1.0, r=4.0)
        extrinsics = pose_to_extrinsics(pose)
        rays = generate_rays(extrinsics, Intrinsics(width=5, height=5))
        np.testing.assert_allclose(rays.directions[2, 2], extrinsics[:3, 2], atol=1e-12)
        np.testing.assert_allclose(np.linalg.norm(rays.directions, axis=-1), 1.0, atol=1e-12)

    def test_top_row_points_up_and_field_of_view_scales_angles(self):
        extrinsics = pose_to_extrinsics(CameraPose(theta=0.0, phi=math.pi / 2, r=4.0))
        tangents = []
        for half_tangent in (0.3, 0.6):
            intrinsics = Intrinsics(fov_y=2 * math.atan(half_tangent), width=4, height=4)
            direction = generate_rays(extrinsics, intrinsics).directions[0, 1]
            down = direction @ extrinsics[:3, 1]
            forward = direction @ extrinsics[:3, 2]
            # la fila 0 esta arriba: la componente "abajo" es negativa
            self.assertLess(down, 0.0)
            self.assertGreater(direction[2], 0.0)
            tangents.append(-down / forward)
        self.assertAlmostEqual(tangents[1] / tangents[0], 2.0, places=12)

    def test_ray_box_intersection(self):
        origins = np.array([[-5.0, 0.0, 0.0], [-5.0, 3.0, 0.0]])
        directions = np.array([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
        t_near, t_far, hit = ray_box_intersection(origins, directions,
                                                  np.full(3, -1.0), np.full(3, 1.0))
        np.testing.assert_allclose(t_near, [4.0, 0.0])
        np.testing.assert_allclose(t_far, [6.0, 0.0])
        np.testing.assert_array_equal(hit, [True, False])

    def test_camera_outside_box_sees_the_box(self):
        extrinsics = pose_to_extrinsics(CameraPose(theta=1.0, phi=1.0, r=4.0))
        rays = generate_rays(extrinsics, Intrinsics(width=16, height=16))
        self.assertTrue(rays.hit[8, 8])
        self.assertTrue(np.all(rays.t_far[rays.hit] > rays.t_near[rays.hit]))
        self.assertEqual(rays.shape, (16, 16))


class TestGrid(unittest.TestCase):
    def test_narrow_and_shapenet_sizes(self):
        self.assertEqual(len(enumerate_grid(grid_preset('narrow'))), 108)
        self.assertEqual(len(enumerate_grid(grid_preset('shapenet'))), 648)

    def test_enumeration_is_phi_major(self):
        grid = PoseGrid(n_theta=4, n_phi=2)
        poses = enumerate_grid(grid)
        self.assertAlmostEqual(poses[1].theta - poses[0].theta, grid.theta_width)
        self.assertAlmostEqual(poses[0].phi, poses[3].phi)
        self.assertGreater(poses[4].phi, poses[3].phi)
        self.assertEqual(grid_index(grid, 1, 1), 5)
        self.assertEqual(grid_bins(grid, 5), (1, 1))

    def test_pose_index_inverts_enumeration(self):
        for name in ('narrow', 'shapenet', 'frontal'):
            grid = grid_preset(name)
            for k, pose in enumerate(enumerate_grid(grid)):
                self.assertEqual(pose_index(grid, pose), k)

    def test_bin_center_poses_use_grid_gamma_and_radius(self):
        grid = PoseGrid(n_theta=2, n_phi=1, gamma_fixed=0.25, r_fixed=3.0)
        for pose in enumerate_grid(grid):
            self.assertAlmostEqual(pose.gamma, 0.25)
            self.assertEqual(pose.r, 3.0)

    def test_nearest_bin_partial_range(self):
        grid = grid_preset('frontal')
        # justo fuera del borde superior y del inferior
        self.assertEqual(nearest_bin(grid, math.pi / 3 + 0.01, math.pi / 2), (35, 0))
        self.assertEqual(nearest_bin(grid, 2 * math.pi - math.pi / 3 - 0.01, math.pi / 2), (0, 0))

    def test_nearest_bin_clamps_phi(self):
        grid = grid_preset('narrow')
        self.assertEqual(nearest_bin(grid, 0.01, 0.0)[1], 0)
        self.assertEqual(nearest_bin(grid, 0.01, math.pi)[1], 2)

    def test_invalid_grid_is_rejected(self):
        with self.assertRaises(ValueError):
            PoseGrid(theta_range=(1.0, 0.5))
        with self.assertRaises(ValueError):
            PoseGrid(n_theta=0)
