import math
import tempfile
import unittest
from pathlib import Path

import logging
# se desabilita el sistema de logs
logging.disable(logging.CRITICAL)

import numpy as np

from posebank.core.field import render
from posebank.core.metrics import kl_divergence, pose_histogram, wrapped_gaussian_bin_probs
from posebank.core.synth import entry_name, make_dataset, make_instance, make_template, sample_gt_pose
from posebank.models.camera import CameraPose, Intrinsics
from posebank.models.field import RenderConfig
from posebank.models.synth import AzimuthComponent, PoseDistSpec, TemplateSpec
from posebank.storage.datasets import INFO_NAME, MANIFEST_NAME, read_dataset

from .fixtures import FAST_RENDER, SMALL_INTRINSICS, logging_enabled


def rms(a, b):
    return float(np.sqrt(np.mean((np.asarray(a, np.float64) - np.asarray(b, np.float64)) ** 2)))


def two_peaks(std_deg=10.0):
    return PoseDistSpec(components=[
        AzimuthComponent(mean=math.radians(90.0), std=math.radians(std_deg), weight=0.5),
        AzimuthComponent(mean=math.radians(270.0), std=math.radians(std_deg), weight=0.5)])


class TestTemplate(unittest.TestCase):
    def test_same_seed_gives_identical_fields(self):
        spec = TemplateSpec(seed=3, dims=(16, 16, 16))
        a, b = make_template(spec), make_template(spec)
        np.testing.assert_array_equal(a.density, b.density)
        np.testing.assert_array_equal(a.feature, b.feature)
        np.testing.assert_array_equal(a.color, b.color)

    def test_feature_modes(self):
        for mode, channels in (('part-id', 3), ('color-copy', 3), ('gray-copy', 1)):
            field = make_template(TemplateSpec(dims=(10, 10, 10), feature_mode=mode))
            self.assertEqual(field.feature_channels, channels)
        field = make_template(TemplateSpec(dims=(10, 10, 10), feature_mode='color-copy'))
        np.testing.assert_array_equal(field.feature, field.color)

    def test_asymmetry_breaks_front_back_ambiguity(self):
        def front_back_gap(asymmetry):
            field = make_template(TemplateSpec(seed=1, dims=(24, 24, 24), asymmetry=asymmetry))
            front = render(field, CameraPose(theta=0.0, r=4.0), SMALL_INTRINSICS, FAST_RENDER)
            back = render(field, CameraPose(theta=math.pi, r=4.0), SMALL_INTRINSICS, FAST_RENDER)
            return np.abs(np.fliplr(back.feature_map) - front.feature_map)

        symmetric = front_back_gap(0.0)
        asymmetric = front_back_gap(1.0)
        self.assertLess(float(symmetric.max()), 0.01)
        self.assertGreater(float(asymmetric.mean()), 10.0 * float(symmetric.mean()))
        self.assertGreater(float(asymmetric.mean()), 1e-3)


class TestInstance(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.template = make_template(TemplateSpec(dims=(16, 16, 16)))

    def test_zero_strength_returns_template(self):
        instance = make_instance(self.template, seed=5, strength=0.0)
        np.testing.assert_array_equal(instance.density, self.template.density)
        np.testing.assert_array_equal(instance.feature, self.template.feature)

    def test_features_change_less_than_color(self):
        a = make_instance(self.template, seed=5, strength=0.3)
        b = make_instance(self.template, seed=5, strength=0.3)
        np.testing.assert_array_equal(a.feature, b.feature)
        np.testing.assert_array_equal(a.color, b.color)
        feature_change = rms(a.feature, self.template.feature)
        color_change = rms(a.color, self.template.color)
        self.assertGreater(feature_change, 0.0)
        self.assertLess(feature_change, 0.5 * color_change)

    def test_seeds_give_distinct_instances(self):
        a = make_instance(self.template, seed=1, strength=0.3)
        b = make_instance(self.template, seed=2, strength=0.3)
        self.assertGreater(rms(a.density, b.density), 0.0)

    def test_strength_out_of_range(self):
        with logging_enabled(), self.assertLogs('posebank-logger', 'ERROR') as logs:
            with self.assertRaises(ValueError):
                make_instance(self.template, seed=0, strength=1.5)
        self.assertIn('1.5', logs.output[0])


class TestGroundTruthPoses(unittest.TestCase):
    def test_degenerate_component(self):
        dist = PoseDistSpec(components=[AzimuthComponent(mean=0.0, std=0.0, weight=1.0)])
        rng = np.random.default_rng(0)
        for _ in range(20):
            pose = sample_gt_pose(dist, rng)
            self.assertEqual(pose.theta, 0.0)
            self.assertTrue(math.radians(85.0) <= pose.phi <= math.radians(95.0))
            self.assertEqual(pose.r, 4.0)

    def test_two_peaks_split_the_mass(self):
        rng = np.random.default_rng(1)
        poses = [sample_gt_pose(two_peaks(), rng) for _ in range(10000)]
        front = sum(1 for pose in poses if pose.theta < math.pi) / len(poses)
        self.assertAlmostEqual(front, 0.5, delta=0.02)

    def test_histogram_matches_mixture(self):
        for dist in (two_peaks(20.0), PoseDistSpec()):
            rng = np.random.default_rng(2)
            poses = [sample_gt_pose(dist, rng) for _ in range(10000)]
            histogram = pose_histogram(poses, 'theta')
            analytic = wrapped_gaussian_bin_probs(
                [(c.mean, c.std, c.weight) for c in dist.components], histogram.n_bins)
            self.assertLess(kl_divergence(histogram, analytic), 0.01)

    def test_fixed_seed_repeats_sequence(self):
        dist = two_peaks()
        a = [sample_gt_pose(dist, np.random.default_rng(9)) for _ in range(3)]
        rng_a, rng_b = np.random.default_rng(4), np.random.default_rng(4)
        self.assertEqual([sample_gt_pose(dist, rng_a) for _ in range(5)],
                         [sample_gt_pose(dist, rng_b) for _ in range(5)])
        self.assertEqual(a[0], a[1])


class TestDataset(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.template = make_template(TemplateSpec(dims=(12, 12, 12)))
        cls.intrinsics = Intrinsics(width=16, height=16)
        cls.render_config = RenderConfig(n_samples=16)

    def generate(self, directory, n=3, threads=1):
        return make_dataset(self.template, two_peaks(), n=n, seed=11, instance_strength=0.2,
                            out_dir=directory, intrinsics=self.intrinsics,
                            render_config=self.render_config, threads=threads)

    def test_empty_dataset(self):
        with tempfile.TemporaryDirectory() as directory:
            dataset = self.generate(directory, n=0)
            self.assertEqual(dataset.entries, [])
            self.assertEqual(sorted(p.name for p in Path(directory).iterdir()),
                             sorted([INFO_NAME, MANIFEST_NAME]))
            self.assertEqual(read_dataset(directory).entries, [])

    def test_dataset_is_byte_identical_across_runs(self):
        with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
            a = self.generate(first, threads=1)
            self.generate(second, threads=2)
            names = sorted(p.name for p in Path(first).iterdir())
            self.assertEqual(names, sorted(p.name for p in Path(second).iterdir()))
            self.assertIn(entry_name(2), names)
            self.assertIn('entry_00002.depth.tfm', names)
            for name in names:
                self.assertEqual(Path(first, name).read_bytes(), Path(second, name).read_bytes())

            loaded = read_dataset(first)
            self.assertEqual([e.pose for e in loaded.entries], [e.pose for e in a.entries])
            self.assertEqual([e.seed for e in loaded.entries], [11, 12, 13])
            self.assertEqual(loaded.info, a.info)
