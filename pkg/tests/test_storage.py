import csv
import math
import tempfile
import unittest
from pathlib import Path

import logging
# se desabilita el sistema de logs
logging.disable(logging.CRITICAL)

import numpy as np

from posebank.core.estimator import build_pose_bank
from posebank.errors import FieldFormatError
from posebank.models.camera import CameraPose, Intrinsics, PoseGrid
from posebank.models.field import RenderConfig
from posebank.models.metrics import EntryRecord, EvalReport
from posebank.models.synth import DatasetEntry
from posebank.storage.banks import decode_bank, encode_bank, read_bank, write_bank
from posebank.storage.datasets import MANIFEST_NAME, read_dataset, write_manifest
from posebank.storage.feature_maps import (encode_feature_map, read_feature_map,
                                           read_raw_features, write_feature_map,
                                           write_raw_features)
from posebank.storage.fields import decode_field, encode_field, read_field, write_field
from posebank.storage.reports import (ENTRY_COLUMNS, read_report_json, write_entries_csv,
                                      write_report_json)

from .fixtures import blob_field


class TestFieldFormat(unittest.TestCase):
    def test_round_trip_is_bit_exact(self):
        field = blob_field(dims=(6, 5, 4))
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory, 'field.tff')
            write_field(field, path)
            loaded = read_field(path)
        for name in ('density', 'feature', 'color', 'bbox_min', 'bbox_max'):
            np.testing.assert_array_equal(getattr(loaded, name), getattr(field, name))

    def test_bad_magic_and_truncation(self):
        data = encode_field(blob_field(dims=(3, 3, 3)))
        with self.assertRaises(FieldFormatError):
            decode_field(b'XXXX' + data[4:])
        with self.assertRaises(FieldFormatError):
            decode_field(data[:-4])
        with self.assertRaises(FieldFormatError):
            decode_field(data[:10])


class TestFeatureMapFormat(unittest.TestCase):
    def test_round_trip_and_channel_axis(self):
        array = np.arange(12, dtype=np.float32).reshape(3, 4)
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory, 'map.tfm')
            write_feature_map(array, path)
            loaded = read_feature_map(path)
        self.assertEqual(loaded.shape, (3, 4, 1))
        np.testing.assert_array_equal(loaded[..., 0], array)

    def test_layout_is_row_major_with_interleaved_channels(self):
        array = np.arange(2 * 3 * 2, dtype=np.float32).reshape(2, 3, 2)
        payload = np.frombuffer(encode_feature_map(array)[16:], dtype='<f4')
        self.assertEqual(payload[(1 * 3 + 2) * 2 + 1], array[1, 2, 1])

    def test_trailing_bytes_are_rejected(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory, 'map.tfm')
            path.write_bytes(encode_feature_map(np.zeros((2, 2, 1))) + b'\0')
            with self.assertRaises(FieldFormatError):
                read_feature_map(path)

    def test_raw_features(self):
        array = np.random.default_rng(0).standard_normal((4, 5, 7)).astype(np.float32)
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory, 'raw.bin')
            write_raw_features(array, path)
            np.testing.assert_array_equal(read_raw_features(path), array)
            path.write_bytes(path.read_bytes()[:-8])
            with self.assertRaises(FieldFormatError):
                read_raw_features(path)


class TestBankFormat(unittest.TestCase):
    def test_round_trip(self):
        grid = PoseGrid(n_theta=4, n_phi=2, r_fixed=3.5)
        bank = build_pose_bank(blob_field(dims=(8, 8, 8)), grid, Intrinsics(width=12, height=10),
                               RenderConfig(n_samples=8))
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory, 'bank.tpb')
            write_bank(bank, path)
            loaded = read_bank(path)
        self.assertEqual(loaded.grid, grid)
        self.assertEqual(loaded.intrinsics, bank.intrinsics)
        self.assertEqual(loaded.render_config, bank.render_config)
        self.assertEqual(loaded.size, 8)
        np.testing.assert_array_equal(loaded.templates, bank.templates)
        np.testing.assert_array_equal(loaded.depths, bank.depths)
        np.testing.assert_array_equal(loaded.alphas, bank.alphas)

    def test_truncated_bank(self):
        grid = PoseGrid(n_theta=2, n_phi=1)
        bank = build_pose_bank(blob_field(dims=(4, 4, 4)), grid, Intrinsics(width=4, height=4),
                               RenderConfig(n_samples=4))
        data = encode_bank(bank)
        with self.assertRaises(FieldFormatError):
            decode_bank(data[:-1])
        with self.assertRaises(FieldFormatError):
            decode_bank(data + b'\0\0')


class TestDatasetFormat(unittest.TestCase):
    def test_manifest_round_trip(self):
        with tempfile.TemporaryDirectory() as directory:
            entries = [DatasetEntry(file=Path(directory, 'entry_%05d.tfm' % i),
                                    pose=CameraPose(theta=0.1 * i, phi=1.5, gamma=0.0, r=4.0),
                                    seed=i)
                       for i in range(3)]
            write_manifest(entries, Path(directory, MANIFEST_NAME))
            dataset = read_dataset(directory)
        self.assertEqual([e.pose for e in dataset.entries], [e.pose for e in entries])
        self.assertEqual([e.file.name for e in dataset.entries],
                         ['entry_00000.tfm', 'entry_00001.tfm', 'entry_00002.tfm'])
        self.assertIsNone(dataset.info)
        self.assertEqual(dataset.entries[2].depth_file.name, 'entry_00002.depth.tfm')

    def test_bad_header(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory, MANIFEST_NAME)
            path.write_text('name,theta\nx,1\n')
            with self.assertRaises(FieldFormatError):
                read_dataset(path)


class TestReports(unittest.TestCase):
    def test_json_round_trip_and_csv_header(self):
        record = EntryRecord(file='entry_00000.tfm', gt_theta=0.1, gt_phi=1.5, gt_gamma=0.0,
                             gt_r=4.0, est_theta=0.2, est_phi=1.5, est_gamma=0.0, est_r=4.0,
                             mse=1e-3, theta_err_deg=math.degrees(0.1))
        skipped = EntryRecord(file='entry_00001.tfm', gt_theta=0.0, gt_phi=1.5, gt_gamma=0.0,
                              gt_r=4.0, error='missing')
        report = EvalReport(n_entries=2, n_skipped=1, kl_theta=0.5, entries=[record, skipped])
        with tempfile.TemporaryDirectory() as directory:
            write_report_json(report, Path(directory, 'report.json'))
            self.assertEqual(read_report_json(Path(directory, 'report.json')), report)
            write_entries_csv(report, Path(directory, 'entries.csv'))
            with open(Path(directory, 'entries.csv'), newline='') as fh:
                rows = list(csv.reader(fh))
        self.assertEqual(rows[0], ENTRY_COLUMNS)
        self.assertEqual(rows[0][:5], ['file', 'gt_theta', 'gt_phi', 'gt_gamma', 'gt_r'])
        self.assertEqual(rows[2][5], '')
        self.assertEqual(len(rows), 3)
