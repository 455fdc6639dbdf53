import contextlib
import csv
import io
import math
import os
import tempfile
import unittest
from pathlib import Path
from unittest import mock

import logging
# se desabilita el sistema de logs
logging.disable(logging.CRITICAL)

import numpy as np

from posebank.cli import main, parse_peaks
from posebank.storage.feature_maps import read_feature_map, write_raw_features
from posebank.storage.reports import read_report_json


CAMERA = ['--width', '16', '--height', '16', '--samples', '16']


def run(*argv):
    """
    Ejecuta la linea de comandos y retorna (codigo de salida, salida estandar).
    """
    stdout, stderr = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
        code = main([str(arg) for arg in argv])
    return code, stdout.getvalue()


class TestPipeline(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.directory = tempfile.TemporaryDirectory()
        root = Path(cls.directory.name)
        cls.data = root / 'data'
        cls.bank = root / 'bank.tpb'
        code, _ = run('--threads', 2, 'synth', '--out', cls.data, '--n', 4, '--seed', 2,
                      '--dims', 12, '--peaks', '90:10:0.5,270:10:0.5', *CAMERA)
        assert code == 0
        code, _ = run('bank', '--field', cls.data / 'template.tff', '--out', cls.bank, *CAMERA)
        assert code == 0

    @classmethod
    def tearDownClass(cls):
        cls.directory.cleanup()

    def test_synth_outputs(self):
        names = {p.name for p in self.data.iterdir()}
        self.assertTrue({'template.tff', 'manifest.csv', 'dataset.json',
                         'entry_00003.tfm', 'entry_00003.depth.tfm'} <= names)
        self.assertEqual(read_feature_map(self.data / 'entry_00000.tfm').shape, (16, 16, 3))

    def test_synth_is_deterministic(self):
        with tempfile.TemporaryDirectory() as directory:
            out = Path(directory)
            code, _ = run('--threads', 1, 'synth', '--out', out, '--n', 4, '--seed', 2,
                          '--dims', 12, '--peaks', '90:10:0.5,270:10:0.5', *CAMERA)
            self.assertEqual(code, 0)
            for name in ('manifest.csv', 'entry_00001.tfm', 'template.tff'):
                self.assertEqual((out / name).read_bytes(), (self.data / name).read_bytes())

    def test_estimate_and_pdf_dump(self):
        with tempfile.TemporaryDirectory() as directory:
            dump = Path(directory, 'pdf.csv')
            code, output = run('estimate', self.data / 'entry_00000.tfm',
                               self.data / 'entry_00001.tfm', '--bank', self.bank,
                               '--dump-pdf', dump)
            self.assertEqual(code, 0)
            self.assertEqual(len(output.strip().splitlines()), 2)
            self.assertIn('bin=', output)
            with open(dump, newline='') as fh:
                rows = list(csv.reader(fh))
        self.assertEqual(rows[0], ['file', 'k', 'theta', 'phi', 'prob', 'mse'])
        self.assertEqual(len(rows), 1 + 2 * 108)
        probs = [float(row[4]) for row in rows[1:109]]
        self.assertAlmostEqual(sum(probs), 1.0)

    def test_sample_mode_is_reproducible(self):
        args = ('estimate', self.data / 'entry_00002.tfm', '--bank', self.bank,
                '--mode', 'sample', '--seed', 7, '--tau', 50)
        self.assertEqual(run(*args), run(*args))

    def test_evaluate_writes_report(self):
        with tempfile.TemporaryDirectory() as directory:
            out = Path(directory, 'eval')
            code, _ = run('evaluate', '--bank', self.bank, '--dataset', self.data, '--out', out)
            self.assertEqual(code, 0)
            report = read_report_json(out / 'report.json')
            self.assertTrue((out / 'entries.csv').exists())
            self.assertTrue((out / 'theta_hist.png').exists())
        self.assertEqual(report.n_entries, 4)
        self.assertEqual(report.n_skipped, 0)
        self.assertGreaterEqual(report.kl_theta, 0.0)
        self.assertTrue(0.0 <= report.recovery_rate_1bin <= 1.0)

    def test_dimension_mismatch_exits_with_error(self):
        with tempfile.TemporaryDirectory() as directory:
            small = Path(directory, 'small.tpb')
            code, _ = run('bank', '--field', self.data / 'template.tff', '--out', small,
                          '--preset', 'frontal', '--width', 8, '--height', 8, '--samples', 8)
            self.assertEqual(code, 0)
            code, _ = run('estimate', self.data / 'entry_00000.tfm', '--bank', small)
        self.assertEqual(code, 1)

    def test_missing_bank_exits_with_error(self):
        code, _ = run('estimate', self.data / 'entry_00000.tfm', '--bank', 'missing.tpb')
        self.assertEqual(code, 1)


class TestIngestAndBench(unittest.TestCase):
    def test_ingest_reduces_to_three_channels(self):
        rng = np.random.default_rng(0)
        with tempfile.TemporaryDirectory() as directory:
            inputs = []
            for name in ('a.bin', 'b.bin'):
                path = Path(directory, name)
                write_raw_features(rng.standard_normal((6, 5, 7)), path)
                inputs.append(path)
            out = Path(directory, 'out')
            code, output = run('ingest', *inputs, '--out', out)
            self.assertEqual(code, 0)
            self.assertEqual(read_feature_map(out / 'a.tfm').shape, (6, 5, 3))
            self.assertIn('explained variance', output)

    def test_ingest_rejects_few_channels(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory, 'a.bin')
            write_raw_features(np.ones((4, 4, 2)), path)
            code, _ = run('ingest', path, '--out', Path(directory, 'out'))
        self.assertEqual(code, 1)

    def test_bench_writes_csv(self):
        with tempfile.TemporaryDirectory() as directory:
            out = Path(directory, 'bench.csv')
            code, output = run('bench', '--presets', '12x6', '--query-preset', 'frontal',
                               '--oracle-grid', 4, '--oracle-cases', 1, '--out', out,
                               '--width', 16, '--height', 16, '--samples', 8)
            self.assertEqual(code, 0)
            with open(out, newline='') as fh:
                rows = list(csv.reader(fh))
        self.assertEqual(rows[0], ['process', 'grid', 'repeat', 'min_s', 'median_s', 'max_s'])
        self.assertEqual([row[0] for row in rows[1:]],
                         ['template rendering', 'phase correlation', 'camera pose scoring',
                          'pose sampling', 'naive grid search'])
        self.assertIn('oracle: 1 cases', output)

    def test_unknown_preset(self):
        code, _ = run('bench', '--presets', '7x7', '--width', 8, '--height', 8)
        self.assertEqual(code, 1)


class TestServe(unittest.TestCase):
    def test_serve_exports_registration_defaults(self):
        with mock.patch.dict(os.environ), mock.patch('uvicorn.run') as serve:
            code, _ = run('serve', '--bank', 'bank.tpb', '--port', 8100,
                          '--no-phase-correlation', '--window', 'blackman')
            self.assertEqual(code, 0)
            self.assertEqual(os.environ['POSEBANK_BANK'], 'bank.tpb')
            self.assertEqual(os.environ['POSEBANK_PHASE_CORRELATION'], '0')
            self.assertEqual(os.environ['POSEBANK_WINDOW'], 'blackman')
        serve.assert_called_once_with('posebank.main:app', host='127.0.0.1', port=8100)


class TestParsing(unittest.TestCase):
    def test_peaks_are_read_in_degrees(self):
        components = parse_peaks('90:10:0.25,270:5:0.75')
        self.assertAlmostEqual(components[0].mean, math.pi / 2.0)
        self.assertAlmostEqual(components[1].std, math.radians(5.0))
        self.assertEqual([c.weight for c in components], [0.25, 0.75])
