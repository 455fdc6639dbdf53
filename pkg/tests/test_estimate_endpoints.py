import unittest
from unittest import mock

import logging
# se desabilita el sistema de logs del API
logging.disable(logging.CRITICAL)

from fastapi.testclient import TestClient

from posebank.core.estimator import build_pose_bank
from posebank.core.registration import warp
from posebank.dependencies.bank import get_bank, get_registration
from posebank.main import app
from posebank.models.camera import Intrinsics, PoseGrid
from posebank.models.field import RenderConfig
from posebank.models.registration import Similarity2D
from posebank.storage.feature_maps import encode_feature_map

from .fixtures import blob_field


client = TestClient(app)


class TestEstimateEndpoints(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.bank = build_pose_bank(blob_field(dims=(8, 8, 8)), PoseGrid(n_theta=4, n_phi=1),
                                   Intrinsics(width=12, height=12), RenderConfig(n_samples=8))
        app.dependency_overrides[get_bank] = lambda: cls.bank

    @classmethod
    def tearDownClass(cls):
        app.dependency_overrides.clear()

    def upload(self, data, **params):
        return client.post('/estimate', params=params,
                           files={'file': ('query.tfm', data, 'application/octet-stream')})

    def test_bank_summary(self):
        response = client.get('/bank')
        self.assertEqual(response.status_code, 200)
        summary = response.json()
        self.assertEqual(summary['size'], 4)
        self.assertEqual(summary['n_theta'], 4)
        self.assertEqual(summary['map_shape'], [12, 12, 3])

    def test_template_is_matched_to_its_bin(self):
        response = self.upload(encode_feature_map(self.bank.templates[1]))
        self.assertEqual(response.status_code, 200)
        body = response.json()
        self.assertEqual(body['mode'], 'argmax')
        self.assertEqual(body['index'], 1)
        self.assertAlmostEqual(body['theta'], self.bank.poses[1].theta)
        self.assertLess(body['mse'], 1e-8)
        self.assertGreater(body['probability'], 0.0)

    def test_sample_mode_is_seeded(self):
        data = encode_feature_map(self.bank.templates[2])
        first = self.upload(data, mode='sample', tau=10.0, seed=5)
        second = self.upload(data, mode='sample', tau=10.0, seed=5)
        self.assertEqual(first.status_code, 200)
        self.assertEqual(first.json(), second.json())

    def test_rejected_queries(self):
        response = self.upload(encode_feature_map(self.bank.templates[0][:6]))
        self.assertEqual(response.status_code, 400)
        self.assertIn('6x12x3', response.json()['detail'])

        response = self.upload(b'XXXX' + encode_feature_map(self.bank.templates[0])[4:])
        self.assertEqual(response.status_code, 400)

        response = self.upload(encode_feature_map(self.bank.templates[0]) + b'\0')
        self.assertEqual(response.status_code, 400)

        query = self.bank.templates[0].copy()
        query[0, 0, 0] = float('nan')
        response = self.upload(encode_feature_map(query))
        self.assertEqual(response.status_code, 400)
        self.assertIn('NaN', response.json()['detail'])

    def test_server_registration_default(self):
        query = warp(self.bank.templates[1], Similarity2D(scale=1.1, rotation=0.3))
        data = encode_feature_map(query)
        with mock.patch('posebank.dependencies.bank.PHASE_CORRELATION', False):
            self.assertFalse(get_registration().enabled)
            response = self.upload(data)
            self.assertEqual(response.status_code, 200)
            similarity = response.json()['similarity']
            self.assertEqual(similarity['scale'], 1.0)
            self.assertEqual(similarity['rotation'], 0.0)

            response = self.upload(data, phase_correlation=True)
            self.assertEqual(response.status_code, 200)
        self.assertTrue(get_registration().enabled)

    def test_invalid_temperature(self):
        response = self.upload(encode_feature_map(self.bank.templates[0]), tau=0.0)
        self.assertEqual(response.status_code, 422)


class TestMissingBank(unittest.TestCase):
    def test_missing_bank_is_unavailable(self):
        app.dependency_overrides.pop(get_bank, None)
        with mock.patch('posebank.dependencies.bank.BANK_PATH', '/nonexistent/bank.tpb'):
            response = client.get('/bank')
        self.assertEqual(response.status_code, 503)
