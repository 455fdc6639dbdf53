import unittest

import logging
# se desabilita el sistema de logs del API
logging.disable(logging.CRITICAL)

from fastapi.testclient import TestClient
from posebank.main import app, root_response


client = TestClient(app)


class TestMainEndpoints(unittest.TestCase):
    def test_root_endpoint(self):
        response = client.get('/')

        self.assertEqual(response.status_code, 200)
        self.assertEqual(root_response, response.text)
        self.assertIn('POST /estimate', response.text)

    def test_openapi_lists_routes(self):
        paths = client.get('/openapi.json').json()['paths']

        self.assertIn('/bank', paths)
        self.assertIn('/estimate', paths)
