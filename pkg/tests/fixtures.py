"""
Campos y configuraciones pequenas compartidas por los tests.
"""
import logging
import math
from contextlib import contextmanager

import numpy as np

from posebank.models.camera import Intrinsics
from posebank.models.field import FeatureField, RenderConfig


SMALL_INTRINSICS = Intrinsics(width=32, height=32)
FAST_RENDER = RenderConfig(n_samples=32)


@contextmanager
def logging_enabled():
    """
    Reactiva los logs dentro del bloque para poder usar assertLogs.
    """
    logging.disable(logging.NOTSET)
    try:
        yield
    finally:
        logging.disable(logging.CRITICAL)


def lattice(dims):
    axes = [np.linspace(-1.0, 1.0, n) for n in dims]
    return np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1)


def blob_field(dims=(24, 24, 24), density_scale=8.0, radius=0.45, copy_color=True):
    """
    Campo suave: una gaussiana de densidad centrada en el origen, color que
    varia linealmente con la posicion y features iguales al color.
    """
    points = lattice(dims)
    density = density_scale * np.exp(-np.sum(points ** 2, axis=-1) / (2.0 * radius ** 2))
    color = 0.5 + 0.4 * points / math.sqrt(3.0)
    feature = color.copy() if copy_color else color[..., :1]
    return FeatureField(density=density, feature=feature, color=color)


def empty_field(dims=(8, 8, 8)):
    return FeatureField(density=np.zeros(dims), feature=np.ones(dims + (2,)),
                        color=np.full(dims + (3,), 0.5))
