"""
Figuras PNG: histogramas de pose superpuestos (referencia vs estimado) y
vistas previas de mapas de features.
"""
import math
from pathlib import Path
from typing import Tuple, Union

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt
import numpy as np

from ..logger import logger
from ..logs.plots_messages import *
from ..models.metrics import PoseHistogram
from ..models.synth import LabeledDataset
from ..storage.feature_maps import read_feature_map


plt.rcParams['figure.figsize'] = (6.0, 3.5)
plt.rcParams['figure.dpi'] = 100
plt.rcParams['savefig.bbox'] = 'tight'
plt.rcParams['font.size'] = 9


def plot_pose_histograms(ground_truth: PoseHistogram, estimated: PoseHistogram,
                         path: Union[str, Path], title: str = '') -> None:
    """
    Superpone dos histogramas del mismo eje como barras, en grados.

    Parameters
    ----------
    ground_truth, estimated : PoseHistogram
        Histogramas de referencia y estimado.
    path : str, Path
        Archivo PNG de salida.
    title : str
        Titulo de la figura.
    """
    lo, hi = ground_truth.value_range
    width = (hi - lo) / ground_truth.n_bins
    centers = np.degrees(lo + (np.arange(ground_truth.n_bins) + 0.5) * width)
    bar = math.degrees(width)

    fig, ax = plt.subplots()
    ax.bar(centers, ground_truth.probs, width=bar, alpha=0.5, color='tab:blue',
           label='ground truth')
    ax.bar(centers, estimated.probs, width=bar * 0.6, alpha=0.7, color='tab:orange',
           label='estimated')
    ax.set_xlabel('%s [deg]' % ground_truth.axis)
    ax.set_ylabel('probability')
    ax.set_xlim(math.degrees(lo), math.degrees(hi))
    if title:
        ax.set_title(title)
    ax.legend()
    fig.savefig(path)
    plt.close(fig)
    logger.info(WRITE_PLOT % path)


def feature_image(feature_map: np.ndarray, value_range: Tuple[float, float]) -> np.ndarray:
    """
    Normaliza un mapa con un rango fijo para verlo como imagen: un canal se ve
    en grises y con tres o mas canales se usan los tres primeros como RGB.
    """
    lo, hi = value_range
    image = (np.asarray(feature_map, dtype=np.float64) - lo) / max(hi - lo, 1e-12)
    image = np.clip(image, 0.0, 1.0)
    if image.ndim == 3 and image.shape[-1] >= 3:
        return image[..., :3]
    if image.ndim == 3:
        image = image[..., 0]
    return np.repeat(image[..., None], 3, axis=-1)


def write_feature_preview(feature_map: np.ndarray, path: Union[str, Path],
                          value_range: Tuple[float, float] = (0.0, 1.0)) -> None:
    plt.imsave(path, feature_image(feature_map, value_range))


def write_dataset_previews(dataset: LabeledDataset) -> int:
    """
    Escribe <entrada>.png junto a cada mapa del dataset con la normalizacion
    del dataset guardada en dataset.json.

    Returns
    -------
    out : int
        Numero de imagenes escritas.
    """
    value_range = dataset.info.value_range if dataset.info is not None else (0.0, 1.0)
    for entry in dataset.entries:
        write_feature_preview(read_feature_map(entry.file), entry.file.with_suffix('.png'),
                              value_range)
    logger.info(WRITE_PREVIEWS % (len(dataset.entries), dataset.manifest.parent))
    return len(dataset.entries)
