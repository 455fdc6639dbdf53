"""
Muestreo trilineal del campo de features y render volumetrico conjunto de
color, features, profundidad y opacidad con pesos de densidad compartidos.
"""
from typing import List, Optional, Tuple

import numpy as np
from scipy import ndimage

from ..logger import logger
from ..logs.field_messages import *
from ..models.camera import CameraPose, Intrinsics, RayBundle
from ..models.field import FeatureField, RenderConfig, RenderOutput
from ..worker.pool import ordered_map
from .geometry import generate_rays, pose_to_extrinsics


# filas por bloque al repartir el render entre hilos
ROW_CHUNK = 8


def stack_volumes(field: FeatureField) -> np.ndarray:
    """
    Apila densidad, features y color en un solo arreglo (1 + F + 3, gx, gy, gz)
    en float64, el orden que usa sample_volumes.
    """
    channels = [field.density[None]]
    channels.append(np.moveaxis(field.feature, -1, 0))
    channels.append(np.moveaxis(field.color, -1, 0))
    return np.ascontiguousarray(np.concatenate(channels, axis=0), dtype=np.float64)


def sample_volumes(volumes: np.ndarray, points: np.ndarray,
                   bbox_min: np.ndarray, bbox_max: np.ndarray) -> np.ndarray:
    """
    Interpolacion trilineal de varios volumenes en puntos del mundo. Los
    puntos fuera de la caja envolvente valen 0 en todos los canales.

    Parameters
    ----------
    volumes : np.ndarray
        Arreglo (C, gx, gy, gz).
    points : np.ndarray
        Puntos (..., 3) en coordenadas del mundo.
    bbox_min, bbox_max : np.ndarray
        Esquinas de la caja envolvente.

    Returns
    -------
    out : np.ndarray
        Valores (C, ...) en float64.
    """
    dims = np.array(volumes.shape[1:], dtype=np.float64)
    bbox_min = np.asarray(bbox_min, dtype=np.float64)
    bbox_max = np.asarray(bbox_max, dtype=np.float64)

    coords = (points - bbox_min) / (bbox_max - bbox_min) * (dims - 1.0)
    inside = np.all((coords >= -1e-9) & (coords <= dims - 1.0 + 1e-9), axis=-1)
    coords = np.moveaxis(coords, -1, 0)

    values = np.empty((volumes.shape[0],) + points.shape[:-1], dtype=np.float64)
    for channel, volume in enumerate(volumes):
        ndimage.map_coordinates(volume, coords, output=values[channel],
                                order=1, mode='nearest')
    values *= inside
    return values


def sample_field(field: FeatureField, point) -> Tuple[np.ndarray, np.ndarray, float]:
    """
    Consulta el campo en un punto del mundo.

    Parameters
    ----------
    field : FeatureField
        Campo a consultar.
    point : array_like
        Posicion (x, y, z).

    Returns
    -------
    out : tuple
        (color, feature, densidad); fuera de la caja todo vale 0.
    """
    point = np.asarray(point, dtype=np.float64).reshape(1, 3)
    values = sample_volumes(stack_volumes(field), point, field.bbox_min, field.bbox_max)[:, 0]
    n_features = field.feature_channels
    return values[1 + n_features:], values[1:1 + n_features], float(values[0])


def compositing_weights(sigma: np.ndarray, delta) -> Tuple[np.ndarray, np.ndarray]:
    """
    Calcula α_i = 1 - exp(-σ_i·δ_i) y los pesos w_i = T_i·α_i con
    T_i = Π_{j<i}(1 - α_j), a lo largo del ultimo eje.

    Parameters
    ----------
    sigma : np.ndarray
        Densidades (..., N).
    delta : float, np.ndarray
        Longitud de los segmentos, escalar o con forma compatible.

    Returns
    -------
    out : tuple
        (alpha, weights), ambos (..., N).
    """
    alpha = -np.expm1(-sigma * delta)
    transmittance = np.cumprod(1.0 - alpha, axis=-1)
    transmittance = np.concatenate(
        [np.ones_like(transmittance[..., :1]), transmittance[..., :-1]], axis=-1)
    return alpha, transmittance * alpha


def _render_rays(volumes: np.ndarray, n_features: int, bbox: Tuple[np.ndarray, np.ndarray],
                 rays: RayBundle, config: RenderConfig) -> List[np.ndarray]:
    height, width = rays.shape
    color = np.zeros((height, width, 3))
    feature = np.zeros((height, width, n_features))
    depth = np.zeros((height, width))
    alpha = np.zeros((height, width))
    if not np.any(rays.hit):
        return [color, feature, depth, alpha]

    near = rays.t_near[rays.hit]
    far = rays.t_far[rays.hit]
    delta = (far - near) / config.n_samples
    steps = (np.arange(config.n_samples) + 0.5) / config.n_samples
    t = near[:, None] + (far - near)[:, None] * steps
    points = rays.origins[rays.hit][:, None, :] + t[..., None] * rays.directions[rays.hit][:, None, :]

    values = sample_volumes(volumes, points, bbox[0], bbox[1])
    _, weights = compositing_weights(values[0], delta[:, None])

    # los mismos pesos se aplican al color, a los features y a la profundidad
    accumulated = weights.sum(axis=-1)
    feature[rays.hit] = (weights * values[1:1 + n_features]).sum(axis=-1).T
    color[rays.hit] = (weights * values[1 + n_features:]).sum(axis=-1).T
    expected = (weights * t).sum(axis=-1)
    valid = (accumulated >= config.min_alpha_for_depth) & (accumulated > 0)
    depth[rays.hit] = np.divide(expected, accumulated,
                                out=np.zeros_like(expected), where=valid)
    alpha[rays.hit] = accumulated
    return [color, feature, depth, alpha]


def render(field: FeatureField, pose: CameraPose, intrinsics: Intrinsics,
           config: Optional[RenderConfig] = None, threads: int = 1) -> RenderOutput:
    """
    Render volumetrico del campo desde una pose. Las muestras se ubican en los
    puntos medios de N segmentos iguales de [t_near, t_far]; los rayos que no
    tocan la caja quedan como fondo (alpha 0, features 0).

    Parameters
    ----------
    field : FeatureField
        Campo a renderizar.
    pose : CameraPose
        Pose de la camara.
    intrinsics : Intrinsics
        Campo de vision y resolucion.
    config : RenderConfig, None
        Numero de muestras, fondo blanco y umbral de alpha para la profundidad.
    threads : int
        Hilos para repartir el render por bloques de filas; la salida no
        depende de este valor.

    Returns
    -------
    out : RenderOutput
        Mapas de color, features, profundidad y alpha.
    """
    config = config or RenderConfig()
    logger.debug(RENDER_VIEW % (pose.theta, pose.phi, pose.gamma, pose.r,
                                intrinsics.height, intrinsics.width))
    extrinsics = pose_to_extrinsics(pose)
    volumes = stack_volumes(field)
    bbox = (field.bbox_min, field.bbox_max)
    n_features = field.feature_channels

    def render_rows(start: int) -> List[np.ndarray]:
        rows = slice(start, min(start + ROW_CHUNK, intrinsics.height))
        rays = generate_rays(extrinsics, intrinsics, bbox=bbox, rows=rows)
        return _render_rays(volumes, n_features, bbox, rays, config)

    blocks = ordered_map(render_rows, range(0, intrinsics.height, ROW_CHUNK), threads)
    color, feature, depth, alpha = (np.concatenate(parts, axis=0) for parts in zip(*blocks))

    if config.white_background:
        color = color + (1.0 - alpha)[..., None]

    return RenderOutput(color_map=color, feature_map=feature,
                        depth_map=depth, alpha_map=alpha)
