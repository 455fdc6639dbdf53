"""
Modelo de camara esferica, discretizacion de la grilla de poses y generacion
de rayos para el render.

Convenciones
------------
* phi es el angulo polar medido desde +z, de modo que phi = π/2 es el ecuador.
* La matriz camara-a-mundo tiene por columnas (derecha, abajo, adelante); el
  eje optico apunta al origen y +z es el vector "arriba" de referencia. En los
  polos se usa +x.
* La rotacion en el plano se aplica como R·Rz(-gamma): un gamma positivo rota
  el contenido de la imagen en el mismo sentido que warp con rotacion gamma.
* El pixel (fila i, columna j) corresponde al rayo de camara
  (j + 1/2 - W/2, i + 1/2 - H/2, f).
"""
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..logger import logger
from ..logs.geometry_messages import *
from ..models.camera import TWO_PI, CameraPose, Intrinsics, PoseGrid, RayBundle, wrap_angle


POLE_EPSILON = 1e-6
WORLD_UP = np.array([0.0, 0.0, 1.0])
POLE_UP = np.array([1.0, 0.0, 0.0])


def camera_position(pose: CameraPose) -> np.ndarray:
    sin_phi = math.sin(pose.phi)
    return pose.r * np.array([sin_phi * math.cos(pose.theta),
                              sin_phi * math.sin(pose.theta),
                              math.cos(pose.phi)])


def pose_to_extrinsics(pose: CameraPose) -> np.ndarray:
    """
    Calcula la transformacion camara-a-mundo de una pose.

    Parameters
    ----------
    pose : CameraPose
        Pose en la esfera.

    Returns
    -------
    out : np.ndarray
        Matriz 4×4; las tres primeras columnas son los ejes (derecha, abajo,
        adelante) de la camara y la cuarta su posicion.
    """
    position = camera_position(pose)
    forward = -position / np.linalg.norm(position)
    up = POLE_UP if abs(math.sin(pose.phi)) < POLE_EPSILON else WORLD_UP

    right = np.cross(forward, up)
    right /= np.linalg.norm(right)
    down = -np.cross(right, forward)

    look_at = np.stack([right, down, forward], axis=1)

    cos_g, sin_g = math.cos(-pose.gamma), math.sin(-pose.gamma)
    in_plane = np.array([[cos_g, -sin_g, 0.0],
                         [sin_g, cos_g, 0.0],
                         [0.0, 0.0, 1.0]])

    extrinsics = np.eye(4)
    extrinsics[:3, :3] = look_at @ in_plane
    extrinsics[:3, 3] = position
    return extrinsics


def ray_box_intersection(origins: np.ndarray, directions: np.ndarray,
                         bbox_min: np.ndarray, bbox_max: np.ndarray
                         ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Interseccion rayo/caja alineada a los ejes por el metodo de slabs.

    Parameters
    ----------
    origins, directions : np.ndarray
        Arreglos (..., 3).
    bbox_min, bbox_max : np.ndarray
        Esquinas de la caja.

    Returns
    -------
    out : tuple
        (t_near, t_far, hit). Para rayos que no tocan la caja t_near = t_far = 0.
    """
    # las componentes nulas se reemplazan por un valor diminuto con signo para
    # evitar 0·inf
    safe = np.where(np.abs(directions) < 1e-12,
                    np.where(directions < 0, -1e-12, 1e-12), directions)
    inverse = 1.0 / safe
    t0 = (np.asarray(bbox_min, dtype=np.float64) - origins) * inverse
    t1 = (np.asarray(bbox_max, dtype=np.float64) - origins) * inverse
    t_enter = np.max(np.minimum(t0, t1), axis=-1)
    t_exit = np.min(np.maximum(t0, t1), axis=-1)

    t_near = np.maximum(t_enter, 0.0)
    hit = t_exit > t_near
    t_near = np.where(hit, t_near, 0.0)
    t_far = np.where(hit, t_exit, 0.0)
    return t_near, t_far, hit


def generate_rays(extrinsics: np.ndarray, intrinsics: Intrinsics,
                  bbox: Optional[Sequence[np.ndarray]] = None,
                  rows: Optional[slice] = None) -> RayBundle:
    """
    Genera los rayos pinhole que pasan por el centro de cada pixel.

    Parameters
    ----------
    extrinsics : np.ndarray
        Matriz camara-a-mundo 4×4.
    intrinsics : Intrinsics
        Campo de vision vertical y resolucion.
    bbox : tuple, None
        (min, max) de la caja envolvente del campo; por defecto [-1, 1]^3.
    rows : slice, None
        Subconjunto de filas; se usa para repartir el render por filas.

    Returns
    -------
    out : RayBundle
        Rayos con su intervalo [t_near, t_far] contra la caja.
    """
    if bbox is None:
        bbox = (np.full(3, -1.0), np.full(3, 1.0))
    rows = rows if rows is not None else slice(0, intrinsics.height)

    row_index = np.arange(intrinsics.height, dtype=np.float64)[rows]
    col_index = np.arange(intrinsics.width, dtype=np.float64)
    y = row_index + 0.5 - 0.5 * intrinsics.height
    x = col_index + 0.5 - 0.5 * intrinsics.width
    xx, yy = np.meshgrid(x, y, indexing='xy')
    local = np.stack([xx, yy, np.full_like(xx, intrinsics.focal)], axis=-1)

    directions = local @ extrinsics[:3, :3].T
    directions /= np.linalg.norm(directions, axis=-1, keepdims=True)
    origins = np.broadcast_to(extrinsics[:3, 3], directions.shape).copy()

    t_near, t_far, hit = ray_box_intersection(origins, directions, bbox[0], bbox[1])
    return RayBundle(origins=origins, directions=directions,
                     t_near=t_near, t_far=t_far, hit=hit)


def bin_centers(lo: float, hi: float, count: int) -> np.ndarray:
    width = (hi - lo) / count
    return lo + (np.arange(count) + 0.5) * width


def enumerate_grid(grid: PoseGrid) -> List[CameraPose]:
    """
    Enumera las poses de la grilla en los centros de los bins, primero por phi
    y luego por theta: k = i_phi·n_theta + i_theta.

    Parameters
    ----------
    grid : PoseGrid
        Grilla de azimut y elevacion.

    Returns
    -------
    out : List[CameraPose]
        n_theta·n_phi poses ordenadas.
    """
    logger.debug(ENUMERATE_GRID % (grid.n_theta, grid.n_phi))
    thetas = bin_centers(grid.theta_range[0], grid.theta_range[1], grid.n_theta)
    phis = bin_centers(grid.phi_range[0], grid.phi_range[1], grid.n_phi)
    return [CameraPose(theta=float(theta), phi=float(phi),
                       gamma=grid.gamma_fixed, r=grid.r_fixed)
            for phi in phis for theta in thetas]


def grid_index(grid: PoseGrid, i_theta: int, i_phi: int) -> int:
    return i_phi * grid.n_theta + i_theta


def grid_bins(grid: PoseGrid, index: int) -> Tuple[int, int]:
    """
    Inversa de grid_index: retorna (i_theta, i_phi) del indice k.
    """
    return index % grid.n_theta, index // grid.n_theta


def nearest_bin(grid: PoseGrid, theta: float, phi: float) -> Tuple[int, int]:
    """
    Bin de la grilla que contiene un par (theta, phi). theta se trata como un
    angulo: si cae fuera de un rango de azimut parcial se asigna al borde mas
    cercano sobre el circulo. phi se satura a los bins extremos.

    Returns
    -------
    out : tuple
        (i_theta, i_phi).
    """
    lo, hi = grid.theta_range
    span = hi - lo
    offset = wrap_angle(theta - lo)
    i_theta = int(math.floor(offset / grid.theta_width))
    if i_theta >= grid.n_theta:
        i_theta = grid.n_theta - 1 if offset - span < TWO_PI - offset else 0

    if grid.phi_width > 0:
        i_phi = int(math.floor((phi - grid.phi_range[0]) / grid.phi_width))
        i_phi = min(max(i_phi, 0), grid.n_phi - 1)
    else:
        i_phi = 0
    return i_theta, i_phi


def pose_index(grid: PoseGrid, pose: CameraPose) -> int:
    """
    Indice k del bin que contiene una pose; para las poses de enumerate_grid es
    la inversa exacta.
    """
    i_theta, i_phi = nearest_bin(grid, pose.theta, pose.phi)
    return grid_index(grid, i_theta, i_phi)
