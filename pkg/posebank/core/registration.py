"""
Registro en el dominio de frecuencia (Fourier-Mellin) de escala y rotacion en
el plano entre dos mapas de features, warp de similitud y el oraculo de
busqueda exhaustiva.

Las coordenadas de imagen son (x = columna, y = fila) centradas en
((H - 1)/2, (W - 1)/2), el punto por donde pasa el eje optico del render. Una
similitud (s, γ) lleva el contenido del punto q al punto s·R(γ)·q.
"""
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage
from scipy.signal import get_window

from ..errors import RegistrationError
from ..logger import logger
from ..logs.registration_messages import *
from ..models.registration import RegistrationConfig, Similarity2D


def to_scalar(feature_map: np.ndarray) -> np.ndarray:
    """
    Reduce un mapa multicanal a un canal con la norma L2 por pixel.
    """
    feature_map = np.asarray(feature_map, dtype=np.float64)
    if feature_map.ndim == 2:
        return feature_map
    if feature_map.shape[-1] == 1:
        return feature_map[..., 0]
    return np.sqrt(np.sum(feature_map * feature_map, axis=-1))


def _check_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        logger.error(SHAPE_MISMATCH % (a.shape, b.shape))
        raise RegistrationError('maps must have the same shape, got %s and %s'
                                % (a.shape, b.shape))
    for name, image in (('first', a), ('second', b)):
        if not np.any(image):
            logger.error(ZERO_ENERGY % name)
            raise RegistrationError('%s map has zero energy; phase correlation is undefined'
                                    % name)


def apodization(shape: Tuple[int, int], window: str = 'hann') -> np.ndarray:
    rows = get_window(window, shape[0], fftbins=False)
    cols = get_window(window, shape[1], fftbins=False)
    return np.outer(rows, cols)


def highpass(shape: Tuple[int, int]) -> np.ndarray:
    """
    Filtro pasa altos que se multiplica por el espectro centrado (fftshift);
    vale 0 en la componente continua y 2 en Nyquist.
    """
    ky = np.fft.fftshift(np.fft.fftfreq(shape[0]))
    kx = np.fft.fftshift(np.fft.fftfreq(shape[1]))
    x = np.outer(np.cos(np.pi * ky), np.cos(np.pi * kx))
    return (1.0 - x) * (2.0 - x)


def _peak_offset(surface: np.ndarray, peak: Tuple[int, ...], subpixel: bool) -> List[float]:
    offsets = []
    for axis, index in enumerate(peak):
        size = surface.shape[axis]
        shift = float(index - size if index > size // 2 else index)
        if subpixel and size >= 3:
            before = list(peak)
            after = list(peak)
            before[axis] = (index - 1) % size
            after[axis] = (index + 1) % size
            left, center, right = surface[tuple(before)], surface[peak], surface[tuple(after)]
            denominator = left - 2.0 * center + right
            if denominator < 0:
                # vertice de la parabola por los tres puntos
                shift += float(np.clip(0.5 * (left - right) / denominator, -0.5, 0.5))
        offsets.append(shift)
    return offsets


def phase_correlate(a: np.ndarray, b: np.ndarray, subpixel: bool = True,
                    window: Optional[str] = None) -> Tuple[float, float, float]:
    """
    Estima la traslacion de b respecto a a con correlacion de fase.

    Parameters
    ----------
    a, b : np.ndarray
        Mapas de un canal con la misma forma.
    subpixel : bool
        Refinamiento parabolico de 3 puntos alrededor del pico.
    window : str, None
        Ventana de apodizacion opcional; sin ventana un desplazamiento
        circular se recupera exactamente.

    Returns
    -------
    out : tuple
        (dy, dx, confianza) en el orden de los ejes del arreglo: b ≈
        np.roll(a, (dy, dx), axis=(0, 1)). La confianza es el pico dividido
        por la media del valor absoluto de la superficie de correlacion.

    Raises
    ------
    RegistrationError
        Si las formas difieren o algun mapa tiene energia nula.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_pair(a, b)
    if window is not None:
        weights = apodization(a.shape, window)
        a = a * weights
        b = b * weights

    cross = np.fft.fft2(b) * np.conj(np.fft.fft2(a))
    magnitude = np.abs(cross)
    normalized = np.zeros_like(cross)
    significant = magnitude > 1e-12 * magnitude.max()
    normalized[significant] = cross[significant] / magnitude[significant]
    surface = np.real(np.fft.ifft2(normalized))

    peak = np.unravel_index(int(np.argmax(surface)), surface.shape)
    dy, dx = _peak_offset(surface, peak, subpixel)
    confidence = float(surface[peak] / (np.mean(np.abs(surface)) + 1e-300))
    return dy, dx, max(confidence, 0.0)


def log_polar(spectrum: np.ndarray, size: Tuple[int, int]) -> Tuple[np.ndarray, float]:
    """
    Remuestrea un espectro centrado en coordenadas log-polares sobre el
    semiplano θ ∈ [0, π).

    Parameters
    ----------
    spectrum : np.ndarray
        Magnitud del espectro con la componente continua en (H//2, W//2).
    size : tuple
        (muestras radiales, muestras angulares).

    Returns
    -------
    out : tuple
        (imagen (angular, radial), base logaritmica b) con radios b**i.
    """
    radial, angular = size
    height, width = spectrum.shape
    rho_max = 0.5 * min(height, width)
    log_base = rho_max ** (1.0 / radial)
    radii = log_base ** np.arange(radial, dtype=np.float64)
    angles = np.pi * np.arange(angular, dtype=np.float64) / angular

    rows = height // 2 + np.sin(angles)[:, None] * radii[None, :]
    cols = width // 2 + np.cos(angles)[:, None] * radii[None, :]
    image = ndimage.map_coordinates(spectrum, [rows, cols], order=1,
                                    mode='constant', cval=0.0)
    return image, log_base


def magnitude_spectrum(image: np.ndarray, window: str) -> np.ndarray:
    weighted = image * apodization(image.shape, window)
    return np.abs(np.fft.fftshift(np.fft.fft2(weighted))) * highpass(image.shape)


def estimate_scale_rotation(template: np.ndarray, target: np.ndarray,
                            config: Optional[RegistrationConfig] = None) -> List[Similarity2D]:
    """
    Estima la escala y la rotacion que llevan el template al objetivo.

    Se apodizan ambos mapas, se toma la magnitud de sus espectros (invariante a
    traslaciones), se remuestrean en log-polar y se correlacionan en fase: el
    desplazamiento angular da la rotacion y el radial el logaritmo de la
    escala, anclado de modo que un desplazamiento nulo es escala 1.

    Parameters
    ----------
    template, target : np.ndarray
        Mapas (H, W) o (H, W, F) de la misma forma.
    config : RegistrationConfig, None
        Ventana, resolucion log-polar, limites de escala y refinamiento.

    Returns
    -------
    out : List[Similarity2D]
        Dos candidatos con la misma escala y rotaciones γ y γ + π; la magnitud
        del espectro no distingue entre ambos.

    Raises
    ------
    RegistrationError
        Si las formas difieren o algun mapa tiene energia nula.
    """
    config = config or RegistrationConfig()
    a = to_scalar(template)
    b = to_scalar(target)
    _check_pair(a, b)

    spectrum_a = magnitude_spectrum(a, config.window)
    spectrum_b = magnitude_spectrum(b, config.window)
    polar_a, log_base = log_polar(spectrum_a, config.log_polar_size)
    polar_b, _ = log_polar(spectrum_b, config.log_polar_size)

    angular_shift, radial_shift, confidence = phase_correlate(
        polar_a, polar_b, subpixel=config.subpixel)

    angular = config.log_polar_size[1]
    rotation = angular_shift * math.pi / angular
    scale = log_base ** (-radial_shift)

    s_min, s_max = config.scale_bounds
    clamped = not s_min <= scale <= s_max
    if clamped:
        logger.warning(SCALE_CLAMPED % (scale, s_min, s_max))
        scale = min(max(scale, s_min), s_max)
        confidence = 0.0

    logger.debug(SCALE_ROTATION % (scale, math.degrees(rotation), confidence))
    return [Similarity2D(scale=scale, rotation=rotation, confidence=confidence, clamped=clamped),
            Similarity2D(scale=scale, rotation=rotation + math.pi, confidence=confidence,
                         clamped=clamped)]


def _bilinear(image: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    height, width = image.shape
    inside = ((rows >= -1e-9) & (rows <= height - 1 + 1e-9) &
              (cols >= -1e-9) & (cols <= width - 1 + 1e-9))
    values = ndimage.map_coordinates(image, [rows, cols], order=1, mode='nearest')
    return values * inside


def warp(feature_map: np.ndarray, similarity: Similarity2D) -> np.ndarray:
    """
    Aplica una similitud alrededor del centro de la imagen por mapeo inverso,
    con interpolacion bilineal por canal y ceros fuera de la imagen fuente.

    Parameters
    ----------
    feature_map : np.ndarray
        Mapa (H, W) o (H, W, F).
    similarity : Similarity2D
        Escala y rotacion a aplicar.

    Returns
    -------
    out : np.ndarray
        Mapa transformado en float64, con la misma forma; la identidad
        retorna una copia exacta.
    """
    source = np.asarray(feature_map, dtype=np.float64)
    if similarity.is_identity:
        return source.copy()

    height, width = source.shape[:2]
    center_y, center_x = 0.5 * (height - 1), 0.5 * (width - 1)
    rows, cols = np.mgrid[0:height, 0:width].astype(np.float64)
    y = rows - center_y
    x = cols - center_x
    cos_r, sin_r = math.cos(similarity.rotation), math.sin(similarity.rotation)
    source_cols = (cos_r * x + sin_r * y) / similarity.scale + center_x
    source_rows = (-sin_r * x + cos_r * y) / similarity.scale + center_y

    if source.ndim == 2:
        return _bilinear(source, source_rows, source_cols)
    channels = [_bilinear(np.ascontiguousarray(source[..., c]), source_rows, source_cols)
                for c in range(source.shape[-1])]
    return np.stack(channels, axis=-1)


def mean_squared_error(a: np.ndarray, b: np.ndarray) -> float:
    difference = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    return float(np.mean(difference * difference))


def brute_force_scale_rotation(template: np.ndarray, target: np.ndarray,
                               scales: Sequence[float],
                               rotations: Sequence[float]) -> Similarity2D:
    """
    Oraculo exhaustivo: transforma el template con cada par de la grilla
    (escala, rotacion) y retorna el de menor error cuadratico medio. Los
    empates se resuelven hacia la escala mas cercana a 1 y luego hacia la
    rotacion mas cercana a 0.
    """
    if len(scales) == 0 or len(rotations) == 0:
        logger.error(EMPTY_SEARCH_GRID % (len(scales), len(rotations)))
        raise RegistrationError('scale and rotation grids must be non-empty')
    logger.info(BRUTE_FORCE % (len(scales), len(rotations)))

    errors = np.empty((len(scales), len(rotations)))
    for i, scale in enumerate(scales):
        for j, rotation in enumerate(rotations):
            warped = warp(template, Similarity2D(scale=scale, rotation=rotation))
            errors[i, j] = mean_squared_error(warped, target)

    best = np.argwhere(errors == errors.min())
    i, j = min(best, key=lambda ij: (abs(scales[ij[0]] - 1.0), abs(rotations[ij[1]])))
    return Similarity2D(scale=scales[i], rotation=rotations[j])
