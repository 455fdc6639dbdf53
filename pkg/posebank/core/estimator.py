"""
Estimador de pose de camara: banco de templates renderizados, puntaje por
error cuadratico medio despues del registro de escala y rotacion, PDF softmax
sobre los bins, muestreo por inversion de la CDF y pose de maxima
verosimilitud.
"""
import time
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from ..errors import (DimensionMismatchError, InvalidDistributionError, InvalidQueryError,
                      RegistrationError)
from ..logger import logger
from ..logs.estimator_messages import *
from ..models.camera import CameraPose, Intrinsics, PoseGrid
from ..models.estimator import MatchResult, PoseBank, PoseDistribution, TemperatureSchedule
from ..models.field import FeatureField, RenderConfig
from ..models.registration import IDENTITY, RegistrationConfig, Similarity2D
from ..worker.pool import ordered_map
from .field import render
from .geometry import enumerate_grid
from .registration import estimate_scale_rotation, mean_squared_error, warp


def build_pose_bank(field: FeatureField, grid: PoseGrid, intrinsics: Intrinsics,
                    config: Optional[RenderConfig] = None,
                    threads: Optional[int] = None) -> PoseBank:
    """
    Renderiza el campo desde el centro de cada bin de la grilla.

    Parameters
    ----------
    field : FeatureField
        Campo de features del template.
    grid : PoseGrid
        Discretizacion de azimut y elevacion.
    intrinsics : Intrinsics
        Resolucion y campo de vision de los templates.
    config : RenderConfig, None
        Configuracion del render.
    threads : int, None
        Hilos para repartir los bins; el banco no depende de este valor.

    Returns
    -------
    out : PoseBank
        Templates (K, H, W, F) con sus mapas de profundidad y alpha, en el
        orden de enumerate_grid.
    """
    config = config or RenderConfig()
    poses = enumerate_grid(grid)
    logger.info(BUILD_BANK % (grid.n_theta, grid.n_phi, intrinsics.height, intrinsics.width))
    start = time.perf_counter()

    outputs = ordered_map(lambda pose: render(field, pose, intrinsics, config), poses, threads)

    bank = PoseBank(grid=grid, poses=poses,
                    templates=np.stack([o.feature_map for o in outputs]).astype(np.float32),
                    depths=np.stack([o.depth_map for o in outputs]).astype(np.float32),
                    alphas=np.stack([o.alpha_map for o in outputs]).astype(np.float32),
                    intrinsics=intrinsics, render_config=config)
    logger.info(BANK_READY % (bank.size, time.perf_counter() - start))
    return bank


def check_query(query: np.ndarray, bank: PoseBank) -> np.ndarray:
    """
    Valida que el mapa consultado tenga las dimensiones de los templates y
    valores finitos; un mapa (H, W) se acepta si el banco tiene un solo canal.
    """
    query = np.asarray(query, dtype=np.float64)
    if query.ndim == 2:
        query = query[..., None]
    if query.shape != bank.map_shape:
        logger.error(DIMENSION_MISMATCH % (query.shape, bank.map_shape))
        raise DimensionMismatchError('query has shape %s but bank templates are %s'
                                     % ('x'.join(map(str, query.shape)),
                                        'x'.join(map(str, bank.map_shape))))
    bad = int(np.count_nonzero(~np.isfinite(query)))
    if bad:
        logger.error(NON_FINITE_QUERY % bad)
        raise InvalidQueryError('query contains %d NaN or infinite values' % bad)
    return query


def _candidates(template: np.ndarray, query: np.ndarray,
                config: RegistrationConfig, index: int) -> List[Similarity2D]:
    if not config.enabled:
        return [IDENTITY]
    if not np.any(query) or not np.any(template):
        logger.warning(ZERO_ENERGY_FALLBACK % index)
        return [IDENTITY]
    try:
        return estimate_scale_rotation(template, query, config)
    except RegistrationError as error:
        logger.warning(REGISTRATION_FALLBACK % (index, error))
        return [IDENTITY]


def match_candidate(query: np.ndarray, bank: PoseBank, index: int,
                    config: Optional[RegistrationConfig] = None,
                    keep_warped: bool = False) -> MatchResult:
    """
    Compara la consulta con el template index: estima escala y rotacion,
    transforma el template con cada candidato y se queda con el de menor error
    cuadratico medio (media sobre pixeles y canales).

    Parameters
    ----------
    query : np.ndarray
        Mapa de features (H, W, F) con las dimensiones del banco.
    bank : PoseBank
        Banco de templates.
    index : int
        Indice k del template.
    config : RegistrationConfig, None
        Configuracion del registro; enabled = False compara el template sin
        transformar.
    keep_warped : bool
        Conserva el template transformado en el resultado.

    Returns
    -------
    out : MatchResult
        Indice, similitud elegida y error.

    Raises
    ------
    DimensionMismatchError
        Si la consulta no tiene las dimensiones de los templates.
    InvalidQueryError
        Si la consulta tiene valores NaN o infinitos.
    """
    config = config or RegistrationConfig()
    query = check_query(query, bank)
    template = bank.templates[index]

    best: Optional[Tuple[float, Similarity2D, np.ndarray]] = None
    for candidate in _candidates(template, query, config, index):
        warped = warp(template, candidate)
        error = mean_squared_error(warped, query)
        if best is None or error < best[0]:
            best = (error, candidate, warped)

    error, similarity, warped = best
    return MatchResult(index=index, similarity=similarity, mse=error,
                       warped=warped if keep_warped else None)


def score_bank(query: np.ndarray, bank: PoseBank,
               config: Optional[RegistrationConfig] = None,
               threads: Optional[int] = None) -> List[MatchResult]:
    """
    Aplica match_candidate a todos los templates del banco, conservando el
    orden de los indices.
    """
    config = config or RegistrationConfig()
    query = check_query(query, bank)
    logger.debug(SCORE_BANK % bank.size)
    return ordered_map(lambda k: match_candidate(query, bank, k, config),
                       range(bank.size), threads)


def pose_pdf(errors: Sequence[float], temperature: float,
             grid: Optional[PoseGrid] = None) -> PoseDistribution:
    """
    PDF sobre los bins: p(k) = softmax(-e_k·τ), evaluada con logsumexp.

    Parameters
    ----------
    errors : Sequence[float]
        Errores e_k de cada template.
    temperature : float
        τ > 0; valores altos concentran la masa en el menor error.
    grid : PoseGrid, None
        Grilla a la que se refieren los indices.

    Returns
    -------
    out : PoseDistribution
        Probabilidades que suman 1.

    Raises
    ------
    InvalidDistributionError
        Si algun error es NaN o infinito, o si τ no es positiva.
    """
    errors = np.asarray(errors, dtype=np.float64)
    if not temperature > 0:
        logger.error(BAD_TEMPERATURE % temperature)
        raise InvalidDistributionError('temperature must be > 0, got %r' % temperature)
    if errors.size == 0 or not np.all(np.isfinite(errors)):
        logger.error(BAD_ERRORS)
        raise InvalidDistributionError('mse vector must be non-empty and finite')

    logits = -errors * temperature
    probs = np.exp(logits - logsumexp(logits))
    return PoseDistribution(probs=probs, temperature=temperature, grid=grid)


def sample_bins(pdf: PoseDistribution, rng: np.random.Generator,
                size: Optional[int] = None):
    """
    Muestrea indices de bin invirtiendo la CDF en valores uniformes.

    Returns
    -------
    out : int, np.ndarray
        Un indice si size es None, en otro caso un arreglo de size indices.
    """
    cdf = np.cumsum(pdf.probs)
    uniform = rng.random(size)
    indices = np.searchsorted(cdf, uniform * cdf[-1], side='right')
    indices = np.minimum(indices, len(cdf) - 1)
    return int(indices) if size is None else indices


def pose_from_match(bank: PoseBank, index: int, similarity: Optional[Similarity2D] = None,
                    theta: Optional[float] = None, phi: Optional[float] = None) -> CameraPose:
    """
    Pose continua del bin index: la rotacion recuperada se suma a gamma_fixed
    y la escala s da el radio r_fixed/s.
    """
    center = bank.poses[index]
    similarity = similarity or IDENTITY
    return CameraPose(theta=center.theta if theta is None else theta,
                      phi=center.phi if phi is None else phi,
                      gamma=bank.grid.gamma_fixed + similarity.rotation,
                      r=bank.grid.r_fixed / similarity.scale)


def sample_pose(pdf: PoseDistribution, bank: PoseBank,
                matches: Optional[Sequence[MatchResult]],
                rng: np.random.Generator) -> CameraPose:
    """
    Muestrea una pose: elige un bin segun la PDF y perturba su centro con ruido
    gaussiano en theta y phi de desviacion 1/6 del ancho del bin. gamma y r
    salen de la similitud del match del bin elegido.

    Parameters
    ----------
    pdf : PoseDistribution
        Distribucion sobre los bins del banco.
    bank : PoseBank
        Banco al que se refiere la distribucion.
    matches : Sequence[MatchResult], None
        Resultados de score_bank; sin ellos se usan gamma_fixed y r_fixed.
    rng : np.random.Generator
        Generador con semilla, propiedad de quien llama.

    Returns
    -------
    out : CameraPose
        Pose muestreada (theta envuelto, phi saturado).
    """
    index = sample_bins(pdf, rng)
    similarity = matches[index].similarity if matches is not None else None
    return jitter_pose(bank, index, similarity, rng)


def jitter_pose(bank: PoseBank, index: int, similarity: Optional[Similarity2D],
                rng: np.random.Generator) -> CameraPose:
    """
    Perturba el centro del bin index con ruido gaussiano de desviacion 1/6 del
    ancho del bin en theta y phi.
    """
    center = bank.poses[index]
    theta = center.theta + rng.normal(0.0, bank.grid.theta_width / 6.0)
    phi = center.phi + rng.normal(0.0, bank.grid.phi_width / 6.0)
    return pose_from_match(bank, index, similarity, theta=theta, phi=phi)


def estimate_map(query: np.ndarray, bank: PoseBank,
                 config: Optional[RegistrationConfig] = None, temperature: float = 1.0,
                 threads: Optional[int] = None) -> Tuple[CameraPose, PoseDistribution, MatchResult]:
    """
    Pose de maxima verosimilitud para una consulta.

    Returns
    -------
    out : tuple
        (pose del bin de menor error sin ruido, PDF, match ganador). Los
        empates se resuelven hacia el menor indice.
    """
    matches = score_bank(query, bank, config, threads)
    errors = np.array([match.mse for match in matches])
    pdf = pose_pdf(errors, temperature, grid=bank.grid)
    best = matches[int(np.argmin(errors))]
    pose = pose_from_match(bank, best.index, best.similarity)
    logger.debug(ESTIMATE % (best.index, best.mse, pose.theta, pose.phi))
    return pose, pdf, best


def tau_at(schedule: TemperatureSchedule, iteration: int) -> float:
    """
    Temperatura en la iteracion dada: rampa lineal de tau_start a tau_end en
    ramp_iters iteraciones, constante despues.
    """
    if iteration < 0:
        logger.error(BAD_ITERATION % iteration)
        raise ValueError('iteration must be >= 0, got %d' % iteration)
    progress = min(iteration / schedule.ramp_iters, 1.0)
    return schedule.tau_start + (schedule.tau_end - schedule.tau_start) * progress
