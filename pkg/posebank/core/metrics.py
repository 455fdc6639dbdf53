"""
Metricas de evaluacion: histogramas de pose, divergencia KL, error angular,
error de profundidad normalizado y la evaluacion completa de un dataset.
"""
import math
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import entropy, norm

from ..errors import InvalidDistributionError, PoseBankError
from ..logger import logger
from ..logs.metrics_messages import *
from ..models.camera import TWO_PI, CameraPose, PoseGrid, wrap_angle, wrap_signed_angle
from ..models.estimator import PoseBank, TemperatureSchedule
from ..models.metrics import EntryRecord, EvalReport, PoseHistogram
from ..models.registration import RegistrationConfig
from ..models.synth import DatasetEntry, LabeledDataset
from ..storage.feature_maps import read_feature_map
from ..worker.pool import ordered_map
from .estimator import jitter_pose, pose_from_match, pose_pdf, sample_bins, score_bank, tau_at
from .geometry import nearest_bin
from .registration import warp


KL_EPSILON = 1e-6
THETA_BINS = 24
PHI_BINS = 12
AXIS_RANGES = {'theta': (0.0, TWO_PI), 'phi': (0.0, math.pi)}
DEPTH_MASK_ALPHA = 0.5


def pose_histogram(values: Iterable[Union[CameraPose, float]], axis: str,
                   n_bins: Optional[int] = None,
                   value_range: Optional[Tuple[float, float]] = None) -> PoseHistogram:
    """
    Histograma de un eje de la pose.

    theta se trata como angulo: el valor se envuelve respecto al inicio del
    rango (359.9° cae en el ultimo bin de [0°, 360°)). Los valores de phi
    fuera del rango, y los de theta fuera de un rango parcial, se cuentan en
    el bin del borde mas cercano y se suman a out_of_range.

    Parameters
    ----------
    values : Iterable
        Poses o angulos en radianes.
    axis : str
        'theta' o 'phi'.
    n_bins : int, None
        Numero de bins; por defecto 24 para theta y 12 para phi.
    value_range : tuple, None
        Rango del eje; por defecto [0, 2π) para theta y [0, π] para phi.

    Returns
    -------
    out : PoseHistogram
        Conteos y probabilidades; sin valores las probabilidades son
        uniformes.
    """
    n_bins = n_bins or (THETA_BINS if axis == 'theta' else PHI_BINS)
    lo, hi = value_range or AXIS_RANGES[axis]
    width = (hi - lo) / n_bins
    counts = np.zeros(n_bins, dtype=np.int64)
    out_of_range = 0

    for value in values:
        if isinstance(value, CameraPose):
            value = getattr(value, axis)
        if axis == 'theta':
            offset = wrap_angle(value - lo)
            index = int(math.floor(offset / width))
            if index >= n_bins:
                out_of_range += 1
                index = n_bins - 1 if offset - (hi - lo) < TWO_PI - offset else 0
        else:
            if value < lo or value > hi:
                out_of_range += 1
            index = min(max(int(math.floor((value - lo) / width)), 0), n_bins - 1)
        counts[index] += 1

    if out_of_range:
        logger.warning(OUT_OF_RANGE % (out_of_range, axis))
    total = counts.sum()
    probs = counts / total if total else np.full(n_bins, 1.0 / n_bins)
    return PoseHistogram(axis=axis, n_bins=n_bins, value_range=(lo, hi),
                         counts=counts.tolist(), probs=probs.tolist(),
                         out_of_range=out_of_range)


def _probs(histogram) -> np.ndarray:
    if isinstance(histogram, PoseHistogram):
        return np.asarray(histogram.probs, dtype=np.float64)
    return np.asarray(histogram, dtype=np.float64)


def kl_divergence(p, q) -> float:
    """
    KL(p ‖ q) en nats, con suavizado aditivo ε = 1e-6 en ambos histogramas y
    renormalizacion, de modo que el resultado siempre es finito.

    Parameters
    ----------
    p, q : PoseHistogram, array_like
        Histogramas del mismo eje y numero de bins.

    Returns
    -------
    out : float
        Divergencia ≥ 0.
    """
    if isinstance(p, PoseHistogram) and isinstance(q, PoseHistogram) and \
            (p.axis != q.axis or p.n_bins != q.n_bins):
        message = 'histograms differ: %s/%d vs %s/%d' % (p.axis, p.n_bins, q.axis, q.n_bins)
        logger.error(HISTOGRAM_MISMATCH % message)
        raise InvalidDistributionError(message)
    p, q = _probs(p), _probs(q)
    if p.shape != q.shape:
        message = 'histograms have %d and %d bins' % (p.size, q.size)
        logger.error(HISTOGRAM_MISMATCH % message)
        raise InvalidDistributionError(message)
    p = (p + KL_EPSILON) / (p + KL_EPSILON).sum()
    q = (q + KL_EPSILON) / (q + KL_EPSILON).sum()
    return float(max(entropy(p, q), 0.0))


def angular_error(estimated: float, ground_truth: float) -> float:
    """
    Distancia por el arco mas corto, en grados dentro de [0, 180].
    """
    return math.degrees(abs(wrap_signed_angle(estimated - ground_truth)))


def depth_error(predicted: np.ndarray, ground_truth: np.ndarray, mask: np.ndarray,
                dataset_std: float) -> Optional[float]:
    """
    Error de profundidad normalizado de una muestra.

    Ambos mapas se centran en su media sobre la mascara y se dividen por la
    desviacion estandar de profundidad del dataset; el error es la media del
    valor absoluto de la diferencia en los pixeles de la mascara.

    Parameters
    ----------
    predicted, ground_truth : np.ndarray
        Mapas de profundidad (H, W).
    mask : np.ndarray
        Pixeles validos.
    dataset_std : float
        Desviacion estandar de las profundidades enmascaradas del dataset.

    Returns
    -------
    out : float, None
        Error, o None si la mascara esta vacia.
    """
    if not dataset_std > 0:
        logger.error(BAD_DEPTH_STD % dataset_std)
        raise ValueError('dataset_std must be > 0, got %r' % dataset_std)
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        return None
    predicted = np.asarray(predicted, dtype=np.float64)[mask]
    ground_truth = np.asarray(ground_truth, dtype=np.float64)[mask]
    difference = (predicted - predicted.mean()) - (ground_truth - ground_truth.mean())
    return float(np.mean(np.abs(difference)) / dataset_std)


def dataset_depth_std(depths: Sequence[np.ndarray], masks: Sequence[np.ndarray]) -> Optional[float]:
    values = [np.asarray(d, dtype=np.float64)[np.asarray(m, dtype=bool)]
              for d, m in zip(depths, masks)]
    values = np.concatenate(values) if values else np.empty(0)
    if values.size == 0:
        return None
    return float(np.std(values))


def fit_wrapped_gaussian(angles: Sequence[float]) -> Tuple[float, float]:
    """
    Ajusta una gaussiana envuelta por momentos circulares.

    Returns
    -------
    out : tuple
        (media, desviacion) con desviacion = sqrt(-2 ln R), R la longitud del
        vector medio.
    """
    angles = np.asarray(angles, dtype=np.float64)
    cos_mean, sin_mean = np.cos(angles).mean(), np.sin(angles).mean()
    length = max(math.hypot(cos_mean, sin_mean), 1e-12)
    return math.atan2(sin_mean, cos_mean), math.sqrt(max(-2.0 * math.log(min(length, 1.0)), 0.0))


def wrapped_gaussian_bin_probs(components: Sequence[Tuple[float, float, float]], n_bins: int,
                               value_range: Tuple[float, float] = (0.0, TWO_PI)) -> np.ndarray:
    """
    Discretiza una mezcla de gaussianas envueltas en los bins de un rango de
    azimut.

    Parameters
    ----------
    components : Sequence
        Tuplas (media, desviacion, peso).
    n_bins : int
        Numero de bins.
    value_range : tuple
        Rango cubierto por los bins.

    Returns
    -------
    out : np.ndarray
        Masa de cada bin, normalizada a 1 dentro del rango.
    """
    edges = np.linspace(value_range[0], value_range[1], n_bins + 1)
    probs = np.zeros(n_bins)
    for mean, std, weight in components:
        if std == 0:
            index = int(math.floor(wrap_angle(mean - edges[0]) / (edges[1] - edges[0])))
            if index < n_bins:
                probs[index] += weight
            continue
        wraps = int(math.ceil(4.0 * std / TWO_PI)) + 1
        for m in range(-wraps, wraps + 1):
            cdf = norm.cdf(edges + TWO_PI * m, loc=mean, scale=std)
            probs += weight * np.diff(cdf)
    total = probs.sum()
    return probs / total if total > 0 else np.full(n_bins, 1.0 / n_bins)


def _bin_distance(grid: PoseGrid, a: Tuple[int, int], b: Tuple[int, int]) -> Tuple[int, int]:
    d_theta = abs(a[0] - b[0])
    if grid.theta_range[1] - grid.theta_range[0] >= TWO_PI - 1e-9:
        d_theta = min(d_theta, grid.n_theta - d_theta)
    return d_theta, abs(a[1] - b[1])


def recovered(grid: PoseGrid, estimated: CameraPose, ground_truth: CameraPose) -> bool:
    """
    True si el bin estimado es el de referencia o uno vecino, en theta
    (circularmente) y en phi.
    """
    d_theta, d_phi = _bin_distance(grid, nearest_bin(grid, estimated.theta, estimated.phi),
                                   nearest_bin(grid, ground_truth.theta, ground_truth.phi))
    return d_theta <= 1 and d_phi <= 1


def _evaluate_entry(position: int, entry: DatasetEntry, bank: PoseBank,
                    config: RegistrationConfig, mode: str,
                    schedule: TemperatureSchedule, seed: int):
    gt = entry.pose
    record = dict(file=entry.file.name, gt_theta=gt.theta, gt_phi=gt.phi,
                  gt_gamma=gt.gamma, gt_r=gt.r)
    try:
        query = read_feature_map(entry.file)
        matches = score_bank(query, bank, config, threads=1)
    except (PoseBankError, OSError) as error:
        logger.warning(SKIP_ENTRY % (entry.file, error))
        return EntryRecord(error=str(error), **record), None, None

    errors = np.array([match.mse for match in matches])
    if mode == 'sample':
        pdf = pose_pdf(errors, tau_at(schedule, position), grid=bank.grid)
        rng = np.random.default_rng(seed + position)
        index = sample_bins(pdf, rng)
        estimate = jitter_pose(bank, index, matches[index].similarity, rng)
    else:
        index = int(np.argmin(errors))
        estimate = pose_from_match(bank, index, matches[index].similarity)

    record.update(est_theta=estimate.theta, est_phi=estimate.phi, est_gamma=estimate.gamma,
                  est_r=estimate.r, mse=float(errors[index]),
                  theta_err_deg=angular_error(estimate.theta, gt.theta))

    depth = None
    if entry.depth_file.exists():
        try:
            geometry = read_feature_map(entry.depth_file)
        except PoseBankError as error:
            logger.warning(SKIP_DEPTH % (entry.depth_file, error))
        else:
            similarity = matches[index].similarity
            predicted = warp(bank.depths[index], similarity)
            depth = (predicted, geometry[..., 0], geometry[..., 1] > DEPTH_MASK_ALPHA)
    return EntryRecord(**record), estimate, depth


def evaluate(dataset: LabeledDataset, bank: PoseBank,
             config: Optional[RegistrationConfig] = None, mode: str = 'argmax',
             schedule: Optional[TemperatureSchedule] = None, seed: int = 0,
             threads: Optional[int] = None) -> EvalReport:
    """
    Estima la pose de cada entrada del dataset y agrega las metricas.

    Parameters
    ----------
    dataset : LabeledDataset
        Dataset con poses de referencia.
    bank : PoseBank
        Banco de templates.
    config : RegistrationConfig, None
        Configuracion del registro.
    mode : str
        'argmax' usa la pose de maxima verosimilitud; 'sample' muestrea la
        entrada i con τ = tau_at(schedule, i) y semilla seed + i.
    schedule : TemperatureSchedule, None
        Rampa de temperatura del modo 'sample'.
    seed : int
        Semilla base del modo 'sample'.
    threads : int, None
        Hilos; el reporte no depende de este valor.

    Returns
    -------
    out : EvalReport
        Metricas agregadas (None si no hay entradas validas) y registros por
        entrada; las entradas ilegibles se registran con su error.
    """
    config = config or RegistrationConfig()
    schedule = schedule or TemperatureSchedule()
    logger.info(EVALUATE % (len(dataset.entries), bank.size, mode))

    results = ordered_map(
        lambda item: _evaluate_entry(item[0], item[1], bank, config, mode, schedule, seed),
        list(enumerate(dataset.entries)), threads)

    valid = [(entry, estimate) for entry, (_, estimate, _) in zip(dataset.entries, results)
             if estimate is not None]
    report = dict(mode=mode, n_entries=len(dataset.entries),
                  n_skipped=len(dataset.entries) - len(valid))
    records = [record for record, _, _ in results]

    if valid:
        gt_poses = [entry.pose for entry, _ in valid]
        estimates = [estimate for _, estimate in valid]
        gt_theta = pose_histogram(gt_poses, 'theta')
        est_theta = pose_histogram(estimates, 'theta')
        gt_phi = pose_histogram(gt_poses, 'phi')
        est_phi = pose_histogram(estimates, 'phi')
        mean, std = fit_wrapped_gaussian([pose.theta for pose in gt_poses])
        unimodal = wrapped_gaussian_bin_probs([(mean, std, 1.0)], gt_theta.n_bins,
                                              gt_theta.value_range)
        theta_errors = [record.theta_err_deg for record in records
                        if record.theta_err_deg is not None]
        hits = [recovered(bank.grid, estimate, gt) for gt, estimate in zip(gt_poses, estimates)]
        report.update(kl_theta=kl_divergence(gt_theta, est_theta),
                      kl_phi=kl_divergence(gt_phi, est_phi),
                      kl_theta_unimodal=kl_divergence(gt_theta, unimodal),
                      mean_theta_error_deg=float(np.mean(theta_errors)),
                      median_theta_error_deg=float(np.median(theta_errors)),
                      recovery_rate_1bin=float(np.mean(hits)),
                      gt_theta_hist=gt_theta, est_theta_hist=est_theta,
                      gt_phi_hist=gt_phi, est_phi_hist=est_phi)

    depths = [(i, depth) for i, (_, estimate, depth) in enumerate(results) if estimate is not None]
    available = [(i, depth) for i, depth in depths if depth is not None]
    std = dataset_depth_std([d[1] for _, d in available], [d[2] for _, d in available])
    depth_values = []
    for i, (predicted, ground_truth, mask) in available:
        value = depth_error(predicted, ground_truth, mask, std) if std else None
        if value is not None:
            records[i] = records[i].model_copy(update={'depth_error': value})
            depth_values.append(value)
    report.update(depth_error=float(np.mean(depth_values)) if depth_values else None,
                  depth_skipped=len(depths) - len(depth_values))

    result = EvalReport(entries=records, **report)
    logger.info(EVALUATION_DONE % (result.n_entries, result.n_skipped,
                                   result.recovery_rate_1bin, result.kl_theta))
    return result
