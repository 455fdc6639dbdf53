"""
Mediciones de tiempo del pipeline (render del banco, correlacion de fase,
puntaje, muestreo y busqueda exhaustiva) y comparacion del registro contra el
oraculo de busqueda exhaustiva.
"""
import math
import time
from typing import Callable, List, Optional, Sequence

import numpy as np

from ..logger import logger
from ..logs.bench_messages import *
from ..models.bench import BenchRow, OracleReport
from ..models.camera import Intrinsics
from ..models.estimator import PoseBank
from ..models.field import FeatureField, RenderConfig
from ..models.registration import RegistrationConfig, Similarity2D
from ..models.run import grid_preset
from .estimator import build_pose_bank, pose_pdf, sample_pose, score_bank
from .registration import (brute_force_scale_rotation, estimate_scale_rotation,
                           mean_squared_error, warp)


ORACLE_SCALES = (0.8, 1.25)
ORACLE_ROTATIONS = (-math.pi / 4.0, math.pi / 4.0)


def time_call(func: Callable[[], object], repeat: int) -> List[float]:
    timings = []
    for _ in range(repeat):
        start = time.perf_counter()
        func()
        timings.append(time.perf_counter() - start)
    return timings


def bench_row(process: str, grid: str, func: Callable[[], object], repeat: int) -> BenchRow:
    timings = time_call(func, repeat)
    row = BenchRow(process=process, grid=grid, repeat=repeat, min_s=min(timings),
                   median_s=float(np.median(timings)), max_s=max(timings))
    logger.info(BENCH_ROW % (process, grid, row.median_s))
    return row


def bench_bank_rendering(field: FeatureField, presets: Sequence[str], intrinsics: Intrinsics,
                         config: RenderConfig, repeat: int = 1,
                         threads: Optional[int] = None) -> List[BenchRow]:
    """
    Tiempo de render del banco completo para cada preset de grilla; crece
    linealmente con el numero de bins.
    """
    return [bench_row('template rendering', name,
                      lambda grid=grid_preset(name): build_pose_bank(field, grid, intrinsics,
                                                                     config, threads),
                      repeat)
            for name in presets]


def best_candidate(template: np.ndarray, target: np.ndarray,
                   config: RegistrationConfig) -> Similarity2D:
    candidates = estimate_scale_rotation(template, target, config)
    errors = [mean_squared_error(warp(template, c), target) for c in candidates]
    return candidates[int(np.argmin(errors))]


def oracle_grid(size: int):
    return (np.linspace(ORACLE_SCALES[0], ORACLE_SCALES[1], size),
            np.linspace(ORACLE_ROTATIONS[0], ORACLE_ROTATIONS[1], size))


def bench_queries(bank: PoseBank, config: RegistrationConfig, repeat: int = 1,
                  oracle_size: int = 256, temperature: float = 1.0, seed: int = 0,
                  threads: Optional[int] = None) -> List[BenchRow]:
    """
    Tiempos por consulta: registro de un par, puntaje contra todo el banco,
    muestreo de una pose y busqueda exhaustiva de escala y rotacion.
    """
    grid = '%dx%d' % (bank.grid.n_theta, bank.grid.n_phi)
    template = bank.templates[0]
    query = warp(template, Similarity2D(scale=1.1, rotation=math.radians(20.0)))
    matches = score_bank(query, bank, config, threads)
    pdf = pose_pdf([m.mse for m in matches], temperature, grid=bank.grid)
    rng = np.random.default_rng(seed)
    scales, rotations = oracle_grid(oracle_size)

    return [
        bench_row('phase correlation', grid,
                  lambda: estimate_scale_rotation(template, query, config), repeat),
        bench_row('camera pose scoring', grid,
                  lambda: score_bank(query, bank, config, threads), repeat),
        bench_row('pose sampling', grid, lambda: sample_pose(pdf, bank, matches, rng), repeat),
        bench_row('naive grid search', '%dx%d' % (oracle_size, oracle_size),
                  lambda: brute_force_scale_rotation(template, query, scales, rotations), repeat),
    ]


def oracle_agreement(template: np.ndarray, cases: int, grid_size: int = 256, seed: int = 0,
                     config: Optional[RegistrationConfig] = None) -> OracleReport:
    """
    Compara el registro Fourier-Mellin con la busqueda exhaustiva.

    Para cada caso se transforma el template con una escala en [0.8, 1.25] y
    una rotacion en [-45°, 45°] aleatorias; el caso concuerda si ambos metodos
    difieren en a lo mas un paso de la grilla en escala y en rotacion.

    Parameters
    ----------
    template : np.ndarray
        Mapa de features de referencia.
    cases : int
        Numero de casos.
    grid_size : int
        Valores de escala y de rotacion de la grilla exhaustiva.
    seed : int
        Semilla de los casos.
    config : RegistrationConfig, None
        Configuracion del registro.

    Returns
    -------
    out : OracleReport
        Fraccion de concordancia y tiempos acumulados de ambos metodos.
    """
    config = config or RegistrationConfig()
    rng = np.random.default_rng(seed)
    scales, rotations = oracle_grid(grid_size)
    scale_step = scales[1] - scales[0]
    rotation_step = rotations[1] - rotations[0]

    agreed, registration_s, brute_force_s = 0, 0.0, 0.0
    for case in range(cases):
        truth = Similarity2D(scale=rng.uniform(*ORACLE_SCALES),
                             rotation=rng.uniform(*ORACLE_ROTATIONS))
        target = warp(template, truth)

        start = time.perf_counter()
        recovered = best_candidate(template, target, config)
        registration_s += time.perf_counter() - start

        start = time.perf_counter()
        oracle = brute_force_scale_rotation(template, target, scales, rotations)
        brute_force_s += time.perf_counter() - start

        close = (abs(recovered.scale - oracle.scale) <= scale_step + 1e-12 and
                 abs(math.remainder(recovered.rotation - oracle.rotation, 2.0 * math.pi))
                 <= rotation_step + 1e-12)
        agreed += int(close)
        logger.debug(ORACLE_CASE % (case, truth.scale, math.degrees(truth.rotation),
                                    recovered.scale, math.degrees(recovered.rotation), close))

    report = OracleReport(cases=cases, grid_size=grid_size,
                          agreement=agreed / cases if cases else 0.0,
                          registration_s=registration_s, brute_force_s=brute_force_s,
                          speedup=brute_force_s / registration_s if registration_s > 0 else 0.0)
    logger.info(ORACLE_DONE % (100.0 * report.agreement, report.speedup))
    return report
