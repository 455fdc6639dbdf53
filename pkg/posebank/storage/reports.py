import csv
import sys
from pathlib import Path
from typing import List, Union

from ..logger import logger
from ..logs.storage_messages import *
from ..models.bench import BenchRow
from ..models.metrics import EvalReport


ENTRY_COLUMNS = ['file', 'gt_theta', 'gt_phi', 'gt_gamma', 'gt_r', 'est_theta',
                 'est_phi', 'est_gamma', 'est_r', 'mse', 'theta_err_deg']


def write_report_json(report: EvalReport, path: Union[str, Path]) -> None:
    logger.info(WRITE_REPORT % path)
    Path(path).write_text(report.model_dump_json(indent=2) + '\n')


def read_report_json(path: Union[str, Path]) -> EvalReport:
    return EvalReport.model_validate_json(Path(path).read_text())


def write_entries_csv(report: EvalReport, path: Union[str, Path]) -> None:
    """
    Escribe un registro por entrada; los valores ausentes (entradas que no se
    pudieron leer) quedan vacios.
    """
    with open(path, 'w', newline='') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(ENTRY_COLUMNS)
        for record in report.entries:
            values = record.model_dump()
            writer.writerow(['' if values[column] is None else values[column]
                             for column in ENTRY_COLUMNS])


BENCH_COLUMNS = ['process', 'grid', 'repeat', 'min_s', 'median_s', 'max_s']


def write_bench_csv(rows: List[BenchRow], path: Union[str, Path, None] = None) -> None:
    """
    Escribe la tabla de tiempos; sin ruta la escribe en la salida estandar.
    """
    fh = open(path, 'w', newline='') if path is not None else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(BENCH_COLUMNS)
        for row in rows:
            writer.writerow([getattr(row, column) for column in BENCH_COLUMNS])
    finally:
        if path is not None:
            fh.close()
