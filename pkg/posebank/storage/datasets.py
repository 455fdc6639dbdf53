import csv
from pathlib import Path
from typing import List, Optional, Union

from ..errors import FieldFormatError
from ..logger import logger
from ..logs.storage_messages import *
from ..models.camera import CameraPose
from ..models.synth import DatasetEntry, DatasetInfo, LabeledDataset


MANIFEST_NAME = 'manifest.csv'
INFO_NAME = 'dataset.json'
MANIFEST_HEADER = ['file', 'theta', 'phi', 'gamma', 'r']


def write_manifest(entries: List[DatasetEntry], path: Union[str, Path]) -> None:
    """
    Escribe el manifest del dataset: una linea por entrada con la ruta del
    mapa (relativa al manifest) y la pose de referencia.
    """
    path = Path(path)
    with open(path, 'w', newline='') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(MANIFEST_HEADER)
        for entry in entries:
            pose = entry.pose
            writer.writerow([entry.file.name, repr(pose.theta), repr(pose.phi),
                             repr(pose.gamma), repr(pose.r)])


def write_dataset_info(info: DatasetInfo, directory: Union[str, Path]) -> None:
    Path(directory, INFO_NAME).write_text(info.model_dump_json(indent=2) + '\n')


def read_dataset(path: Union[str, Path]) -> LabeledDataset:
    """
    Lee un dataset etiquetado a partir de su directorio o de su manifest.

    Parameters
    ----------
    path : str, Path
        Directorio del dataset o ruta del manifest.csv.

    Returns
    -------
    out : LabeledDataset
        Entradas con rutas absolutas, pose de referencia y semilla de
        instancia (semilla del dataset + indice, si hay dataset.json).
    """
    path = Path(path)
    manifest = path / MANIFEST_NAME if path.is_dir() else path
    directory = manifest.parent
    logger.info(READ_DATASET % manifest)

    info: Optional[DatasetInfo] = None
    info_path = directory / INFO_NAME
    if info_path.exists():
        info = DatasetInfo.model_validate_json(info_path.read_text())
    base_seed = info.seed if info is not None else 0

    entries = []
    with open(manifest, newline='') as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != MANIFEST_HEADER:
            logger.error(BAD_MANIFEST % manifest)
            raise FieldFormatError('%s: manifest header must be %s, got %s'
                                   % (manifest, ','.join(MANIFEST_HEADER), header))
        for index, row in enumerate(reader):
            if not row:
                continue
            if len(row) != len(MANIFEST_HEADER):
                logger.error(BAD_MANIFEST % manifest)
                raise FieldFormatError('%s: line %d has %d fields'
                                       % (manifest, index + 2, len(row)))
            theta, phi, gamma, r = (float(value) for value in row[1:])
            entries.append(DatasetEntry(file=directory / row[0],
                                        pose=CameraPose(theta=theta, phi=phi, gamma=gamma, r=r),
                                        seed=base_seed + index))
    return LabeledDataset(entries=entries, manifest=manifest, info=info)
