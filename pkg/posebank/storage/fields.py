import struct
from pathlib import Path
from typing import Union

import numpy as np

from ..errors import FieldFormatError
from ..logger import logger
from ..logs.storage_messages import *
from ..models.field import FeatureField, check_field_arrays


MAGIC = b'TFF1'
# magic, gx, gy, gz, F, bbox min (x, y, z), bbox max (x, y, z)
HEADER = struct.Struct('<4s4I6f')


def encode_field(field: FeatureField) -> bytes:
    gx, gy, gz = field.dims
    header = HEADER.pack(MAGIC, gx, gy, gz, field.feature_channels,
                         *field.bbox_min.tolist(), *field.bbox_max.tolist())
    # el orden C de (gx, gy, gz[, canal]) es idx = (ix·gy + iy)·gz + iz con el
    # canal como indice mas rapido
    return b''.join([header,
                     field.density.astype('<f4').tobytes(),
                     field.feature.astype('<f4').tobytes(),
                     field.color.astype('<f4').tobytes()])


def decode_field(data: bytes, source: str = '<bytes>') -> FeatureField:
    """
    Decodifica un campo en formato TFF1.

    Parameters
    ----------
    data : bytes
        Contenido completo del archivo.
    source : str
        Nombre usado en los mensajes de error.

    Returns
    -------
    out : FeatureField
        Campo validado.

    Raises
    ------
    FieldFormatError
        Magic incorrecto o datos truncados.
    InvalidFieldError
        Densidad NaN o negativa, color fuera de rango; nombra el voxel.
    """
    if len(data) < HEADER.size:
        logger.error(TRUNCATED_FILE % source)
        raise FieldFormatError('%s: truncated header (%d bytes)' % (source, len(data)))
    magic, gx, gy, gz, channels, *bbox = HEADER.unpack_from(data)
    if magic != MAGIC:
        logger.error(BAD_MAGIC % (source, magic))
        raise FieldFormatError('%s: bad magic %r, expected %r' % (source, magic, MAGIC))

    voxels = gx * gy * gz
    counts = (voxels, voxels * channels, voxels * 3)
    expected = HEADER.size + 4 * sum(counts)
    if len(data) != expected:
        logger.error(TRUNCATED_FILE % source)
        raise FieldFormatError('%s: payload has %d bytes, header implies %d'
                               % (source, len(data), expected))

    offset = HEADER.size
    arrays = []
    for count in counts:
        arrays.append(np.frombuffer(data, dtype='<f4', count=count, offset=offset))
        offset += 4 * count
    density = arrays[0].reshape(gx, gy, gz)
    feature = arrays[1].reshape(gx, gy, gz, channels)
    color = arrays[2].reshape(gx, gy, gz, 3)
    bbox_min = np.array(bbox[:3], dtype=np.float32)
    bbox_max = np.array(bbox[3:], dtype=np.float32)

    check_field_arrays(density, color, bbox_min, bbox_max)
    return FeatureField(density=density, feature=feature, color=color,
                        bbox_min=bbox_min, bbox_max=bbox_max)


def write_field(field: FeatureField, path: Union[str, Path]) -> None:
    logger.info(WRITE_FIELD % path)
    Path(path).write_bytes(encode_field(field))


def read_field(path: Union[str, Path]) -> FeatureField:
    logger.info(READ_FIELD % path)
    return decode_field(Path(path).read_bytes(), source=str(path))
