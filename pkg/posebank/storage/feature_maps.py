import struct
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..errors import FieldFormatError
from ..logger import logger
from ..logs.storage_messages import *


MAGIC = b'TFM1'
# magic, H, W, F
HEADER = struct.Struct('<4s3I')
# formato crudo de ingesta: H, W, C
RAW_HEADER = struct.Struct('<3I')


def encode_feature_map(array: np.ndarray) -> bytes:
    """
    Codifica un mapa (H, W, F) en TFM1; los datos van en orden
    (fila·W + columna)·F + canal.
    """
    array = np.asarray(array)
    if array.ndim == 2:
        array = array[..., None]
    height, width, channels = array.shape
    return HEADER.pack(MAGIC, height, width, channels) + \
        np.ascontiguousarray(array, dtype='<f4').tobytes()


def decode_feature_map(data: bytes, offset: int = 0,
                       source: str = '<bytes>') -> Tuple[np.ndarray, int]:
    """
    Decodifica un bloque TFM1 que empieza en offset.

    Parameters
    ----------
    data : bytes
        Buffer que contiene el bloque.
    offset : int
        Posicion del magic.
    source : str
        Nombre usado en los mensajes de error.

    Returns
    -------
    out : tuple
        (mapa float32 de forma (H, W, F), posicion siguiente al bloque).
    """
    if len(data) - offset < HEADER.size:
        logger.error(TRUNCATED_FILE % source)
        raise FieldFormatError('%s: truncated feature-map header' % source)
    magic, height, width, channels = HEADER.unpack_from(data, offset)
    if magic != MAGIC:
        logger.error(BAD_MAGIC % (source, magic))
        raise FieldFormatError('%s: bad magic %r, expected %r' % (source, magic, MAGIC))

    count = height * width * channels
    start = offset + HEADER.size
    end = start + 4 * count
    if len(data) < end:
        logger.error(TRUNCATED_FILE % source)
        raise FieldFormatError('%s: payload has %d bytes, header implies %d'
                               % (source, len(data) - start, 4 * count))
    array = np.frombuffer(data, dtype='<f4', count=count, offset=start)
    return array.reshape(height, width, channels).astype(np.float32), end


def write_feature_map(array: np.ndarray, path: Union[str, Path]) -> None:
    Path(path).write_bytes(encode_feature_map(array))


def read_feature_map(path: Union[str, Path]) -> np.ndarray:
    data = Path(path).read_bytes()
    array, end = decode_feature_map(data, source=str(path))
    if end != len(data):
        logger.error(TRAILING_BYTES % path)
        raise FieldFormatError('%s: %d trailing bytes after feature map'
                               % (path, len(data) - end))
    return array


def write_raw_features(array: np.ndarray, path: Union[str, Path]) -> None:
    array = np.asarray(array)
    if array.ndim == 2:
        array = array[..., None]
    height, width, channels = array.shape
    Path(path).write_bytes(RAW_HEADER.pack(height, width, channels) +
                           np.ascontiguousarray(array, dtype='<f4').tobytes())


def read_raw_features(path: Union[str, Path]) -> np.ndarray:
    """
    Lee un mapa crudo de features (u32 H, W, C seguido de datos f32), el
    formato que produce cualquier extractor externo.

    Returns
    -------
    out : np.ndarray
        Arreglo float32 (H, W, C).
    """
    data = Path(path).read_bytes()
    if len(data) < RAW_HEADER.size:
        logger.error(TRUNCATED_FILE % path)
        raise FieldFormatError('%s: truncated raw header' % path)
    height, width, channels = RAW_HEADER.unpack_from(data)
    expected = RAW_HEADER.size + 4 * height * width * channels
    if len(data) != expected:
        logger.error(TRUNCATED_FILE % path)
        raise FieldFormatError('%s: raw payload has %d bytes, header implies %d'
                               % (path, len(data), expected))
    array = np.frombuffer(data, dtype='<f4', offset=RAW_HEADER.size)
    return array.reshape(height, width, channels).astype(np.float32)
