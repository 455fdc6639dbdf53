import struct
from pathlib import Path
from typing import Union

import numpy as np

from ..core.geometry import enumerate_grid
from ..errors import FieldFormatError
from ..logger import logger
from ..logs.storage_messages import *
from ..models.camera import Intrinsics, PoseGrid
from ..models.estimator import PoseBank
from ..models.field import RenderConfig
from .feature_maps import decode_feature_map, encode_feature_map


MAGIC = b'TPB1'
# magic; n_theta, n_phi; theta_lo, theta_hi, phi_lo, phi_hi, gamma_fixed,
# r_fixed; fov_y; width, height; n_samples; white_background;
# min_alpha_for_depth
HEADER = struct.Struct('<4s2I6dd2II?d')


def encode_bank(bank: PoseBank) -> bytes:
    grid = bank.grid
    intrinsics = bank.intrinsics
    config = bank.render_config
    header = HEADER.pack(MAGIC, grid.n_theta, grid.n_phi,
                         grid.theta_range[0], grid.theta_range[1],
                         grid.phi_range[0], grid.phi_range[1],
                         grid.gamma_fixed, grid.r_fixed,
                         intrinsics.fov_y, intrinsics.width, intrinsics.height,
                         config.n_samples, config.white_background,
                         config.min_alpha_for_depth)
    blocks = [header]
    blocks.extend(encode_feature_map(template) for template in bank.templates)
    blocks.extend(encode_feature_map(np.stack([depth, alpha], axis=-1))
                  for depth, alpha in zip(bank.depths, bank.alphas))
    return b''.join(blocks)


def decode_bank(data: bytes, source: str = '<bytes>') -> PoseBank:
    """
    Decodifica un contenedor TPB1: cabecera de grilla seguida de K bloques TFM1
    con los templates y K bloques TFM1 con (profundidad, alpha).
    """
    if len(data) < HEADER.size:
        logger.error(TRUNCATED_FILE % source)
        raise FieldFormatError('%s: truncated bank header' % source)
    (magic, n_theta, n_phi, theta_lo, theta_hi, phi_lo, phi_hi, gamma_fixed,
     r_fixed, fov_y, width, height, n_samples, white_background,
     min_alpha) = HEADER.unpack_from(data)
    if magic != MAGIC:
        logger.error(BAD_MAGIC % (source, magic))
        raise FieldFormatError('%s: bad magic %r, expected %r' % (source, magic, MAGIC))

    grid = PoseGrid(theta_range=(theta_lo, theta_hi), phi_range=(phi_lo, phi_hi),
                    n_theta=n_theta, n_phi=n_phi, gamma_fixed=gamma_fixed,
                    r_fixed=r_fixed)
    intrinsics = Intrinsics(fov_y=fov_y, width=width, height=height)
    config = RenderConfig(n_samples=n_samples, white_background=white_background,
                          min_alpha_for_depth=min_alpha)

    offset = HEADER.size
    templates, geometry = [], []
    for target in [templates] * grid.size + [geometry] * grid.size:
        block, offset = decode_feature_map(data, offset, source=source)
        target.append(block)
    if offset != len(data):
        logger.error(TRAILING_BYTES % source)
        raise FieldFormatError('%s: %d trailing bytes after bank' % (source, len(data) - offset))

    geometry = np.stack(geometry)
    return PoseBank(grid=grid, poses=enumerate_grid(grid), templates=np.stack(templates),
                    depths=geometry[..., 0], alphas=geometry[..., 1],
                    intrinsics=intrinsics, render_config=config)


def write_bank(bank: PoseBank, path: Union[str, Path]) -> None:
    logger.info(WRITE_BANK % (bank.size, path))
    Path(path).write_bytes(encode_bank(bank))


def read_bank(path: Union[str, Path]) -> PoseBank:
    logger.info(READ_BANK % path)
    return decode_bank(Path(path).read_bytes(), source=str(path))
