from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..errors import InvalidFieldError
from ..logger import logger
from ..logs.field_messages import *


def _frozen_float32(value) -> np.ndarray:
    array = np.array(value, dtype=np.float32, copy=True)
    array.flags.writeable = False
    return array


def _invalid(message: str):
    logger.error(INVALID_FIELD % message)
    raise InvalidFieldError(message)


def check_field_arrays(density: np.ndarray, color: np.ndarray,
                       bbox_min: np.ndarray, bbox_max: np.ndarray) -> None:
    """
    Verifica las invariantes de un campo de features.

    Parameters
    ----------
    density : np.ndarray
        Densidades de forma (gx, gy, gz).
    color : np.ndarray
        Colores de forma (gx, gy, gz, 3).
    bbox_min, bbox_max : np.ndarray
        Esquinas de la caja envolvente.

    Raises
    ------
    InvalidFieldError
        Si alguna invariante no se cumple; el mensaje nombra el voxel.
    """
    if density.ndim != 3 or min(density.shape) < 2:
        _invalid('field dims must be 3D with at least 2 voxels per axis, got %s'
                 % (density.shape,))
    if color.shape != density.shape + (3,):
        _invalid('color shape %s does not match dims %s' % (color.shape, density.shape))
    if not np.all(bbox_min < bbox_max):
        _invalid('bbox min %s must be below max %s' % (bbox_min.tolist(), bbox_max.tolist()))

    nan_voxels = np.argwhere(np.isnan(density))
    if len(nan_voxels):
        _invalid('density is NaN at voxel %s' % (tuple(int(i) for i in nan_voxels[0]),))
    negative_voxels = np.argwhere(density < 0)
    if len(negative_voxels):
        voxel = tuple(int(i) for i in negative_voxels[0])
        _invalid('negative density %r at voxel %s' % (float(density[voxel]), voxel))
    bad_color = np.argwhere(~((color >= 0) & (color <= 1)))
    if len(bad_color):
        voxel = tuple(int(i) for i in bad_color[0][:3])
        _invalid('color outside [0, 1] at voxel %s' % (voxel,))


class FeatureField(BaseModel):
    """
    Campo denso de features sobre una grilla de voxeles. Los voxeles estan en
    los vertices de una red regular que cubre la caja envolvente: el voxel
    (0, 0, 0) esta en bbox_min y el ultimo en bbox_max. Todos los arreglos se
    guardan en float32 y son de solo lectura.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    density: np.ndarray
    feature: np.ndarray
    color: np.ndarray
    bbox_min: np.ndarray = Field(default_factory=lambda: np.full(3, -1.0),
                                 validate_default=True)
    bbox_max: np.ndarray = Field(default_factory=lambda: np.full(3, 1.0),
                                 validate_default=True)

    @field_validator('density', 'feature', 'color', 'bbox_min', 'bbox_max', mode='before')
    @classmethod
    def _as_float32(cls, value):
        return _frozen_float32(value)

    @model_validator(mode='after')
    def _check_invariants(self):
        check_field_arrays(self.density, self.color, self.bbox_min, self.bbox_max)
        if self.feature.ndim != 4 or self.feature.shape[:3] != self.density.shape:
            raise InvalidFieldError('feature shape %s does not match dims %s'
                                    % (self.feature.shape, self.density.shape))
        return self

    @property
    def dims(self) -> Tuple[int, int, int]:
        return tuple(int(n) for n in self.density.shape)

    @property
    def feature_channels(self) -> int:
        return int(self.feature.shape[-1])

    @property
    def bbox(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.bbox_min, self.bbox_max


class RenderConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_samples: int = Field(default=64, ge=2)
    white_background: bool = False
    min_alpha_for_depth: float = Field(default=0.1, ge=0, le=1)


class RenderOutput(BaseModel):
    """
    Resultado del render volumetrico. color_map, feature_map y depth_map se
    obtienen con los mismos pesos T_i·α_i; donde alpha es 0 el feature es 0.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    color_map: np.ndarray
    feature_map: np.ndarray
    depth_map: np.ndarray
    alpha_map: np.ndarray
