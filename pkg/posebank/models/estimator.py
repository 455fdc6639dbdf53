from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .camera import CameraPose, Intrinsics, PoseGrid
from .field import RenderConfig
from .registration import Similarity2D


class PoseBank(BaseModel):
    """
    Banco de templates 2D renderizados desde cada bin (theta, phi) de la
    grilla. templates tiene forma (K, H, W, F); depths y alphas tienen forma
    (K, H, W) y salen del mismo render. El indice k coincide con el orden de
    enumerate_grid.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: PoseGrid
    poses: List[CameraPose]
    templates: np.ndarray
    depths: np.ndarray
    alphas: np.ndarray
    intrinsics: Intrinsics
    render_config: RenderConfig

    @model_validator(mode='after')
    def _check_sizes(self):
        size = self.grid.size
        if not len(self.poses) == len(self.templates) == size:
            raise ValueError('bank holds %d poses and %d templates, grid expects %d'
                             % (len(self.poses), len(self.templates), size))
        if self.depths.shape != self.templates.shape[:3] or self.alphas.shape != self.depths.shape:
            raise ValueError('depth/alpha maps must have shape %s'
                             % (self.templates.shape[:3],))
        return self

    @property
    def size(self) -> int:
        return len(self.poses)

    @property
    def map_shape(self):
        return tuple(int(n) for n in self.templates.shape[1:])


class MatchResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    index: int = Field(ge=0)
    similarity: Similarity2D
    mse: float = Field(ge=0)
    warped: Optional[np.ndarray] = None


class PoseDistribution(BaseModel):
    """
    PDF sobre los bins del banco: probs es un vector 1D no negativo que suma 1.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    probs: np.ndarray
    temperature: float = Field(gt=0)
    grid: Optional[PoseGrid] = None

    @model_validator(mode='after')
    def _check_simplex(self):
        probs = self.probs
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError('probs must be a non-empty vector, got shape %s' % (probs.shape,))
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise ValueError('probs must be finite and non-negative')
        if abs(float(probs.sum()) - 1.0) > 1e-6:
            raise ValueError('probs sum to %.9g, expected 1' % float(probs.sum()))
        if self.grid is not None and probs.size != self.grid.size:
            raise ValueError('%d probabilities for a grid of %d bins'
                             % (probs.size, self.grid.size))
        return self


class TemperatureSchedule(BaseModel):
    """
    Rampa lineal de temperatura: empieza en tau_start, crece linealmente hasta
    tau_end en ramp_iters iteraciones y luego se queda constante.
    """
    model_config = ConfigDict(frozen=True)

    tau_start: float = Field(default=1.0, gt=0)
    tau_end: float = Field(default=100.0, gt=0)
    ramp_iters: int = Field(default=1000, ge=1)

    @model_validator(mode='after')
    def _check_order(self):
        if self.tau_end < self.tau_start:
            raise ValueError('tau_end must be >= tau_start')
        return self
