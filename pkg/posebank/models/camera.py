import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


TWO_PI = 2.0 * math.pi


def wrap_angle(value: float) -> float:
    """
    Lleva un angulo al intervalo [0, 2π).

    Parameters
    ----------
    value : float
        Angulo en radianes.

    Returns
    -------
    out : float
        Angulo equivalente en [0, 2π).
    """
    wrapped = float(value) % TWO_PI
    # el modulo de un negativo muy pequeño puede redondear a 2π
    if wrapped >= TWO_PI:
        wrapped = 0.0
    return wrapped


def wrap_signed_angle(value: float) -> float:
    """
    Lleva un angulo al intervalo [-π, π).
    """
    return wrap_angle(float(value) + math.pi) - math.pi


class CameraPose(BaseModel):
    """
    Pose de 4 grados de libertad de una camara que vive en una esfera y mira
    hacia su centro: azimut theta, angulo polar phi (medido desde +z, phi = π/2
    es el ecuador), rotacion en el plano gamma y radio r.
    """
    model_config = ConfigDict(frozen=True)

    theta: float = 0.0
    phi: float = math.pi / 2.0
    gamma: float = 0.0
    r: float = Field(default=1.0, gt=0)

    @field_validator('theta')
    @classmethod
    def _wrap_theta(cls, value: float) -> float:
        return wrap_angle(value)

    @field_validator('phi')
    @classmethod
    def _clamp_phi(cls, value: float) -> float:
        return min(max(float(value), 0.0), math.pi)

    @field_validator('gamma')
    @classmethod
    def _wrap_gamma(cls, value: float) -> float:
        return wrap_signed_angle(value)


class PoseGrid(BaseModel):
    """
    Discretizacion de azimut y elevacion. Los centros de los bins representan
    las poses de la grilla; gamma y r quedan fijos.
    """
    model_config = ConfigDict(frozen=True)

    theta_range: Tuple[float, float] = (0.0, TWO_PI)
    phi_range: Tuple[float, float] = (math.radians(85.0), math.radians(95.0))
    n_theta: int = Field(default=36, ge=1)
    n_phi: int = Field(default=3, ge=1)
    gamma_fixed: float = 0.0
    r_fixed: float = Field(default=4.0, gt=0)

    @model_validator(mode='after')
    def _check_ranges(self):
        if not self.theta_range[0] < self.theta_range[1]:
            raise ValueError('theta_range must satisfy lo < hi')
        if not self.phi_range[0] <= self.phi_range[1]:
            raise ValueError('phi_range must satisfy lo <= hi')
        if self.phi_range[0] < 0.0 or self.phi_range[1] > math.pi:
            raise ValueError('phi_range must lie inside [0, pi]')
        return self

    @property
    def size(self) -> int:
        return self.n_theta * self.n_phi

    @property
    def theta_width(self) -> float:
        return (self.theta_range[1] - self.theta_range[0]) / self.n_theta

    @property
    def phi_width(self) -> float:
        return (self.phi_range[1] - self.phi_range[0]) / self.n_phi


class Intrinsics(BaseModel):
    model_config = ConfigDict(frozen=True)

    fov_y: float = Field(default=math.radians(36.0), gt=0, lt=math.pi)
    width: int = Field(default=64, ge=1)
    height: int = Field(default=64, ge=1)

    @property
    def focal(self) -> float:
        """
        Distancia focal en pixeles.
        """
        return 0.5 * self.height / math.tan(0.5 * self.fov_y)


class RayBundle(BaseModel):
    """
    Rayos de una imagen H×W: origenes, direcciones unitarias e intervalo
    [t_near, t_far] contra la caja envolvente del campo. Los rayos que no
    intersectan la caja tienen hit = False y t_near = t_far = 0.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    origins: np.ndarray
    directions: np.ndarray
    t_near: np.ndarray
    t_far: np.ndarray
    hit: np.ndarray

    @property
    def shape(self) -> Tuple[int, int]:
        return self.t_near.shape
