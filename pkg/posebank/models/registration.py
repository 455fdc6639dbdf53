from typing import Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .camera import wrap_signed_angle


class Similarity2D(BaseModel):
    """
    Transformacion de similitud entre dos mapas de features: escala isotropica
    (template -> objetivo) y rotacion en el plano alrededor del centro de la
    imagen. clamped indica que la escala recuperada se salio de los limites.
    """
    model_config = ConfigDict(frozen=True)

    scale: float = Field(default=1.0, gt=0)
    rotation: float = 0.0
    confidence: float = Field(default=0.0, ge=0)
    clamped: bool = False

    @field_validator('rotation')
    @classmethod
    def _wrap_rotation(cls, value: float) -> float:
        return wrap_signed_angle(value)

    @property
    def is_identity(self) -> bool:
        return abs(self.scale - 1.0) < 1e-12 and abs(self.rotation) < 1e-12


IDENTITY = Similarity2D()


class RegistrationConfig(BaseModel):
    """
    Parametros del registro Fourier-Mellin. enabled = False desactiva la
    estimacion de escala y rotacion (modo de 2 grados de libertad).
    """
    model_config = ConfigDict(frozen=True)

    window: Literal['hann', 'hamming', 'blackman', 'boxcar'] = 'hann'
    log_polar_size: Tuple[int, int] = (128, 360)
    scale_bounds: Tuple[float, float] = (0.5, 2.0)
    subpixel: bool = True
    enabled: bool = True

    @model_validator(mode='after')
    def _check_sizes(self):
        radial, angular = self.log_polar_size
        if radial < 32 or angular < 32:
            raise ValueError('log_polar_size must be at least (32, 32)')
        s_min, s_max = self.scale_bounds
        if not 0 < s_min < 1 < s_max:
            raise ValueError('scale_bounds must satisfy 0 < s_min < 1 < s_max')
        return self
