import math
from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .camera import CameraPose, Intrinsics
from .field import RenderConfig


class TemplateSpec(BaseModel):
    """
    Especificacion del template procedural. asymmetry = 0 produce un objeto
    simetrico respecto a los planos x = 0 e y = 0; valores positivos agregan
    una parte marcadora que rompe la simetria frente/atras.
    """
    model_config = ConfigDict(frozen=True)

    seed: int = 0
    dims: Tuple[int, int, int] = (40, 40, 40)
    n_parts: int = Field(default=5, ge=2)
    asymmetry: float = Field(default=1.0, ge=0)
    feature_mode: Literal['part-id', 'color-copy', 'gray-copy'] = 'part-id'

    @model_validator(mode='after')
    def _check_dims(self):
        if min(self.dims) < 2:
            raise ValueError('dims must be >= 2 per axis')
        return self


class AzimuthComponent(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean: float
    std: float = Field(ge=0)
    weight: float = Field(ge=0)


class PoseDistSpec(BaseModel):
    """
    Distribucion de poses de referencia: mezcla de gaussianas envueltas en el
    azimut, elevacion uniforme, rotacion en el plano gaussiana y radio
    uniforme.
    """
    model_config = ConfigDict(frozen=True)

    components: List[AzimuthComponent] = Field(
        default_factory=lambda: [AzimuthComponent(mean=0.0, std=math.pi, weight=1.0)])
    phi_range: Tuple[float, float] = (math.radians(85.0), math.radians(95.0))
    gamma_std: float = Field(default=0.0, ge=0)
    r_range: Tuple[float, float] = (4.0, 4.0)

    @model_validator(mode='after')
    def _check_mixture(self):
        if not self.components:
            raise ValueError('at least one azimuth component is required')
        total = sum(component.weight for component in self.components)
        if abs(total - 1.0) > 1e-6:
            raise ValueError('component weights must sum to 1, got %r' % total)
        if not 0 < self.r_range[0] <= self.r_range[1]:
            raise ValueError('r_range must satisfy 0 < lo <= hi')
        if not 0 <= self.phi_range[0] <= self.phi_range[1] <= math.pi:
            raise ValueError('phi_range must lie inside [0, pi]')
        return self

    @property
    def weights(self) -> List[float]:
        total = sum(component.weight for component in self.components)
        return [component.weight / total for component in self.components]


class DatasetEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    file: Path
    pose: CameraPose
    seed: int

    @property
    def depth_file(self) -> Path:
        return self.file.with_name(self.file.stem + '.depth.tfm')


class DatasetInfo(BaseModel):
    """
    Metadatos del dataset que se guardan en dataset.json junto al manifest.
    """
    schema_version: int = 1
    seed: int
    n: int
    instance_strength: float
    intrinsics: Intrinsics
    render_config: RenderConfig
    pose_distribution: PoseDistSpec
    value_range: Tuple[float, float] = (0.0, 1.0)
    template_file: Optional[str] = None


class LabeledDataset(BaseModel):
    entries: List[DatasetEntry] = Field(default_factory=list)
    manifest: Path
    info: Optional[DatasetInfo] = None
