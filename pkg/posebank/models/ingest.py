from typing import List

from pydantic import BaseModel, Field


class IngestReport(BaseModel):
    """
    Resumen de una ingesta: varianza explicada por cada componente principal
    conservada y cuales se emitieron como cero por falta de rango.
    """
    n_inputs: int = 0
    n_pixels: int = 0
    pca: bool = True
    explained_variance: List[float] = Field(default_factory=list)
    explained_variance_ratio: List[float] = Field(default_factory=list)
    degenerate_components: List[int] = Field(default_factory=list)
