from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field


class PoseHistogram(BaseModel):
    """
    Histograma de un eje de la pose. Los bordes cubren exactamente el rango;
    out_of_range cuenta los valores de un eje no periodico que se asignaron al
    bin del borde mas cercano.
    """
    model_config = ConfigDict(frozen=True)

    axis: Literal['theta', 'phi']
    n_bins: int = Field(ge=2)
    value_range: Tuple[float, float]
    counts: List[int]
    probs: List[float]
    out_of_range: int = 0


class EntryRecord(BaseModel):
    file: str
    gt_theta: float
    gt_phi: float
    gt_gamma: float
    gt_r: float
    est_theta: Optional[float] = None
    est_phi: Optional[float] = None
    est_gamma: Optional[float] = None
    est_r: Optional[float] = None
    mse: Optional[float] = None
    theta_err_deg: Optional[float] = None
    depth_error: Optional[float] = None
    error: Optional[str] = None


class EvalReport(BaseModel):
    """
    Reporte de evaluacion. Las metricas agregadas son None cuando no hay
    entradas validas para calcularlas.
    """
    schema_version: int = 1
    mode: Literal['argmax', 'sample'] = 'argmax'
    n_entries: int = 0
    n_skipped: int = 0
    kl_theta: Optional[float] = None
    kl_phi: Optional[float] = None
    kl_theta_unimodal: Optional[float] = None
    mean_theta_error_deg: Optional[float] = None
    median_theta_error_deg: Optional[float] = None
    recovery_rate_1bin: Optional[float] = Field(default=None, ge=0, le=1)
    depth_error: Optional[float] = None
    depth_skipped: int = 0
    gt_theta_hist: Optional[PoseHistogram] = None
    est_theta_hist: Optional[PoseHistogram] = None
    gt_phi_hist: Optional[PoseHistogram] = None
    est_phi_hist: Optional[PoseHistogram] = None
    entries: List[EntryRecord] = Field(default_factory=list)
