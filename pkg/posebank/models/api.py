from typing import Literal, Tuple

from pydantic import BaseModel

from .registration import Similarity2D


class BankSummary(BaseModel):
    """
    Descripcion del banco servido: grilla, numero de templates y forma de los
    mapas que acepta /estimate.
    """
    n_theta: int
    n_phi: int
    theta_range: Tuple[float, float]
    phi_range: Tuple[float, float]
    r_fixed: float
    size: int
    map_shape: Tuple[int, int, int]


class EstimateOut(BaseModel):
    mode: Literal['argmax', 'sample']
    index: int
    theta: float
    phi: float
    gamma: float
    r: float
    mse: float
    probability: float
    similarity: Similarity2D
