from pydantic import BaseModel, Field


class BenchRow(BaseModel):
    """
    Tiempos de un proceso medidos repeat veces, en segundos.
    """
    process: str
    grid: str
    repeat: int = Field(ge=1)
    min_s: float
    median_s: float
    max_s: float


class OracleReport(BaseModel):
    """
    Comparacion del registro Fourier-Mellin contra la busqueda exhaustiva en
    una grilla de escala y rotacion.
    """
    cases: int
    grid_size: int
    agreement: float = Field(ge=0, le=1)
    registration_s: float
    brute_force_s: float
    speedup: float
