import math
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from .camera import Intrinsics, PoseGrid
from .field import RenderConfig
from .registration import RegistrationConfig


FULL_SPHERE = (0.0, math.pi)
NARROW_ELEVATION = (math.radians(85.0), math.radians(95.0))

# presets de discretizacion; la grilla angosta es la de la mayoria de datasets
# y la completa la de ShapeNet Cars
GRID_PRESETS: Dict[str, PoseGrid] = {
    'narrow': PoseGrid(n_theta=36, n_phi=3, phi_range=NARROW_ELEVATION),
    'shapenet': PoseGrid(n_theta=36, n_phi=18, phi_range=FULL_SPHERE),
    'frontal': PoseGrid(n_theta=36, n_phi=1,
                        theta_range=(-math.pi / 3.0, math.pi / 3.0),
                        phi_range=(math.pi / 2.0, math.pi / 2.0)),
    '12x6': PoseGrid(n_theta=12, n_phi=6, phi_range=FULL_SPHERE),
    '24x12': PoseGrid(n_theta=24, n_phi=12, phi_range=FULL_SPHERE),
    '36x18': PoseGrid(n_theta=36, n_phi=18, phi_range=FULL_SPHERE),
    '48x24': PoseGrid(n_theta=48, n_phi=24, phi_range=FULL_SPHERE),
    '60x30': PoseGrid(n_theta=60, n_phi=30, phi_range=FULL_SPHERE),
}


def grid_preset(name: str, r_fixed: Optional[float] = None) -> PoseGrid:
    """
    Retorna la grilla de un preset, opcionalmente con otro radio fijo.

    Parameters
    ----------
    name : str
        Nombre del preset (ver GRID_PRESETS).
    r_fixed : float, None
        Radio de la camara para el banco.

    Returns
    -------
    out : PoseGrid
        Grilla del preset.
    """
    grid = GRID_PRESETS[name]
    if r_fixed is not None:
        grid = grid.model_copy(update={'r_fixed': r_fixed})
    return grid


class RunConfig(BaseModel):
    """
    Configuracion de una ejecucion de la linea de comandos, construida a partir
    de los argumentos.
    """
    subcommand: str
    seed: int = 0
    paths: List[Path] = Field(default_factory=list)
    output: Optional[Path] = None
    grid: PoseGrid = Field(default_factory=lambda: GRID_PRESETS['narrow'])
    intrinsics: Intrinsics = Field(default_factory=Intrinsics)
    render_config: RenderConfig = Field(default_factory=RenderConfig)
    registration: RegistrationConfig = Field(default_factory=RegistrationConfig)
    tau: float = Field(default=1.0, gt=0)
    threads: int = Field(default=1, ge=1)
