import os
from functools import lru_cache
from pathlib import Path

from fastapi import HTTPException, status

from ..errors import FieldFormatError
from ..logger import logger
from ..logs.estimate_messages import *
from ..models.estimator import PoseBank
from ..models.registration import RegistrationConfig
from ..storage.banks import read_bank


# banco que se sirve; `posebank serve --bank` la fija antes de levantar la API
BANK_PATH = os.getenv('POSEBANK_BANK', 'bank.tpb')
logger.info(BANK_PATH_SET % BANK_PATH)

# registro por defecto de /estimate; `posebank serve --no-phase-correlation --window` los fija
PHASE_CORRELATION = os.getenv('POSEBANK_PHASE_CORRELATION', '1') != '0'
WINDOW = os.getenv('POSEBANK_WINDOW', 'hann')


@lru_cache(maxsize=4)
def load_bank(path: str) -> PoseBank:
    return read_bank(path)


def get_bank() -> PoseBank:
    """
    Dependencia que entrega el banco servido, leido una sola vez.

    Raises
    ------
    HTTPException
        503 si el archivo no existe o no es un banco valido.
    """
    if not Path(BANK_PATH).is_file():
        logger.error(BANK_NOT_FOUND % BANK_PATH)
        raise HTTPException(status_code=status.HTTP_503_SERVICE_UNAVAILABLE,
                            detail='Pose bank %s not found' % BANK_PATH)
    try:
        return load_bank(BANK_PATH)
    except FieldFormatError as error:
        logger.error(BANK_UNREADABLE % (BANK_PATH, error))
        raise HTTPException(status_code=status.HTTP_503_SERVICE_UNAVAILABLE,
                            detail=str(error))


def get_registration() -> RegistrationConfig:
    """
    Configuracion de registro por defecto del servidor; el parametro
    phase_correlation de /estimate la reemplaza por consulta.
    """
    return RegistrationConfig(window=WINDOW, enabled=PHASE_CORRELATION)
