from typing import Literal, Optional

import numpy as np
from fastapi import APIRouter, Depends, File, HTTPException, Query, UploadFile, status

from ..core.estimator import jitter_pose, pose_from_match, pose_pdf, sample_bins, score_bank
from ..errors import (DimensionMismatchError, FieldFormatError, InvalidDistributionError,
                      InvalidQueryError)
from ..logger import logger
from ..logs.estimate_messages import *

from ..dependencies.bank import get_bank, get_registration
from ..models.api import BankSummary, EstimateOut
from ..models.estimator import PoseBank
from ..models.registration import RegistrationConfig
from ..storage.feature_maps import decode_feature_map


router = APIRouter()


@router.get('/bank', response_model=BankSummary)
def read_bank_info(bank: PoseBank = Depends(get_bank)):
    logger.info(READ_BANK_INFO)
    grid = bank.grid
    return BankSummary(n_theta=grid.n_theta, n_phi=grid.n_phi, theta_range=grid.theta_range,
                       phi_range=grid.phi_range, r_fixed=grid.r_fixed, size=bank.size,
                       map_shape=bank.map_shape)


@router.post('/estimate', response_model=EstimateOut)
def estimate_pose(file: UploadFile = File(...),
                  mode: Literal['argmax', 'sample'] = Query('argmax'),
                  tau: float = Query(1.0, gt=0),
                  seed: int = Query(0),
                  phase_correlation: Optional[bool] = Query(None),
                  bank: PoseBank = Depends(get_bank),
                  registration: RegistrationConfig = Depends(get_registration)):
    """
    Estima la pose de un mapa de features TFM1 subido como archivo. En modo
    'sample' la pose se muestrea de la PDF con temperatura tau y semilla seed.
    Sin phase_correlation se usa el registro con que se levanto el servidor.
    """
    logger.info(ESTIMATE_POSE % (file.filename, mode))
    data = file.file.read()
    try:
        query, end = decode_feature_map(data, source=file.filename or '<upload>')
        if end != len(data):
            raise FieldFormatError('%s: %d trailing bytes after feature map'
                                   % (file.filename, len(data) - end))
        if phase_correlation is not None:
            registration = registration.model_copy(update={'enabled': phase_correlation})
        matches = score_bank(query, bank, registration, threads=1)
        errors = np.array([match.mse for match in matches])
        pdf = pose_pdf(errors, tau, grid=bank.grid)
    except (FieldFormatError, DimensionMismatchError, InvalidQueryError,
            InvalidDistributionError) as error:
        logger.error(BAD_QUERY % (file.filename, error))
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(error))

    if mode == 'sample':
        rng = np.random.default_rng(seed)
        index = sample_bins(pdf, rng)
        pose = jitter_pose(bank, index, matches[index].similarity, rng)
    else:
        index = int(np.argmin(errors))
        pose = pose_from_match(bank, index, matches[index].similarity)

    logger.info(ESTIMATED_POSE % (index, file.filename))
    return EstimateOut(mode=mode, index=index, theta=pose.theta, phi=pose.phi,
                       gamma=pose.gamma, r=pose.r, mse=float(errors[index]),
                       probability=float(pdf.probs[index]),
                       similarity=matches[index].similarity)
