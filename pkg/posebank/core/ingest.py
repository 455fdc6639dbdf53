"""
Ingesta de mapas de features externos de alta dimension: PCA comun sobre los
pixeles de primer plano de todas las entradas, proyeccion a 3 componentes y
enmascarado.
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sklearn.decomposition import PCA

from ..errors import IngestError
from ..logger import logger
from ..logs.ingest_messages import *
from ..models.ingest import IngestReport


N_COMPONENTS = 3
# varianza relativa bajo la cual una componente se considera degenerada
DEGENERATE_TOLERANCE = 1e-10


def _check_inputs(maps: Sequence[np.ndarray], masks: Optional[Sequence[np.ndarray]],
                  names: Sequence[str]) -> List[np.ndarray]:
    channels = {int(m.shape[-1]) for m in maps}
    if len(channels) > 1:
        logger.error(CHANNEL_MISMATCH % sorted(channels))
        raise IngestError('feature maps have different channel counts: %s' % sorted(channels))
    for feature_map, name in zip(maps, names):
        if feature_map.shape[-1] < N_COMPONENTS:
            logger.error(FEW_CHANNELS % (name, feature_map.shape[-1], N_COMPONENTS))
            raise IngestError('%s has %d channels, at least %d are required'
                              % (name, feature_map.shape[-1], N_COMPONENTS))

    if masks is None:
        return [np.ones(m.shape[:2], dtype=bool) for m in maps]
    if len(masks) != len(maps):
        logger.error(MASK_COUNT % (len(masks), len(maps)))
        raise IngestError('got %d masks for %d feature maps' % (len(masks), len(maps)))
    foreground = []
    for feature_map, mask, name in zip(maps, masks, names):
        mask = np.asarray(mask)
        if mask.ndim == 3 and mask.shape[-1] == 1:
            mask = mask[..., 0]
        if mask.shape != feature_map.shape[:2]:
            logger.error(BAD_MASK % name)
            raise IngestError('mask for %s has shape %s, expected %s'
                              % (name, mask.shape, feature_map.shape[:2]))
        foreground.append(mask != 0)
    return foreground


def reduce_features(maps: Sequence[np.ndarray], masks: Optional[Sequence[np.ndarray]] = None,
                    use_pca: bool = True,
                    names: Optional[Sequence[str]] = None) -> Tuple[List[np.ndarray], IngestReport]:
    """
    Reduce mapas de features a 3 canales con un PCA comun.

    Parameters
    ----------
    maps : Sequence[np.ndarray]
        Mapas (H, W, C) con C ≥ 3; todos con el mismo C.
    masks : Sequence[np.ndarray], None
        Mascaras (H, W) o (H, W, 1); distinto de cero es primer plano. Sin
        mascaras todos los pixeles son primer plano.
    use_pca : bool
        False deja pasar los canales sin proyectar (solo se enmascaran).
    names : Sequence[str], None
        Nombres usados en los mensajes de error.

    Returns
    -------
    out : tuple
        (mapas float32 (H, W, 3) con ceros fuera de la mascara, reporte con
        la varianza explicada).

    Raises
    ------
    IngestError
        Si hay menos de 3 canales, canales distintos entre entradas, mascaras
        que no coinciden o ningun pixel de primer plano.
    """
    maps = [np.asarray(m, dtype=np.float64) for m in maps]
    names = list(names) if names is not None else ['input %d' % i for i in range(len(maps))]
    foreground = _check_inputs(maps, masks, names)

    if not use_pca:
        reduced = [(m * f[..., None]).astype(np.float32) for m, f in zip(maps, foreground)]
        return reduced, IngestReport(n_inputs=len(maps), pca=False,
                                     n_pixels=int(sum(f.sum() for f in foreground)))

    samples = np.concatenate([m[f] for m, f in zip(maps, foreground)]) if maps else np.empty((0, 0))
    if len(samples) == 0:
        logger.error(EMPTY_FOREGROUND)
        raise IngestError('no foreground pixels to fit PCA')
    logger.info(FIT_PCA % (len(samples), len(maps)))

    n_components = min(N_COMPONENTS, samples.shape[0], samples.shape[1])
    pca = PCA(n_components=n_components, svd_solver='full')
    pca.fit(samples)

    variance = pca.explained_variance_
    scale = max(float(np.var(samples, axis=0, ddof=1).sum()) if len(samples) > 1 else 0.0, 1e-300)
    degenerate = [i for i in range(N_COMPONENTS)
                  if i >= n_components or variance[i] <= DEGENERATE_TOLERANCE * scale]
    if degenerate:
        logger.warning(DEGENERATE_COMPONENTS % degenerate)

    reduced = []
    for feature_map, mask in zip(maps, foreground):
        height, width, channels = feature_map.shape
        projected = np.zeros((height * width, N_COMPONENTS))
        projected[:, :n_components] = pca.transform(feature_map.reshape(-1, channels))
        projected[:, degenerate] = 0.0
        projected = projected.reshape(height, width, N_COMPONENTS) * mask[..., None]
        reduced.append(projected.astype(np.float32))

    ratio = pca.explained_variance_ratio_
    logger.info(EXPLAINED_VARIANCE % np.round(ratio, 4).tolist())
    report = IngestReport(n_inputs=len(maps), n_pixels=len(samples),
                          explained_variance=[float(v) for v in variance],
                          explained_variance_ratio=[float(v) for v in ratio],
                          degenerate_components=degenerate)
    return reduced, report
