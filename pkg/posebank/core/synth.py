"""
Generacion procedural de templates, instancias perturbadas y datasets
etiquetados con poses de referencia.

El template es una union de elipsoides de borde suave: un cuerpo central y
partes reflejadas respecto a los planos x = 0 e y = 0, de modo que sin
marcador el objeto es invariante a una rotacion de 180° alrededor de z. La
asimetria agrega una parte marcadora con su propio feature del lado +x.
"""
import math
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy import ndimage
from scipy.special import expit

from ..logger import logger
from ..logs.synth_messages import *
from ..models.camera import CameraPose, Intrinsics
from ..models.field import FeatureField, RenderConfig
from ..models.synth import (DatasetEntry, DatasetInfo, LabeledDataset, PoseDistSpec,
                            TemplateSpec)
from ..storage.datasets import MANIFEST_NAME, write_dataset_info, write_manifest
from ..storage.feature_maps import write_feature_map
from ..worker.pool import ordered_map
from .field import render


BODY_RADII = (0.75, 0.35, 0.3)
# pendiente del sigmoide que suaviza el borde de cada parte
EDGE_SHARPNESS = 12.0
DENSITY_SCALE = 20.0
NOISE_GRID = 4


def _part_features(count: int) -> np.ndarray:
    # puntos distintos sobre un circulo en el cubo [0, 1]^3
    angles = 2.0 * math.pi * np.arange(count) / count
    offsets = np.array([0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0])
    return 0.5 + 0.5 * np.cos(angles[:, None] + offsets[None, :])


def _lattice(dims: Tuple[int, int, int]) -> np.ndarray:
    axes = [np.linspace(-1.0, 1.0, n) for n in dims]
    return np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1)


def _occupancy(points: np.ndarray, center, radii) -> np.ndarray:
    distance = np.linalg.norm((points - np.asarray(center)) / np.asarray(radii), axis=-1)
    return expit((1.0 - distance) * EDGE_SHARPNESS)


def _parts(spec: TemplateSpec, rng: np.random.Generator) -> List[Tuple[List, Tuple, int]]:
    """
    Lista de partes (centros, radios, id de parte). Cada parte extra se replica
    en (±x, ±y) para que el objeto sea simetrico.
    """
    parts = [([(0.0, 0.0, 0.0)], BODY_RADII, 0)]
    for part_id in range(1, spec.n_parts):
        cx, cy, cz = rng.uniform(0.2, 0.6), rng.uniform(0.15, 0.35), rng.uniform(-0.25, 0.25)
        radii = tuple(rng.uniform(0.1, 0.22, size=3))
        centers = [(sx * cx, sy * cy, cz) for sx in (1.0, -1.0) for sy in (1.0, -1.0)]
        parts.append((centers, radii, part_id))
    if spec.asymmetry > 0:
        radius = 0.12 + 0.15 * min(spec.asymmetry, 1.0)
        parts.append(([(0.6, 0.2 * spec.asymmetry, 0.2)], (radius,) * 3, spec.n_parts))
    return parts


def make_template(spec: TemplateSpec) -> FeatureField:
    """
    Construye el campo de features del template procedural.

    Parameters
    ----------
    spec : TemplateSpec
        Semilla, resolucion, numero de partes, asimetria y modo de features.

    Returns
    -------
    out : FeatureField
        Campo con features por parte (part-id, F = 3) o copiadas del color
        (color-copy, F = 3; gray-copy, F = 1). Depende solo de spec.
    """
    logger.info(MAKE_TEMPLATE % (spec.seed, spec.n_parts, spec.asymmetry, spec.feature_mode))
    rng = np.random.default_rng(spec.seed)
    points = _lattice(spec.dims)
    parts = _parts(spec, rng)
    palette = rng.uniform(0.25, 0.75, size=(spec.n_parts + 1, 3))
    features = _part_features(spec.n_parts + 1)

    occupancy = np.zeros((len(parts),) + tuple(spec.dims))
    for i, (centers, radii, _) in enumerate(parts):
        for center in centers:
            occupancy[i] = np.maximum(occupancy[i], _occupancy(points, center, radii))

    owner = np.array([part_id for _, _, part_id in parts])[np.argmax(occupancy, axis=0)]
    density = DENSITY_SCALE * occupancy.max(axis=0)
    color = palette[owner]
    if spec.feature_mode == 'part-id':
        feature = features[owner]
    elif spec.feature_mode == 'color-copy':
        feature = color.copy()
    else:
        feature = color.mean(axis=-1, keepdims=True)
    return FeatureField(density=density, feature=feature, color=color)


def _smooth_noise(rng: np.random.Generator, dims: Tuple[int, ...], count: int) -> np.ndarray:
    """
    count campos de ruido de baja frecuencia normalizados a [-1, 1].
    """
    coarse = rng.standard_normal((count,) + (NOISE_GRID,) * 3)
    zoom = [n / NOISE_GRID for n in dims]
    fields = np.stack([ndimage.zoom(c, zoom, order=3) for c in coarse])
    peak = np.abs(fields).reshape(count, -1).max(axis=1)
    return fields / np.maximum(peak, 1e-12)[:, None, None, None]


def make_instance(template: FeatureField, seed: int, strength: float,
                  feature_mode: Optional[str] = None) -> FeatureField:
    """
    Perturba el template para simular una instancia de la categoria.

    La densidad se multiplica por (1 + 0.5·s·n), el color recibe ruido aditivo
    de amplitud 0.5·s por canal y los features ruido de amplitud 0.2·s (la
    media de los ruidos del color), de modo que los features cambian menos que
    la apariencia. En los modos color-copy y gray-copy los features se vuelven
    a copiar del color perturbado.

    Parameters
    ----------
    template : FeatureField
        Campo del template.
    seed : int
        Semilla de la instancia.
    strength : float
        Intensidad s en [0, 1]; 0 retorna el template sin cambios.
    feature_mode : str, None
        Modo con el que se construyo el template.

    Returns
    -------
    out : FeatureField
        Campo de la instancia.
    """
    if not 0.0 <= strength <= 1.0:
        logger.error(BAD_STRENGTH % strength)
        raise ValueError('strength must lie in [0, 1], got %r' % strength)
    if strength == 0:
        return template

    rng = np.random.default_rng(seed)
    noise = _smooth_noise(rng, template.dims, 4)
    density = template.density * (1.0 + 0.5 * strength * noise[0])
    color_noise = np.moveaxis(noise[1:], 0, -1)
    color = np.clip(template.color + 0.5 * strength * color_noise, 0.0, 1.0)

    if feature_mode == 'color-copy':
        feature = color
    elif feature_mode == 'gray-copy':
        feature = color.mean(axis=-1, keepdims=True)
    else:
        feature = template.feature + 0.2 * strength * color_noise.mean(axis=-1, keepdims=True)
    return FeatureField(density=density, feature=feature, color=color,
                        bbox_min=template.bbox_min, bbox_max=template.bbox_max)


def sample_gt_pose(dist: PoseDistSpec, rng: np.random.Generator) -> CameraPose:
    """
    Muestrea una pose de referencia: componente de la mezcla segun su peso,
    theta de una gaussiana envuelta, phi uniforme, gamma gaussiana y r
    uniforme. Siempre consume los mismos numeros aleatorios.
    """
    component = dist.components[int(rng.choice(len(dist.components), p=dist.weights))]
    theta = rng.normal(component.mean, component.std)
    phi = rng.uniform(*dist.phi_range)
    gamma = rng.normal(0.0, dist.gamma_std)
    r = rng.uniform(*dist.r_range)
    return CameraPose(theta=theta, phi=phi, gamma=gamma, r=r)


def entry_name(index: int) -> str:
    return 'entry_%05d.tfm' % index


def make_dataset(template: FeatureField, dist: PoseDistSpec, n: int, seed: int,
                 instance_strength: float, out_dir: Union[str, Path],
                 intrinsics: Optional[Intrinsics] = None,
                 render_config: Optional[RenderConfig] = None,
                 feature_mode: Optional[str] = None,
                 template_file: Optional[str] = None,
                 threads: Optional[int] = None) -> LabeledDataset:
    """
    Genera un dataset etiquetado en out_dir.

    Para la entrada i (semilla seed + i) se perturba el template, se muestrea
    la pose de referencia y se renderiza el mapa de features, que se guarda en
    entry_<i>.tfm junto con entry_<i>.depth.tfm (profundidad y alpha). Al
    final se escriben manifest.csv y dataset.json.

    Parameters
    ----------
    template : FeatureField
        Campo del template.
    dist : PoseDistSpec
        Distribucion de poses de referencia.
    n : int
        Numero de entradas.
    seed : int
        Semilla del dataset.
    instance_strength : float
        Intensidad de la perturbacion por instancia.
    out_dir : str, Path
        Directorio de salida; se crea si no existe.
    intrinsics : Intrinsics, None
        Resolucion de los mapas.
    render_config : RenderConfig, None
        Configuracion del render.
    feature_mode : str, None
        Modo de features del template (ver make_instance).
    template_file : str, None
        Ruta del template que se registra en dataset.json.
    threads : int, None
        Hilos; el dataset no depende de este valor.

    Returns
    -------
    out : LabeledDataset
        Entradas escritas.
    """
    intrinsics = intrinsics or Intrinsics()
    render_config = render_config or RenderConfig()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    logger.info(MAKE_DATASET % (n, seed, out_dir))

    def make_entry(index: int) -> Tuple[DatasetEntry, float, float]:
        entry_seed = seed + index
        pose = sample_gt_pose(dist, np.random.default_rng([entry_seed, 1]))
        instance = make_instance(template, entry_seed, instance_strength, feature_mode)
        output = render(instance, pose, intrinsics, render_config)
        entry = DatasetEntry(file=out_dir / entry_name(index), pose=pose, seed=entry_seed)
        write_feature_map(output.feature_map, entry.file)
        write_feature_map(np.stack([output.depth_map, output.alpha_map], axis=-1),
                          entry.depth_file)
        return entry, float(output.feature_map.min()), float(output.feature_map.max())

    results = ordered_map(make_entry, range(n), threads)
    entries = [entry for entry, _, _ in results]
    if results:
        value_range = (min(lo for _, lo, _ in results), max(hi for _, _, hi in results))
    else:
        value_range = (0.0, 1.0)

    info = DatasetInfo(seed=seed, n=n, instance_strength=instance_strength,
                       intrinsics=intrinsics, render_config=render_config,
                       pose_distribution=dist, value_range=value_range,
                       template_file=template_file)
    manifest = out_dir / MANIFEST_NAME
    write_manifest(entries, manifest)
    write_dataset_info(info, out_dir)
    return LabeledDataset(entries=entries, manifest=manifest, info=info)
