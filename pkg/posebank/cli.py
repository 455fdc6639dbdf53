"""
Linea de comandos: synth, bank, estimate, evaluate, ingest, bench y serve.

Los datos van a archivos o a la salida estandar; los diagnosticos van al
logger (stderr). El codigo de salida es 0 si no hubo errores fatales y 1 en
otro caso.
"""
import argparse
import csv
import math
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from .errors import PoseBankError
from .logger import logger
from .logs.cli_messages import *
from .models.camera import Intrinsics
from .models.estimator import TemperatureSchedule
from .models.field import RenderConfig
from .models.registration import RegistrationConfig
from .models.run import GRID_PRESETS, RunConfig, grid_preset
from .models.synth import AzimuthComponent, PoseDistSpec, TemplateSpec
from .storage.banks import read_bank, write_bank
from .storage.datasets import read_dataset
from .storage.feature_maps import read_feature_map, read_raw_features, write_feature_map
from .storage.fields import read_field, write_field
from .storage.reports import write_bench_csv, write_entries_csv, write_report_json
from .worker.pool import DEFAULT_THREADS


TEMPLATE_NAME = 'template.tff'
REPORT_NAME = 'report.json'
ENTRIES_NAME = 'entries.csv'


def parse_range(text: str) -> tuple:
    try:
        lo, hi = (float(value) for value in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError('expected "lo,hi", got %r' % text)
    return lo, hi


def parse_peaks(text: str) -> List[AzimuthComponent]:
    """
    Convierte "media:desviacion:peso,..." (grados) en componentes de azimut.
    """
    components = []
    for item in text.split(','):
        try:
            mean, std, weight = (float(value) for value in item.split(':'))
        except ValueError:
            raise argparse.ArgumentTypeError('expected "mean:std:weight", got %r' % item)
        components.append(AzimuthComponent(mean=math.radians(mean), std=math.radians(std),
                                           weight=weight))
    return components


def _add_camera_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--width', type=int, default=64)
    parser.add_argument('--height', type=int, default=64)
    parser.add_argument('--fov', type=float, default=36.0, help='vertical field of view [deg]')
    parser.add_argument('--samples', type=int, default=64, help='samples per ray')
    parser.add_argument('--white-background', action='store_true')


def _add_registration_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--no-phase-correlation', action='store_true',
                        help='skip scale/rotation recovery (2-DoF matching)')
    parser.add_argument('--window', default='hann',
                        choices=['hann', 'hamming', 'blackman', 'boxcar'])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='posebank',
                                     description='Camera pose estimation by render-and-compare '
                                                 'against a bank of feature templates.')
    parser.add_argument('--threads', type=int, default=DEFAULT_THREADS)
    commands = parser.add_subparsers(dest='subcommand', required=True)

    synth = commands.add_parser('synth', help='generate a template field and a labeled dataset')
    synth.add_argument('--out', type=Path, required=True)
    synth.add_argument('--n', type=int, default=100)
    synth.add_argument('--seed', type=int, default=0)
    synth.add_argument('--template', type=Path, help='existing TFF1 template to reuse')
    synth.add_argument('--parts', type=int, default=5)
    synth.add_argument('--asymmetry', type=float, default=1.0)
    synth.add_argument('--dims', type=int, default=40)
    synth.add_argument('--feature-mode', default='part-id',
                       choices=['part-id', 'color-copy', 'gray-copy'])
    synth.add_argument('--strength', type=float, default=0.0, help='instance perturbation')
    synth.add_argument('--peaks', type=parse_peaks, default=None,
                       help='azimuth mixture "mean:std:weight,..." in degrees')
    synth.add_argument('--phi-range', type=parse_range, default=(85.0, 95.0))
    synth.add_argument('--gamma-std', type=float, default=0.0, help='[deg]')
    synth.add_argument('--r-range', type=parse_range, default=(4.0, 4.0))
    synth.add_argument('--png', action='store_true', help='write feature previews')
    _add_camera_arguments(synth)

    bank = commands.add_parser('bank', help='render the pose bank of a template field')
    bank.add_argument('--field', type=Path, required=True)
    bank.add_argument('--out', type=Path, required=True)
    bank.add_argument('--preset', default='narrow', choices=sorted(GRID_PRESETS))
    bank.add_argument('--r-fixed', type=float, default=None)
    _add_camera_arguments(bank)

    estimate = commands.add_parser('estimate', help='estimate the pose of feature maps')
    estimate.add_argument('inputs', type=Path, nargs='+')
    estimate.add_argument('--bank', type=Path, required=True)
    estimate.add_argument('--mode', default='argmax', choices=['argmax', 'sample'])
    estimate.add_argument('--tau', type=float, default=1.0)
    estimate.add_argument('--seed', type=int, default=0)
    estimate.add_argument('--dump-pdf', type=Path, help='CSV with the full distribution')
    _add_registration_arguments(estimate)

    evaluate = commands.add_parser('evaluate', help='evaluate the estimator on a dataset')
    evaluate.add_argument('--bank', type=Path, required=True)
    evaluate.add_argument('--dataset', type=Path, required=True)
    evaluate.add_argument('--out', type=Path, required=True)
    evaluate.add_argument('--mode', default='argmax', choices=['argmax', 'sample'])
    evaluate.add_argument('--seed', type=int, default=0)
    evaluate.add_argument('--tau-start', type=float, default=1.0)
    evaluate.add_argument('--tau-end', type=float, default=100.0)
    evaluate.add_argument('--ramp-iters', type=int, default=1000)
    evaluate.add_argument('--no-plots', action='store_true')
    _add_registration_arguments(evaluate)

    ingest = commands.add_parser('ingest', help='reduce raw feature maps to 3 channels')
    ingest.add_argument('inputs', type=Path, nargs='+')
    ingest.add_argument('--masks', type=Path, nargs='*', default=None)
    ingest.add_argument('--out', type=Path, required=True)
    ingest.add_argument('--no-pca', action='store_true')

    bench = commands.add_parser('bench', help='time the pipeline and the exhaustive oracle')
    bench.add_argument('--field', type=Path, help='template field; a synthetic one by default')
    bench.add_argument('--presets', default='12x6,36x18,60x30')
    bench.add_argument('--query-preset', default='narrow', choices=sorted(GRID_PRESETS))
    bench.add_argument('--repeat', type=int, default=1)
    bench.add_argument('--oracle-grid', type=int, default=256)
    bench.add_argument('--oracle-cases', type=int, default=0)
    bench.add_argument('--seed', type=int, default=0)
    bench.add_argument('--out', type=Path, help='CSV path; standard output by default')
    _add_camera_arguments(bench)
    _add_registration_arguments(bench)

    serve = commands.add_parser('serve', help='serve a pose bank over HTTP')
    serve.add_argument('--bank', type=Path, required=True)
    serve.add_argument('--host', default='127.0.0.1')
    serve.add_argument('--port', type=int, default=8000)
    _add_registration_arguments(serve)
    return parser


def run_config(args: argparse.Namespace) -> RunConfig:
    """
    Construye la configuracion validada de la ejecucion a partir de los
    argumentos.
    """
    values = dict(subcommand=args.subcommand, threads=max(args.threads, 1))
    if hasattr(args, 'width'):
        values['intrinsics'] = Intrinsics(fov_y=math.radians(args.fov), width=args.width,
                                          height=args.height)
        values['render_config'] = RenderConfig(n_samples=args.samples,
                                               white_background=args.white_background)
    if hasattr(args, 'no_phase_correlation'):
        values['registration'] = RegistrationConfig(window=args.window,
                                                    enabled=not args.no_phase_correlation)
    if hasattr(args, 'preset'):
        values['grid'] = grid_preset(args.preset, args.r_fixed)
    for name in ('seed', 'tau'):
        if hasattr(args, name):
            values[name] = getattr(args, name)
    if getattr(args, 'out', None) is not None:
        values['output'] = args.out
    paths = getattr(args, 'inputs', None) or []
    values['paths'] = list(paths)
    return RunConfig(**values)


def cmd_synth(args: argparse.Namespace, config: RunConfig) -> None:
    from .core.plots import write_dataset_previews
    from .core.synth import make_dataset, make_template

    args.out.mkdir(parents=True, exist_ok=True)
    if args.template is not None:
        template = read_field(args.template)
        template_file = str(args.template)
    else:
        spec = TemplateSpec(seed=config.seed, dims=(args.dims,) * 3, n_parts=args.parts,
                            asymmetry=args.asymmetry, feature_mode=args.feature_mode)
        template = make_template(spec)
        write_field(template, args.out / TEMPLATE_NAME)
        template_file = TEMPLATE_NAME

    distribution = dict(phi_range=tuple(math.radians(v) for v in args.phi_range),
                        gamma_std=math.radians(args.gamma_std), r_range=args.r_range)
    if args.peaks is not None:
        distribution['components'] = args.peaks
    dataset = make_dataset(template, PoseDistSpec(**distribution), args.n, config.seed,
                           args.strength, args.out, intrinsics=config.intrinsics,
                           render_config=config.render_config, feature_mode=args.feature_mode,
                           template_file=template_file, threads=config.threads)
    if args.png:
        write_dataset_previews(dataset)
    print('synth: %d entries, template %s, seed %d -> %s'
          % (len(dataset.entries), template_file, config.seed, dataset.manifest))


def cmd_bank(args: argparse.Namespace, config: RunConfig) -> None:
    from .core.estimator import build_pose_bank

    field = read_field(args.field)
    bank = build_pose_bank(field, config.grid, config.intrinsics, config.render_config,
                           config.threads)
    if args.out.parent != Path(''):
        args.out.parent.mkdir(parents=True, exist_ok=True)
    write_bank(bank, args.out)
    print('bank: %d templates (%d x %d) -> %s'
          % (bank.size, bank.grid.n_theta, bank.grid.n_phi, args.out))


def cmd_estimate(args: argparse.Namespace, config: RunConfig) -> None:
    from .core.estimator import jitter_pose, pose_from_match, pose_pdf, sample_bins, score_bank

    bank = read_bank(args.bank)
    rows = []
    for position, path in enumerate(args.inputs):
        matches = score_bank(read_feature_map(path), bank, config.registration, config.threads)
        errors = np.array([match.mse for match in matches])
        pdf = pose_pdf(errors, config.tau, grid=bank.grid)
        if args.mode == 'sample':
            rng = np.random.default_rng(config.seed + position)
            index = sample_bins(pdf, rng)
            pose = jitter_pose(bank, index, matches[index].similarity, rng)
        else:
            index = int(np.argmin(errors))
            pose = pose_from_match(bank, index, matches[index].similarity)
        print('%s bin=%d theta=%.6f phi=%.6f gamma=%.6f r=%.6f mse=%.9g'
              % (path, index, pose.theta, pose.phi, pose.gamma, pose.r, errors[index]))
        rows.extend((str(path), k, repr(p.theta), repr(p.phi), repr(float(q)), repr(float(e)))
                    for k, (p, q, e) in enumerate(zip(bank.poses, pdf.probs, errors)))

    if args.dump_pdf is not None:
        with open(args.dump_pdf, 'w', newline='') as fh:
            writer = csv.writer(fh, lineterminator='\n')
            writer.writerow(['file', 'k', 'theta', 'phi', 'prob', 'mse'])
            writer.writerows(rows)


def cmd_evaluate(args: argparse.Namespace, config: RunConfig) -> None:
    from .core.metrics import evaluate

    bank = read_bank(args.bank)
    dataset = read_dataset(args.dataset)
    schedule = TemperatureSchedule(tau_start=args.tau_start, tau_end=args.tau_end,
                                   ramp_iters=args.ramp_iters)
    report = evaluate(dataset, bank, config.registration, mode=args.mode, schedule=schedule,
                      seed=config.seed, threads=config.threads)

    args.out.mkdir(parents=True, exist_ok=True)
    write_report_json(report, args.out / REPORT_NAME)
    write_entries_csv(report, args.out / ENTRIES_NAME)
    if not args.no_plots and report.gt_theta_hist is not None:
        from .core.plots import plot_pose_histograms

        plot_pose_histograms(report.gt_theta_hist, report.est_theta_hist,
                             args.out / 'theta_hist.png', title='azimuth')
        plot_pose_histograms(report.gt_phi_hist, report.est_phi_hist,
                             args.out / 'phi_hist.png', title='elevation')
    print('evaluate: %d entries, %d skipped, recovery@1bin %s, kl_theta %s -> %s'
          % (report.n_entries, report.n_skipped, report.recovery_rate_1bin, report.kl_theta,
             args.out))


def cmd_ingest(args: argparse.Namespace, config: RunConfig) -> None:
    from .core.ingest import reduce_features

    masks = None
    if args.masks:
        masks = [read_raw_features(path) for path in args.masks]
    maps = [read_raw_features(path) for path in args.inputs]
    reduced, report = reduce_features(maps, masks, use_pca=not args.no_pca,
                                      names=[str(path) for path in args.inputs])
    args.out.mkdir(parents=True, exist_ok=True)
    for path, feature_map in zip(args.inputs, reduced):
        write_feature_map(feature_map, args.out / (path.stem + '.tfm'))
    print('ingest: %d maps, %d foreground pixels, explained variance %s -> %s'
          % (report.n_inputs, report.n_pixels,
             ','.join('%.6g' % v for v in report.explained_variance), args.out))


def cmd_bench(args: argparse.Namespace, config: RunConfig) -> None:
    from .core.bench import bench_bank_rendering, bench_queries, oracle_agreement
    from .core.estimator import build_pose_bank
    from .core.synth import make_template

    presets = [name for name in args.presets.split(',') if name]
    unknown = [name for name in presets if name not in GRID_PRESETS]
    if unknown:
        raise PoseBankError('unknown grid presets: %s' % ','.join(unknown))

    field = read_field(args.field) if args.field is not None else make_template(TemplateSpec())
    rows = bench_bank_rendering(field, presets, config.intrinsics, config.render_config,
                                args.repeat, config.threads)
    bank = build_pose_bank(field, grid_preset(args.query_preset), config.intrinsics,
                           config.render_config, config.threads)
    rows += bench_queries(bank, config.registration, args.repeat, args.oracle_grid,
                          seed=config.seed, threads=config.threads)
    write_bench_csv(rows, args.out)

    if args.oracle_cases > 0:
        oracle = oracle_agreement(bank.templates[0], args.oracle_cases, args.oracle_grid,
                                  config.seed, config.registration)
        print('oracle: %d cases, agreement %.4f, speedup %.1fx'
              % (oracle.cases, oracle.agreement, oracle.speedup))


def cmd_serve(args: argparse.Namespace, config: RunConfig) -> None:
    import uvicorn

    os.environ['POSEBANK_BANK'] = str(args.bank)
    os.environ['POSEBANK_PHASE_CORRELATION'] = '1' if config.registration.enabled else '0'
    os.environ['POSEBANK_WINDOW'] = config.registration.window
    uvicorn.run('posebank.main:app', host=args.host, port=args.port)


COMMANDS = {
    'synth': cmd_synth,
    'bank': cmd_bank,
    'estimate': cmd_estimate,
    'evaluate': cmd_evaluate,
    'ingest': cmd_ingest,
    'bench': cmd_bench,
    'serve': cmd_serve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = run_config(args)
        logger.debug(RUN_CONFIG % config.model_dump_json())
        COMMANDS[args.subcommand](args, config)
    except (PoseBankError, OSError, ValidationError, ValueError) as error:
        logger.error(COMMAND_FAILED % (args.subcommand, error))
        print('posebank %s: error: %s' % (args.subcommand, error), file=sys.stderr)
        return 1
    return 0
