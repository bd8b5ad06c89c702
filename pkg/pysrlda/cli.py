'''Command-line entry point: `srlda {simulate,benchmark,fit,predict,surface}`.

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
'''

import argparse
import csv
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .classifiers import (
    KINDS, estimate_surface_params, fit_classifier, load_model, predict,
    save_model
)
from .config import load_config
from .error_surface import population_surface_params
from .exceptions import (
    ConfigError, DataFormatError, DimensionError, InsufficientSamplesError,
    ModelFormatError
)
from .experiments import (
    SplitConfig, format_report_table, load_labeled_csv, run_realdata_benchmark,
    run_simulation_benchmark, write_report_csv, write_report_json
)
from .optimize import evaluate_grid

logger = logging.getLogger(__name__)

USAGE_ERRORS = (ConfigError, DataFormatError, DimensionError, ModelFormatError)

LOG_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG}

def _classifier_list(text):
    names = tuple(v.strip() for v in text.split(',') if v.strip())
    unknown = [k for k in names if k not in KINDS]
    if not names or unknown:
        raise argparse.ArgumentTypeError(
            'classifiers must be a comma list from %s' % ', '.join(KINDS)
        )
    return names

def _add_common(parser):
    parser.add_argument('--config', help='INI run configuration')
    parser.add_argument('--out', help='output directory')
    parser.add_argument('--seed', type=int, help='master random seed')
    parser.add_argument('--threads', type=int, default=None,
                        help='worker threads for repetitions')
    parser.add_argument('--grid-step', type=float, dest='grid_step',
                        help='omega grid resolution')
    parser.add_argument('--classifiers', type=_classifier_list,
                        help='comma list from %s' % ', '.join(KINDS))
    parser.add_argument('-v', '--verbose', action='count', default=0)

def build_parser():
    parser = argparse.ArgumentParser(
        prog='srlda',
        description='Spectrally-corrected and regularized LDA experiments'
    )
    parser.add_argument('--version', action='version', version=__version__)
    sub = parser.add_subparsers(dest='command', required=True)

    simulate = sub.add_parser('simulate', help='spiked-Gaussian simulation')
    _add_common(simulate)

    benchmark = sub.add_parser('benchmark', help='real-data benchmark')
    _add_common(benchmark)
    benchmark.add_argument('--data', help='labeled CSV file')

    fit = sub.add_parser('fit', help='train and save one classifier')
    _add_common(fit)
    fit.add_argument('--data', help='labeled CSV training file')
    fit.add_argument('--model', help='model file name inside the output dir')

    pred = sub.add_parser('predict', help='score a CSV with a saved model')
    _add_common(pred)
    pred.add_argument('--data', help='labeled CSV file to score')
    pred.add_argument('--model', required=True, help='saved model file')

    surface = sub.add_parser('surface', help='export the error surface grid')
    _add_common(surface)
    surface.add_argument('--data', help='training file for source = data')
    return parser

def _resolve(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.override('simulation', seed=args.seed)
        cfg = cfg.override('split', seed=args.seed)
    if args.grid_step is not None:
        cfg = cfg.override('grid', step=args.grid_step)
    if args.classifiers is not None:
        cfg = cfg.override('classifiers', names=args.classifiers)
    if getattr(args, 'data', None) is not None:
        cfg = cfg.override('data', path=args.data)
    try:
        cfg.grid.spec()
    except ValueError as e:
        raise ConfigError(str(e), key='grid.step') from e
    return cfg

def _output_dir(cfg, args):
    out = cfg.output_dir(args.out)
    os.makedirs(out, exist_ok=True)
    return out

def _load_data(cfg):
    if cfg.data.path is None:
        raise ConfigError('no data file given (--data)', key='data.path')
    if not os.path.isfile(cfg.data.path):
        raise ConfigError('data file not found: %s' % cfg.data.path, key='data.path')
    return load_labeled_csv(cfg.data.path, cfg.data.csv_schema())

def _write_reports(reports, cfg, out, prefix):
    write_report_csv(reports, os.path.join(out, prefix + '.csv'))
    write_report_json(reports, os.path.join(out, prefix + '.json'))
    with open(os.path.join(out, prefix + '_config.json'), 'w',
              encoding='utf-8') as fh:
        json.dump(cfg.to_dict(), fh, indent=2, sort_keys=True)
        fh.write('\n')
    print(format_report_table(reports))

def cmd_simulate(args):
    cfg = _resolve(args)
    out = _output_dir(cfg, args)
    sim = cfg.simulation

    reports = []
    for n in sim.n_values:
        sim_cfg = sim.for_size(n)
        logger.info('simulation n=%d (n0=%d, n1=%d)', n, sim_cfg.n0, sim_cfg.n1)
        reports.append(run_simulation_benchmark(
            sim_cfg, cfg.classifiers.names,
            cfg.fit_config(pi0=sim.pi0, seed=sim.seed),
            threads=args.threads, verbose=args.verbose
        ))
    _write_reports(reports, cfg, out, cfg.output.prefix)
    return 0

def cmd_benchmark(args):
    cfg = _resolve(args)
    data = _load_data(cfg)
    split = cfg.split
    for n in split.n_values:
        if n >= data.n_samples:
            raise ConfigError(
                'n=%d is not below the dataset size %d' % (n, data.n_samples),
                key='split.n_values'
            )
    out = _output_dir(cfg, args)

    reports = []
    for n in split.n_values:
        split_cfg = SplitConfig(n, split.q0, split.seed)
        try:
            reports.append(run_realdata_benchmark(
                data, split_cfg, cfg.classifiers.names, split.repetitions,
                cfg.fit_config(seed=split.seed), threads=args.threads,
                verbose=args.verbose
            ))
        except InsufficientSamplesError as e:
            raise ConfigError(str(e), key='split.n_values') from e
    _write_reports(reports, cfg, out, cfg.output.prefix)
    return 0

def _model_name(name):
    '''Model file names are relative and may not climb out of the output dir.'''
    if os.path.isabs(name) or os.pardir in os.path.normpath(name).split(os.sep):
        raise ConfigError(
            'model path must stay inside the output directory: %s' % name,
            key='fit.model'
        )
    return name

def cmd_fit(args):
    cfg = _resolve(args)
    name = _model_name(args.model or cfg.fit.model)
    data = _load_data(cfg)
    out = _output_dir(cfg, args)
    kind = cfg.fit.classifier
    if args.classifiers is not None:
        kind = args.classifiers[0]

    model = fit_classifier(kind, data.X, data.y, cfg.fit_config(seed=cfg.split.seed))
    train_error = predict(model, data.X, data.y).total_error
    logger.info('%s training error %.6f', kind, train_error)
    print('%s training error: %.6f' % (kind, train_error))

    path = os.path.join(out, name)
    save_model(model, path)
    logger.info('model written to %s', path)
    return 0

def cmd_predict(args):
    cfg = _resolve(args)
    if not os.path.isfile(args.model):
        raise ConfigError('model file not found: %s' % args.model, key='model')
    model = load_model(args.model)
    data = _load_data(cfg)
    out = _output_dir(cfg, args)

    report = predict(model, data.X, data.y)
    path = os.path.join(out, cfg.output.prefix + '_predictions.csv')
    with open(path, 'w', encoding='utf-8', newline='') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(('sample', 'score', 'label'))
        for i, (s, l) in enumerate(zip(report.scores, report.labels)):
            writer.writerow((i, repr(float(s)), int(l)))
    print('error: %.6f' % report.total_error)
    return 0

def cmd_surface(args):
    cfg = _resolve(args)
    surf = cfg.surface
    if surf.source == 'population':
        sim_cfg = cfg.simulation.for_size(surf.n0 + surf.n1)
        mu0, mu1 = sim_cfg.class_means()
        sp = population_surface_params(
            sim_cfg.population(), mu0 - mu1, surf.n0, surf.n1, cfg.simulation.pi0
        )
    else:
        data = _load_data(cfg)
        sp, _ = estimate_surface_params(data.X, data.y, cfg.fit_config())
    out = _output_dir(cfg, args)

    grid = evaluate_grid(sp, cfg.grid.spec(surf.objective))
    path = os.path.join(out, cfg.output.prefix + '_surface.csv')
    with open(path, 'w', encoding='utf-8', newline='') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(('omega1', 'omega2', 'error', 'feasible', 'argmin'))
        for i, w1 in enumerate(grid.omega1):
            for k, w2 in enumerate(grid.omega2):
                value = grid.values[i, k]
                writer.writerow((
                    repr(float(w1)), repr(float(w2)), repr(float(value)),
                    int(not np.isnan(value)), int((i, k) == grid.argmin)
                ))
    logger.info('surface written to %s', path)
    return 0

COMMANDS = {
    'simulate': cmd_simulate,
    'benchmark': cmd_benchmark,
    'fit': cmd_fit,
    'predict': cmd_predict,
    'surface': cmd_surface
}

def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    logging.basicConfig(
        level=LOG_LEVELS[min(args.verbose, 2)],
        format='%(levelname)s %(name)s: %(message)s'
    )
    try:
        return COMMANDS[args.command](args)
    except USAGE_ERRORS as e:
        print('srlda: error: %s' % e, file=sys.stderr)
        return 2
    except Exception as e:
        logger.debug('unhandled failure', exc_info=True)
        print('srlda: %s: %s' % (type(e).__name__, e), file=sys.stderr)
        return 1

if __name__ == '__main__':
    sys.exit(main())
