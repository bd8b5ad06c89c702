'''Monte Carlo harnesses for spiked-Gaussian simulations and real datasets.

Repetition k of a run draws all its randomness from
`utilities.repetition_rng(seed, k)`, so serial and threaded runs give
identical reports.
'''

import csv
import json
import logging
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
import pandas as pd

from . import __version__
from .classifiers import KINDS, SRLDAConfig, conditional_error, fit_classifier, predict
from .exceptions import DataFormatError, InsufficientSamplesError, SRLDAError
from .spiked_model import SpikedModelParams
from .utilities import LabeledDataset, check_prior, repetition_rng

logger = logging.getLogger(__name__)

MEAN_SCALINGS = ('p', 'sqrt_p')
ERROR_MODES = ('empirical', 'exact')

@dataclass(frozen=True)
class SimulationConfig:
    '''Spiked-Gaussian simulation protocol.

    Parameters
    ----------
    p : int, default=150
        Dimension.
    n0, n1 : int, default=50
        Training samples per class.
    sigma2 : float, default=1.
        Noise level.
    weights : tuple of float, default=(20., 10., 5., 0.01)
        Perturbation weights lambda_j, each > -1.
    axes : tuple of int, default=(0, 1, 2, -1)
        Coordinate axis e_k carrying each weight; -1 is the last axis e_p.
    a : float, default=1.
        Mean scale.
    mean_scaling : {'p', 'sqrt_p'}, default='p'
        mu0 = (a/p) 1 or mu0 = (a/sqrt(p)) 1, with mu1 = -mu0.
    pi0 : float, default=0.2
        Class-0 prior of the test labels.
    repetitions : int, default=100
    test_size : int, default=1000
    seed : int, default=0
        Master seed.
    error_mode : {'empirical', 'exact'}, default='empirical'
        Error on a fresh test set or the exact Gaussian error of the rule.
    '''
    p: int = 150
    n0: int = 50
    n1: int = 50
    sigma2: float = 1.
    weights: tuple = (20., 10., 5., 0.01)
    axes: tuple = (0, 1, 2, -1)
    a: float = 1.
    mean_scaling: str = 'p'
    pi0: float = 0.2
    repetitions: int = 100
    test_size: int = 1000
    seed: int = 0
    error_mode: str = 'empirical'

    def __post_init__(self):
        if len(self.weights) != len(self.axes):
            raise ValueError('weights and axes must have equal length')
        if self.p <= len(self.weights):
            raise ValueError(
                'p=%d must exceed the number of spikes %d'
                % (self.p, len(self.weights))
            )
        if any(w <= -1. for w in self.weights):
            raise ValueError('perturbation weights must be > -1 (Sigma PSD)')
        cols = {k % self.p for k in self.axes}
        if len(cols) != len(self.axes):
            raise ValueError('spike axes must be distinct')
        if self.repetitions < 1:
            raise ValueError('repetitions must be at least 1')
        if self.n0 < 1 or self.n1 < 1 or self.test_size < 1:
            raise ValueError('sample counts must be positive')
        if self.mean_scaling not in MEAN_SCALINGS:
            raise ValueError('mean_scaling must be one of %r' % (MEAN_SCALINGS,))
        if self.error_mode not in ERROR_MODES:
            raise ValueError('error_mode must be one of %r' % (ERROR_MODES,))
        check_prior(self.pi0)

    @property
    def n(self):
        return self.n0 + self.n1

    def population(self):
        '''SpikedModelParams with coordinate-axis directions.'''
        order = sorted(
            (w, k % self.p) for w, k in zip(self.weights, self.axes) if w != 0.
        )
        pos = [(w, k) for w, k in reversed(order) if w > 0.]
        neg = [(w, k) for w, k in order if w < 0.]
        directions = np.zeros((self.p, len(pos) + len(neg)))
        for col, (_, k) in enumerate(pos + neg):
            directions[k, col] = 1.
        return SpikedModelParams(
            self.sigma2, [w for w, _ in pos], [w for w, _ in neg], directions
        )

    def class_means(self):
        scale = self.p if self.mean_scaling == 'p' else np.sqrt(self.p)
        mu0 = np.full(self.p, self.a / scale)
        return mu0, -mu0

@dataclass(frozen=True)
class SplitConfig:
    '''Stratified train/test split with n0 = floor(q0 n_train).

    q0 defaults to the class-0 fraction of the full dataset.
    '''
    n_train: int
    q0: float = None
    seed: int = 0

@dataclass(frozen=True)
class CsvSchema:
    '''Layout of a labeled CSV file.

    Parameters
    ----------
    label_column : str
        Column holding the class tokens.
    label_map : tuple of (str, int) pairs
        Token to class index mapping.
    drop_columns : tuple of str
        Identifier columns removed before parsing features.
    header : bool
        Whether the first line names the columns.
    names : tuple of str, optional
        Column names for header-less files.
    '''
    label_column: str = 'diagnosis'
    label_map: tuple = (('M', 0), ('B', 1))
    drop_columns: tuple = ('id',)
    header: bool = True
    names: tuple = None

WDBC_FEATURES = tuple(
    '%s_%s' % (stat, name)
    for stat in ('mean', 'se', 'worst')
    for name in (
        'radius', 'texture', 'perimeter', 'area', 'smoothness',
        'compactness', 'concavity', 'concave_points', 'symmetry',
        'fractal_dimension'
    )
)

# Raw UCI wdbc.data: no header, ID, diagnosis, then 30 features
WDBC_SCHEMA = CsvSchema(header=False, names=('id', 'diagnosis') + WDBC_FEATURES)

class ExperimentReport:
    '''Per-repetition errors and their aggregates for one training size.

    Parameters
    ----------
    n : int
        Training sample size.
    errors : dict
        Classifier name to a list of per-repetition errors, None marking a
        failed repetition.
    metadata : dict
        JSON-compatible run description, including the resolved configuration.
    spike_counts : dict, optional
        Classifier name to per-repetition effective (r1, r2) of SRLDA kinds.
    '''
    def __init__(self, n, errors, metadata, spike_counts=None):
        self.n = int(n)
        self.errors = {k: list(v) for k, v in errors.items()}
        self.metadata = dict(metadata)
        self.spike_counts = dict(spike_counts or {})

    @property
    def classifiers(self):
        return list(self.errors)

    def successful(self, name):
        return np.array([e for e in self.errors[name] if e is not None])

    def failed(self, name):
        return sum(e is None for e in self.errors[name])

    def summary(self, name):
        '''Mean, std (n-1 divisor), successful and failed repetition counts.

        With a single successful repetition the std is reported as 0 and
        `std_defined` is False.
        '''
        errs = self.successful(name)
        k = errs.shape[0]
        mean = float(np.mean(errs)) if k else np.nan
        std = float(np.std(errs, ddof=1)) if k > 1 else 0.
        return {
            'mean': mean, 'std': std, 'repetitions': k,
            'failed': self.failed(name), 'std_defined': k > 1
        }

    def to_dict(self):
        return {
            'n': self.n,
            'errors': self.errors,
            'summary': {name: self.summary(name) for name in self.errors},
            'spike_counts': self.spike_counts,
            'metadata': self.metadata
        }

def _draw_class(rng, n, mean, population):
    V = population.directions
    scale = np.sqrt(1. + population.spikes) - 1.
    Z = rng.standard_normal((n, V.shape[0]))
    Z = Z + ((Z @ V) * scale) @ V.T
    return mean + np.sqrt(population.sigma2) * Z

def generate_spiked_gaussian(cfg, rng=None, n_test=None):
    '''
    Draws a training set with exactly n0 and n1 samples per class and a test
    set whose labels follow the prior pi0, from
        x = mu_i + sigma (I + sum_j (sqrt(1 + lambda_j) - 1) v_j v_j^T) z.

    Parameters
    ----------
    cfg : SimulationConfig
        Protocol parameters.
    rng : numpy.random.Generator, optional
        Random source. Defaults to `default_rng(cfg.seed)`.
    n_test : int, optional
        Test set size, `cfg.test_size` by default.

    Returns
    -------
    train : LabeledDataset
    test : LabeledDataset
    '''
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    if n_test is None:
        n_test = cfg.test_size

    population = cfg.population()
    mu0, mu1 = cfg.class_means()

    X0 = _draw_class(rng, cfg.n0, mu0, population)
    X1 = _draw_class(rng, cfg.n1, mu1, population)
    train = LabeledDataset(
        np.vstack((X0, X1)),
        np.concatenate((np.zeros(cfg.n0, dtype=int), np.ones(cfg.n1, dtype=int)))
    )

    y_test = (rng.random(n_test) >= cfg.pi0).astype(int)
    X_test = np.empty((n_test, cfg.p))
    n_test0 = int(np.sum(y_test == 0))
    X_test[y_test == 0] = _draw_class(rng, n_test0, mu0, population)
    X_test[y_test == 1] = _draw_class(rng, n_test - n_test0, mu1, population)
    return train, LabeledDataset(X_test, y_test)

def _evaluate(names, train, test_error, config):
    errors, counts = {}, {}
    for name in names:
        try:
            model = fit_classifier(name, train.X, train.y, config)
        except SRLDAError as e:
            logger.warning('%s failed: %s', name, e)
            errors[name], counts[name] = None, None
            continue
        errors[name] = float(test_error(model))
        counts[name] = model.metadata.get('effective_spike_counts')
    return errors, counts

def _run_repetitions(run_one, repetitions, threads):
    if threads is None or threads <= 1:
        return list(map(run_one, range(repetitions)))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run_one, range(repetitions)))

def _collect(results, names):
    errors = {name: [r[0][name] for r in results] for name in names}
    counts = {
        name: [r[1][name] for r in results]
        for name in names if name in ('srlda', 'oi-srlda')
    }
    return errors, counts

def _check_names(names):
    names = list(names)
    if not names:
        raise ValueError('at least one classifier is required')
    unknown = [k for k in names if k not in KINDS]
    if unknown:
        raise ValueError('unknown classifiers %r, expected %r' % (unknown, KINDS))
    return names

def _log_summary(report, verbose):
    if verbose:
        for name in report.classifiers:
            s = report.summary(name)
            logger.info(
                'n=%d %s: mean %.4f, std %.4f (%d ok, %d failed)',
                report.n, name, s['mean'], s['std'], s['repetitions'], s['failed']
            )

def run_simulation_benchmark(
        cfg, classifiers, config=None, threads=None, verbose=0
    ):
    '''
    Repeats: draw a training set, fit every classifier, evaluate it on a
    fresh test set (or exactly), and aggregates the errors.

    Parameters
    ----------
    cfg : SimulationConfig
        Protocol parameters.
    classifiers : sequence of str
        Classifier kinds to compare.
    config : SRLDAConfig, optional
        Fitting options. The prior defaults to `cfg.pi0`.
    threads : int, optional
        Worker threads. Serial when omitted or 1.
    verbose : int, default=0
        If positive, log per-classifier summaries.

    Returns
    -------
    report : ExperimentReport
        Failed fits appear as None and are excluded from the aggregates.
    '''
    names = _check_names(classifiers)
    if config is None:
        config = SRLDAConfig(pi0=cfg.pi0)

    population = cfg.population()
    mu0, mu1 = cfg.class_means()
    sigma = population.covariance()

    def run_one(rep):
        rng = repetition_rng(cfg.seed, rep)
        if cfg.error_mode == 'exact':
            train, _ = generate_spiked_gaussian(cfg, rng, n_test=0)
            test_error = lambda m: conditional_error(m, mu0, mu1, sigma, cfg.pi0)[2]
        else:
            train, test = generate_spiked_gaussian(cfg, rng)
            test_error = lambda m: predict(m, test.X, test.y).total_error
        logger.debug('repetition %d', rep)
        return _evaluate(names, train, test_error, config)

    results = _run_repetitions(run_one, cfg.repetitions, threads)
    errors, counts = _collect(results, names)

    metadata = {
        'protocol': 'simulation',
        'simulation': asdict(cfg),
        'fit': _config_dict(config),
        'train_split': 'n0=%d, n1=%d' % (cfg.n0, cfg.n1),
        'rlda_selection': '%d-fold stratified cross-validation' % config.cv_folds,
        'version': __version__
    }
    report = ExperimentReport(cfg.n, errors, metadata, counts)
    _log_summary(report, verbose)
    return report

def _config_dict(config):
    d = asdict(config)
    d['grid'] = asdict(config.grid)
    return d

def _line_of(row, schema):
    return int(row) + (2 if schema.header else 1)

def load_labeled_csv(path, schema=CsvSchema()):
    '''
    Reads a labeled CSV file into a LabeledDataset.

    Parameters
    ----------
    path : str or path-like
        File to read.
    schema : CsvSchema
        Column layout and label mapping.

    Returns
    -------
    data : LabeledDataset
        Features in file order with the feature column names.

    Raises
    ------
    DataFormatError
        On an empty file, a row with the wrong number of fields, an unknown
        label token or a non-numeric feature, with the file line number.
    '''
    try:
        df = pd.read_csv(
            path, header=0 if schema.header else None,
            names=list(schema.names) if schema.names else None,
            dtype=str, keep_default_na=False, skip_blank_lines=False
        )
    except pd.errors.EmptyDataError as e:
        raise DataFormatError('%s is empty' % path) from e
    except pd.errors.ParserError as e:
        match = re.search(r'line (\d+)', str(e))
        line = int(match.group(1)) if match else None
        raise DataFormatError('malformed row in %s' % path, line=line) from e

    if df.shape[0] == 0:
        raise DataFormatError('%s holds no samples' % path)

    # Trailing blank lines come through as all-missing rows
    empty = df.isna().all(axis=1) | (df == '').all(axis=1)
    while df.shape[0] and empty.iloc[-1]:
        df, empty = df.iloc[:-1], empty.iloc[:-1]

    missing = df.isna().any(axis=1)
    if missing.any():
        row = int(np.flatnonzero(missing.to_numpy())[0])
        raise DataFormatError(
            'expected %d fields' % df.shape[1], line=_line_of(row, schema)
        )

    if schema.label_column not in df.columns:
        raise DataFormatError(
            'label column %r not found in %s' % (schema.label_column, path)
        )
    label_map = dict(schema.label_map)
    tokens = df[schema.label_column].str.strip()
    unknown = ~tokens.isin(list(label_map))
    if unknown.any():
        row = int(np.flatnonzero(unknown.to_numpy())[0])
        raise DataFormatError(
            'unknown label %r' % tokens.iloc[row], line=_line_of(row, schema)
        )

    drop = [c for c in schema.drop_columns if c in df.columns]
    features = df.drop(columns=drop + [schema.label_column])
    values = features.apply(pd.to_numeric, errors='coerce')
    bad = values.isna().any(axis=1)
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raise DataFormatError(
            'non-numeric feature value', line=_line_of(row, schema)
        )

    y = tokens.map(label_map).to_numpy(dtype=int)
    logger.info(
        'loaded %d samples with %d features from %s',
        values.shape[0], values.shape[1], path
    )
    return LabeledDataset(
        values.to_numpy(dtype=float), y, [str(c) for c in features.columns]
    )

def split_counts(data, cfg):
    '''Training counts (n0, n1) with n0 = floor(q0 n_train).'''
    n0_full, n1_full = data.class_counts()
    q0 = cfg.q0 if cfg.q0 is not None else n0_full / data.n_samples
    if cfg.n_train >= data.n_samples:
        raise InsufficientSamplesError(
            'n_train=%d must be below the dataset size %d'
            % (cfg.n_train, data.n_samples)
        )
    n0 = math.floor(q0 * cfg.n_train)
    n1 = cfg.n_train - n0
    if n0 < 2 or n1 < 2:
        raise InsufficientSamplesError(
            'each class needs two training samples, got n0=%d, n1=%d' % (n0, n1)
        )
    if n0 > n0_full or n1 > n1_full:
        raise InsufficientSamplesError(
            'requested n0=%d, n1=%d but only %d and %d are available'
            % (n0, n1, n0_full, n1_full)
        )
    return n0, n1

def stratified_split(data, cfg, rng=None):
    '''
    Draws exactly n0 class-0 and n1 class-1 training samples without
    replacement; every other sample forms the test set.

    Parameters
    ----------
    data : LabeledDataset
        Full dataset.
    cfg : SplitConfig
        Training size, class-0 fraction and seed.
    rng : numpy.random.Generator, optional
        Random source. Defaults to `default_rng(cfg.seed)`.

    Returns
    -------
    train : LabeledDataset
    test : LabeledDataset

    Raises
    ------
    InsufficientSamplesError
        If the requested counts exceed what the dataset holds.
    '''
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    n0, n1 = split_counts(data, cfg)

    idx0 = np.flatnonzero(data.y == 0)
    idx1 = np.flatnonzero(data.y == 1)
    train_idx = np.sort(np.concatenate((
        rng.choice(idx0, size=n0, replace=False),
        rng.choice(idx1, size=n1, replace=False)
    )))
    test_mask = np.ones(data.n_samples, dtype=bool)
    test_mask[train_idx] = False
    return data.subset(train_idx), data.subset(np.flatnonzero(test_mask))

def run_realdata_benchmark(
        data, split, classifiers, repetitions, config=None, threads=None,
        verbose=0
    ):
    '''
    Repeats: stratified split, fit every classifier, score the held-out
    remainder, and aggregates the errors.

    Parameters
    ----------
    data : LabeledDataset
        Full dataset.
    split : SplitConfig
        Training size, class-0 fraction and master seed.
    classifiers : sequence of str
        Classifier kinds to compare.
    repetitions : int
        Number of independent splits.
    config : SRLDAConfig, optional
        Fitting options.
    threads : int, optional
        Worker threads. Serial when omitted or 1.
    verbose : int, default=0
        If positive, log per-classifier summaries.

    Returns
    -------
    report : ExperimentReport
    '''
    names = _check_names(classifiers)
    if repetitions < 1:
        raise ValueError('repetitions must be at least 1')
    if config is None:
        config = SRLDAConfig()
    n0, n1 = split_counts(data, split)

    def run_one(rep):
        train, test = stratified_split(data, split, repetition_rng(split.seed, rep))
        test_error = lambda m: predict(m, test.X, test.y).total_error
        return _evaluate(names, train, test_error, config)

    results = _run_repetitions(run_one, repetitions, threads)
    errors, counts = _collect(results, names)

    metadata = {
        'protocol': 'realdata',
        'split': asdict(split),
        'repetitions': repetitions,
        'train_counts': [n0, n1],
        'fit': _config_dict(config),
        'rlda_selection': '%d-fold stratified cross-validation' % config.cv_folds,
        'version': __version__
    }
    report = ExperimentReport(split.n_train, errors, metadata, counts)
    _log_summary(report, verbose)
    return report

REPORT_COLUMNS = ('classifier', 'n', 'mean', 'std', 'repetitions', 'failed')

def _report_rows(reports):
    for report in reports:
        for name in report.classifiers:
            s = report.summary(name)
            yield (
                name, report.n, s['mean'], s['std'], s['repetitions'],
                s['failed']
            )

def write_report_csv(reports, path):
    '''Flat table, one row per (classifier, n).'''
    with open(path, 'w', encoding='utf-8', newline='') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(REPORT_COLUMNS)
        for row in _report_rows(reports):
            writer.writerow(
                row[:2] + tuple(repr(float(v)) for v in row[2:4]) + row[4:]
            )

def write_report_json(reports, path):
    '''Structured payload of every report, sorted keys, no timestamps.'''
    payload = {'reports': [r.to_dict() for r in reports]}
    with open(path, 'w', encoding='utf-8') as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write('\n')

def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError('%r is not JSON serializable' % type(obj))

def format_report_table(reports):
    '''Aligned text table of mean and std per classifier and n.'''
    header = '%-10s %6s %10s %10s %6s %6s' % (
        'classifier', 'n', 'mean', 'std', 'reps', 'failed'
    )
    lines = [header, '-' * len(header)]
    for name, n, mean, std, reps, failed in _report_rows(reports):
        lines.append('%-10s %6d %10.4f %10.4f %6d %6d' % (
            name, n, mean, std, reps, failed
        ))
    return '\n'.join(lines)
