'''INI run configuration.

Each section of a run file maps onto one frozen dataclass below. Every field
carries its parser in `metadata['parse']`; keys without a matching field are
rejected so that typos never fall back silently to defaults.
'''

import configparser
import dataclasses
import logging
import os
from dataclasses import dataclass, field

from .classifiers import KINDS, SRLDAConfig
from .error_surface import DEFAULT_DELTA, OBJECTIVES
from .exceptions import ConfigError
from .experiments import (
    ERROR_MODES, MEAN_SCALINGS, WDBC_SCHEMA, CsvSchema, SimulationConfig
)
from .optimize import GridSpec

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = 'SRLDA_OUTPUT_DIR'

def _optional(parse):
    def parse_optional(text):
        text = text.strip()
        if text == '' or text.lower() in ('none', 'auto'):
            return None
        return parse(text)
    return parse_optional

def _parse_bool(text):
    value = text.strip().lower()
    if value in ('1', 'yes', 'true', 'on'):
        return True
    if value in ('0', 'no', 'false', 'off'):
        return False
    raise ValueError('not a boolean: %r' % text)

def _list_of(parse):
    def parse_list(text):
        return tuple(parse(v.strip()) for v in text.split(',') if v.strip())
    return parse_list

def _choice(options):
    def parse_choice(text):
        text = text.strip()
        if text not in options:
            raise ValueError('%r is not one of %r' % (text, tuple(options)))
        return text
    return parse_choice

def _parse_label_map(text):
    pairs = []
    for item in _list_of(str)(text):
        token, sep, label = item.partition(':')
        if not sep:
            raise ValueError('label map entries look like TOKEN:0, got %r' % item)
        pairs.append((token.strip(), int(label)))
    return tuple(pairs)

def _field(default, parse):
    return field(default=default, metadata={'parse': parse})

@dataclass(frozen=True)
class SimulationSection:
    p: int = _field(150, int)
    n_values: tuple = _field((100, 160, 220), _list_of(int))
    train_q0: float = _field(0.5, float)
    sigma2: float = _field(1., float)
    weights: tuple = _field((20., 10., 5., 0.01), _list_of(float))
    axes: tuple = _field((0, 1, 2, -1), _list_of(int))
    a: float = _field(1., float)
    mean_scaling: str = _field('p', _choice(MEAN_SCALINGS))
    pi0: float = _field(0.2, float)
    repetitions: int = _field(100, int)
    test_size: int = _field(1000, int)
    error_mode: str = _field('empirical', _choice(ERROR_MODES))
    seed: int = _field(0, int)

    def for_size(self, n):
        '''SimulationConfig for a total training size n, n0 = floor(q0 n).'''
        n0 = int(self.train_q0 * n)
        try:
            return SimulationConfig(
                p=self.p, n0=n0, n1=n - n0, sigma2=self.sigma2,
                weights=self.weights, axes=self.axes, a=self.a,
                mean_scaling=self.mean_scaling, pi0=self.pi0,
                repetitions=self.repetitions, test_size=self.test_size,
                seed=self.seed, error_mode=self.error_mode
            )
        except ValueError as e:
            raise ConfigError(str(e), key='simulation') from e

@dataclass(frozen=True)
class SplitSection:
    n_values: tuple = _field((200, 250, 300, 350, 400, 450), _list_of(int))
    q0: float = _field(None, _optional(float))
    repetitions: int = _field(100, int)
    seed: int = _field(0, int)

@dataclass(frozen=True)
class DataSection:
    path: str = _field(None, _optional(str))
    schema: str = _field('wdbc', _choice(('wdbc', 'header')))
    label_column: str = _field('diagnosis', str)
    drop_columns: tuple = _field(('id',), _list_of(str))
    label_map: tuple = _field((('M', 0), ('B', 1)), _parse_label_map)

    def csv_schema(self):
        if self.schema == 'wdbc':
            return dataclasses.replace(WDBC_SCHEMA, label_map=self.label_map)
        return CsvSchema(
            label_column=self.label_column, label_map=self.label_map,
            drop_columns=self.drop_columns, header=True
        )

@dataclass(frozen=True)
class GridSection:
    step: float = _field(0.01, float)
    delta: float = _field(DEFAULT_DELTA, float)
    refine: bool = _field(False, _parse_bool)

    def spec(self, objective='plain'):
        return GridSpec(self.step, self.delta, objective, self.refine)

@dataclass(frozen=True)
class ClassifiersSection:
    names: tuple = _field(('rlda', 'srlda', 'oi-srlda'), _list_of(_choice(KINDS)))

@dataclass(frozen=True)
class EstimationSection:
    r1: int = _field(None, _optional(int))
    r2: int = _field(None, _optional(int))
    sigma2: float = _field(None, _optional(float))
    pi0: float = _field(None, _optional(float))
    detection_margin: float = _field(0.05, float)
    rlda_gamma: float = _field(None, _optional(float))
    cv_folds: int = _field(5, int)

@dataclass(frozen=True)
class OutputSection:
    dir: str = _field('results', str)
    prefix: str = _field('report', str)

@dataclass(frozen=True)
class SurfaceSection:
    source: str = _field('population', _choice(('population', 'data')))
    objective: str = _field('plain', _choice(OBJECTIVES))
    n0: int = _field(50, int)
    n1: int = _field(50, int)

@dataclass(frozen=True)
class FitSection:
    classifier: str = _field('srlda', _choice(KINDS))
    model: str = _field('model.json', str)

SECTIONS = {
    'simulation': SimulationSection,
    'split': SplitSection,
    'data': DataSection,
    'grid': GridSection,
    'classifiers': ClassifiersSection,
    'estimation': EstimationSection,
    'output': OutputSection,
    'surface': SurfaceSection,
    'fit': FitSection
}

@dataclass(frozen=True)
class RunConfig:
    '''Fully resolved configuration of one CLI run.'''
    simulation: SimulationSection = field(default_factory=SimulationSection)
    split: SplitSection = field(default_factory=SplitSection)
    data: DataSection = field(default_factory=DataSection)
    grid: GridSection = field(default_factory=GridSection)
    classifiers: ClassifiersSection = field(default_factory=ClassifiersSection)
    estimation: EstimationSection = field(default_factory=EstimationSection)
    output: OutputSection = field(default_factory=OutputSection)
    surface: SurfaceSection = field(default_factory=SurfaceSection)
    fit: FitSection = field(default_factory=FitSection)

    def to_dict(self):
        return dataclasses.asdict(self)

    def fit_config(self, pi0=None, seed=0):
        '''SRLDAConfig from the [estimation] and [grid] sections.'''
        est = self.estimation
        return SRLDAConfig(
            pi0=est.pi0 if est.pi0 is not None else pi0,
            r1=est.r1, r2=est.r2, sigma2=est.sigma2, grid=self.grid.spec(),
            detection_margin=est.detection_margin, rlda_gamma=est.rlda_gamma,
            cv_folds=est.cv_folds, seed=seed
        )

    def override(self, section, **values):
        '''Copy with some keys of one section replaced.'''
        current = getattr(self, section)
        return dataclasses.replace(
            self, **{section: dataclasses.replace(current, **values)}
        )

    def output_dir(self, flag=None):
        '''--out flag, else SRLDA_OUTPUT_DIR, else the [output] dir key.'''
        if flag is not None:
            return flag
        return os.environ.get(OUTPUT_DIR_ENV) or self.output.dir

def _parse_section(name, items):
    cls = SECTIONS[name]
    fields = {f.name: f for f in dataclasses.fields(cls)}
    values = {}
    for key, text in items:
        if key not in fields:
            raise ConfigError('unknown key', key='%s.%s' % (name, key))
        try:
            values[key] = fields[key].metadata['parse'](text)
        except ValueError as e:
            raise ConfigError(str(e), key='%s.%s' % (name, key)) from e
    try:
        return cls(**values)
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e), key=name) from e

def parse_config(text, source='<string>'):
    '''
    Parses INI text into a RunConfig.

    Raises
    ------
    ConfigError
        On syntax errors, unknown sections or keys, and unparsable values.
    '''
    parser = configparser.ConfigParser(
        interpolation=None, default_section='__no_default__'
    )
    try:
        parser.read_string(text, source=str(source))
    except configparser.Error as e:
        raise ConfigError('cannot parse %s: %s' % (source, e)) from e

    sections = {}
    for name in parser.sections():
        if name not in SECTIONS:
            raise ConfigError('unknown section in %s' % source, key=name)
        sections[name] = _parse_section(name, parser.items(name))
    return RunConfig(**sections)

def load_config(path=None):
    '''
    Reads a run configuration file; all defaults when `path` is None.

    Raises
    ------
    ConfigError
        If the file cannot be read or does not parse.
    '''
    if path is None:
        return RunConfig()
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError('cannot read config file %s: %s' % (path, e)) from e
    logger.debug('read configuration from %s', path)
    return parse_config(text, source=path)
