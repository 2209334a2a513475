import os
import json

import yaml
import voluptuous as V

from maxop.mutil.errors import MxParameterError, MxNotFoundError
from maxop.mutil.logging import debug
from maxop.mutil.misc import lazydict

_Number = V.Any(float, int)
_Positive = V.All(_Number, V.Range(min=0, min_included=False, msg="expected a positive number"))

_config_schema = V.Schema({
    'settings': {
        'log_level': V.Any('DEBUG', 'INFO', 'WARNING', 'WARN', 'ERROR', 'CRITICAL',
                           'debug', 'info', 'warning', 'warn', 'error', 'critical', int, V.Match(r'^\d+$')),
        'threads': V.All(int, V.Range(min=1)),
    },
    'fractional': {
        'tol_val': V.All(_Number, V.Range(min=0, max=1, min_included=False, max_included=False)),
        'canonical_tol': _Positive,
        'beta_min': V.All(_Number, V.Range(min=0, max=1, min_included=False, max_included=False)),
        'beta_max': V.All(_Number, V.Range(min=0, max=1, min_included=False, max_included=False)),
    },
    'grid': {
        'step': _Positive,
        'pad': V.All(_Number, V.Range(min=0)),
        'tail_tol': _Positive,
        'tail_ratio': V.All(_Number, V.Range(min=1, min_included=False)),
        'gauss_order': V.All(int, V.Range(min=2, max=128)),
        'richardson_tol': _Positive,
        'max_refine': V.All(int, V.Range(min=0, max=8)),
        'sup_samples': V.All(int, V.Range(min=2)),
    },
    'lab': {
        'slack': V.All(_Number, V.Range(min=1)),
        'holder_slack': V.All(_Number, V.Range(min=0)),
        'lemma1_ratio': _Positive,
        'disc_final_ratio': _Positive,
        'frac_final_ratio': _Positive,
        'discrete_bump': V.Any(dict, str),
        'pwl_bump': V.Any(dict, str),
    },
})

# Built-in defaults.  Configuration files only need to name the values they change.

DEFAULT_CONFIG = """
settings:
  log_level: WARNING

fractional:
  tol_val: 1.0e-9
  canonical_tol: 1.0e-12
  beta_min: 0.05
  beta_max: 0.95

grid:
  step: 4.0e-3
  pad: 1.0
  tail_tol: 1.0e-10
  tail_ratio: 2.0
  gauss_order: 16
  richardson_tol: 1.0e-3
  max_refine: 2
  sup_samples: 201

lab:
  slack: 1.05
  holder_slack: 1.0e-6
  lemma1_ratio: 0.05
  disc_final_ratio: 0.05
  frac_final_ratio: 0.1
"""

def load_structured_file(path):
    """
    Reads a JSON or YAML file and returns the parsed data.  Files ending in .json go through the
    json module, since YAML 1.1 reads exponent floats such as 1e-05 as strings.
    Missing files raise MxNotFoundError; unparseable files raise MxParameterError.
    """
    if not os.path.exists(path):
        raise MxNotFoundError("file not found: {0}".format(path))
    try:
        with open(path, 'r') as fp:
            if path.endswith('.json'):
                return json.load(fp)
            return yaml.safe_load(fp.read().expandtabs())
    except (yaml.YAMLError, ValueError) as ex:
        raise MxParameterError("cannot parse '{0}': {1}".format(path, ex))

def validate_with(schema, data, what):
    "Runs a voluptuous schema, converting failures into MxParameterError."
    try:
        return schema(data)
    except V.Invalid as ex:
        raise MxParameterError("invalid {0}: {1}".format(what, ex))


class Configuration(object):

    _conf = None
    sources = None              # files actually read, in order

    @classmethod
    def configFromCommandSpec(cls, spec, extra_settings = None):
        """
        A command specification (typically given with --config=<file_or_dir>) is used to
        create a configuration object.  If the target is a file, that file alone is read.  If it
        is a directory, all top-level files ending in .yaml or .conf are combined in lexicographic
        order, later files overriding earlier ones.  A missing target is an error, unlike the
        case where no spec is given at all, which simply yields the defaults.
        """
        if not spec:
            return cls(extra_settings = extra_settings)

        debug("TRY CONFIG PATH: {0}", spec)

        if not os.path.exists(spec):
            raise MxNotFoundError("configuration not found: {0}".format(spec))

        if os.path.isdir(spec):
            return cls(*[os.path.join(spec, f) for f in sorted(os.listdir(spec))
                         if f.endswith('.yaml') or f.endswith('.conf')],
                       extra_settings = extra_settings)

        return cls(spec, extra_settings = extra_settings)

    def __init__(self, *args, default = DEFAULT_CONFIG, extra_settings = None):
        """
        Given zero or more files, load our configuration on top of the defaults.
        """
        debug("CONFIG INPUT: '{0}'", args)

        self._conf = lazydict()
        self.sources = []

        if default:
            self._merge(yaml.safe_load(default))

        for fn in args:
            items = load_structured_file(fn)
            if items is None:
                continue
            if not isinstance(items, dict):
                raise MxParameterError("configuration file '{0}' must contain a mapping".format(fn))
            self._merge(items)
            self.sources.append(fn)

        self._conf = lazydict(validate_with(_config_schema, self._conf, "configuration"))

        if extra_settings:
            self.update_settings(extra_settings)

        frac = self.get_section('fractional')
        if frac.get('beta_min', 0) >= frac.get('beta_max', 1):
            raise MxParameterError("fractional.beta_min must be less than fractional.beta_max")

    def _merge(self, items):
        conf = self._conf
        for k,v in items.items():
            if k in conf and isinstance(v, dict):
                conf.smart_update(k,v)
            else:
                conf[k] = v

    def get_section(self, name):
        return lazydict(self._conf.get(name) or {})

    def get_settings(self):
        return self.get_section('settings')

    def get_grid(self):
        return self.get_section('grid')

    def update_settings(self, updates):
        "Overrides from the command line, checked against the same schema as the files."
        curset = dict(self._conf.get('settings') or {})
        curset.update({k:v for k,v in updates.items() if v is not None})
        self._conf['settings'] = validate_with(_config_schema, {'settings': curset}, "settings")['settings']

    def dump(self):
        debug('FULL CONFIGURATION: {0}', dict(self._conf))
