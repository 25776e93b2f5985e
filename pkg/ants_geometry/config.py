import os

import yaml

import ants_geometry

_config = None


class ConfigurationError(Exception):
    pass


def config():
    """
    Quickly return a configuration object.
    """
    global _config
    if _config is not None:
        return _config
    else:
        _config = load_configuration()
        return _config


def load_configuration(*args):
    """
    Return a configuration object including reloading all file locations.

    Any arguments are treated as yaml files to be parsed: file not found errors
    are silently ignored. Later files override earlier ones key by key, and
    the ``tolerances`` mapping is merged rather than replaced.
    """
    global _config
    _config = {}

    base_path = os.path.split(ants_geometry.__file__)[0]
    base_file = os.path.join(base_path, "default_ants_config.yml")

    locations = [base_file, os.path.expanduser("~/.ants_geometry_config.yml"), "ants_geometry_config.yml"]
    for location in locations + list(args):
        try:
            with open(location) as fin:
                loaded = yaml.load(fin, Loader=yaml.FullLoader) or {}
        except FileNotFoundError:
            continue
        tolerances = dict(_config.get('tolerances', {}))
        tolerances.update(loaded.pop('tolerances', None) or {})
        _config.update(loaded)
        _config['tolerances'] = tolerances

    return _config


class RunConfig(object):
    '''
    Settings for one command-line run: the merged configuration overridden
    by flags.

    command:
        One of verify, analyze, simulate, quartic, ellipse.
    '''

    COMMANDS = ('verify', 'analyze', 'simulate', 'quartic', 'ellipse')

    def __init__(self, command, seed=None, step=None, duration=None, tolerances=None,
                 output_path=None, format='json', mutations=None, base=None, **options):
        base = config() if base is None else base
        if command not in self.COMMANDS:
            raise ConfigurationError("Unknown command {}".format(command))
        self.command = command
        self.seed = int(base.get('seed', 2718) if seed is None else seed)
        self.step = float(base.get('step', 1e-4) if step is None else step)
        self.duration = float(base.get('duration', 0.1) if duration is None else duration)
        self.tolerances = dict(base.get('tolerances', {}))
        self.tolerances.update(tolerances or {})
        self.output_path = output_path
        self.format = format
        self.mutations = set(base.get('mutations') or []) | set(mutations or [])
        self.leaf_level = base.get('leaf_level', 1)
        self.sample_points = int(base.get('sample_points', 3))
        self.coordinate_range = int(base.get('coordinate_range', 10))
        self.symmetry_degree = int(base.get('symmetry_degree', 2))
        self.options = options

        if not self.step > 0:
            raise ConfigurationError("step must be positive, got {}".format(self.step))
        if not self.duration > 0:
            raise ConfigurationError("duration must be positive, got {}".format(self.duration))
        if self.format not in ('json', 'csv'):
            raise ConfigurationError("format must be json or csv, got {}".format(self.format))

    def tol(self, name):
        return float(self.tolerances[name])

    def manifest(self):
        return dict(command=self.command, seed=self.seed, step=self.step,
                    duration=self.duration, tolerances=self.tolerances,
                    mutations=sorted(self.mutations))

    def __repr__(self):
        return "RunConfig({})".format(self.manifest())
