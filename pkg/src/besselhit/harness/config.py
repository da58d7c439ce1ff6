"""Experiment configuration: defaults, config files and validation."""

import configparser
import math
from dataclasses import asdict, dataclass, fields, replace

from ..errors import ConfigError
from ..walk import BesselDim

EXPERIMENTS = ("sample", "hist", "steps-vs-eps", "steps-vs-dim", "steps-vs-level", "rng-count", "validate")
FORMATS = ("csv", "json")
REFERENCE_SEED = 2024

# per-experiment defaults for the fields left unset by the user
_DEFAULTS = {
    "sample": dict(dims=(2.7,), levels=(5.0,), epsilons=(1e-3,), reps=1000),
    "hist": dict(dims=(1.5, 3.5, 5.5, 7.5), levels=(5.0,), epsilons=(1e-3,), reps=1000, gamma=0.9),
    "steps-vs-eps": dict(dims=(2.2, 4.7), levels=(5.0,), epsilons=(), reps=1000),
    "steps-vs-dim": dict(dims=(1.5, 2.1, 2.5, 2.9, 3.5, 4.5, 5.5), levels=(5.0,), epsilons=(0.01,), reps=100),
    "steps-vs-level": dict(dims=(3.8, 5.2), levels=(1.0, 2.0, 4.0, 8.0, 16.0), epsilons=(0.01,), reps=1000),
    "rng-count": dict(dims=(2.5, 4.8), levels=(5.0,), epsilons=(0.01,), reps=1000),
    "validate": dict(dims=(), levels=(), epsilons=(), reps=1),
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    dims: tuple = None
    levels: tuple = None
    gamma: float = None
    epsilons: tuple = None
    reps: int = None
    seed: int = REFERENCE_SEED
    fast_first_step: bool = False
    out: str = None
    format: str = "csv"
    k_max: int = 15
    bins: int = 50
    eps_ratio: float = 0.01
    quick: bool = False

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; expected one of {EXPERIMENTS}")
        base = dict(gamma=0.95)
        base.update(_DEFAULTS[self.experiment])
        for name, value in base.items():
            if getattr(self, name) is None:
                object.__setattr__(self, name, value)
        for name in ("dims", "levels", "epsilons"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        self._validate()

    def _validate(self):
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        if int(self.reps) != self.reps or self.reps < 1:
            raise ConfigError(f"replications must be an integer >= 1, got {self.reps}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed}")
        if not 0.0 < self.gamma < 1.0:
            raise ConfigError(f"gamma must lie in (0, 1), got {self.gamma}")
        for d in self.dims:
            BesselDim.of(d)
        for lv in self.levels:
            if not (lv > 0.0 and math.isfinite(lv)):
                raise ConfigError(f"level L must be > 0, got {lv}")
        for e in self.epsilons:
            if not e > 0.0:
                raise ConfigError(f"epsilon must be > 0, got {e}")
        if self.k_max < 1:
            raise ConfigError(f"k_max must be >= 1, got {self.k_max}")
        if self.bins < 1:
            raise ConfigError(f"bins must be >= 1, got {self.bins}")
        if not self.eps_ratio > 0.0:
            raise ConfigError(f"eps_ratio must be > 0, got {self.eps_ratio}")

    def echo(self):
        """Plain-dict view for output metadata."""
        d = asdict(self)
        for name in ("dims", "levels", "epsilons"):
            d[name] = list(d[name])
        return d


# config-file keys and their parsers; names follow the CLI flags
def _float_list(text):
    try:
        return tuple(float(v) for v in str(text).replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"expected a list of numbers, got {text!r}") from None


def _bool(text):
    v = str(text).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _number(kind):
    def parse(text):
        try:
            return kind(text)
        except ValueError:
            raise ConfigError(f"expected {kind.__name__}, got {text!r}") from None

    return parse


_FILE_KEYS = {
    "experiment": ("experiment", str),
    "delta": ("dims", _float_list),
    "level": ("levels", _float_list),
    "gamma": ("gamma", _number(float)),
    "eps": ("epsilons", _float_list),
    "epsilon": ("epsilons", _float_list),
    "reps": ("reps", _number(int)),
    "seed": ("seed", _number(int)),
    "fast_first_step": ("fast_first_step", _bool),
    "out": ("out", str),
    "format": ("format", str),
    "k_max": ("k_max", _number(int)),
    "bins": ("bins", _number(int)),
    "eps_ratio": ("eps_ratio", _number(float)),
    "quick": ("quick", _bool),
}


def read_config_file(path):
    """Parse a ``key = value`` file (UTF-8) into ExperimentConfig field values.

    Section headers are optional; ``#`` and ``;`` start comments.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string("[experiment]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from None
    values = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            key = key.replace("-", "_")
            if key not in _FILE_KEYS:
                raise ConfigError(f"unknown config key {key!r} in {path}")
            name, parse = _FILE_KEYS[key]
            values[name] = parse(raw)
    return values


def build_config(experiment, file_values=None, overrides=None):
    """Defaults, then config-file values, then explicit overrides (CLI flags)."""
    values = dict(file_values or {})
    values.pop("experiment", None)
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown configuration fields: {sorted(unknown)}")
    return ExperimentConfig(experiment, **values)


def with_overrides(cfg, **kw):
    return replace(cfg, **kw)
