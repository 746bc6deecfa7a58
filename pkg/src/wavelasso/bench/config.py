"""Experiment configuration: defaults, plain-text config files, CLI overrides.

Config files are ``key = value`` lines ('#' starts a comment).  Values are
parsed by the target field's type; comma-separated lists become tuples.
Precedence: experiment defaults < config file < command-line options.
"""

from dataclasses import dataclass, fields

from ..errors import ConfigError

EXPERIMENTS = (
    "cs_image",
    "deblur_image",
    "noise_sweep_2d",
    "noise_sweep_1d",
    "measurement_sweep_1d",
    "penalty_ratio",
)

METHODS = ("L", "OGLR", "OGL")

_NOISE_GRID = tuple(round(0.1 * k, 1) for k in range(11))


@dataclass
class ExperimentConfig:
    """All knobs of a benchmark run; see README for the key reference."""

    experiment: str
    methods: tuple = ("L", "OGLR", "OGL")
    grouping: str = "pc4"
    n: int = 1024
    rows: int = 32
    cols: int = 32
    m: tuple = (800,)
    sigma2: tuple = (0.0,)
    trials: int = 20
    max_jumps: int = 5
    lambda_points: int = 15
    lambda_min_frac: float = 1e-4
    tau_points: int = 7
    levels: int = 0  # 0 = full depth
    seed: int = 0
    out: str = "results"
    image: str = ""
    image_sigma2: float = 1.0
    tile: int = 64
    samples_per_tile: int = 800
    blur_variance: float = 1.0
    max_iters: int = 500
    rel_obj_tol: float = 1e-6
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        self.methods = tuple(m.upper() for m in self.methods)
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"unknown method {m!r}, expected subset of {METHODS}")
        if not self.methods:
            raise ConfigError("method set is empty")
        if self.trials < 1:
            raise ConfigError("trial count must be >= 1")
        if self.lambda_points < 1 or self.tau_points < 1:
            raise ConfigError("grids must be nonempty")
        self.grouping = self.grouping.lower()
        if self.grouping not in ("pc4", "pc2"):
            raise ConfigError(f"grouping must be pc4 or pc2, got {self.grouping!r}")


EXPERIMENT_DEFAULTS = {
    "cs_image": dict(
        methods=("L", "OGLR"), grouping="pc4", image_sigma2=1.0, max_iters=1000
    ),
    "deblur_image": dict(
        methods=("L", "OGLR"), grouping="pc4", image_sigma2=1.6e-5, max_iters=1000
    ),
    "noise_sweep_2d": dict(
        rows=32, cols=32, m=(800,), sigma2=_NOISE_GRID, grouping="pc4", tau_points=3
    ),
    "noise_sweep_1d": dict(
        n=1024, m=(800,), sigma2=_NOISE_GRID, grouping="pc2", tau_points=3
    ),
    "measurement_sweep_1d": dict(
        n=1024,
        m=tuple(range(50, 501, 50)),
        sigma2=(0.01,),
        methods=("L", "OGLR"),
        grouping="pc2",
    ),
    "penalty_ratio": dict(methods=("L", "OGLR", "OGL")),
}

_TUPLE_FIELDS = {"methods", "m", "sigma2"}
_ELEMENT_TYPES = {"methods": str, "m": int, "sigma2": float}


def _parse_value(name, raw, target_type):
    raw = raw.strip()
    if name in _TUPLE_FIELDS:
        elem = _ELEMENT_TYPES[name]
        return tuple(elem(tok.strip()) for tok in raw.split(",") if tok.strip())
    if target_type is bool:
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"cannot parse boolean {name} = {raw!r}")
    if target_type is int:
        return int(raw)
    if target_type is float:
        return float(raw)
    return raw


def parse_config_file(path):
    """Read a ``key = value`` config file into a raw string dict."""
    raw = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, value = line.split("=", 1)
            raw[key.strip()] = value.strip()
    return raw


def build_config(experiment, file_values=None, overrides=None):
    """Merge defaults, config-file values and CLI overrides into a config."""
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}")
    field_types = {f.name: f.type for f in fields(ExperimentConfig)}
    merged = dict(EXPERIMENT_DEFAULTS.get(experiment, {}))
    for source in (file_values or {}), (overrides or {}):
        for key, value in source.items():
            if key == "experiment":
                continue
            if key not in field_types:
                raise ConfigError(f"unknown config key {key!r}")
            if isinstance(value, str):
                target = field_types[key]
                if target not in (int, float, bool, str):
                    target = str
                value = _parse_value(key, value, target)
            merged[key] = value
    return ExperimentConfig(experiment=experiment, **merged)
