"""
Scenario Configuration for vmlk
Plain-text `key = value` files with `#` comments, validated before any compute
"""

import math
from dataclasses import dataclass, fields, replace

from kinetics.errors import ConfigError, ParameterError
from kinetics.grid import make_torus_grid, make_velocity_grid
from kinetics.landau import COULOMB_GAMMA
from kinetics.maxwell_eq import MaxwellianParams
from kinetics.vlasov import SteadyStateTolerances
from verification.proof_pipeline import PipelineTolerances

CANDIDATES = ('equilibrium', 'drifting', 'varying_temperature', 'nonharmonic_b', 'bimaxwellian', 'perturbed',
              'random', 'maxwellian')

STEADY_TOLERANCE_KEYS = {'tol_vlasov': 'vlasov', 'tol_ampere': 'ampere', 'tol_gauss': 'gauss',
                         'tol_divb': 'divb', 'tol_curle': 'curle'}
PIPELINE_TOLERANCE_KEYS = {'tol_dissipation': 'dissipation', 'tol_fit': 'fit', 'tol_gradient': 'gradient',
                           'tol_killing': 'killing', 'tol_current': 'current', 'tol_density': 'density',
                           'tol_harmonic': 'harmonic'}


@dataclass(frozen=True)
class ScenarioConfig:
    L: float = None
    N: int = 16
    M: int = 8
    nu: float = 1.0
    rho_ion: float = 1.0
    T_ref: float = 1.0
    B0: tuple = (0.0, 0.0, 0.0)
    dt: float = 1e-2
    t_end: float = 5.0
    record_every: int = 10
    seed: int = 0
    candidate: str = 'equilibrium'
    initial: str = None
    drift: float = 0.3
    amplitude: float = 0.1
    maxwellian: MaxwellianParams = None
    kernel_gamma: float = COULOMB_GAMMA
    self_consistent: bool = True
    c_cap: float = 1e3
    K_max: int = 3
    decay_orders: tuple = (2, 4, 8)
    bench_repeats: int = 3
    f_file: str = None
    E_file: str = None
    B_file: str = None
    output_dir: str = 'vmlk_output'
    tol_vlasov: float = None
    tol_ampere: float = None
    tol_gauss: float = None
    tol_divb: float = None
    tol_curle: float = None
    tol_dissipation: float = None
    tol_fit: float = None
    tol_gradient: float = None
    tol_killing: float = None
    tol_current: float = None
    tol_density: float = None
    tol_harmonic: float = None

    @property
    def half_width(self):
        """L, defaulting to 6 sqrt(T_ref)"""
        return self.L if self.L is not None else 6.0 * math.sqrt(self.T_ref)

    def velocity_grid(self):
        return make_velocity_grid(self.half_width, self.N)

    def torus_grid(self):
        return make_torus_grid(self.M)

    def steady_tolerances(self):
        overrides = {name: getattr(self, key) for key, name in STEADY_TOLERANCE_KEYS.items()
                     if getattr(self, key) is not None}
        return SteadyStateTolerances(**overrides)

    def pipeline_tolerances(self):
        overrides = {name: getattr(self, key) for key, name in PIPELINE_TOLERANCE_KEYS.items()
                     if getattr(self, key) is not None}
        return PipelineTolerances(**overrides)

    def with_output_dir(self, path):
        return replace(self, output_dir=path)


def _parse_bool(text):
    lowered = text.lower()
    if lowered in ('true', 'yes', '1'):
        return True
    if lowered in ('false', 'no', '0'):
        return False
    raise ValueError(f"expected true/false, got {text!r}")


def _parse_int(text):
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def _parse_vector(text):
    parts = [float(p) for p in text.split(',')]
    if len(parts) != 3:
        raise ValueError(f"expected three comma separated numbers, got {text!r}")
    return tuple(parts)


def _parse_orders(text):
    return tuple(_parse_int(p.strip()) for p in text.split(','))


PARSERS = {
    'L': float, 'N': _parse_int, 'M': _parse_int, 'nu': float, 'rho_ion': float, 'T_ref': float,
    'B0': _parse_vector, 'dt': float, 't_end': float, 'record_every': _parse_int, 'seed': _parse_int,
    'candidate': str, 'initial': str, 'drift': float, 'amplitude': float, 'self_consistent': _parse_bool,
    'c_cap': float, 'K_max': _parse_int, 'decay_orders': _parse_orders, 'bench_repeats': _parse_int,
    'f_file': str, 'E_file': str, 'B_file': str, 'output_dir': str,
    'maxwellian': MaxwellianParams.parse, 'kernel_gamma': float,
}
PARSERS.update({key: float for key in STEADY_TOLERANCE_KEYS})
PARSERS.update({key: float for key in PIPELINE_TOLERANCE_KEYS})


def _finite_positive(value):
    return math.isfinite(value) and value > 0


CONSTRAINTS = {
    'L': (_finite_positive, "L must be positive"),
    'N': (lambda n: n >= 4 and n % 2 == 0, "N must be even ≥ 4"),
    'M': (lambda m: m >= 2, "M must be ≥ 2"),
    'nu': (lambda x: math.isfinite(x) and x >= 0, "nu must be ≥ 0"),
    'rho_ion': (_finite_positive, "rho_ion must be positive"),
    'T_ref': (_finite_positive, "T_ref must be positive"),
    'B0': (lambda v: all(math.isfinite(x) for x in v), "B0 must be finite"),
    'dt': (_finite_positive, "dt must be positive"),
    't_end': (lambda x: math.isfinite(x) and x >= 0, "t_end must be ≥ 0"),
    'record_every': (lambda n: n >= 1, "record_every must be ≥ 1"),
    'seed': (lambda n: n >= 0, "seed must be ≥ 0"),
    'candidate': (lambda s: s in CANDIDATES, f"candidate must be one of {', '.join(CANDIDATES)}"),
    'initial': (lambda s: s in CANDIDATES, f"initial must be one of {', '.join(CANDIDATES)}"),
    'amplitude': (lambda x: 0 <= x < 1, "amplitude must lie in [0, 1)"),
    'kernel_gamma': (lambda x: -3 <= x <= 1, "kernel_gamma must lie in [-3, 1]"),
    'c_cap': (_finite_positive, "c_cap must be positive"),
    'K_max': (lambda n: n >= 0, "K_max must be ≥ 0"),
    'decay_orders': (lambda t: len(t) > 0 and all(m >= 0 for m in t), "decay_orders must be nonnegative integers"),
    'bench_repeats': (lambda n: n >= 1, "bench_repeats must be ≥ 1"),
}
for _key in list(STEADY_TOLERANCE_KEYS) + list(PIPELINE_TOLERANCE_KEYS):
    CONSTRAINTS[_key] = (lambda x: x >= 0, f"{_key} must be ≥ 0")


def _validate(key, value, line=None):
    rule = CONSTRAINTS.get(key)
    if rule is not None and value is not None and not rule[0](value):
        raise ConfigError(f"{rule[1]}, got {value!r}", line)


def parse_config_text(text):
    """Parse config file contents; every error names its line"""
    known = {f.name for f in fields(ScenarioConfig)}
    values = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", number)
        key, value = (part.strip() for part in line.split('=', 1))
        if key not in known:
            raise ConfigError(f"unknown key {key!r}", number)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", number)
        try:
            parsed = PARSERS[key](value)
        except (ValueError, ParameterError) as e:
            raise ConfigError(f"malformed value for {key}: {e}", number) from e
        _validate(key, parsed, number)
        values[key] = parsed
    config = ScenarioConfig(**values)
    if config.maxwellian is None and 'maxwellian' in (config.candidate, config.initial):
        raise ConfigError("the maxwellian candidate needs a 'maxwellian = rho=..., u=..., T=...' line")
    # defaults obey the same rules
    for key in CONSTRAINTS:
        if key not in values:
            _validate(key, getattr(config, key))
    return config


def parse_config(path):
    """Load and validate a scenario file; None gives all defaults"""
    if path is None:
        return ScenarioConfig()
    try:
        with open(path, 'r') as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    return parse_config_text(text)
