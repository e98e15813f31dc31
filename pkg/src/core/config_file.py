"""
Run configuration generation and parsing.

Pure functions for creating, parsing and hashing TOML run configurations.
"""

import dataclasses
import hashlib
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Union

import tomli_w

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .layer import LayerParams
from .numerics import QuadratureConfig


def default_tolerances() -> Dict[str, float]:
    """Default tolerance per check family."""
    return {
        "limit": 2e-2,
        "derivative_limit": 3e-2,
        "derivative_limit_higher": 5e-2,
        "higher_limit": 5e-2,
        "balance": 1e-4,
        "symmetry": 1e-8,
        "arctan_tail": 1e-6,
        "kernel_normalization": 1e-10,
        "extension_trace": 1e-3,
        "extension_cross": 1e-6,
        "hamiltonian_rhs": 1e-6,
        "arctan_oracle": 1e-8,
    }


@dataclass(frozen=True)
class GridConfig:
    """Sampling grids of the layer, fraclap and potential outputs."""

    layer_x_min: float = -20.0
    layer_x_max: float = 20.0
    layer_points: int = 401
    fraclap_x_min: float = -100.0
    fraclap_x_max: float = 100.0
    fraclap_points: int = 201
    potential_x_far: float = 1e4
    potential_nodes: int = 2001
    truncation_tol: float = 1e-6

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class ExtensionGridConfig:
    """Sampling of the half-plane extension checks."""

    x_min: float = -3.0
    x_max: float = 3.0
    x_points: int = 7
    y_values: List[float] = field(default_factory=lambda: [0.1, 0.25, 0.5, 1.0])
    trace_y: float = 1e-3
    trace_x_max: float = 5.0
    trace_points: int = 11
    hamiltonian_samples: int = 20
    hamiltonian_x_max: float = 3.0
    hamiltonian_y_max: float = 2.0

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class CounterexampleConfig:
    """Parameters of the oscillatory counterexample."""

    alpha: float = 1.0
    beta: float = 0.5
    n_values: List[int] = field(default_factory=lambda: [10**k for k in range(3, 10)])
    limit_x: float = 1e-6

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class VerifyConfig:
    """Sampling of the asymptotic limit checks."""

    x0_factor: float = 50.0
    samples: int = 7
    max_order: int = 3
    arctan_start: float = 10.0

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class RunConfig:
    """Complete run configuration."""

    layer: LayerParams = field(default_factory=lambda: LayerParams(s=0.5, alpha=1.0, beta=1.0, kappa=2.0))
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    grids: GridConfig = field(default_factory=GridConfig)
    extension: ExtensionGridConfig = field(default_factory=ExtensionGridConfig)
    counterexample: CounterexampleConfig = field(default_factory=CounterexampleConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    tolerances: Dict[str, float] = field(default_factory=default_tolerances)
    output_dir: str = "results"
    seed: int = 20240601
    chebyshev_degree: int = 96

    def tolerance(self, name: str) -> float:
        """Tolerance for a check family."""
        return self.tolerances.get(name, default_tolerances()[name])

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "output_dir": self.output_dir,
            "seed": self.seed,
            "chebyshev_degree": self.chebyshev_degree,
            "layer": self.layer.to_dict(),
            "quadrature": self.quadrature.to_dict(),
            "grids": self.grids.to_dict(),
            "extension": self.extension.to_dict(),
            "counterexample": self.counterexample.to_dict(),
            "verify": self.verify.to_dict(),
            "tolerances": dict(self.tolerances),
        }


_SECTIONS = {
    "layer": LayerParams,
    "quadrature": QuadratureConfig,
    "grids": GridConfig,
    "extension": ExtensionGridConfig,
    "counterexample": CounterexampleConfig,
    "verify": VerifyConfig,
}
_TOP_LEVEL = {"output_dir": str, "seed": int, "chebyshev_degree": int}


def generate_config_content(config: RunConfig) -> str:
    """
    Generate TOML content from a configuration.

    Args:
        config: RunConfig instance

    Returns:
        TOML text

    Example:
        >>> content = generate_config_content(RunConfig())
        >>> "[layer]" in content
        True
    """
    return tomli_w.dumps(config.to_dict())


def _coerce(value: Any, expected: Any, key_path: str) -> Any:
    if isinstance(expected, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"'{key_path}' must be true or false")
        return value
    if isinstance(expected, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"'{key_path}' must be a number, got {value!r}")
        return float(value)
    if isinstance(expected, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"'{key_path}' must be an integer, got {value!r}")
        return value
    if isinstance(expected, str):
        if not isinstance(value, str):
            raise ConfigError(f"'{key_path}' must be a string, got {value!r}")
        return value
    if isinstance(expected, list):
        if not isinstance(value, list):
            raise ConfigError(f"'{key_path}' must be an array")
        item = expected[0] if expected else 0.0
        return [_coerce(v, item, f"{key_path}[{k}]") for k, v in enumerate(value)]
    return value


def _build_section(cls, table: Any, name: str):
    if not isinstance(table, dict):
        raise ConfigError(f"'{name}' must be a table")
    defaults = cls()
    known = {f.name for f in dataclasses.fields(cls)}
    for key in table:
        if key not in known:
            raise ConfigError(f"Unknown key '{name}.{key}'")
    values = {key: _coerce(value, getattr(defaults, key), f"{name}.{key}") for key, value in table.items()}
    return dataclasses.replace(defaults, **values)


def parse_config_content(content: str) -> RunConfig:
    """
    Parse TOML content into a RunConfig.

    Missing keys take their defaults; unknown keys are rejected.

    Args:
        content: Raw TOML text

    Returns:
        RunConfig instance

    Raises:
        ConfigError: Malformed TOML, unknown key or wrongly typed value

    Example:
        >>> parse_config_content("seed = 7").seed
        7
    """
    try:
        data = tomllib.loads(content)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"Invalid TOML: {e}") from e

    defaults = RunConfig()
    kwargs: Dict[str, Any] = {}
    for key, value in data.items():
        if key in _SECTIONS:
            kwargs[key] = _build_section(_SECTIONS[key], value, key)
        elif key in _TOP_LEVEL:
            kwargs[key] = _coerce(value, getattr(defaults, key), key)
        elif key == "tolerances":
            if not isinstance(value, dict):
                raise ConfigError("'tolerances' must be a table")
            known = default_tolerances()
            for name in value:
                if name not in known:
                    raise ConfigError(f"Unknown key 'tolerances.{name}'")
            kwargs[key] = {**known, **{k: _coerce(v, 0.0, f"tolerances.{k}") for k, v in value.items()}}
        else:
            raise ConfigError(f"Unknown key '{key}'")
    return dataclasses.replace(defaults, **kwargs)


def load_config(path: Union[str, Path]) -> RunConfig:
    """
    Read and parse a configuration file.

    Raises:
        ConfigError: Missing, unreadable or invalid file
    """
    path = Path(path)
    try:
        content = path.read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise ConfigError(f"Config file not found: {path}") from e
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e
    return parse_config_content(content)


def config_hash(config: RunConfig) -> str:
    """
    SHA-256 of the canonical TOML text of a configuration.

    Example:
        >>> len(config_hash(RunConfig()))
        64
    """
    return hashlib.sha256(generate_config_content(config).encode("utf-8")).hexdigest()
