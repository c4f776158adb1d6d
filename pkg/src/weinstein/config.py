"""Run configuration shared by the CLI and the verification suite."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .core import ThetaRule, theta_rule
from .errors import ConfigurationError
from .quadrature import QuadratureGrid, WeinsteinParams, build_nu_grid

__all__ = ["RunConfig", "DEFAULTS", "parse_orders", "read_config_file", "resolve_config"]


@dataclass(frozen=True)
class RunConfig:
    alpha: float = 0.5
    d: int = 1
    radius: float = 8.0
    order_euclid: int = 64
    order_radial: int = 48
    theta_order: int = 64
    tolerance: float = 1e-5
    seed: int = 42
    output_path: Optional[str] = None

    def __post_init__(self):
        if not (math.isfinite(self.tolerance) and self.tolerance > 0):
            raise ConfigurationError(f"tolerance must be positive, got {self.tolerance}")
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ConfigurationError(f"radius must be positive, got {self.radius}")
        for name in ("order_euclid", "order_radial", "theta_order"):
            if getattr(self, name) < 4:
                raise ConfigurationError(f"{name} must be >= 4, got {getattr(self, name)}")
        self.params  # validates alpha and d

    @property
    def params(self) -> WeinsteinParams:
        return WeinsteinParams(self.alpha, self.d)

    def nu_grid(self) -> QuadratureGrid:
        return build_nu_grid(self.params, self.radius, self.order_euclid, self.order_radial)

    def rule(self) -> ThetaRule:
        return theta_rule(self.alpha, self.theta_order)


DEFAULTS = RunConfig()

_CASTS = {
    "alpha": float,
    "d": int,
    "radius": float,
    "order_euclid": int,
    "order_radial": int,
    "theta_order": int,
    "tolerance": float,
    "tol": float,
    "seed": int,
    "output_path": str,
    "out": str,
}
_ALIASES = {"tol": "tolerance", "out": "output_path"}


def parse_orders(text: str) -> dict:
    """``"E,R,T"`` into the three order fields."""
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 3:
        raise ConfigurationError(f"--orders expects E,R,T, got {text!r}")
    try:
        e, r, t = (int(p) for p in parts)
    except ValueError:
        raise ConfigurationError(f"--orders expects three integers, got {text!r}") from None
    return {"order_euclid": e, "order_radial": r, "theta_order": t}


def read_config_file(path) -> dict:
    """``key=value`` lines; ``#`` starts a comment."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from None
    out = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key == "orders":
            out.update(parse_orders(value))
            continue
        if key not in _CASTS:
            raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[_ALIASES.get(key, key)] = _CASTS[key](value)
        except ValueError:
            raise ConfigurationError(f"{path}:{lineno}: bad value {value!r} for {key}") from None
    return out


def resolve_config(file_path=None, **overrides) -> RunConfig:
    """Defaults, then the optional file, then non-``None`` overrides."""
    values = dataclasses.asdict(DEFAULTS)
    if file_path is not None:
        values.update(read_config_file(file_path))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)
