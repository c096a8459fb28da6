"""Run configuration: defaults, file loading and validation.

A config file is YAML (JSON is accepted as a YAML subset) holding any of the
fields of :class:`RunConfig`. Complex values may be written as ``"a+bi"``
strings, ``[re, im]`` pairs or plain numbers.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .errors import CesLabError, ConfigError
from .serialization import parse_complex
from .states import MAX_REG_R, as_weights

SUITES = ("eigen", "ortho", "complete", "wigner", "su11", "squeeze", "circuit", "adjudicate")
DEFAULT_CUTOFFS = {2: 60, 3: 30, 4: 10, 5: 8}
DEFAULT_BETAS = {2: (0.5,), 3: (0.3, -0.2j)}
MAX_GRID_POINTS = 1_000_000


def default_cutoff(num_modes: int) -> int:
    return DEFAULT_CUTOFFS.get(num_modes, 6)


def _complex(value, name: str) -> complex:
    try:
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ValueError("expected [re, im]")
            return complex(float(value[0]), float(value[1]))
        if isinstance(value, str):
            return parse_complex(value)
        return complex(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: cannot parse {value!r} as a complex number ({exc})") from None


@dataclass
class WignerGrid:
    x_range: tuple = (-3.0, 3.0)
    p_range: tuple = (-3.0, 3.0)
    steps: tuple = (41, 41)

    def validate(self) -> None:
        for name in ("x_range", "p_range"):
            lo, hi = getattr(self, name)
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ConfigError(f"{name} must be an increasing pair of finite numbers")
        nx, np_ = self.steps
        if nx < 2 or np_ < 2:
            raise ConfigError("a grid needs at least two steps per axis")
        if nx * np_ > MAX_GRID_POINTS:
            raise ConfigError(f"grid of {nx * np_} points exceeds the limit of {MAX_GRID_POINTS}")


@dataclass
class RunConfig:
    """Everything a CLI run needs.

    ``betas`` holds the ``N - 1`` ladder labels; for three modes they are
    ``(beta, gamma)``. ``cutoff`` defaults per mode count (30 for three
    modes). ``tolerances`` overrides individual check tolerances by name.
    """

    weights: tuple = (1.0, 1.0, 1.0)
    betas: Optional[tuple] = None
    x: float = 0.5
    reg_r: float = 2.0
    cutoff: Optional[int] = None
    seed: int = 42
    samples: int = 1_000_000
    suites: tuple = ("all",)
    out: str = "report.json"
    wigner_out: str = "wigner.csv"
    grid: WignerGrid = field(default_factory=WignerGrid)
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.validate()

    @property
    def num_modes(self) -> int:
        return len(self.weights)

    def resolved_betas(self) -> tuple:
        if self.betas is not None:
            return tuple(self.betas)
        return DEFAULT_BETAS.get(self.num_modes, (0.3,) * (self.num_modes - 1))

    def resolved_cutoff(self) -> int:
        return self.cutoff if self.cutoff is not None else default_cutoff(self.num_modes)

    def resolved_suites(self) -> tuple:
        return SUITES if "all" in self.suites else tuple(self.suites)

    def tolerance(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def validate(self) -> None:
        try:
            self.weights = tuple(float(w) for w in self.weights)
            as_weights(self.weights)
        except (TypeError, ValueError, CesLabError) as exc:
            raise ConfigError(f"weights: {exc}") from None
        if self.betas is not None:
            self.betas = tuple(_complex(b, "betas") for b in self.betas)
            if len(self.betas) != self.num_modes - 1:
                raise ConfigError(f"betas: need {self.num_modes - 1} values for {self.num_modes} modes")
        try:
            self.x = float(self.x)
            self.reg_r = float(self.reg_r)
            self.seed = int(self.seed)
            self.samples = int(self.samples)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        if not 0 < self.reg_r <= MAX_REG_R:
            raise ConfigError(f"reg_r must lie in (0, {MAX_REG_R}]")
        if self.cutoff is not None and int(self.cutoff) < 2:
            raise ConfigError("cutoff must be at least 2")
        if self.samples < 1:
            raise ConfigError("samples must be positive")
        if isinstance(self.suites, str):
            self.suites = (self.suites,)
        self.suites = tuple(self.suites)
        unknown = [s for s in self.suites if s not in SUITES + ("all",)]
        if unknown:
            raise ConfigError(f"unknown suites {unknown}; choose from {', '.join(SUITES)} or all")
        if isinstance(self.grid, dict):
            self.grid = _grid_from_dict(self.grid)
        self.grid.validate()
        if not isinstance(self.tolerances, dict):
            raise ConfigError("tolerances must be a mapping of check name to value")

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["betas"] = list(self.resolved_betas())
        out["cutoff"] = self.resolved_cutoff()
        return out


def _grid_from_dict(raw: dict) -> WignerGrid:
    unknown = set(raw) - {"x_range", "p_range", "steps"}
    if unknown:
        raise ConfigError(f"unknown grid fields {sorted(unknown)}")
    try:
        kwargs = {k: tuple(float(v) for v in raw[k]) for k in ("x_range", "p_range") if k in raw}
        if "steps" in raw:
            kwargs["steps"] = tuple(int(v) for v in raw["steps"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"grid: {exc}") from None
    return WignerGrid(**kwargs)


def config_from_mapping(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    names = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = set(raw) - names
    if unknown:
        raise ConfigError(f"unknown config fields {sorted(unknown)}")
    return RunConfig(**raw)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from None
    return config_from_mapping(raw or {})
