# -*- coding: utf-8 -*-
"""
Run configuration: a dataclass tree stored as indented JSON, one section per
concern. Resolution order is defaults -> config file -> CLI flags.
"""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Optional

from errors import InvalidConfig
from optim.loops import VARIANTS, HyperoptSettings, OptimizerConfig
from optim.schedule import ScheduleParams
from sim.channel import NOISE_KINDS

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(__file__), "data", "default_run.json")
DB_URL_ENV = "SUBSCORE_DB_URL"

CIRCUITS = ("esu2",)
KERNELS = ("vqe",)


# ---------------- Sections ----------------
@dataclass(frozen=True)
class CircuitSettings:
    n_qubits: int = 5
    n_layers: int = 3
    circuit: str = "esu2"
    pbc: bool = False
    kernel: str = "vqe"


@dataclass(frozen=True)
class HamiltonianSettings:
    J: tuple[float, float, float] = (-1.0, 0.0, 0.0)
    h: tuple[float, float, float] = (0.0, 0.0, -1.0)


@dataclass(frozen=True)
class NoiseSettings:
    kind: str = "gaussian-exact"
    eta2: Optional[float] = None    # None: estimated once at x0


@dataclass(frozen=True)
class OptimizerSettings:
    gamma2_init: float = 4.0
    sigma0_2: Optional[float] = None
    grid_size: int = 64
    compress_trigger: int = 120
    compress_keep: int = 100
    compress_pivots: str = "line"
    max_center_shots: int = 10 ** 6
    nft_shots: int = 1024
    recal_interval: Optional[int] = None


@dataclass(frozen=True)
class OutputSettings:
    csv: Optional[str] = None
    json: Optional[str] = None
    db_url: Optional[str] = None
    quantiles: tuple[float, ...] = (0.25, 0.5, 0.75)


@dataclass(frozen=True)
class RunConfig:
    label: str = "subscore"
    variant: str = "center"
    seeds: tuple[int, ...] = tuple(range(20))
    budget: int = 3_000_000
    max_steps: Optional[int] = None
    workers: int = 1
    circuit: CircuitSettings = field(default_factory=CircuitSettings)
    hamiltonian: HamiltonianSettings = field(default_factory=HamiltonianSettings)
    noise: NoiseSettings = field(default_factory=NoiseSettings)
    schedule: ScheduleParams = field(default_factory=ScheduleParams)
    hyperopt: HyperoptSettings = field(default_factory=HyperoptSettings)
    optimizer: OptimizerSettings = field(default_factory=OptimizerSettings)
    output: OutputSettings = field(default_factory=OutputSettings)

    def validate(self) -> "RunConfig":
        c = self.circuit
        if c.pbc:
            raise InvalidConfig("periodic boundary conditions are not supported (use --pbc False)")
        if c.circuit not in CIRCUITS:
            raise InvalidConfig(f"circuit must be one of {CIRCUITS}, got {c.circuit!r}")
        if c.kernel not in KERNELS:
            raise InvalidConfig(f"kernel must be one of {KERNELS}, got {c.kernel!r}")
        if c.n_qubits < 2 or c.n_layers < 0:
            raise InvalidConfig(f"need n_qubits >= 2 and n_layers >= 0, got {c.n_qubits}, {c.n_layers}")
        if len(self.hamiltonian.J) != 3 or len(self.hamiltonian.h) != 3:
            raise InvalidConfig("J and h need three components (X, Y, Z)")
        if self.variant not in VARIANTS:
            raise InvalidConfig(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.noise.kind not in NOISE_KINDS:
            raise InvalidConfig(f"noise kind must be one of {NOISE_KINDS}, got {self.noise.kind!r}")
        if self.noise.eta2 is not None and not self.noise.eta2 > 0:
            raise InvalidConfig(f"eta2 must be positive, got {self.noise.eta2}")
        if not self.seeds or min(self.seeds) < 0 or len(set(self.seeds)) != len(self.seeds):
            raise InvalidConfig("seeds must be a non-empty list of distinct non-negative integers")
        if self.budget < 1 or self.workers < 1:
            raise InvalidConfig("budget and workers must be >= 1")
        if self.max_steps is not None and self.max_steps < 1:
            raise InvalidConfig("max_steps must be >= 1")
        if not self.output.quantiles or any(not 0.0 <= q <= 1.0 for q in self.output.quantiles):
            raise InvalidConfig("quantiles must lie in [0, 1]")
        self.optimizer_config()
        return self

    def optimizer_config(self) -> OptimizerConfig:
        return OptimizerConfig(variant=self.variant, schedule=self.schedule, hyperopt=self.hyperopt,
                               **asdict(self.optimizer))

    def db_url(self) -> Optional[str]:
        return self.output.db_url or os.getenv(DB_URL_ENV) or None


_SECTIONS = {
    "circuit": CircuitSettings,
    "hamiltonian": HamiltonianSettings,
    "noise": NoiseSettings,
    "schedule": ScheduleParams,
    "hyperopt": HyperoptSettings,
    "optimizer": OptimizerSettings,
    "output": OutputSettings,
}


# ---------------- Render / parse ----------------
def _tuples(value):
    if isinstance(value, list):
        return tuple(_tuples(v) for v in value)
    return value


def _build(cls, data: Any, where: str, base: Any = None):
    if not isinstance(data, dict):
        raise InvalidConfig(f"{where}: expected an object, got {type(data).__name__}")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise InvalidConfig(f"{where}: unknown keys {unknown}")
    kwargs = {}
    for k, v in data.items():
        if k in _SECTIONS and cls is RunConfig:
            kwargs[k] = _build(_SECTIONS[k], v, f"{where}.{k}", None if base is None else getattr(base, k))
        else:
            kwargs[k] = _tuples(v)
    try:
        return cls(**kwargs) if base is None else replace(base, **kwargs)
    except (TypeError, ValueError) as e:
        raise InvalidConfig(f"{where}: {e}") from e


def config_to_dict(cfg: RunConfig) -> dict:
    return asdict(cfg)


def config_from_dict(data: dict, base: Optional[RunConfig] = None) -> RunConfig:
    """Keys missing from `data` come from `base` (built-in defaults when None)."""
    return _build(RunConfig, data, "config", base)


def render_config(cfg: RunConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2)


def parse_config(text: str, base: Optional[RunConfig] = None) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidConfig(f"config is not valid JSON: {e}") from e
    return config_from_dict(data, base)


def load_config(path: str, base: Optional[RunConfig] = None) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise InvalidConfig(f"cannot read config {path}: {e}") from e
    try:
        return parse_config(text, base)
    except InvalidConfig as e:
        raise InvalidConfig(f"{path}: {e}") from e


def default_config() -> RunConfig:
    """The shipped defaults file, or the built-in defaults when it is missing."""
    if not os.path.exists(DEFAULT_CONFIG_PATH):
        return RunConfig()
    return load_config(DEFAULT_CONFIG_PATH)


def save_config(cfg: RunConfig, path: str) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(render_config(cfg) + "\n")


def merge_section(cfg: RunConfig, section: str, **changes) -> RunConfig:
    """Overrides keys of one nested section (None values are ignored)."""
    changes = {k: v for k, v in changes.items() if v is not None}
    if not changes:
        return cfg
    return replace(cfg, **{section: replace(getattr(cfg, section), **changes)})
