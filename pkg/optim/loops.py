# -*- coding: utf-8 -*-
"""
Optimization loops: SubsCoRe (Bound / Center shot allocation over a GP with
the VQE kernel) and the fixed-shot NFT baseline. Both are sequential minimal
optimization over axes d = 0, 1, ..., D-1, 0, ...
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Protocol

import numpy as np

from errors import InvalidConfig
from gp.kernel import KernelParams
from gp.model import (
    CORE_GRID_SIZE, GAMMA_GRID_STEPS, GAMMA_MAX, GAMMA_MIN,
    GPModel, compress, gamma_grid, line_points, loo_gamma_search, minimize_gp_on_line,
)
from gp.trig import fit_trig_1d, minimize_trig_1d
from optim.problem import VQEProblem
from optim.schedule import ScheduleParams, update_threshold
from optim.shots import MAX_SHOTS, ShotAllocation, choose_shots_bound, choose_shots_center, shots_for_variance

LOGGER = logging.getLogger(__name__)

VARIANTS = ("center", "bound", "nft")
PIVOT_MODES = ("line", "first")
TWO_PI = 2.0 * math.pi


class ObserveChannel(Protocol):
    eta2: float

    def __call__(self, x, n_shots: int) -> tuple[float, float]: ...


# ---------------- Settings ----------------
@dataclass(frozen=True)
class HyperoptSettings:
    """LOO grid search for gamma: every step during warmup, then every `interval` steps."""
    enabled: bool = True
    warmup: int = 10
    interval: int = 20
    steps: int = GAMMA_GRID_STEPS
    gamma_min: float = GAMMA_MIN
    gamma_max: float = GAMMA_MAX

    def __post_init__(self):
        if self.warmup < 0 or self.interval < 1 or self.steps < 1:
            raise InvalidConfig("hyperopt warmup must be >= 0, interval and steps >= 1")
        if not 0 < self.gamma_min <= self.gamma_max:
            raise InvalidConfig(f"bad gamma range [{self.gamma_min}, {self.gamma_max}]")

    def due(self, t: int) -> bool:
        return self.enabled and (t <= self.warmup or t % self.interval == 0)

    def grid(self) -> np.ndarray:
        return gamma_grid(self.steps, self.gamma_min, self.gamma_max)


@dataclass(frozen=True)
class OptimizerConfig:
    variant: str = "center"
    schedule: ScheduleParams = field(default_factory=ScheduleParams)
    hyperopt: HyperoptSettings = field(default_factory=HyperoptSettings)
    gamma2_init: float = 4.0
    sigma0_2: Optional[float] = None        # None: derived from the energy at x0
    grid_size: int = CORE_GRID_SIZE
    compress_trigger: int = 120
    compress_keep: int = 100
    compress_pivots: str = "line"          # "line": along the axis about to be searched; "first": one pivot
    max_center_shots: int = MAX_SHOTS
    nft_shots: int = 1024
    recal_interval: Optional[int] = None    # None: one full sweep (D steps); 0 disables

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidConfig(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.nft_shots < 1 or self.max_center_shots < 1:
            raise InvalidConfig("shot counts must be >= 1")
        if not self.gamma2_init > 0:
            raise InvalidConfig(f"gamma2_init must be positive, got {self.gamma2_init}")
        if self.sigma0_2 is not None and not self.sigma0_2 > 0:
            raise InvalidConfig(f"sigma0_2 must be positive, got {self.sigma0_2}")
        if self.compress_keep < 1 or self.compress_trigger < self.compress_keep:
            raise InvalidConfig("compression needs 1 <= keep <= trigger")
        if self.compress_pivots not in PIVOT_MODES:
            raise InvalidConfig(f"compress_pivots must be one of {PIVOT_MODES}, got {self.compress_pivots!r}")
        if self.recal_interval is not None and self.recal_interval < 0:
            raise InvalidConfig("recal_interval must be >= 0")


# ---------------- State and trace ----------------
@dataclass(frozen=True)
class StepInfo:
    axis: int
    center: np.ndarray          # best point before the step
    kappa2: float               # threshold the allocation targeted
    shots: int
    allocation: Optional[ShotAllocation] = None


@dataclass(frozen=True)
class OptimizerState:
    t: int
    d: int
    x_hat: np.ndarray
    y_hat: float
    kappa2: float
    eta2: float
    cum_shots: int
    history: tuple[float, ...] = ()
    gp: Optional[GPModel] = None
    last: Optional[StepInfo] = None

    @property
    def n_params(self) -> int:
        return int(self.x_hat.size)


@dataclass(frozen=True)
class TraceRow:
    seed: int
    step: int
    axis: int
    shots_step: int
    cum_shots: int
    kappa: float
    y_hat: float
    delta_energy: float
    delta_fidelity: float


@dataclass(frozen=True)
class OptimizerTrace:
    seed: int
    variant: str
    x0: tuple[float, ...]
    eta2: float
    sigma0_2: Optional[float]
    e_ground: float
    rows: tuple[TraceRow, ...]
    x_final: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def final(self) -> TraceRow:
        return self.rows[-1]


# ---------------- SubsCoRe ----------------
def _maintain(gp: GPModel, t: int, cfg: OptimizerConfig, center: np.ndarray, axis: int) -> GPModel:
    line = (center, axis) if cfg.compress_pivots == "line" else None
    data = compress(gp.data, gp.params, cfg.compress_trigger, cfg.compress_keep, line=line)
    if data is not gp.data:
        LOGGER.debug("step %d: compressed %d -> %d points", t, len(gp.data), len(data))
        gp = gp.with_data(data)
    if cfg.hyperopt.due(t):
        g2 = loo_gamma_search(gp.data, gp.params, cfg.hyperopt.grid())
        if g2 != gp.params.gamma2:
            gp = gp.with_params(gp.params.with_gamma2(g2))
    return gp


def subscore_step(
    state: OptimizerState,
    channel: ObserveChannel,
    variant: str = "center",
    cfg: Optional[OptimizerConfig] = None,
) -> OptimizerState:
    cfg = cfg or OptimizerConfig(variant=variant)
    if variant not in ("center", "bound"):
        raise InvalidConfig(f"SubsCoRe variant must be 'center' or 'bound', got {variant!r}")
    if state.gp is None:
        raise InvalidConfig("SubsCoRe step needs a GP in the optimizer state")
    t = state.t + 1
    axis = state.d
    center = state.x_hat
    gp = _maintain(state.gp, t, cfg, center, axis)
    order = gp.params.vd[axis]

    if variant == "bound":
        alloc = choose_shots_bound(state.kappa2, state.eta2, order, center, axis)
    else:
        alloc = choose_shots_center(gp, center, axis, state.kappa2, state.eta2,
                                    grid_size=cfg.grid_size, max_shots=cfg.max_center_shots)

    X, ys, vs = [], [], []
    for point, n in zip(alloc.points, alloc.shots):
        if n == 0:
            continue
        y, var = channel(point, int(n))
        X.append(point)
        ys.append(y)
        vs.append(var)
    gp = gp.with_observations(np.asarray(X), ys, vs)

    x_new, y_new = minimize_gp_on_line(gp, center, axis)
    history = (state.history + (y_new,))[-cfg.schedule.t_ave:]
    kappa2 = update_threshold(history, cfg.schedule, state.eta2, state.kappa2)

    return replace(
        state,
        t=t,
        d=(axis + 1) % state.n_params,
        x_hat=x_new,
        y_hat=y_new,
        kappa2=kappa2,
        cum_shots=state.cum_shots + alloc.total,
        history=history,
        gp=gp,
        last=StepInfo(axis=axis, center=center, kappa2=state.kappa2, shots=alloc.total, allocation=alloc),
    )


# ---------------- NFT baseline ----------------
def nft_step(
    state: OptimizerState,
    channel: ObserveChannel,
    n_shots: int = 1024,
    recal_interval: Optional[int] = None,
    order: int = 1,
) -> OptimizerState:
    """
    Observes the 2V non-zero equidistant shifts, fits a trig polynomial through
    them and the carried best score at the center, and jumps to its minimum.
    """
    t = state.t + 1
    axis = state.d
    center = state.x_hat
    n_pts = 1 + 2 * order
    shifts = np.arange(1, n_pts) * (TWO_PI / n_pts)
    values = [state.y_hat]
    for point in line_points(center, axis, shifts):
        y, _ = channel(point, n_shots)
        values.append(y)
    poly = fit_trig_1d(np.concatenate([[0.0], shifts]), values, order=order)
    theta, y_new = minimize_trig_1d(poly)
    x_new = line_points(center, axis, [theta])[0]
    shots = (n_pts - 1) * n_shots

    interval = state.n_params if recal_interval is None else recal_interval
    if interval and t % interval == 0:
        y_new, _ = channel(x_new, n_shots)
        shots += n_shots

    return replace(
        state,
        t=t,
        d=(axis + 1) % state.n_params,
        x_hat=x_new,
        y_hat=float(y_new),
        cum_shots=state.cum_shots + shots,
        last=StepInfo(axis=axis, center=center, kappa2=state.kappa2, shots=shots),
    )


# ---------------- Driver ----------------
def initial_state(cfg: OptimizerConfig, channel: ObserveChannel, problem: VQEProblem, x0) -> OptimizerState:
    """First observation at x0; it counts toward the budget but is not a trace row."""
    x0 = np.mod(np.asarray(x0, dtype=float), TWO_PI)
    eta2 = float(channel.eta2)
    if cfg.variant == "nft":
        y0, _ = channel(x0, cfg.nft_shots)
        return OptimizerState(t=0, d=0, x_hat=x0, y_hat=float(y0), kappa2=eta2 / cfg.nft_shots,
                              eta2=eta2, cum_shots=cfg.nft_shots)
    sigma0_2 = cfg.sigma0_2 if cfg.sigma0_2 is not None else problem.default_sigma0_2(x0)
    params = KernelParams(gamma2=cfg.gamma2_init, sigma0_2=sigma0_2, vd=problem.vd)
    kappa2 = cfg.schedule.initial_kappa2(eta2)
    n0 = shots_for_variance(eta2, kappa2)
    y0, var0 = channel(x0, n0)
    gp = GPModel.empty(params).with_observations(x0[None, :], [y0], [var0])
    return OptimizerState(t=0, d=0, x_hat=x0, y_hat=float(y0), kappa2=kappa2, eta2=eta2,
                          cum_shots=n0, gp=gp)


def step(state: OptimizerState, channel: ObserveChannel, cfg: OptimizerConfig) -> OptimizerState:
    if cfg.variant == "nft":
        # fixed +-2pi/3 shifts; run() rejects circuits with V_d > 1
        return nft_step(state, channel, cfg.nft_shots, cfg.recal_interval)
    return subscore_step(state, channel, cfg.variant, cfg)


def run(
    cfg: OptimizerConfig,
    channel: ObserveChannel,
    budget: int,
    problem: VQEProblem,
    seed: int,
    max_steps: Optional[int] = None,
    callback: Optional[Callable[[OptimizerState], None]] = None,
) -> OptimizerTrace:
    """
    Runs until the cumulative shots per operator group reach `budget` (or
    `max_steps` steps). At least one step is always taken.
    """
    if not budget > 0:
        raise InvalidConfig(f"shot budget must be positive, got {budget}")
    if max_steps is not None and max_steps < 1:
        raise InvalidConfig(f"max_steps must be >= 1, got {max_steps}")
    if cfg.variant == "nft" and any(v != 1 for v in problem.vd):
        raise InvalidConfig("the NFT baseline with +-2pi/3 shifts needs V_d = 1 on every axis")

    x0 = problem.initial_point(seed)
    state = initial_state(cfg, channel, problem, x0)
    sigma0_2 = state.gp.params.sigma0_2 if state.gp is not None else None

    rows = []
    while True:
        state = step(state, channel, cfg)
        rows.append(TraceRow(
            seed=seed,
            step=state.t,
            axis=state.last.axis,
            shots_step=state.last.shots,
            cum_shots=state.cum_shots,
            kappa=math.sqrt(state.last.kappa2),
            y_hat=state.y_hat,
            delta_energy=problem.delta_energy(state.x_hat),
            delta_fidelity=problem.delta_fidelity(state.x_hat),
        ))
        if callback is not None:
            callback(state)
        if state.cum_shots >= budget or (max_steps is not None and state.t >= max_steps):
            break

    LOGGER.debug("seed %d (%s): %d steps, %d shots, final dE=%.3e",
                 seed, cfg.variant, state.t, state.cum_shots, rows[-1].delta_energy)
    return OptimizerTrace(
        seed=seed,
        variant=cfg.variant,
        x0=tuple(float(v) for v in x0),
        eta2=state.eta2,
        sigma0_2=sigma0_2,
        e_ground=problem.e_ground,
        rows=tuple(rows),
        x_final=tuple(float(v) for v in state.x_hat),
    )
