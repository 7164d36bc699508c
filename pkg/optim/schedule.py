# -*- coding: utf-8 -*-
"""CoRe threshold schedule. kappa is a standard deviation in energy units; shot knobs convert via kappa^2 = eta2 / N."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from errors import InvalidConfig, InvalidInput


@dataclass(frozen=True)
class ScheduleParams:
    kappa0_shots: int = 512
    c0_shots: int = 1024
    c1: float = 1.0
    t_ave: int = 40

    def __post_init__(self):
        if self.kappa0_shots < 1 or self.c0_shots < 1 or self.t_ave < 2:
            raise InvalidConfig("kappa0_shots, c0_shots must be >= 1 and t_ave >= 2")
        if not self.c1 > 0:
            raise InvalidConfig(f"c1 must be positive, got {self.c1}")
        if self.c0_shots * 8 < self.kappa0_shots:
            raise InvalidConfig(f"c0_shots={self.c0_shots} is below kappa0_shots/8={self.kappa0_shots / 8:g}")

    def initial_kappa2(self, eta2: float) -> float:
        return eta2 / self.kappa0_shots

    def floor_kappa2(self, eta2: float) -> float:
        return eta2 / self.c0_shots


def ols_slope(values: Sequence[float]) -> float:
    y = np.asarray(values, dtype=float)
    t = np.arange(y.size, dtype=float)
    return float(np.polyfit(t, y, 1)[0])


def update_threshold(history: Sequence[float], sched: ScheduleParams, eta2: float, current: float) -> float:
    """
    Returns the new kappa^2. Until t_ave best values are recorded the current
    threshold is kept; afterwards kappa = max(sqrt(eta2/C0), -C1 * slope).
    """
    if len(history) == 0:
        raise InvalidInput("threshold update needs at least one recorded best value")
    if len(history) < sched.t_ave:
        return current
    recent = list(history)[-sched.t_ave:]
    kappa = max(math.sqrt(sched.floor_kappa2(eta2)), -sched.c1 * ols_slope(recent))
    return kappa * kappa
