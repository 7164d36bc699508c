# -*- coding: utf-8 -*-
"""
Shot allocation for one SubsCoRe step.

Both rules observe the 1+2V_d equidistant points about the current best
point. Bound ties every point to the CoRe threshold; Center searches for the
fewest shots that still put the whole line inside the CoRe, letting the
center point go unobserved when the GP already knows it well.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from errors import InvalidInput, NumericalFailure
from gp.model import CORE_GRID_SIZE, GPModel, core_grid, line_points
from gp.theory import equidistant_shifts

LOGGER = logging.getLogger(__name__)

MAX_SHOTS = 10 ** 6


@dataclass(frozen=True)
class ShotAllocation:
    points: np.ndarray      # (1+2V, D), first row is the center
    shifts: np.ndarray      # (1+2V,)
    shots: np.ndarray       # (1+2V,) int, 0 means the point is skipped
    variances: np.ndarray   # (1+2V,) eta2/shots, inf where skipped

    @property
    def total(self) -> int:
        return int(self.shots.sum())

    @property
    def observed(self) -> np.ndarray:
        return self.shots > 0


def shots_for_variance(eta2: float, target: float) -> int:
    """Smallest N with eta2/N <= target (never fewer than one shot)."""
    if not target > 0:
        raise InvalidInput(f"variance target must be positive, got {target}")
    return max(1, math.ceil(eta2 / target * (1.0 - 1e-12)))


def _allocation(points, shifts, shots, eta2: float) -> ShotAllocation:
    shots = np.asarray(shots, dtype=np.int64)
    if np.any(shots < 0) or not np.any(shots > 0):
        raise InvalidInput("an allocation needs non-negative shots with at least one observed point")
    with np.errstate(divide="ignore"):
        variances = np.where(shots > 0, eta2 / np.maximum(shots, 1), np.inf)
    return ShotAllocation(points=points, shifts=shifts, shots=shots, variances=variances)


def equidistant_line_points(center, axis: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    shifts = equidistant_shifts(order)
    if center is None:
        return shifts[:, None].copy(), shifts
    return line_points(center, axis, shifts), shifts


def choose_shots_bound(kappa2: float, eta2: float, order: int, center=None, axis: int = 0) -> ShotAllocation:
    if not kappa2 > 0:
        raise InvalidInput(f"CoRe threshold must be positive, got {kappa2}")
    points, shifts = equidistant_line_points(center, axis, order)
    n = shots_for_variance(eta2, kappa2)
    return _allocation(points, shifts, np.full(shifts.size, n), eta2)


class _LineCore:
    """
    Joint posterior over the candidate points and the CoRe grid of one line.
    Grid variances after observing the candidates follow from a small
    conditional update; observed values never enter it.
    """

    def __init__(self, gp: GPModel, points: np.ndarray, center, axis: int, grid_size: int):
        self.n_points = points.shape[0]
        grid = line_points(center, axis, core_grid(grid_size))
        _, S = gp.posterior(np.vstack([points, grid]))
        p = self.n_points
        self.S_pp = S[:p, :p]
        self.S_pg = S[:p, p:]
        self.prior = np.diag(S)[p:].copy()

    def grid_variance(self, noise: np.ndarray) -> np.ndarray:
        keep = np.isfinite(noise)
        if not np.any(keep):
            return self.prior
        A = self.S_pp[np.ix_(keep, keep)] + np.diag(noise[keep])
        B = self.S_pg[keep]
        try:
            factor = cho_factor(A, lower=True, check_finite=False)
        except LinAlgError as exc:
            raise NumericalFailure(f"line covariance over {int(keep.sum())} candidates is not positive definite") from exc
        return self.prior - np.sum(B * cho_solve(factor, B, check_finite=False), axis=0)

    def feasible(self, noise: np.ndarray, kappa2: float) -> bool:
        return bool(np.all(self.grid_variance(noise) <= kappa2))


def _smallest_feasible(ok, lo: int, hi: int) -> int:
    """ok(lo) is False (or lo is a sentinel), ok(hi) is True; returns the smallest feasible count."""
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def choose_shots_center(
    gp: GPModel,
    center,
    axis: int,
    kappa2: float,
    eta2: float,
    grid_size: int = CORE_GRID_SIZE,
    max_shots: int = MAX_SHOTS,
) -> ShotAllocation:
    """
    Stage 1 ties all points to one shot count and finds the smallest count that
    keeps the line inside the CoRe. Stage 2 keeps the shifted points at that
    count and lowers the center's shots, down to skipping it entirely.
    """
    if not kappa2 > 0:
        raise InvalidInput(f"CoRe threshold must be positive, got {kappa2}")
    order = gp.params.vd[axis]
    if grid_size < 2 * (1 + 2 * order):
        raise InvalidInput(f"grid of {grid_size} angles under-samples an order-{2 * order} variance curve")
    points, shifts = equidistant_line_points(center, axis, order)
    core = _LineCore(gp, points, center, axis, grid_size)
    n_pts = shifts.size

    def tied(n: int) -> bool:
        return core.feasible(np.full(n_pts, eta2 / n), kappa2)

    hi = min(shots_for_variance(eta2, kappa2), max_shots)
    while not tied(hi):
        if hi >= max_shots:
            raise NumericalFailure(
                f"line on axis {axis} not inside the CoRe (kappa2={kappa2:.3e}) even with {max_shots} shots per point"
            )
        hi = min(2 * hi, max_shots)
    n_shift = _smallest_feasible(tied, 0, hi)

    def with_center(n: Optional[int]) -> bool:
        noise = np.full(n_pts, eta2 / n_shift)
        noise[0] = np.inf if n is None else eta2 / n
        return core.feasible(noise, kappa2)

    if with_center(None):
        n_center = 0
    else:
        n_center = _smallest_feasible(lambda n: with_center(n), 0, n_shift)

    shots = np.full(n_pts, n_shift)
    shots[0] = n_center
    LOGGER.debug("center allocation axis=%d: shifts %d shots, center %d shots", axis, n_shift, n_center)
    return _allocation(points, shifts, shots, eta2)
