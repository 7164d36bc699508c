# -*- coding: utf-8 -*-
"""
1D trigonometric polynomials in the plain basis (1, cos v t, sin v t):
least-squares fitting and global minimization.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from errors import InvalidInput

TWO_PI = 2.0 * math.pi
GRID_POINTS = 1024
_DEGENERATE = 1e-14


@dataclass(frozen=True)
class TrigPoly1D:
    order: int
    coef: np.ndarray    # (c0, cos_1..cos_V, sin_1..sin_V)

    def __post_init__(self):
        coef = np.asarray(self.coef, dtype=float).ravel()
        if self.order < 1 or coef.size != 1 + 2 * self.order:
            raise InvalidInput(f"order {self.order} needs {1 + 2 * self.order} coefficients, got {coef.size}")
        if not np.all(np.isfinite(coef)):
            raise InvalidInput("trigonometric coefficients must be finite")
        object.__setattr__(self, "coef", coef)

    @property
    def constant(self) -> float:
        return float(self.coef[0])

    @property
    def cos(self) -> np.ndarray:
        return self.coef[1:1 + self.order]

    @property
    def sin(self) -> np.ndarray:
        return self.coef[1 + self.order:]

    def __call__(self, theta):
        return design_matrix(theta, self.order) @ self.coef


def design_matrix(theta, order: int) -> np.ndarray:
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    v = np.arange(1, order + 1)
    return np.hstack([np.ones((theta.size, 1)), np.cos(np.outer(theta, v)), np.sin(np.outer(theta, v))])


def _check_distinct(angles: np.ndarray):
    wrapped = np.sort(np.mod(angles, TWO_PI))
    gaps = np.diff(np.append(wrapped, wrapped[0] + TWO_PI))
    if gaps.size > 1 and gaps.min() < 1e-12:
        raise InvalidInput("duplicate angles make the trigonometric design rank-deficient")


def fit_trig_1d(angles, values, weights=None, order: int = 1) -> TrigPoly1D:
    angles = np.asarray(angles, dtype=float).ravel()
    values = np.asarray(values, dtype=float).ravel()
    n_coef = 1 + 2 * order
    if angles.size != values.size:
        raise InvalidInput(f"{angles.size} angles but {values.size} values")
    if angles.size < n_coef:
        raise InvalidInput(f"order {order} needs at least {n_coef} samples, got {angles.size}")
    _check_distinct(angles)
    A = design_matrix(angles, order)
    b = values
    if weights is not None:
        w = np.asarray(weights, dtype=float).ravel()
        if w.size != angles.size or np.any(w <= 0):
            raise InvalidInput("weights must be positive, one per sample")
        sw = np.sqrt(w)
        A = A * sw[:, None]
        b = b * sw
    coef, _, rank, _ = np.linalg.lstsq(A, b, rcond=None)
    if rank < n_coef:
        raise InvalidInput(f"design matrix has rank {rank} < {n_coef}")
    return TrigPoly1D(order=order, coef=coef)


def minimize_trig_1d(poly: TrigPoly1D) -> tuple[float, float]:
    """Global minimizer on [0, 2pi) and the minimum value."""
    if np.all(np.abs(poly.coef[1:]) < _DEGENERATE):
        return 0.0, poly.constant
    if poly.order == 1:
        c, s = float(poly.cos[0]), float(poly.sin[0])
        theta = math.atan2(-s, -c) % TWO_PI
        return _wrap(theta), poly.constant - math.hypot(c, s)
    grid = np.arange(GRID_POINTS) * (TWO_PI / GRID_POINTS)
    vals = poly(grid)
    k = int(np.argmin(vals))
    h = TWO_PI / GRID_POINTS
    res = minimize_scalar(lambda t: float(poly(t)[0]), bounds=(grid[k] - h, grid[k] + h),
                          method="bounded", options={"xatol": 1e-12})
    theta, value = grid[k], float(vals[k])
    if res.success and res.fun <= value:
        theta, value = float(res.x), float(res.fun)
    return _wrap(theta), value


def _wrap(theta: float) -> float:
    theta = theta % TWO_PI
    return 0.0 if theta >= TWO_PI else theta
