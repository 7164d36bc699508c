# -*- coding: utf-8 -*-
"""
Heteroscedastic GP regression with the VQE kernel.

A GPModel is immutable: it owns a Dataset, KernelParams and the Cholesky
factor of K + Diag(sigma). Every update (new observations, new gamma,
compression) returns a new model.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from errors import InvalidInput, NumericalFailure
from gp.kernel import KernelParams, cosine_sums, gram, gram_from_sums
from gp.theory import equidistant_shifts
from gp.trig import fit_trig_1d, minimize_trig_1d

LOGGER = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
CORE_GRID_SIZE = 64
JITTER_START = 1e-10
JITTER_MAX = 1e-6
GAMMA_GRID_STEPS = 90
GAMMA_MIN = math.sqrt(2.0)
GAMMA_MAX = 20.0


# ---------------------------------------------------------------------------
# Training data
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Dataset:
    X: np.ndarray       # (N, D), wrapped to [0, 2pi)
    y: np.ndarray       # (N,)
    sigma: np.ndarray   # (N,) observation noise variances

    def __post_init__(self):
        X = np.mod(np.atleast_2d(np.asarray(self.X, dtype=float)), TWO_PI)
        y = np.asarray(self.y, dtype=float).ravel()
        sigma = np.asarray(self.sigma, dtype=float).ravel()
        if not (X.shape[0] == y.size == sigma.size):
            raise InvalidInput(f"dataset lengths differ: X {X.shape[0]}, y {y.size}, sigma {sigma.size}")
        if np.any(~np.isfinite(sigma)) or np.any(sigma <= 0):
            raise InvalidInput("observation noise variances must be finite and positive")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "sigma", sigma)

    @classmethod
    def empty(cls, n_dims: int) -> "Dataset":
        return cls(np.zeros((0, n_dims)), np.zeros(0), np.zeros(0))

    def __len__(self) -> int:
        return int(self.y.size)

    @property
    def n_dims(self) -> int:
        return int(self.X.shape[1])

    def append(self, X, y, sigma) -> "Dataset":
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return Dataset(np.vstack([self.X, X]),
                       np.concatenate([self.y, np.atleast_1d(y)]),
                       np.concatenate([self.sigma, np.atleast_1d(sigma)]))

    def subset(self, idx) -> "Dataset":
        return Dataset(self.X[idx], self.y[idx], self.sigma[idx])


# ---------------------------------------------------------------------------
# Factorization with jitter escalation
# ---------------------------------------------------------------------------
def _factorize(K: np.ndarray, sigma: np.ndarray, sigma0_2: float):
    system = K + np.diag(sigma)
    jitter = 0.0
    while True:
        try:
            A = system if jitter == 0.0 else system + jitter * np.eye(system.shape[0])
            return cho_factor(A, lower=True, check_finite=False), jitter
        except LinAlgError:
            jitter = JITTER_START * sigma0_2 if jitter == 0.0 else jitter * 10.0
            if jitter > JITTER_MAX * sigma0_2 * (1 + 1e-9):
                raise NumericalFailure(
                    f"K + Diag(sigma) not positive definite even with jitter {JITTER_MAX:g} * sigma0^2"
                )
            LOGGER.warning("Cholesky failed on %d points; retrying with jitter %.1e", system.shape[0], jitter)


class GPModel:
    def __init__(self, data: Dataset, params: KernelParams):
        if data.n_dims != params.n_dims:
            raise InvalidInput(f"dataset has {data.n_dims} dims, kernel has {params.n_dims}")
        self.data = data
        self.params = params
        self.jitter = 0.0
        self._factor = None
        self._alpha = np.zeros(0)
        if len(data):
            K = gram(data.X, data.X, params)
            self._factor, self.jitter = _factorize(K, data.sigma, params.sigma0_2)
            self._alpha = cho_solve(self._factor, data.y, check_finite=False)

    def __len__(self) -> int:
        return len(self.data)

    def __repr__(self):
        return f"GPModel(n={len(self)}, gamma2={self.params.gamma2:.4g}, sigma0_2={self.params.sigma0_2:.4g})"

    @classmethod
    def empty(cls, params: KernelParams) -> "GPModel":
        return cls(Dataset.empty(params.n_dims), params)

    # ---- updates (new models) ----
    def with_observations(self, X, y, sigma) -> "GPModel":
        return GPModel(self.data.append(X, y, sigma), self.params)

    def with_params(self, params: KernelParams) -> "GPModel":
        return GPModel(self.data, params)

    def with_data(self, data: Dataset) -> "GPModel":
        return GPModel(data, self.params)

    # ---- queries ----
    def _points(self, Xs) -> np.ndarray:
        Xs = np.atleast_2d(np.asarray(Xs, dtype=float))
        if Xs.shape[1] != self.params.n_dims:
            raise InvalidInput(f"test points have {Xs.shape[1]} dims, model has {self.params.n_dims}")
        return Xs

    def mean(self, Xs) -> np.ndarray:
        Xs = self._points(Xs)
        if not len(self):
            return np.zeros(Xs.shape[0])
        return gram(self.data.X, Xs, self.params).T @ self._alpha

    def variance(self, Xs) -> np.ndarray:
        Xs = self._points(Xs)
        prior = np.full(Xs.shape[0], self.params.sigma0_2)
        if not len(self):
            return prior
        Kp = gram(self.data.X, Xs, self.params)
        reduction = np.sum(Kp * cho_solve(self._factor, Kp, check_finite=False), axis=0)
        return np.clip(prior - reduction, 0.0, self.params.sigma0_2)

    def posterior(self, Xs) -> tuple[np.ndarray, np.ndarray]:
        """Posterior mean (M,) and covariance (M, M) at the test points."""
        Xs = self._points(Xs)
        Kss = gram(Xs, Xs, self.params)
        if not len(self):
            return np.zeros(Xs.shape[0]), Kss
        Kp = gram(self.data.X, Xs, self.params)
        mu = Kp.T @ self._alpha
        S = Kss - Kp.T @ cho_solve(self._factor, Kp, check_finite=False)
        return mu, 0.5 * (S + S.T)


def posterior(model: GPModel, Xs) -> tuple[np.ndarray, np.ndarray]:
    return model.posterior(Xs)


# ---------------------------------------------------------------------------
# Confident region
# ---------------------------------------------------------------------------
def line_points(center, axis: int, angles) -> np.ndarray:
    center = np.asarray(center, dtype=float).ravel()
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    pts = np.repeat(center[None, :], angles.size, axis=0)
    pts[:, axis] = pts[:, axis] + angles
    return np.mod(pts, TWO_PI)


def core_grid(grid_size: int = CORE_GRID_SIZE) -> np.ndarray:
    return np.arange(grid_size) * (TWO_PI / grid_size)


def core_contains(model: GPModel, kappa2: float, x) -> bool:
    if not kappa2 > 0:
        raise InvalidInput(f"CoRe threshold must be positive, got {kappa2}")
    return bool(model.variance(x)[0] <= kappa2)


def subspace_in_core(model: GPModel, center, axis: int, kappa2: float, grid_size: int = CORE_GRID_SIZE) -> bool:
    """True iff the posterior variance is <= kappa2 on every grid angle of the line through center."""
    order = model.params.vd[axis]
    if grid_size < 2 * (1 + 2 * order):
        raise InvalidInput(f"grid of {grid_size} angles under-samples an order-{2 * order} variance curve")
    if not kappa2 > 0:
        raise InvalidInput(f"CoRe threshold must be positive, got {kappa2}")
    var = model.variance(line_points(center, axis, core_grid(grid_size)))
    return bool(np.all(var <= kappa2))


def line_variance_profile(model: GPModel, center, axis: int, shifts, noise, angles) -> np.ndarray:
    """Posterior variance at center + angles*e_d after observing center + shifts*e_d with the given noise."""
    shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
    noise = np.broadcast_to(np.asarray(noise, dtype=float), shifts.shape)
    pts = line_points(center, axis, shifts)
    augmented = model.with_observations(pts, np.zeros(shifts.size), noise)
    return augmented.variance(line_points(center, axis, angles))


# ---------------------------------------------------------------------------
# Line minimization of the posterior mean
# ---------------------------------------------------------------------------
def minimize_gp_on_line(model: GPModel, center, axis: int) -> tuple[np.ndarray, float]:
    """
    The posterior mean is an order-V_d trigonometric polynomial along any axis,
    so 1+2V_d equidistant evaluations determine it exactly.
    """
    if not len(model):
        raise InvalidInput("cannot minimize the mean of a GP without data")
    order = model.params.vd[axis]
    angles = np.arange(1 + 2 * order) * (TWO_PI / (1 + 2 * order))
    mu = model.mean(line_points(center, axis, angles))
    poly = fit_trig_1d(angles, mu, order=order)
    theta, value = minimize_trig_1d(poly)
    return line_points(center, axis, [theta])[0], float(value)


# ---------------------------------------------------------------------------
# Hyperparameter search (leave-one-out)
# ---------------------------------------------------------------------------
def gamma_grid(steps: int = GAMMA_GRID_STEPS, gamma_min: float = GAMMA_MIN, gamma_max: float = GAMMA_MAX) -> np.ndarray:
    """Log-spaced candidate gamma values (not squared)."""
    return np.geomspace(gamma_min, gamma_max, steps)


def loo_nlpd(K: np.ndarray, data: Dataset, sigma0_2: float) -> float:
    """Summed leave-one-out negative log predictive density, closed form from the factored system."""
    factor, _ = _factorize(K, data.sigma, sigma0_2)
    Kinv = cho_solve(factor, np.eye(len(data)), check_finite=False)
    diag = np.diag(Kinv)
    if np.any(diag <= 0):
        return math.inf
    alpha = Kinv @ data.y
    var = 1.0 / diag
    resid = alpha / diag
    return float(0.5 * np.sum(np.log(2.0 * math.pi * var) + resid ** 2 / var))


def loo_gamma_search(data: Dataset, params: KernelParams, grid: Optional[Sequence[float]] = None) -> float:
    """Returns the gamma^2 minimizing LOO NLPD; ties go to the larger gamma."""
    if len(data) < 3:
        return params.gamma2
    grid = gamma_grid() if grid is None else np.asarray(grid, dtype=float)
    S = cosine_sums(data.X, data.X, params.vd)
    best_g2, best = params.gamma2, math.inf
    for gamma in sorted(grid, reverse=True):
        candidate = params.with_gamma2(float(gamma) ** 2)
        try:
            score = loo_nlpd(gram_from_sums(S, candidate), data, params.sigma0_2)
        except NumericalFailure:
            continue
        if score < best:
            best, best_g2 = score, candidate.gamma2
    LOGGER.debug("LOO selected gamma^2=%.4g (nlpd %.6g, n=%d)", best_g2, best, len(data))
    return best_g2


# ---------------------------------------------------------------------------
# Training-set compression
# ---------------------------------------------------------------------------
PIVOT_MAX_NOISE = 1e6   # x sigma0^2; pivots noisier than this carry nothing and are left out


def pivot_observations(summary: GPModel, U) -> Optional[tuple[np.ndarray, float]]:
    """
    Pseudo-observations at U, with one shared noise variance, standing in for the
    data behind `summary`. A GP trained on the pivots alone reproduces the
    summary mean at U exactly, and its covariance there is never below the
    summary covariance: the shared noise comes from the smallest eigenvalue of
    the information the data added over the prior at U.
    Returns None when that information is negligible.
    """
    U = np.atleast_2d(U)
    params = summary.params
    m, S = summary.posterior(U)
    S = S + JITTER_START * params.sigma0_2 * np.eye(len(U))
    K = gram(U, U, params)
    try:
        S_inv = cho_solve(cho_factor(S, lower=True, check_finite=False), np.eye(len(U)), check_finite=False)
        K_factor = cho_factor(K, lower=True, check_finite=False)
    except LinAlgError as exc:
        raise NumericalFailure(f"pivot summary on {len(U)} points is not positive definite") from exc
    info = S_inv - cho_solve(K_factor, np.eye(len(U)), check_finite=False)
    lam = float(np.linalg.eigvalsh(0.5 * (info + info.T))[0])
    if not lam * PIVOT_MAX_NOISE * params.sigma0_2 > 1.0:
        return None
    noise = 1.0 / lam
    return m + noise * cho_solve(K_factor, m, check_finite=False), noise


def compress(data: Dataset, params: KernelParams, trigger: int = 120, keep: int = 100,
             line: Optional[tuple[Sequence[float], int]] = None) -> Dataset:
    """
    Once more than `trigger` points are stored, keep the most recent ones and
    fold the older ones into pivots built from a temporary GP on the dropped
    points (see pivot_observations).

    Without `line` a single pivot sits at the first retained location. With
    line=(center, axis) the pivots are the 1+2V_d equidistant points of that
    line, so the line about to be searched keeps what the dropped data knew
    about it. Either way the result has at most keep + 1 points.
    """
    if keep < 1 or trigger < keep:
        raise InvalidInput(f"compression needs 1 <= keep <= trigger, got keep={keep}, trigger={trigger}")
    n = len(data)
    if n <= trigger:
        return data
    if line is None:
        n_raw = keep
    else:
        center, axis = line
        order = params.vd[axis]
        n_raw = keep - 2 * order
        if n_raw < 1:
            raise InvalidInput(f"keep={keep} leaves no room for {1 + 2 * order} line pivots")
    dropped = data.subset(slice(0, n - n_raw))
    retained = data.subset(slice(n - n_raw, n))
    U = retained.X[:1] if line is None else line_points(center, axis, equidistant_shifts(order))
    pivots = pivot_observations(GPModel(dropped, params), U)
    if pivots is None:
        return data.subset(slice(n - keep, n))
    y, noise = pivots
    return Dataset(U, y, np.full(len(U), noise)).append(retained.X, retained.y, retained.sigma)
