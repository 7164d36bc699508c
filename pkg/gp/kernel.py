# -*- coding: utf-8 -*-
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from errors import InvalidInput


@dataclass(frozen=True)
class KernelParams:
    gamma2: float
    sigma0_2: float
    vd: tuple[int, ...]

    def __post_init__(self):
        if not self.gamma2 > 0:
            raise InvalidInput(f"gamma^2 must be positive, got {self.gamma2}")
        if not self.sigma0_2 > 0:
            raise InvalidInput(f"prior variance must be positive, got {self.sigma0_2}")
        vd = tuple(int(v) for v in self.vd)
        if not vd or min(vd) < 1:
            raise InvalidInput("every axis needs an order V_d >= 1")
        object.__setattr__(self, "gamma2", float(self.gamma2))
        object.__setattr__(self, "sigma0_2", float(self.sigma0_2))
        object.__setattr__(self, "vd", vd)

    @property
    def n_dims(self) -> int:
        return len(self.vd)

    def with_gamma2(self, gamma2: float) -> "KernelParams":
        return replace(self, gamma2=gamma2)

    @classmethod
    def uniform(cls, gamma2: float, sigma0_2: float, n_dims: int, order: int = 1) -> "KernelParams":
        return cls(gamma2=gamma2, sigma0_2=sigma0_2, vd=(order,) * n_dims)


def _as_points(X, n_dims: int) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != n_dims:
        raise InvalidInput(f"points have {X.shape[1]} coordinates, kernel expects {n_dims}")
    return X


def cosine_sums(X1, X2, vd: Sequence[int]) -> np.ndarray:
    """S[n, m, d] = sum_{v=1}^{V_d} cos(v (X1[n, d] - X2[m, d]))."""
    diff = X1[:, None, :] - X2[None, :, :]
    vd = np.asarray(vd)
    out = np.zeros_like(diff)
    for v in range(1, int(vd.max()) + 1):
        active = vd >= v
        out[..., active] += np.cos(v * diff[..., active])
    return out


def gram_from_sums(S: np.ndarray, params: KernelParams) -> np.ndarray:
    vd = np.asarray(params.vd, dtype=float)
    g = params.gamma2
    factors = (g + 2.0 * S) / (g + 2.0 * vd)
    return params.sigma0_2 * np.prod(factors, axis=-1)


def gram(X1, X2, params: KernelParams) -> np.ndarray:
    X1 = _as_points(X1, params.n_dims)
    X2 = _as_points(X2, params.n_dims)
    return gram_from_sums(cosine_sums(X1, X2, params.vd), params)


def vqe_kernel(x, x_prime, params: KernelParams) -> float:
    return float(gram(x, x_prime, params)[0, 0])


def fourier_basis(theta, order: int, gamma: float = 1.0) -> np.ndarray:
    """(gamma, sqrt2 cos v theta ..., sqrt2 sin v theta ...) for v = 1..order, one row per angle."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    v = np.arange(1, order + 1)
    cols = [np.full((theta.size, 1), gamma),
            np.sqrt(2.0) * np.cos(np.outer(theta, v)),
            np.sqrt(2.0) * np.sin(np.outer(theta, v))]
    return np.hstack(cols)


def feature_map(X, params: KernelParams) -> np.ndarray:
    """Explicit features with gram(X, X') == feature_map(X) @ feature_map(X').T."""
    X = _as_points(X, params.n_dims)
    gamma = np.sqrt(params.gamma2)
    out = np.full((X.shape[0], 1), np.sqrt(params.sigma0_2))
    for d, order in enumerate(params.vd):
        psi = fourier_basis(X[:, d], order, gamma) / np.sqrt(params.gamma2 + 2 * order)
        out = np.einsum("ni,nj->nij", out, psi).reshape(X.shape[0], -1)
    return out
