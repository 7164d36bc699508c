# -*- coding: utf-8 -*-
"""
Closed forms for a GP with the VQE kernel trained only on 1+2V equidistant
points of a single line with equal noise. Used as oracles and by the
SubsCoRe-Bound allocation.
"""
from __future__ import annotations

import math

import numpy as np

from errors import InvalidInput
from gp.kernel import KernelParams
from gp.trig import TrigPoly1D

TWO_PI = 2.0 * math.pi

REGIMES = ("gamma-small", "gamma-moderate", "gamma-large")


def equidistant_shifts(order: int) -> np.ndarray:
    if order < 1:
        raise InvalidInput(f"order must be >= 1, got {order}")
    n = 1 + 2 * order
    return np.arange(n) * (TWO_PI / n)


def uniform_posterior_variance(sigma2: float, params: KernelParams, order: int) -> float:
    """
    Posterior variance anywhere on the line. With s = sigma2/sigma0^2,
    A = gamma^2 + 2V and B = 1 + 2V:

        var = sigma2 * (A^2 s + B^2 gamma^2) / ((A s + B) (A s + B gamma^2))
    """
    if not sigma2 > 0:
        raise InvalidInput(f"noise variance must be positive, got {sigma2}")
    if order < 1:
        raise InvalidInput(f"order must be >= 1, got {order}")
    if math.isinf(sigma2):
        return params.sigma0_2
    g2 = params.gamma2
    s = sigma2 / params.sigma0_2
    A = g2 + 2 * order
    B = 1 + 2 * order
    # split form keeps precision at extreme gamma^2
    return sigma2 * (g2 / (A * s + B * g2) + 2 * order / (A * s + B))


def asymptotic_variance_ratio(order: int, regime: str) -> float:
    """Limit of variance / sigma2 as sigma2/sigma0^2 -> 0."""
    if regime == "gamma-moderate":
        return 1.0
    if regime == "gamma-small":
        return 2 * order / (1 + 2 * order)
    if regime == "gamma-large":
        return 1 / (1 + 2 * order)
    raise InvalidInput(f"regime must be one of {REGIMES}, got {regime!r}")


def regularized_dft(values, order: int, noise_ratio: float, gamma2: float = 1.0) -> TrigPoly1D:
    """
    Line posterior-mean coefficients for observations at the equidistant shifts.
    At gamma2 = 1 these are the DFT coefficients shrunk by 1/(1 + noise_ratio).
    """
    values = np.asarray(values, dtype=float).ravel()
    n = 1 + 2 * order
    if values.size != n:
        raise InvalidInput(f"need {n} equidistant values for order {order}, got {values.size}")
    if noise_ratio < 0 or not gamma2 > 0:
        raise InvalidInput("noise_ratio must be >= 0 and gamma2 > 0")
    A = gamma2 + 2 * order
    alpha = equidistant_shifts(order)
    v = np.arange(1, order + 1)
    c0 = gamma2 * values.sum() / (A * noise_ratio + n * gamma2)
    cos = 2.0 * (np.cos(np.outer(v, alpha)) @ values) / (A * noise_ratio + n)
    sin = 2.0 * (np.sin(np.outer(v, alpha)) @ values) / (A * noise_ratio + n)
    return TrigPoly1D(order=order, coef=np.concatenate([[c0], cos, sin]))
