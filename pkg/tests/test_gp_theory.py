# -*- coding: utf-8 -*-
"""Closed-form line posteriors checked against brute-force GP regression."""
from __future__ import annotations

import math

import numpy as np
import pytest

from errors import InvalidInput
from gp import (
    Dataset, GPModel, KernelParams, asymptotic_variance_ratio, equidistant_shifts, fit_trig_1d,
    line_points, regularized_dft, uniform_posterior_variance,
)
from gp.model import line_variance_profile


def _line_model(params, center, axis, order, noise, values=None):
    shifts = equidistant_shifts(order)
    values = np.zeros(shifts.size) if values is None else values
    pts = line_points(center, axis, shifts)
    return GPModel(Dataset(pts, values, np.full(shifts.size, noise)), params)


@pytest.mark.parametrize("order", [1, 2, 3])
@pytest.mark.parametrize("gamma2", [1.0, 4.0, 25.0])
@pytest.mark.parametrize("ratio", [0.01, 1.0, 100.0])
def test_uniform_variance_matches_brute_force(rng, order, gamma2, ratio):
    sigma0_2 = 1.7
    p = KernelParams(gamma2=gamma2, sigma0_2=sigma0_2, vd=(1, order))
    center = rng.uniform(0, 2 * np.pi, 2)
    noise = ratio * sigma0_2
    gp = _line_model(p, center, 1, order, noise)
    var = gp.variance(line_points(center, 1, rng.uniform(0, 2 * np.pi, 100)))
    expected = uniform_posterior_variance(noise, p, order)
    assert var.max() - var.min() < 1e-8 * sigma0_2
    assert np.allclose(var, expected, rtol=1e-8)


@pytest.mark.parametrize("order", [1, 2, 3])
@pytest.mark.parametrize("gamma2", [0.1, 1.0, 10.0])
def test_uniform_variance_below_noise(order, gamma2):
    p = KernelParams.uniform(gamma2, 1.0, 1)
    for sigma2 in (1e-4, 0.1, 1.0, 10.0):
        assert uniform_posterior_variance(sigma2, p, order) < sigma2


def test_uniform_variance_limits_and_example():
    p = KernelParams.uniform(1.0, 1.0, 1)
    assert uniform_posterior_variance(1.0, p, 1) == pytest.approx(0.5)
    assert uniform_posterior_variance(1e12, p, 1) == pytest.approx(1.0, rel=1e-6)
    assert uniform_posterior_variance(math.inf, p, 1) == 1.0
    with pytest.raises(InvalidInput):
        uniform_posterior_variance(0.0, p, 1)


@pytest.mark.parametrize("order", [1, 2, 3])
def test_small_noise_ratio_range(order):
    s = 1e-6
    lo = 2 * order / (1 + 2 * order)
    for gamma2 in (1e-6, 1.0, 1e6):
        ratio = uniform_posterior_variance(s, KernelParams.uniform(gamma2, 1.0, 1), order) / s
        assert lo - 1e-3 <= ratio <= 1.0 + 1e-3


@pytest.mark.parametrize("order", [1, 2, 3])
@pytest.mark.parametrize("gamma2, regime", [(1e-12, "gamma-small"), (1.0, "gamma-moderate"), (1e12, "gamma-large")])
def test_small_noise_limits(order, gamma2, regime):
    s = 1e-6
    ratio = uniform_posterior_variance(s, KernelParams.uniform(gamma2, 1.0, 1), order) / s
    assert ratio == pytest.approx(asymptotic_variance_ratio(order, regime), abs=1e-3)


def test_unknown_regime():
    with pytest.raises(InvalidInput):
        asymptotic_variance_ratio(1, "gamma-huge")


def test_non_equidistant_shifts_are_not_uniform():
    p = KernelParams.uniform(1.0, 1.0, 1)
    empty = GPModel.empty(p)
    center = np.array([0.8])
    angles = np.linspace(0, 2 * np.pi, 200, endpoint=False)
    noise = 0.1
    equi = line_variance_profile(empty, center, 0, equidistant_shifts(1), noise, angles)
    skew = line_variance_profile(empty, center, 0, [0.0, math.pi / 2, -math.pi / 2], noise, angles)
    spread_equi = equi.max() - equi.min()
    spread_skew = skew.max() - skew.min()
    assert spread_skew > 10 * spread_equi
    assert spread_skew > 1e-3
    assert skew.max() > uniform_posterior_variance(noise, p, 1)


@pytest.mark.parametrize("order", [1, 2, 3])
def test_mean_is_shrunk_dft(rng, order):
    s = 0.3
    p = KernelParams(gamma2=1.0, sigma0_2=1.0, vd=(order,))
    center = rng.uniform(0, 2 * np.pi, 1)
    values = rng.normal(size=1 + 2 * order)
    gp = _line_model(p, center, 0, order, s, values)
    shifts = equidistant_shifts(order)
    fitted = fit_trig_1d(shifts, gp.mean(line_points(center, 0, shifts)), order=order)

    closed = regularized_dft(values, order, s)
    assert np.allclose(fitted.coef, closed.coef, atol=1e-10)

    F = np.fft.fft(values)
    n = values.size
    expected = np.concatenate([[F[0].real / n],
                               2 * F[1:order + 1].real / n,
                               -2 * F[1:order + 1].imag / n]) / (1 + s)
    assert np.allclose(closed.coef, expected, atol=1e-12)


@pytest.mark.parametrize("gamma2", [0.3, 4.0, 25.0])
def test_mean_coefficients_for_general_gamma(rng, gamma2):
    order, s = 2, 0.05
    p = KernelParams(gamma2=gamma2, sigma0_2=2.0, vd=(order,))
    center = rng.uniform(0, 2 * np.pi, 1)
    values = rng.normal(size=1 + 2 * order)
    gp = _line_model(p, center, 0, order, s * p.sigma0_2, values)
    shifts = equidistant_shifts(order)
    fitted = fit_trig_1d(shifts, gp.mean(line_points(center, 0, shifts)), order=order)
    assert np.allclose(fitted.coef, regularized_dft(values, order, s, gamma2).coef, atol=1e-10)
