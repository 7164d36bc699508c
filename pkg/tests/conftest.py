# -*- coding: utf-8 -*-
from __future__ import annotations

import numpy as np
import pytest

from optim.loops import OptimizerTrace, TraceRow
from optim.problem import VQEProblem
from sim import build_efficient_su2, ising_critical


class ExactChannel:
    """Noise-free energies that still report eta2/n as their variance."""

    def __init__(self, problem: VQEProblem, eta2: float = 1e-6):
        self.problem = problem
        self.eta2 = eta2
        self.shots_used = 0
        self.n_calls = 0

    def __call__(self, x, n_shots: int) -> tuple[float, float]:
        self.shots_used += int(n_shots)
        self.n_calls += 1
        return self.problem.energy(x), self.eta2 / n_shots


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def ising2():
    return ising_critical(2)


@pytest.fixture(scope="session")
def tiny_problem():
    """Q=2, L=1: D=8 parameters, cheap enough for multi-step runs."""
    return VQEProblem.build(build_efficient_su2(2, 1), ising_critical(2))


@pytest.fixture(scope="session")
def small_problem():
    """Q=3, L=1: D=12 parameters."""
    return VQEProblem.build(build_efficient_su2(3, 1), ising_critical(3))


@pytest.fixture
def exact_channel():
    return ExactChannel


def _make_trace(seed, points, variant="center"):
    """points: (cum_shots, delta_energy, delta_fidelity) per step."""
    rows = tuple(
        TraceRow(seed=seed, step=i + 1, axis=i % 4, shots_step=0, cum_shots=c, kappa=0.1,
                 y_hat=0.0, delta_energy=e, delta_fidelity=f)
        for i, (c, e, f) in enumerate(points)
    )
    return OptimizerTrace(seed=seed, variant=variant, x0=(0.0,), eta2=1.0, sigma0_2=1.0,
                          e_ground=-1.0, rows=rows, x_final=(0.0,))


@pytest.fixture
def make_trace():
    return _make_trace
