# -*- coding: utf-8 -*-
"""
Seeded multi-trial execution and the statistics over finished traces.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from config import RunConfig, config_to_dict
from errors import InvalidInput
from optim.loops import OptimizerState, OptimizerTrace, run
from optim.problem import VQEProblem
from sim.channel import NoiseModel, ObservationChannel
from sim.circuit import build_efficient_su2
from sim.pauli import build_heisenberg, estimate_single_shot_variance
from stats import wilcoxon_signed_rank

LOGGER = logging.getLogger(__name__)

CODE_VERSION = "0.1.0"
ETA2_FLOOR = 1e-8       # relative to the squared coefficient 1-norm


# ---------------- Trials ----------------
def build_problem(cfg: RunConfig) -> VQEProblem:
    c = cfg.circuit
    circuit = build_efficient_su2(c.n_qubits, c.n_layers)
    H = build_heisenberg(c.n_qubits, cfg.hamiltonian.J, cfg.hamiltonian.h, pbc=c.pbc)
    return VQEProblem.build(circuit, H)


def single_shot_variance(problem: VQEProblem, x0, override: Optional[float] = None) -> float:
    """eta2 is fixed for the whole run: the override, else the exact value at x0 (clamped away from 0)."""
    if override is not None:
        return float(override)
    eta2 = estimate_single_shot_variance(problem.hamiltonian, problem.state(x0))
    floor = ETA2_FLOOR * max(problem.hamiltonian.coefficient_norm, 1.0) ** 2
    if eta2 < floor:
        LOGGER.warning("single-shot variance %.3e at x0 is below %.3e; clamping", eta2, floor)
        eta2 = floor
    return float(eta2)


def run_trial(cfg: RunConfig, seed: int, problem: Optional[VQEProblem] = None,
              callback: Optional[Callable[[OptimizerState], None]] = None) -> OptimizerTrace:
    problem = problem or build_problem(cfg)
    x0 = problem.initial_point(seed)
    eta2 = single_shot_variance(problem, x0, cfg.noise.eta2)
    channel = ObservationChannel(
        circuit=problem.circuit,
        hamiltonian=problem.hamiltonian,
        noise=NoiseModel(kind=cfg.noise.kind, eta2=eta2),
        rng=np.random.default_rng([seed, 1]),
    )
    trace = run(cfg.optimizer_config(), channel, cfg.budget, problem, seed, max_steps=cfg.max_steps,
                callback=callback)
    LOGGER.info("trial seed=%d variant=%s: %d steps, %d shots, final dE=%.4e dF=%.4e",
                seed, cfg.variant, len(trace), trace.final.cum_shots,
                trace.final.delta_energy, trace.final.delta_fidelity)
    return trace


def run_experiment(cfg: RunConfig) -> list[OptimizerTrace]:
    """One trace per seed, sorted by seed. Trials run in a process pool when workers > 1."""
    cfg.validate()
    LOGGER.info("experiment %r: variant=%s Q=%d L=%d seeds=%d budget=%d workers=%d",
                cfg.label, cfg.variant, cfg.circuit.n_qubits, cfg.circuit.n_layers,
                len(cfg.seeds), cfg.budget, cfg.workers)
    if cfg.workers > 1 and len(cfg.seeds) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            traces = list(pool.map(partial(run_trial, cfg), cfg.seeds))
    else:
        problem = build_problem(cfg)
        traces = [run_trial(cfg, s, problem) for s in cfg.seeds]
    traces.sort(key=lambda t: t.seed)
    LOGGER.info("experiment %r finished: %d traces", cfg.label, len(traces))
    return traces


def manifest(cfg: RunConfig) -> dict:
    return {"code_version": CODE_VERSION, "seeds": list(cfg.seeds), "config": config_to_dict(cfg)}


# ---------------- Aggregation ----------------
@dataclass(frozen=True)
class QuantileCurves:
    shot_grid: np.ndarray       # (G,)
    quantiles: tuple[float, ...]
    energy: np.ndarray          # (len(quantiles), G), nan where no trace has started
    fidelity: np.ndarray
    n_traces: np.ndarray        # (G,) traces contributing at each checkpoint


def best_so_far(trace, metric: str = "delta_energy") -> tuple[np.ndarray, np.ndarray]:
    """(cum_shots, running minimum of metric) per row."""
    shots = np.array([r.cum_shots for r in trace.rows], dtype=float)
    values = np.array([getattr(r, metric) for r in trace.rows], dtype=float)
    return shots, np.minimum.accumulate(values)


def _at_checkpoints(trace, metric: str, grid: np.ndarray) -> np.ndarray:
    shots, best = best_so_far(trace, metric)
    idx = np.searchsorted(shots, grid, side="right") - 1
    out = np.full(grid.size, np.inf)
    ok = idx >= 0
    out[ok] = best[idx[ok]]
    return out


def _quantiles(values: np.ndarray, quantiles: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Column-wise quantiles over finite entries; +inf entries are not-yet-started traces."""
    out = np.full((len(quantiles), values.shape[1]), np.nan)
    counts = np.isfinite(values).sum(axis=0)
    for g in range(values.shape[1]):
        col = values[:, g]
        col = col[np.isfinite(col)]
        if col.size:
            out[:, g] = np.quantile(col, quantiles)
    return out, counts


def default_shot_grid(traces: Sequence, n_points: int = 50) -> np.ndarray:
    top = max(t.rows[-1].cum_shots for t in traces if t.rows)
    return np.unique(np.linspace(0, top, n_points + 1)[1:].round().astype(np.int64))


def aggregate(traces: Sequence, shot_grid=None, quantiles: Sequence[float] = (0.25, 0.5, 0.75)) -> QuantileCurves:
    traces = list(traces)
    if not traces or not any(t.rows for t in traces):
        raise InvalidInput("cannot aggregate an empty trace set")
    grid = default_shot_grid(traces) if shot_grid is None else np.asarray(shot_grid, dtype=float)
    energy = np.vstack([_at_checkpoints(t, "delta_energy", grid) for t in traces])
    fidelity = np.vstack([_at_checkpoints(t, "delta_fidelity", grid) for t in traces])
    q_energy, counts = _quantiles(energy, quantiles)
    q_fidelity, _ = _quantiles(fidelity, quantiles)
    return QuantileCurves(shot_grid=grid, quantiles=tuple(quantiles), energy=q_energy,
                          fidelity=q_fidelity, n_traces=counts)


def shots_to_reach(trace, target: float, metric: str = "delta_energy") -> float:
    """First cumulative shot count whose best-so-far metric is <= target (inf if never)."""
    for row in trace.rows:
        if getattr(row, metric) <= target:
            return float(row.cum_shots)
    return math.inf


def final_values(traces: Iterable) -> dict[int, tuple[float, float]]:
    """seed -> (delta_energy, delta_fidelity) of the last step."""
    out = {}
    for t in traces:
        if not t.rows:
            continue
        out[t.seed] = (t.rows[-1].delta_energy, t.rows[-1].delta_fidelity)
    return out


def compare_finals(traces_a: Iterable, traces_b: Iterable, alternative: str = "less",
                   metric: str = "delta_energy") -> tuple[float, int]:
    """Paired Wilcoxon test over seeds present in both sets; returns (p, n_pairs)."""
    col = 0 if metric == "delta_energy" else 1
    fa, fb = final_values(traces_a), final_values(traces_b)
    seeds = sorted(set(fa) & set(fb))
    a = [fa[s][col] for s in seeds]
    b = [fb[s][col] for s in seeds]
    return wilcoxon_signed_rank(a, b, alternative), len(seeds)

