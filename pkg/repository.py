# -*- coding: utf-8 -*-
from __future__ import annotations
import json
from typing import Iterable, Optional

from sqlalchemy.orm import Session
from sqlalchemy import select, func

from models import Experiment, Trial, TraceStep
from optim.loops import OptimizerTrace, TraceRow

# ---------- row conversion helpers ----------
_STEP_FIELDS = ("step", "axis", "shots_step", "cum_shots", "kappa", "y_hat", "delta_energy", "delta_fidelity")


def _trial_from_trace(trace: OptimizerTrace) -> Trial:
    final = trace.rows[-1] if trace.rows else None
    trial = Trial(
        seed=trace.seed,
        variant=trace.variant,
        eta2=float(trace.eta2),
        sigma0_2=None if trace.sigma0_2 is None else float(trace.sigma0_2),
        e_ground=float(trace.e_ground),
        x0_json=json.dumps(list(trace.x0)),
        x_final_json=json.dumps(list(trace.x_final)),
        n_steps=len(trace.rows),
        final_delta_energy=final.delta_energy if final else None,
        final_delta_fidelity=final.delta_fidelity if final else None,
    )
    trial.steps = [TraceStep(**{f: getattr(r, f) for f in _STEP_FIELDS}) for r in trace.rows]
    return trial


def _trace_from_trial(trial: Trial) -> OptimizerTrace:
    rows = tuple(
        TraceRow(seed=trial.seed, **{f: getattr(s, f) for f in _STEP_FIELDS})
        for s in trial.steps
    )
    return OptimizerTrace(
        seed=trial.seed,
        variant=trial.variant,
        x0=tuple(json.loads(trial.x0_json)),
        eta2=trial.eta2,
        sigma0_2=trial.sigma0_2,
        e_ground=trial.e_ground,
        rows=rows,
        x_final=tuple(json.loads(trial.x_final_json)),
    )
# -------------------------------------


class Repo:
    def __init__(self, session: Session):
        self.s = session

    # ---------------- Experiments ----------------
    def save_experiment(self, config_json: str, traces: Iterable[OptimizerTrace],
                        label: str = "", code_version: str = "") -> Experiment:
        exp = Experiment(label=label, config_json=config_json, code_version=code_version)
        exp.trials = [_trial_from_trace(t) for t in sorted(traces, key=lambda t: t.seed)]
        self.s.add(exp)
        self.s.commit()
        self.s.refresh(exp)
        return exp

    def get_experiment(self, experiment_id: int) -> Experiment:
        exp = self.s.get(Experiment, experiment_id)
        if not exp:
            raise ValueError("Experiment not found")
        return exp

    def list_experiments(self, label: Optional[str] = None) -> list[Experiment]:
        q = select(Experiment)
        if label is not None:
            q = q.where(Experiment.label == label)
        return list(self.s.scalars(q.order_by(Experiment.id)))

    def delete_experiment(self, experiment_id: int):
        exp = self.s.get(Experiment, experiment_id)
        if not exp:
            return False
        self.s.delete(exp)
        self.s.commit()
        return True

    # ---------------- Trials ----------------
    def list_trials(self, experiment_id: int) -> list[Trial]:
        return list(self.s.scalars(
            select(Trial).where(Trial.experiment_id == experiment_id).order_by(Trial.seed)
        ))

    def count_steps(self, experiment_id: int) -> int:
        q = (select(func.count(TraceStep.id))
             .join(Trial, TraceStep.trial_id == Trial.id)
             .where(Trial.experiment_id == experiment_id))
        return int(self.s.scalar(q) or 0)

    def traces_for_experiment(self, experiment_id: int) -> list[OptimizerTrace]:
        self.get_experiment(experiment_id)
        return [_trace_from_trial(t) for t in self.list_trials(experiment_id)]

    def final_values(self, experiment_id: int) -> dict[int, tuple[float, float]]:
        """seed -> (delta_energy, delta_fidelity) of the last recorded step."""
        return {
            t.seed: (t.final_delta_energy, t.final_delta_fidelity)
            for t in self.list_trials(experiment_id)
            if t.n_steps
        }
