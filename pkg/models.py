# -*- coding: utf-8 -*-
from __future__ import annotations
from datetime import datetime

from sqlalchemy import (
    Column, Integer, String, Text, DateTime, Float, ForeignKey, UniqueConstraint
)
from sqlalchemy.orm import declarative_base, relationship

Base = declarative_base()

# -----------------------------
# Result store
# -----------------------------

class Experiment(Base):
    __tablename__ = "experiments"
    id = Column(Integer, primary_key=True)
    label = Column(String(200), default="")
    config_json = Column(Text, nullable=False)
    code_version = Column(String(32), default="")
    created_at = Column(DateTime, default=datetime.utcnow)

    trials = relationship("Trial", back_populates="experiment", cascade="all, delete-orphan",
                          order_by="Trial.seed")

    def __repr__(self):
        return f"Experiment(id={self.id}, label={self.label})"


class Trial(Base):
    __tablename__ = "trials"
    id = Column(Integer, primary_key=True)
    experiment_id = Column(Integer, ForeignKey("experiments.id", ondelete="CASCADE"), nullable=False)
    seed = Column(Integer, nullable=False)
    variant = Column(String(16), nullable=False)    # "center", "bound", "nft"

    eta2 = Column(Float, nullable=False)
    sigma0_2 = Column(Float, nullable=True)         # NFT has no GP
    e_ground = Column(Float, nullable=False)
    x0_json = Column(Text, nullable=False)
    x_final_json = Column(Text, nullable=False)

    n_steps = Column(Integer, default=0)
    final_delta_energy = Column(Float, nullable=True)
    final_delta_fidelity = Column(Float, nullable=True)

    experiment = relationship("Experiment", back_populates="trials")
    steps = relationship("TraceStep", back_populates="trial", cascade="all, delete-orphan",
                         order_by="TraceStep.step")

    __table_args__ = (UniqueConstraint("experiment_id", "seed", name="uq_experiment_seed"),)

    def __repr__(self):
        return f"Trial(id={self.id}, seed={self.seed}, variant={self.variant}, steps={self.n_steps})"


class TraceStep(Base):
    __tablename__ = "trace_steps"
    id = Column(Integer, primary_key=True)
    trial_id = Column(Integer, ForeignKey("trials.id", ondelete="CASCADE"), nullable=False)
    step = Column(Integer, nullable=False)
    axis = Column(Integer, nullable=False)
    shots_step = Column(Integer, nullable=False)
    cum_shots = Column(Integer, nullable=False)
    kappa = Column(Float, nullable=False)
    y_hat = Column(Float, nullable=False)
    delta_energy = Column(Float, nullable=False)
    delta_fidelity = Column(Float, nullable=False)

    trial = relationship("Trial", back_populates="steps")

    __table_args__ = (UniqueConstraint("trial_id", "step", name="uq_trial_step"),)
