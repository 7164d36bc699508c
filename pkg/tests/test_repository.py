# -*- coding: utf-8 -*-
from __future__ import annotations

import pytest
from sqlalchemy import func, select

from db import ensure_schema, init_engine_and_session
from models import TraceStep, Trial
from repository import Repo


@pytest.fixture
def session(tmp_path):
    engine, SessionLocal = init_engine_and_session(f"sqlite:///{tmp_path / 'store' / 'runs.db'}")
    ensure_schema(engine)
    with SessionLocal() as s:
        yield s
    engine.dispose()


@pytest.fixture
def traces(make_trace):
    return [
        make_trace(1, [(10, 0.5, 0.2), (20, 0.25, 0.1)]),
        make_trace(0, [(12, 0.9, 0.3)]),
    ]


def test_save_and_reload(session, traces):
    repo = Repo(session)
    exp = repo.save_experiment('{"label": "x"}', traces, label="smoke", code_version="0.1.0")
    assert exp.id is not None
    assert [t.seed for t in repo.list_trials(exp.id)] == [0, 1]
    assert repo.count_steps(exp.id) == 3
    back = repo.traces_for_experiment(exp.id)
    assert back == sorted(traces, key=lambda t: t.seed)


def test_final_values(session, traces):
    repo = Repo(session)
    exp = repo.save_experiment("{}", traces)
    assert repo.final_values(exp.id) == {0: (0.9, 0.3), 1: (0.25, 0.1)}


def test_list_by_label(session, traces):
    repo = Repo(session)
    repo.save_experiment("{}", traces, label="a")
    repo.save_experiment("{}", traces, label="b")
    assert [e.label for e in repo.list_experiments()] == ["a", "b"]
    assert [e.label for e in repo.list_experiments("b")] == ["b"]


def test_delete_cascades(session, traces):
    repo = Repo(session)
    exp = repo.save_experiment("{}", traces)
    assert repo.delete_experiment(exp.id)
    assert session.scalar(select(func.count(Trial.id))) == 0
    assert session.scalar(select(func.count(TraceStep.id))) == 0
    assert not repo.delete_experiment(exp.id)


def test_missing_experiment(session):
    with pytest.raises(ValueError, match="Experiment not found"):
        Repo(session).get_experiment(42)
