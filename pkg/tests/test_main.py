# -*- coding: utf-8 -*-
from __future__ import annotations

import argparse
import json

import pytest

import config
from config import DB_URL_ENV, parse_config
from main import _count, _seeds, main
from trace_export import load_traces_csv, load_traces_json

TINY = ["--n-qbits", "2", "--n-layers", "0", "--n-iter", "3*10**4", "--max-steps", "3", "-q"]


@pytest.fixture(autouse=True)
def _no_env_db(monkeypatch):
    monkeypatch.delenv(DB_URL_ENV, raising=False)


def test_count_parser():
    assert _count("3*10**6") == 3_000_000
    assert _count("10**6") == 1_000_000
    assert _count("2_500") == 2500
    with pytest.raises(argparse.ArgumentTypeError):
        _count("1e6")


def test_seed_parser():
    assert _seeds("0-3") == (0, 1, 2, 3)
    assert _seeds("5,1,2-3") == (5, 1, 2, 3)
    with pytest.raises(argparse.ArgumentTypeError):
        _seeds("a-b")


def test_dump_config(capsys):
    assert main(["--dump-config", "--n-qbits", "3", "--readout-strategy", "bound", "--seeds", "0-4"]) == 0
    cfg = parse_config(capsys.readouterr().out)
    assert cfg.circuit.n_qubits == 3
    assert cfg.variant == "bound"
    assert cfg.seeds == (0, 1, 2, 3, 4)


def test_config_file_then_flags(tmp_path, capsys):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"label": "from-file", "budget": 1234, "circuit": {"n_layers": 1}}),
                    encoding="utf-8")
    assert main(["run", "--config", str(path), "--n-iter", "999", "--dump-config"]) == 0
    cfg = parse_config(capsys.readouterr().out)
    assert cfg.label == "from-file"
    assert cfg.budget == 999
    assert cfg.circuit.n_layers == 1


def test_defaults_file_is_the_base(tmp_path, monkeypatch, capsys):
    defaults = tmp_path / "defaults.json"
    defaults.write_text(json.dumps({"label": "shipped", "optimizer": {"nft_shots": 2048}}), encoding="utf-8")
    monkeypatch.setattr(config, "DEFAULT_CONFIG_PATH", str(defaults))
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"optimizer": {"recal_interval": 3}}), encoding="utf-8")
    assert main(["run", "--config", str(path), "--n-qbits", "3", "--dump-config"]) == 0
    cfg = parse_config(capsys.readouterr().out)
    assert cfg.label == "shipped"
    assert cfg.optimizer.nft_shots == 2048
    assert cfg.optimizer.recal_interval == 3
    assert cfg.circuit.n_qubits == 3


def test_pbc_is_rejected(capsys):
    assert main(["run", "--pbc", "True"]) == 1
    assert "periodic" in capsys.readouterr().err


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as e:
        main(["--no-such-flag"])
    assert e.value.code == 2


def test_run_writes_all_outputs(tmp_path):
    csv_path = tmp_path / "t.csv"
    json_path = tmp_path / "t.json"
    db_url = f"sqlite:///{tmp_path / 'runs.db'}"
    rc = main(["run", *TINY, "--seeds", "0-1", "--out-csv", str(csv_path), "--out-json", str(json_path),
               "--db-url", db_url])
    assert rc == 0
    assert [t.seed for t in load_traces_csv(str(csv_path))] == [0, 1]
    manifest, traces = load_traces_json(str(json_path))
    assert manifest["seeds"] == [0, 1]
    assert len(traces) == 2
    assert (tmp_path / "runs.db").exists()


def test_identical_invocations_give_identical_csv(tmp_path):
    outs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        assert main(["run", *TINY, "--seeds", "0-2", "--out-csv", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_aggregate_and_compare(tmp_path, capsys):
    center = tmp_path / "center.csv"
    nft = tmp_path / "nft.csv"
    assert main(["run", *TINY, "--seeds", "0-5", "--out-csv", str(center)]) == 0
    assert main(["run", *TINY, "--seeds", "0-5", "--readout-strategy", "nft", "--out-csv", str(nft)]) == 0

    curves = tmp_path / "curves.csv"
    assert main(["aggregate", str(center), "--out", str(curves), "--points", "5", "-q"]) == 0
    assert len(curves.read_text(encoding="utf-8").splitlines()) == 6

    capsys.readouterr()
    assert main(["compare", str(center), str(nft), "-q"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("pairs=6 ")
    p = float(out.rsplit("p=", 1)[1])
    assert 0.0 < p <= 1.0


def test_compare_needs_six_pairs(tmp_path):
    path = tmp_path / "few.csv"
    assert main(["run", *TINY, "--seeds", "0-1", "--out-csv", str(path)]) == 0
    assert main(["compare", str(path), str(path), "-q"]) == 1


def test_missing_trace_file(tmp_path):
    assert main(["aggregate", str(tmp_path / "none.csv"), "--out", str(tmp_path / "c.csv"), "-q"]) == 1
