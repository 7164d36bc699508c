# -----------------------------
# File: main.py
# -----------------------------
from __future__ import annotations

import argparse
import logging
import re
import statistics
import sys
from dataclasses import replace
from typing import Optional, Sequence

from sqlalchemy.exc import SQLAlchemyError

from config import (
    RunConfig, DEFAULT_CONFIG_PATH, default_config, load_config, merge_section, render_config,
)
from db import ensure_schema, init_engine_and_session
from errors import ExportError, SubscoreError
from harness import CODE_VERSION, aggregate, compare_finals, default_shot_grid, manifest, run_experiment
from repository import Repo
from trace_export import export_csv, export_curves_csv, export_json, load_traces_csv

LOGGER = logging.getLogger("subscore")

APP_NAME = "subscore"
COMMANDS = ("run", "aggregate", "compare")
_COUNT_RE = re.compile(r"^\d+(\*\*\d+)?(\*\d+(\*\*\d+)?)*$")


# ---------- argument helpers ----------

def _count(text: str) -> int:
    """Integers written like 3000000, 3*10**6 or 10**6."""
    s = text.replace(" ", "").replace("_", "")
    if not _COUNT_RE.match(s):
        raise argparse.ArgumentTypeError(f"not a shot count: {text!r}")
    total = 1
    for factor in re.split(r"(?<!\*)\*(?!\*)", s):
        base, _, exp = factor.partition("**")
        total *= int(base) ** int(exp or 1)
    return total


def _seeds(text: str) -> tuple[int, ...]:
    """'0-19', '3' or '0,2,5'."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = part.split("-", 1)
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed list: {text!r}")
    return tuple(out)


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected True/False, got {text!r}")


def _quantiles(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(q) for q in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad quantile list: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    common.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")

    p = argparse.ArgumentParser(prog=APP_NAME, description="Adaptive shot budgeting for VQE (SubsCoRe).")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", parents=[common], help="run seeded trials and export traces")
    r.add_argument("--config", help=f"JSON run config (defaults: {DEFAULT_CONFIG_PATH})")
    r.add_argument("--label")
    r.add_argument("--n-qbits", type=int, dest="n_qubits")
    r.add_argument("--n-layers", type=int)
    r.add_argument("--circuit", choices=("esu2",))
    r.add_argument("--pbc", type=_bool)
    r.add_argument("--kernel", choices=("vqe",))
    r.add_argument("--J", type=float, nargs=3, metavar=("JX", "JY", "JZ"))
    r.add_argument("--h", type=float, nargs=3, metavar=("HX", "HY", "HZ"))
    r.add_argument("--readout-strategy", choices=("center", "bound", "nft"), dest="variant")
    r.add_argument("--corethresh", type=int, dest="kappa0_shots", help="initial CoRe threshold in shots")
    r.add_argument("--corethresh-width", type=int, dest="t_ave", help="window of recent best values")
    r.add_argument("--coremin-scale", type=int, dest="c0_shots", help="threshold floor in shots")
    r.add_argument("--corethresh-scale", type=float, dest="c1", help="slope multiplier")
    r.add_argument("--n-iter", type=_count, dest="budget", help="max cumulative shots per operator group")
    r.add_argument("--max-steps", type=int)
    r.add_argument("--seeds", type=_seeds)
    r.add_argument("--noise", choices=("gaussian-exact", "sampled"))
    r.add_argument("--eta2", type=float, help="single-shot variance (default: exact value at x0)")
    r.add_argument("--nft-shots", type=int)
    r.add_argument("--recal-interval", type=int)
    r.add_argument("--max-gamma", type=float, dest="gamma_max")
    r.add_argument("--gamma-steps", type=int, dest="steps")
    r.add_argument("--hyperopt-warmup", type=int, dest="warmup")
    r.add_argument("--hyperopt-interval", type=int, dest="interval")
    r.add_argument("--no-hyperopt", action="store_true")
    r.add_argument("--workers", type=int)
    r.add_argument("--quantiles", type=_quantiles)
    r.add_argument("--out-csv", dest="csv")
    r.add_argument("--out-json", dest="json")
    r.add_argument("--db-url")
    r.add_argument("--dump-config", action="store_true", help="print the resolved config and exit")

    a = sub.add_parser("aggregate", parents=[common], help="quantile curves from a trace CSV")
    a.add_argument("traces", help="trace CSV written by `run`")
    a.add_argument("--out", required=True, help="curves CSV")
    a.add_argument("--quantiles", type=_quantiles, default=(0.25, 0.5, 0.75))
    a.add_argument("--points", type=int, default=50, help="checkpoints when --grid is not given")
    a.add_argument("--grid", type=lambda s: [_count(x) for x in s.split(",")])

    c = sub.add_parser("compare", parents=[common], help="paired Wilcoxon test between two trace CSVs")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--alternative", choices=("two-sided", "less", "greater"), default="less")
    c.add_argument("--metric", choices=("delta_energy", "delta_fidelity"), default="delta_energy")
    return p


# ---------- config resolution ----------

def resolve_config(args: argparse.Namespace) -> RunConfig:
    """defaults file -> --config file -> explicit flags."""
    cfg = default_config()
    if args.config:
        cfg = load_config(args.config, base=cfg)
    top = {k: getattr(args, k) for k in ("label", "variant", "budget", "max_steps", "seeds", "workers")}
    top = {k: v for k, v in top.items() if v is not None}
    if top:
        cfg = replace(cfg, **top)
    cfg = merge_section(cfg, "circuit", n_qubits=args.n_qubits, n_layers=args.n_layers,
                        circuit=args.circuit, pbc=args.pbc, kernel=args.kernel)
    cfg = merge_section(cfg, "hamiltonian", J=tuple(args.J) if args.J else None,
                        h=tuple(args.h) if args.h else None)
    cfg = merge_section(cfg, "noise", kind=args.noise, eta2=args.eta2)
    cfg = merge_section(cfg, "schedule", kappa0_shots=args.kappa0_shots, c0_shots=args.c0_shots,
                        c1=args.c1, t_ave=args.t_ave)
    cfg = merge_section(cfg, "hyperopt", gamma_max=args.gamma_max, steps=args.steps,
                        warmup=args.warmup, interval=args.interval,
                        enabled=False if args.no_hyperopt else None)
    cfg = merge_section(cfg, "optimizer", nft_shots=args.nft_shots, recal_interval=args.recal_interval)
    cfg = merge_section(cfg, "output", csv=args.csv, json=args.json, db_url=args.db_url,
                        quantiles=args.quantiles)
    return cfg.validate()


# ---------- commands ----------

def cmd_run(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    if args.dump_config:
        print(render_config(cfg))
        return 0

    traces = run_experiment(cfg)
    if cfg.output.csv:
        n = export_csv(traces, cfg.output.csv)
        LOGGER.info("wrote %d rows to %s", n, cfg.output.csv)
    if cfg.output.json:
        export_json(traces, cfg.output.json, manifest(cfg))
        LOGGER.info("wrote %s", cfg.output.json)
    db_url = cfg.db_url()
    if db_url:
        _persist(cfg, traces, db_url)

    finals = [t.final.delta_energy for t in traces if t.rows]
    LOGGER.info("median final delta energy over %d seeds: %.6e", len(finals), statistics.median(finals))
    return 0


def _persist(cfg: RunConfig, traces, db_url: str) -> None:
    try:
        engine, SessionLocal = init_engine_and_session(db_url)
        ensure_schema(engine)
        with SessionLocal() as session:
            exp = Repo(session).save_experiment(render_config(cfg), traces, label=cfg.label,
                                                code_version=CODE_VERSION)
            exp_id = exp.id
    except SQLAlchemyError as e:
        raise ExportError(f"result store {db_url}: {e}") from e
    LOGGER.info("stored experiment id=%d (%d trials) in %s", exp_id, len(traces), db_url)


def cmd_aggregate(args: argparse.Namespace) -> int:
    traces = load_traces_csv(args.traces)
    grid = args.grid if args.grid else (default_shot_grid(traces, args.points) if traces else None)
    curves = aggregate(traces, grid, args.quantiles)
    export_curves_csv(curves, args.out)
    LOGGER.info("wrote %d checkpoints over %d traces to %s", len(curves.shot_grid), len(traces), args.out)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    p, n = compare_finals(load_traces_csv(args.a), load_traces_csv(args.b), args.alternative, args.metric)
    print(f"pairs={n} alternative={args.alternative} metric={args.metric} p={p:.6g}")
    return 0


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if getattr(args, "verbose", False):
        level = logging.DEBUG
    elif getattr(args, "quiet", False):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or (argv[0] not in COMMANDS and argv[0] not in ("-h", "--help")):
        argv = ["run"] + argv
    args = build_parser().parse_args(argv)
    _configure_logging(args)
    handlers = {"run": cmd_run, "aggregate": cmd_aggregate, "compare": cmd_compare}
    try:
        return handlers[args.command](args)
    except (SubscoreError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
