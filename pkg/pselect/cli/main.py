import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd
from pydantic import ValidationError

from pselect.cli.config import RunConfig, build_run_config
from pselect.core.base import BaseSelector
from pselect.core.errors import DatasetError, SelectiveInferenceError
from pselect.core.model import load_dataset
from pselect.core.output import PathConfig, PivotConfig
from pselect.harness import (
    DISTS,
    EXPERIMENTS,
    ExperimentConfig,
    rebuild_summary,
    run_manymeans_experiment,
    summary_frame,
    write_experiment,
    write_manymeans,
)
from pselect.inference import DEFAULT_B, BootstrapConfig, infer_step
from pselect.selector import run_path

logger = logging.getLogger("pselect")

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="flat key=value file supplying any flag")
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int, help="worker cap (env PSELECT_THREADS)")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--log-level", dest="log_level")

    pivots = argparse.ArgumentParser(add_help=False)
    pivots.add_argument("--method", choices=["fs", "lar"])
    pivots.add_argument("--k", type=int, help="number of path steps")
    pivots.add_argument("--sigma", type=float, help="known error s.d.")
    pivots.add_argument("--alpha", type=float)
    pivots.add_argument("--B", dest="B", type=int, help="bootstrap resamples (default 1000, 50000 for highdim)")
    pivots.add_argument("--gamma", type=float, help="bootstrap padding constant")
    pivots.add_argument("--c", type=float, help="plug-in/bootstrap inflation factor")

    parser = argparse.ArgumentParser(prog="pselect", description="Selective pivotal inference for FS and LAR paths.")
    sub = parser.add_subparsers(dest="command", required=True)

    infer = sub.add_parser("infer", parents=[common, pivots], help="p-values and intervals on a CSV dataset")
    infer.add_argument("data", type=Path)
    infer.add_argument("--response", help="response column name or position (default: last)")
    header = infer.add_mutually_exclusive_group()
    header.add_argument("--header", dest="header", action="store_const", const=True)
    header.add_argument("--no-header", dest="header", action="store_const", const=False)
    infer.add_argument("--normalize", action="store_const", const=True, help="scale predictors to unit norm")
    infer.add_argument("--sigma-mode", dest="sigma_mode", choices=["known", "plugin", "bootstrap"])

    simulate = sub.add_parser("simulate", parents=[common, pivots], help="run an experiment family")
    simulate.add_argument("experiment", choices=sorted(EXPERIMENTS))
    simulate.add_argument("--dist", dest="dists", action="append", choices=list(DISTS),
                          help="error distribution, repeatable (default: all)")
    simulate.add_argument("--reps", type=int)
    simulate.add_argument("--n", type=int)
    simulate.add_argument("--d", type=int)
    simulate.add_argument("--design-seed", dest="design_seed", type=int)
    mean = simulate.add_mutually_exclusive_group()
    mean.add_argument("--signal", dest="signal", action="store_const", const=True)
    mean.add_argument("--null", dest="signal", action="store_const", const=False)
    simulate.add_argument("--screen", action="store_const", const=True,
                          help="summarize only repetitions recovering the support")

    manymeans = sub.add_parser("manymeans", parents=[common], help="many-means counterexample")
    manymeans.add_argument("--d", type=int)
    manymeans.add_argument("--m", type=int)
    manymeans.add_argument("--reps", type=int)

    report = sub.add_parser("report", parents=[common], help="recompute summary.csv from run outputs")
    report.add_argument("--support", help="comma-separated true nonzero coefficients")
    report.add_argument("--screen", action="store_const", const=True)
    return parser


def cmd_infer(cfg: RunConfig) -> int:
    ds = load_dataset(cfg.data, response=cfg.response, header=cfg.header, normalize=cfg.normalize)
    ev = run_path(ds, PathConfig(method=cfg.method, k=cfg.k or 1))
    pcfg = PivotConfig(sigma=cfg.sigma, c=cfg.c, gamma=cfg.gamma, alpha=cfg.alpha)
    bcfg = BootstrapConfig(B=cfg.B or DEFAULT_B, gamma=cfg.gamma, c=cfg.c, seed=cfg.seed)

    rows = [infer_step(ds, ev, step, cfg.sigma_mode, pcfg, bcfg) for step in range(1, ev.model.k + 1)]
    df = pd.DataFrame(rows)

    cfg.out.mkdir(parents=True, exist_ok=True)
    path = cfg.out / "infer.csv"
    df.to_csv(path, index=False, float_format="%.12g", encoding="utf-8")
    steps = BaseSelector.to_frame(ev)
    steps.to_csv(cfg.out / "path.csv", index=False, float_format="%.12g", encoding="utf-8")
    logger.info("wrote %s and %s", path, cfg.out / "path.csv")
    print(df.to_string(index=False))
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    ecfg = ExperimentConfig(
        experiment=cfg.experiment,
        dists=cfg.dists,
        n=cfg.n,
        d=cfg.d,
        k=cfg.k,
        method=cfg.method,
        signal=cfg.signal,
        sigma=cfg.sigma,
        c=cfg.c,
        gamma=cfg.gamma,
        alpha=cfg.alpha,
        B=cfg.B,
        reps=cfg.reps,
        seed=cfg.seed,
        design_seed=cfg.design_seed,
        threads=cfg.threads,
        screen=cfg.screen,
    )
    summaries = EXPERIMENTS[cfg.experiment](ecfg)
    write_experiment(summaries, cfg.out)

    for s in summaries:
        if s.escalations or s.failures:
            print(f"{s.family}: {s.escalations} bootstrap escalations, {s.failures} failed repetitions")
    print(summary_frame(summaries).to_string(index=False))
    return EXIT_OK


def cmd_manymeans(cfg: RunConfig) -> int:
    summary = run_manymeans_experiment(cfg.d, cfg.m, reps=cfg.reps, seed=cfg.seed)
    write_manymeans(summary, cfg.out)
    print(f"d={summary.d} m={summary.m} reps={summary.reps} pi={summary.pi:.6g} B={summary.shift:.6g}")
    if summary.capped:
        print("pi capped at 1/2")
    print(f"fraction of pivots < 1e-8: {summary.zero_fraction:.4f}")
    print(f"KS statistic: {summary.ks:.4f}")
    return EXIT_OK


def cmd_report(cfg: RunConfig) -> int:
    summary = rebuild_summary(cfg.out, support=cfg.support, screen=cfg.screen)
    print(summary.to_string(index=False))
    return EXIT_OK


COMMANDS = {
    "infer": cmd_infer,
    "simulate": cmd_simulate,
    "manymeans": cmd_manymeans,
    "report": cmd_report,
}


def _flags(args: argparse.Namespace) -> Dict[str, Any]:
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    if flags.get("dists"):
        flags["dists"] = tuple(flags["dists"])
    return flags


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        cfg = build_run_config(args.command, _flags(args), config_path=args.config)
    except (ValidationError, ValueError, FileNotFoundError) as e:
        print(f"pselect: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=getattr(logging, cfg.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        return COMMANDS[cfg.command](cfg)
    except DatasetError as e:
        print(f"pselect: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SelectiveInferenceError as e:
        print(f"pselect: numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValidationError, FileNotFoundError) as e:
        print(f"pselect: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
