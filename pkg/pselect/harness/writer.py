import logging
from pathlib import Path
from typing import Dict, List, Sequence, Union

import pandas as pd

from pselect.harness.diagnostics import (
    INTERVAL_COLUMNS,
    PVALUE_COLUMNS,
    SELECTION_COLUMNS,
    summarize,
)
from pselect.harness.output import ExperimentSummary, ManyMeansSummary

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"
SUMMARY_COLUMNS = [
    "experiment", "family", "step", "method", "n_reps",
    "coverage", "power", "median_width", "ks", "in_support",
]
MANYMEANS_COLUMNS = ["rep", "w1", "w2", "pivot"]
MANYMEANS_SUMMARY_COLUMNS = ["d", "m", "reps", "seed", "pi", "shift", "capped", "zero_fraction", "ks"]

PathLike = Union[str, Path]


def _to_csv(df: pd.DataFrame, path: Path) -> Path:
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, encoding="utf-8")
    logger.info("wrote %s (%d rows)", path, len(df))
    return path


def summary_frame(summaries: Sequence[ExperimentSummary]) -> pd.DataFrame:
    rows = [
        {"experiment": s.experiment, "family": s.family, **row}
        for s in summaries
        for row in s.table
    ]
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def write_experiment(summaries: Sequence[ExperimentSummary], out_dir: PathLike) -> Dict[str, Path]:
    """
    Write pvalues.csv, intervals.csv and selections.csv per error distribution
    and one summary.csv across them.

    A single distribution writes its files straight into out_dir; several
    distributions get one subdirectory each.

    Returns:
        paths (Dict[str, Path]): written files keyed by '<family>/<name>' and 'summary'.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    nested = len(summaries) > 1

    paths = {}
    for s in summaries:
        target = out / s.family if nested else out
        target.mkdir(parents=True, exist_ok=True)
        for name, columns in (
            ("pvalues", PVALUE_COLUMNS),
            ("intervals", INTERVAL_COLUMNS),
            ("selections", SELECTION_COLUMNS),
        ):
            df = pd.DataFrame(getattr(s, name), columns=columns)
            paths[f"{s.family}/{name}"] = _to_csv(df, target / f"{name}.csv")

    paths["summary"] = _to_csv(summary_frame(summaries), out / "summary.csv")
    return paths


def write_manymeans(summary: ManyMeansSummary, out_dir: PathLike) -> Dict[str, Path]:
    """Write manymeans.csv (one row per repetition) and manymeans_summary.csv."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    head = summary.model_dump(include=set(MANYMEANS_SUMMARY_COLUMNS))
    return {
        "manymeans": _to_csv(pd.DataFrame(summary.records, columns=MANYMEANS_COLUMNS), out / "manymeans.csv"),
        "summary": _to_csv(
            pd.DataFrame([head], columns=MANYMEANS_SUMMARY_COLUMNS), out / "manymeans_summary.csv"
        ),
    }


def rebuild_summary(
    out_dir: PathLike,
    support: Sequence[int] = (),
    screen: bool = False,
    experiment: str = "",
) -> pd.DataFrame:
    """
    Recompute summary.csv from the per-repetition files under out_dir.

    Args:
        out_dir (PathLike): directory written by write_experiment
        support (Sequence[int], optional): true nonzero coefficients. Defaults to ().
        screen (bool, optional): keep only support-recovering repetitions. Defaults to False.
        experiment (str, optional): label for the experiment column. Defaults to "".

    Returns:
        summary (pd.DataFrame): the rewritten summary table.
    """
    out = Path(out_dir)
    dirs: List[Path] = sorted(p.parent for p in out.glob("*/pvalues.csv"))
    if (out / "pvalues.csv").exists():
        dirs = [out]
    if not dirs:
        raise FileNotFoundError(f"no pvalues.csv under {out}.")

    previous = pd.read_csv(out / "summary.csv") if (out / "summary.csv").exists() else None
    if not experiment and previous is not None and not previous.empty:
        experiment = str(previous["experiment"].iloc[0])

    rows = []
    for d in dirs:
        pvalues = pd.read_csv(d / "pvalues.csv")
        intervals = _read_optional(d / "intervals.csv", INTERVAL_COLUMNS)
        selections = _read_optional(d / "selections.csv", SELECTION_COLUMNS)
        family = d.name if d != out else _single_family(previous)
        for row in summarize(pvalues, intervals, selections, support, screen=screen):
            rows.append({"experiment": experiment, "family": family, **row})

    summary = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
    _to_csv(summary, out / "summary.csv")
    return summary


def _read_optional(path: Path, columns: List[str]) -> pd.DataFrame:
    if not path.exists():
        return pd.DataFrame(columns=columns)
    return pd.read_csv(path)


def _single_family(previous) -> str:
    if previous is not None and not previous.empty:
        return str(previous["family"].iloc[0])
    return ""
