import logging
from typing import Any, Dict, List, Sequence

import numpy as np
import pandas as pd
from scipy import stats

logger = logging.getLogger(__name__)

PVALUE_COLUMNS = ["rep", "step", "method", "statistic", "pvalue"]
INTERVAL_COLUMNS = ["rep", "step", "method", "lo", "hi", "target", "covered", "excl_zero"]
SELECTION_COLUMNS = ["rep", "step", "entered", "entry_sign", "in_support"]


def ks_statistic(pvals: Sequence[float]) -> float:
    """Sup-norm distance between the empirical CDF of finite p-values and U(0, 1)."""
    p = np.asarray(pvals, dtype=float)
    p = p[np.isfinite(p)]
    if p.size == 0:
        return float("nan")
    return float(stats.kstest(p, "uniform").statistic)


def support_recovered(selections: pd.DataFrame, support: Sequence[int]) -> pd.Series:
    """
    Per repetition, whether the first |support| entered variables are the support.

    Returns:
        recovered (pd.Series): boolean, indexed by rep.
    """
    if selections.empty:
        return pd.Series(dtype=bool)
    target = set(int(j) for j in support)
    size = len(target)
    first = selections[selections["step"] <= size]
    return first.groupby("rep")["entered"].agg(lambda s: set(int(j) for j in s) == target).astype(bool)


def selection_rates(selections: pd.DataFrame, support: Sequence[int]) -> Dict[str, Any]:
    """
    Selection diagnostics: per-step fraction of entries in the support, and the
    fraction of repetitions that recover the support in its first |support| steps.
    """
    if selections.empty:
        return {"in_support": {}, "recovery": float("nan")}
    in_support = selections.groupby("step")["in_support"].mean().to_dict()
    recovery = float(support_recovered(selections, support).mean()) if support else float("nan")
    return {"in_support": {int(k): float(v) for k, v in in_support.items()}, "recovery": recovery}


def summarize(
    pvalues: pd.DataFrame,
    intervals: pd.DataFrame,
    selections: pd.DataFrame,
    support: Sequence[int] = (),
    screen: bool = False,
) -> List[Dict[str, Any]]:
    """
    Aggregate per-repetition records into one row per (step, method).

    Args:
        pvalues (pd.DataFrame): PVALUE_COLUMNS records
        intervals (pd.DataFrame): INTERVAL_COLUMNS records, possibly empty
        selections (pd.DataFrame): SELECTION_COLUMNS records
        support (Sequence[int], optional): true nonzero coefficients. Defaults to ().
        screen (bool, optional): keep only repetitions that recovered the support.
            Defaults to False.

    Returns:
        table (List[Dict[str, Any]]): step, method, n_reps, coverage, power,
            median_width, ks, in_support.
    """
    if screen and support:
        recovered = support_recovered(selections, support)
        keep = set(recovered[recovered].index)
        logger.info("screening kept %d of %d repetitions", len(keep), recovered.size)
        pvalues = pvalues[pvalues["rep"].isin(keep)]
        intervals = intervals[intervals["rep"].isin(keep)] if not intervals.empty else intervals
        selections = selections[selections["rep"].isin(keep)]

    rates = selection_rates(selections, support)["in_support"]
    table = []
    for (step, method), group in pvalues.groupby(["step", "method"], sort=True):
        row = {
            "step": int(step),
            "method": method,
            "n_reps": int(group["pvalue"].notna().sum()),
            "coverage": float("nan"),
            "power": float("nan"),
            "median_width": float("nan"),
            "ks": ks_statistic(group["pvalue"]),
            "in_support": rates.get(int(step), float("nan")),
        }
        if not intervals.empty:
            ci = intervals[(intervals["step"] == step) & (intervals["method"] == method)]
            ci = ci[np.isfinite(ci["lo"]) & np.isfinite(ci["hi"])]
            if not ci.empty:
                row["coverage"] = float(ci["covered"].astype(float).mean())
                row["power"] = float(ci["excl_zero"].astype(float).mean())
                row["median_width"] = float(np.median(ci["hi"] - ci["lo"]))
        table.append(row)
    return table
