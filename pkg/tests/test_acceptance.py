"""
Full-size simulation checks. Deselected by default; run with `pytest -m slow`.
"""
import time

import numpy as np
import pandas as pd
import pytest

from pselect.harness import (
    ExperimentConfig,
    ks_statistic,
    run_hetero_experiment,
    run_highdim_experiment,
    run_manymeans_experiment,
    run_null_experiment,
    run_signal_experiment,
    selection_rates,
)

pytestmark = pytest.mark.slow

REPS = 500
KS_EXACT = 1.36 / np.sqrt(REPS)


def _ecdf_excess(p):
    """max_t F(t) - t over the sample points."""
    p = np.sort(np.asarray(p, dtype=float))
    p = p[np.isfinite(p)]
    return float(np.max(np.arange(1, p.size + 1) / p.size - p))


def _table(out):
    return pd.DataFrame(out.table).set_index(["step", "method"])


def _pvalues(out, step, method):
    p = out.frame("pvalues")
    return p.loc[(p["step"] == step) & (p["method"] == method), "pvalue"].to_numpy()


def test_exact_null_uniformity_budget():
    start = time.perf_counter()
    [out] = run_null_experiment(ExperimentConfig(dists=("normal",), reps=REPS, seed=1))
    assert time.perf_counter() - start < 30.0
    assert _table(out).loc[(1, "tg"), "ks"] < KS_EXACT


def test_null_uniformity():
    start = time.perf_counter()
    outs = run_null_experiment(ExperimentConfig(reps=REPS, seed=1))
    assert time.perf_counter() - start < 300.0
    for out in outs:
        table = _table(out)
        limit = KS_EXACT if out.family == "normal" else 0.08
        assert table.loc[(1, "tg"), "ks"] < limit
        assert table.loc[(1, "plugin"), "ks"] < 0.08
        assert table.loc[(1, "bootstrap"), "ks"] < 0.08

        for method in ("plugin", "bootstrap"):
            assert _ecdf_excess(_pvalues(out, 1, method)) <= 0.06


def test_signal_coverage_and_widths():
    start = time.perf_counter()
    outs = run_signal_experiment(ExperimentConfig(reps=REPS, seed=2))
    assert time.perf_counter() - start < 900.0
    for out in outs:
        table = _table(out)
        for (step, method), row in table.iterrows():
            # the bootstrap hull over-covers a zero target; see DESIGN.md
            upper = 0.99 if method == "bootstrap" else 0.94
            assert 0.86 <= row["coverage"] <= upper, (out.family, step, method)
        widths = table.loc[3, "median_width"]
        assert widths["bootstrap"] < 0.7 * widths["plugin"]
        assert widths["bootstrap"] < 0.8 * widths["tg"]

        rates = selection_rates(out.frame("selections"), (0, 1))
        assert rates["recovery"] > 0.8


def test_hetero_null():
    [out] = run_hetero_experiment(ExperimentConfig(dists=("normal",), reps=REPS, seed=3))
    table = _table(out)
    for method in ("plugin", "bootstrap"):
        assert table.loc[(1, method), "ks"] < 0.08


def test_hetero_signal_selection_and_step3_band():
    cfg = ExperimentConfig(dists=("normal",), reps=REPS, seed=3, signal=True)
    [out] = run_hetero_experiment(cfg)
    rates = selection_rates(out.frame("selections"), (0, 1))
    assert 0.55 <= rates["recovery"] <= 0.92

    # step-3 p-values of repetitions whose target is 0
    ci = out.frame("intervals")
    null_reps = set(ci.loc[(ci["step"] == 3) & (ci["target"].abs() < 1e-9), "rep"])
    assert len(null_reps) > 0.5 * REPS
    p = out.frame("pvalues")
    p = p[(p["step"] == 3) & p["rep"].isin(null_reps)]
    for method in ("plugin", "bootstrap"):
        assert _ecdf_excess(p.loc[p["method"] == method, "pvalue"]) <= 0.06


def test_highdim_null():
    cfg = ExperimentConfig(dists=("normal",), reps=REPS, seed=4)
    assert cfg.model_copy(update={"experiment": "highdim"}).resamples == 50_000
    [out] = run_highdim_experiment(cfg)
    table = _table(out)
    for method in ("tg", "plugin", "bootstrap"):
        assert table.loc[(1, method), "ks"] < 0.08
    assert np.mean(_pvalues(out, 1, "bootstrap") == 1.0) < 0.05


def test_highdim_bootstrap_mass_at_one_shrinks_with_B():
    ones = []
    for B in (1000, 20_000):
        # escalated_B == B turns redrawing off
        cfg = ExperimentConfig(dists=("normal",), reps=200, seed=5, B=B, escalated_B=B)
        [out] = run_highdim_experiment(cfg)
        ones.append(np.mean(_pvalues(out, 1, "bootstrap") == 1.0))
    assert ones[0] > 0.1
    assert ones[1] < ones[0]


def test_highdim_signal_step1_selection():
    cfg = ExperimentConfig(dists=("normal",), reps=200, seed=6, signal=True, intervals=False)
    [out] = run_highdim_experiment(cfg)
    rates = selection_rates(out.frame("selections"), (0, 1))
    assert 0.3 <= rates["in_support"][1] <= 0.7


def test_manymeans_counterexample():
    start = time.perf_counter()
    out = run_manymeans_experiment(d=50000, m=2, reps=REPS, seed=5)
    assert time.perf_counter() - start < 120.0
    assert 0.28 <= out.zero_fraction <= 0.45


def test_manymeans_reversed_roles():
    out = run_manymeans_experiment(d=2, m=50000, reps=REPS, seed=6)
    assert out.capped
    assert out.ks < 0.08
    assert ks_statistic(out.pivots) == out.ks
