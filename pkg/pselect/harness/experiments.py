import logging
from typing import Any, Dict, List, Tuple, Union

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from pselect.core.errors import SelectiveInferenceError
from pselect.core.model import contrast_for_step
from pselect.core.output import Dataset, PathConfig, PivotConfig
from pselect.core.streams import philox_stream
from pselect.harness.diagnostics import (
    INTERVAL_COLUMNS,
    PVALUE_COLUMNS,
    SELECTION_COLUMNS,
    summarize,
)
from pselect.harness.generator import gen_design, gen_errors, repetition_rng
from pselect.harness.output import DISTS, DesignSpec, ErrorModel, ExperimentConfig, ExperimentSummary
from pselect.inference import (
    BootstrapConfig,
    bootstrap_interval,
    bootstrap_pivot,
    draw_bootstrap_contrasts,
    invert_interval,
    moment_stats,
    plugin_interval,
    plugin_pivot,
    tg_pivot,
    truncation_bounds,
)
from pselect.selector import run_path

logger = logging.getLogger(__name__)

NAN = float("nan")


class ExperimentRunner():
    """
    Monte Carlo runner shared by every experiment family.

    The design X is drawn once from the design seed and kept fixed, whatever
    the repetition seed. Each repetition draws fresh
    errors from its own (seed, distribution, rep) stream, reruns the path,
    and records p-values, intervals and the realized model, so results do
    not depend on the worker count.
    """
    EXPERIMENTS = ("null", "signal", "hetero", "highdim")

    def __init__(self, cfg: ExperimentConfig):
        self._cfg = cfg
        self._X = gen_design(DesignSpec(n=cfg.n, d=cfg.dim, unit_norm=True, seed=cfg.design))

        beta = np.zeros(cfg.dim)
        if cfg.has_signal:
            beta[: len(cfg.beta)] = cfg.beta
        self._theta = self._X @ beta

    @property
    def cfg(self) -> ExperimentConfig:
        return self._cfg

    @property
    def X(self) -> np.ndarray:
        return self._X

    @property
    def theta(self) -> np.ndarray:
        return self._theta

    @classmethod
    def keys(cls) -> Tuple[str, ...]:
        return cls.EXPERIMENTS

    def can_run(self, key: str) -> bool:
        return key in self.keys()

    def run(self, return_dict: bool = False) -> List[Union[Dict[str, Any], ExperimentSummary]]:
        """
        Run every configured error distribution.

        Args:
            return_dict (bool, optional): if True return dicts. Defaults to False.

        Returns:
            output (List[Union[Dict[str, Any], ExperimentSummary]]): one summary per distribution.
        """
        return [self.run_family(dist, return_dict=return_dict) for dist in self.cfg.dists]

    def run_family(
        self,
        dist: str,
        return_dict: bool = False,
    ) -> Union[Dict[str, Any], ExperimentSummary]:
        """
        Run all repetitions for one error distribution.

        Args:
            dist (str): error distribution, one of DISTS
            return_dict (bool, optional): if True return dict. Defaults to False.

        Returns:
            output (Union[Dict[str, Any], ExperimentSummary]): records and aggregates.
        """
        if dist not in DISTS:
            raise ValueError(f"{dist} is not a valid error distribution.")
        cfg = self.cfg
        logger.info(
            "%s experiment, %s errors: %d repetitions of %d %s steps (n=%d, d=%d, B=%d, design seed %d)",
            cfg.experiment, dist, cfg.reps, cfg.steps, cfg.method, cfg.n, cfg.dim, cfg.resamples, cfg.design,
        )

        n_jobs = cfg.threads if cfg.threads is not None else -1
        results = Parallel(n_jobs=n_jobs)(
            delayed(run_repetition)(self.X, self.theta, cfg, dist, rep) for rep in range(cfg.reps)
        )

        pvalues = pd.DataFrame([r for res in results for r in res["pvalues"]], columns=PVALUE_COLUMNS)
        intervals = pd.DataFrame(
            [r for res in results for r in res["intervals"]], columns=INTERVAL_COLUMNS
        )
        selections = pd.DataFrame(
            [r for res in results for r in res["selections"]], columns=SELECTION_COLUMNS
        )
        failures = sum(res["failed"] for res in results)
        escalations = sum(res["escalations"] for res in results)
        if failures:
            logger.warning("%s/%s: %d of %d repetitions failed", cfg.experiment, dist, failures, cfg.reps)
        if escalations:
            logger.warning(
                "%s/%s: %d bootstrap draws redrawn with B=%d", cfg.experiment, dist, escalations, cfg.escalated_B
            )

        table = summarize(pvalues, intervals, selections, cfg.support, screen=cfg.screen)
        output = ExperimentSummary(
            experiment=cfg.experiment,
            family=dist,
            reps=cfg.reps,
            pvalues=pvalues.to_dict(orient="records"),
            intervals=intervals.to_dict(orient="records"),
            selections=selections.to_dict(orient="records"),
            table=table,
            escalations=escalations,
            failures=failures,
            screened=cfg.screen,
        )
        return output.to_dict() if return_dict else output


def run_repetition(
    X: np.ndarray,
    theta: np.ndarray,
    cfg: ExperimentConfig,
    dist: str,
    rep: int,
) -> Dict[str, Any]:
    """
    One repetition: draw y, run the path, and evaluate every statistic at every step.

    The target of each step is the projection coefficient v^T theta of the
    realized model, so coverage is unconditional over selection.
    """
    key = DISTS.index(dist)
    model = ErrorModel(family=dist, variance=cfg.sigma ** 2, hetero=cfg.experiment == "hetero")
    y = theta + gen_errors(model, cfg.n, repetition_rng(cfg.seed, key, rep), X=X)
    out: Dict[str, Any] = {
        "pvalues": [], "intervals": [], "selections": [], "failed": False, "escalations": 0,
    }

    ds = Dataset(X=X, y=y)
    try:
        ev = run_path(ds, PathConfig(method=cfg.method, k=cfg.steps))
    except SelectiveInferenceError as e:
        logger.debug("rep %d: path failed: %s", rep, e)
        out["failed"] = True
        return out

    pcfg = PivotConfig(sigma=cfg.sigma, c=cfg.c, gamma=cfg.gamma, alpha=cfg.alpha)
    bcfg = BootstrapConfig(B=cfg.resamples, gamma=cfg.gamma, c=cfg.c, seed=cfg.seed, escalated_B=cfg.escalated_B)
    ms = moment_stats(y)
    support = set(cfg.support)

    for step in range(1, cfg.steps + 1):
        rec = ev.model.step(step)
        out["selections"].append({
            "rep": rep,
            "step": step,
            "entered": rec.entered,
            "entry_sign": rec.entry_sign,
            "in_support": rec.entered in support,
        })
        try:
            contrast = contrast_for_step(ds, ev.model, step)
            ti = truncation_bounds(ev, contrast, y, sigma=cfg.sigma)
        except SelectiveInferenceError as e:
            logger.debug("rep %d step %d: no truncation interval: %s", rep, step, e)
            out["failed"] = True
            continue
        target = float(contrast.v @ theta)

        for stat in cfg.statistics:
            rng = philox_stream(cfg.seed, key, rep, step) if stat == "bootstrap" else None
            pvalue, (lo, hi), escalated = _evaluate(stat, ti, y, contrast, ms, pcfg, bcfg, cfg, rng)
            out["escalations"] += int(escalated)
            out["pvalues"].append({
                "rep": rep, "step": step, "method": stat, "statistic": "one_sided", "pvalue": pvalue,
            })
            if cfg.with_intervals:
                out["intervals"].append({
                    "rep": rep, "step": step, "method": stat, "lo": lo, "hi": hi,
                    "target": target,
                    "covered": bool(lo <= target <= hi),
                    "excl_zero": bool(lo > 0.0 or hi < 0.0),
                })
    return out


def _evaluate(stat, ti, y, contrast, ms, pcfg, bcfg, cfg, rng) -> Tuple[float, Tuple[float, float], bool]:
    """One-sided p-value, interval (NaN when not requested or failed) and escalation flag."""
    escalated = False
    if stat == "bootstrap":
        contrasts, escalated = draw_bootstrap_contrasts(ti, y, contrast, bcfg, rng=rng)

    try:
        if stat == "bootstrap":
            pvalue = bootstrap_pivot(ti, 0.0, contrasts, cfg.n, bcfg)
        elif stat == "plugin":
            pvalue = plugin_pivot(ti, 0.0, ms, pcfg)
        else:
            pvalue = tg_pivot(ti, 0.0)
    except SelectiveInferenceError as e:
        logger.debug("%s p-value failed: %s", stat, e)
        pvalue = NAN

    interval = (NAN, NAN)
    if cfg.with_intervals:
        try:
            if stat == "bootstrap":
                interval = bootstrap_interval(ti, contrasts, cfg.n, bcfg, cfg.alpha)
            elif stat == "plugin":
                interval = plugin_interval(ti, ms, pcfg)
            else:
                interval = invert_interval(ti, cfg.alpha)
        except SelectiveInferenceError as e:
            logger.debug("%s interval failed: %s", stat, e)
    return pvalue, interval, escalated


def _run(cfg: ExperimentConfig, experiment: str, return_dict: bool):
    return ExperimentRunner(cfg.model_copy(update={"experiment": experiment})).run(return_dict=return_dict)


def run_null_experiment(cfg: ExperimentConfig, return_dict: bool = False):
    """theta = 0, p-values of the first LAR step under each error law."""
    return _run(cfg.model_copy(update={"signal": False}), "null", return_dict)


def run_signal_experiment(cfg: ExperimentConfig, return_dict: bool = False):
    """theta = X beta, p-values and 1 - alpha intervals over the first steps."""
    return _run(cfg.model_copy(update={"signal": True}), "signal", return_dict)


def run_hetero_experiment(cfg: ExperimentConfig, return_dict: bool = False):
    """Errors scaled by sigma_i^2 = 3 ||x_i||^2; plug-in and bootstrap only."""
    return _run(cfg, "hetero", return_dict)


def run_highdim_experiment(cfg: ExperimentConfig, return_dict: bool = False):
    """n = 50 with d = 1000 predictors unless cfg.d says otherwise."""
    return _run(cfg, "highdim", return_dict)


EXPERIMENTS = {
    "null": run_null_experiment,
    "signal": run_signal_experiment,
    "hetero": run_hetero_experiment,
    "highdim": run_highdim_experiment,
}
