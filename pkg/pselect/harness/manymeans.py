import logging
import math
from typing import Any, Dict, Tuple, Union

import numpy as np

from pselect.harness.diagnostics import ks_statistic
from pselect.harness.generator import gen_errors, repetition_rng
from pselect.harness.output import ErrorModel, ManyMeansSummary
from pselect.inference import stable_survival_ratio

logger = logging.getLogger(__name__)

# pivots below this count as zero
ZERO_PIVOT = 1e-8
ERROR_VARIANCE = 2.0


def manymeans_pivot(w1: float, w2: float, m: int) -> float:
    """
    Pivot of the largest absolute group mean under the global null,
    [1 - Phi(sqrt(m) w1 / sqrt(2))] / [1 - Phi(sqrt(m) w2 / sqrt(2))],
    with w1 >= w2 >= 0 the two largest absolute group means.
    """
    if m < 1:
        raise ValueError(f"m must be a positive count, got {m}.")
    if not w1 >= w2 >= 0.0:
        raise ValueError(f"need w1 >= w2 >= 0, got w1={w1}, w2={w2}.")
    scale = math.sqrt(m / ERROR_VARIANCE)
    return stable_survival_ratio(scale * w1, scale * w2)


def mixture_params(d: int, m: int) -> Tuple[float, float, bool]:
    """
    Mixing probability pi = d^(-1/m), capped at 1/2, and shift B = sqrt(1 / (2 pi)).

    The shift keeps the error variance 1 + 2 pi B^2 at 2, also after capping.

    Returns:
        (pi, shift, capped)
    """
    pi = float(d) ** (-1.0 / m)
    capped = pi > 0.5
    if capped:
        logger.warning("mixing probability %.4g exceeds 1/2 for d=%d, m=%d; capped at 1/2", pi, d, m)
        pi = 0.5
    return pi, math.sqrt(1.0 / (2.0 * pi)), capped


def run_manymeans_experiment(
    d: int,
    m: int,
    reps: int = 500,
    seed: int = 0,
    return_dict: bool = False,
) -> Union[Dict[str, Any], ManyMeansSummary]:
    """
    Many-means counterexample under the global null.

    Each repetition draws d groups of m mixture errors, selects the group
    with the largest absolute mean and evaluates its pivot against the
    runner-up.

    Args:
        d (int): number of groups, at least 2
        m (int): replicates per group
        reps (int, optional): repetitions. Defaults to 500.
        seed (int, optional): seed. Defaults to 0.
        return_dict (bool, optional): if True return dict. Defaults to False.

    Returns:
        output (Union[Dict[str, Any], ManyMeansSummary]): per-repetition pivots,
            fraction of pivots below 1e-8 and the KS statistic.
    """
    if d < 2 or m < 1 or reps < 1:
        raise ValueError(f"need d >= 2, m >= 1 and reps >= 1, got d={d}, m={m}, reps={reps}.")
    pi, shift, capped = mixture_params(d, m)
    model = ErrorModel(
        family="mixture3", variance=ERROR_VARIANCE, mixture_pi=pi, mixture_shift=shift
    )
    logger.info("many means: d=%d, m=%d, pi=%.4g, B=%.4g, %d repetitions", d, m, pi, shift, reps)

    records = []
    for rep in range(reps):
        errors = gen_errors(model, d * m, repetition_rng(seed, rep)).reshape(d, m)
        w = np.sort(np.abs(errors.mean(axis=1)))
        w1, w2 = float(w[-1]), float(w[-2])
        records.append({"rep": rep, "w1": w1, "w2": w2, "pivot": manymeans_pivot(w1, w2, m)})

    pivots = np.array([r["pivot"] for r in records])
    output = ManyMeansSummary(
        d=d,
        m=m,
        reps=reps,
        seed=seed,
        pi=pi,
        shift=shift,
        capped=capped,
        records=records,
        zero_fraction=float(np.mean(pivots < ZERO_PIVOT)),
        ks=ks_statistic(pivots),
    )
    return output.to_dict() if return_dict else output
