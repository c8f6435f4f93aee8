import logging
from typing import Any, Dict, Literal, Optional

import numpy as np

from pselect.core.model import contrast_for_step, least_squares_coef
from pselect.core.output import Dataset, PivotConfig, SelectionEvent
from pselect.core.streams import philox_stream
from pselect.inference.output import BootstrapConfig, PivotResult
from pselect.inference.sigma_free import (
    bootstrap_interval,
    bootstrap_pivot,
    draw_bootstrap_contrasts,
    moment_stats,
    plugin_interval,
    plugin_pivot,
)
from pselect.inference.truncated import invert_interval, tg_pivot, truncation_bounds

logger = logging.getLogger(__name__)

SigmaMode = Literal["known", "plugin", "bootstrap"]


def infer_step(
    ds: Dataset,
    ev: SelectionEvent,
    step: int,
    mode: SigmaMode,
    pcfg: PivotConfig,
    bcfg: Optional[BootstrapConfig] = None,
) -> Dict[str, Any]:
    """
    P-values and the 1 - alpha interval for the variable entering at `step`.

    The contrast targets that variable's normalized coefficient on the step's
    active set, oriented by its observed sign.

    Args:
        ds (Dataset): regression instance the path was run on
        ev (SelectionEvent): selection event of the path
        step (int): step number, 1-based
        mode (SigmaMode): 'known' (TG with pcfg.sigma), 'plugin' or 'bootstrap'
        pcfg (PivotConfig): sigma, c, gamma and alpha
        bcfg (Optional[BootstrapConfig], optional): bootstrap settings, used in
            bootstrap mode. Defaults to BootstrapConfig() with pcfg's c and gamma.

    Returns:
        row (Dict[str, Any]): step record, least-squares coefficient of the entered
            variable, truncation interval, p-values and interval.
    """
    rec = ev.model.step(step)
    contrast = contrast_for_step(ds, ev.model, step)
    ti = truncation_bounds(ev, contrast, ds.y, sigma=pcfg.sigma)
    escalated = False

    if mode == "known":
        pivot = tg_pivot(ti, 0.0)
        lo, hi = invert_interval(ti, pcfg.alpha)
        scale = ti.scale
    elif mode == "plugin":
        ms = moment_stats(ds.y)
        pivot = plugin_pivot(ti, 0.0, ms, pcfg)
        lo, hi = plugin_interval(ti, ms, pcfg)
        scale = pcfg.c * ms.s * ti.norm
    else:
        if bcfg is None:
            bcfg = BootstrapConfig(c=pcfg.c, gamma=pcfg.gamma)
        contrasts, escalated = draw_bootstrap_contrasts(
            ti, ds.y, contrast, bcfg, rng=philox_stream(bcfg.seed, step)
        )
        pivot = bootstrap_pivot(ti, 0.0, contrasts, ds.n, bcfg)
        lo, hi = bootstrap_interval(ti, contrasts, ds.n, bcfg, pcfg.alpha)
        scale = bcfg.c * float(np.std(contrasts))

    res = PivotResult.from_pivot(pivot)
    coef = least_squares_coef(ds.X, rec.active_set, ds.y)[rec.active_set.index(rec.entered)]
    logger.debug("step %d (%s): p=%.6g, interval [%.6g, %.6g]", step, mode, res.one_sided_p, lo, hi)
    return {
        "step": step,
        "entered": rec.entered,
        "entry_sign": rec.entry_sign,
        "active_set": " ".join(str(j) for j in rec.active_set),
        "orientation": contrast.orientation,
        "coef": float(coef),
        "knot": rec.knot,
        "mode": mode,
        "vty": ti.vty,
        "a": ti.a,
        "b": ti.b,
        "scale": scale,
        "pvalue": res.one_sided_p,
        "two_sided_p": res.two_sided_p,
        "lo": lo,
        "hi": hi,
        "escalated": escalated,
    }
