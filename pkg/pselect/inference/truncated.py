import logging
from typing import Callable, Tuple

import numpy as np
from scipy import optimize

from pselect.core.base import MEMBERSHIP_SLACK
from pselect.core.errors import (
    BracketExpansionError,
    DegenerateIntervalError,
    InconsistentEventError,
    NotInSelectionEventError,
)
from pselect.core.output import Contrast, PivotConfig, SelectionEvent
from pselect.inference.output import PivotResult, TruncationInterval
from pselect.inference.tail import truncated_normal_sf

logger = logging.getLogger(__name__)

# rows with |w_i| at or below this carry no truncation
ZERO_W_TOL = 1e-12
BISECT_TOL = 1e-6
BRACKET_START = 10.0
BRACKET_LIMIT = 1e6


def truncation_bounds(
    ev: SelectionEvent,
    contrast: Contrast,
    y: np.ndarray,
    sigma: float = 1.0,
) -> TruncationInterval:
    """
    Range of v^T y over the line y + (t - v^T y) v / ||v||^2 that stays in the cone.

    a = v^T y - min_{w_i > 0} (Q y)_i / w_i and b = v^T y - max_{w_i < 0} (Q y)_i / w_i
    with w = Q v / ||v||^2; an empty index set gives -inf (resp. +inf).

    Args:
        ev (SelectionEvent): selection event containing y
        contrast (Contrast): contrast v
        y (np.ndarray): response
        sigma (float, optional): error s.d., sets scale = sigma * ||v||. Defaults to 1.0.

    Returns:
        ti (TruncationInterval): a, b, w, v^T y and scale.

    Raises:
        InconsistentEventError: if a violated constraint does not depend on v^T y.
        NotInSelectionEventError: if y lies outside the cone.
    """
    y = np.asarray(y, dtype=float)
    v = contrast.v
    if y.shape != (ev.n,) or v.shape != (ev.n,):
        raise ValueError(f"y and v must have length {ev.n}, got {y.shape} and {v.shape}.")

    Qy = ev.slack(y)
    w = ev.Q @ v / float(v @ v)
    flat = np.abs(w) <= ZERO_W_TOL

    violated = Qy < -MEMBERSHIP_SLACK
    if np.any(violated):
        if np.all(flat[violated]):
            raise InconsistentEventError(
                f"{int(violated.sum())} constraints are violated and do not involve the contrast."
            )
        raise NotInSelectionEventError(float(Qy.min()))

    vty = float(v @ y)
    pos = w > ZERO_W_TOL
    neg = w < -ZERO_W_TOL
    a = vty - float(np.min(Qy[pos] / w[pos])) if np.any(pos) else -np.inf
    b = vty - float(np.max(Qy[neg] / w[neg])) if np.any(neg) else np.inf

    # rows inside the slack band can put v^T y a hair outside [a, b]
    a, b = min(a, vty), max(b, vty)
    return TruncationInterval(
        a=a, b=b, w=w, vty=vty, norm=contrast.norm, scale=contrast.scale(sigma)
    )


def tg_pivot(ti: TruncationInterval, mu: float) -> float:
    """
    Truncated Gaussian pivot
    T = [Phi((b-mu)/s) - Phi((v^T y-mu)/s)] / [Phi((b-mu)/s) - Phi((a-mu)/s)], s = sigma ||v||.

    T is the conditional survival of v^T y given the selection event, so it is
    increasing in mu and decreasing in v^T y.

    Raises:
        DegenerateIntervalError: if a == b.
        PivotUnderflowError: if the denominator underflows even in log-space.
    """
    if ti.a == ti.b:
        raise DegenerateIntervalError(ti.a, ti.b)
    s = ti.scale
    return truncated_normal_sf((ti.vty - mu) / s, (ti.a - mu) / s, (ti.b - mu) / s)


def one_sided_pvalue(
    ev: SelectionEvent,
    contrast: Contrast,
    y: np.ndarray,
    cfg: PivotConfig,
) -> PivotResult:
    """
    One-sided test of H0: v^T theta = 0 against v^T theta > 0.

    `contrast` should carry the observed coefficient sign as its orientation so
    the alternative points in the direction of the observed effect.
    """
    ti = truncation_bounds(ev, contrast, y, sigma=cfg.sigma)
    return PivotResult.from_pivot(tg_pivot(ti, 0.0))


def invert_interval(
    ti: TruncationInterval,
    alpha: float,
    pivot: Callable[[TruncationInterval, float], float] = tg_pivot,
) -> Tuple[float, float]:
    """
    Two-sided 1 - alpha interval {mu : alpha/2 <= T(mu) <= 1 - alpha/2}.

    T increases in mu, so the lower endpoint solves T(mu) = alpha/2 and the
    upper one T(mu) = 1 - alpha/2. Both are found by Brent's method inside a
    bracket grown by doubling from v^T y +- 10 scale.

    Args:
        ti (TruncationInterval): truncation interval with its scale
        alpha (float): level, in (0, 1)
        pivot (Callable, optional): pivot function of (ti, mu). Defaults to tg_pivot.

    Returns:
        (mu_lo, mu_hi): interval endpoints, mu_lo <= mu_hi.

    Raises:
        BracketExpansionError: if the bracket passes 1e6 * scale.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}.")
    if ti.a == ti.b:
        raise DegenerateIntervalError(ti.a, ti.b)

    lo_target, hi_target = alpha / 2.0, 1.0 - alpha / 2.0
    lo, hi = _bracket(ti, pivot, lo_target, hi_target)

    endpoints = []
    for target in (lo_target, hi_target):
        root = optimize.brentq(
            lambda mu: pivot(ti, mu) - target, lo, hi, xtol=1e-12 * ti.scale, maxiter=500
        )
        gap = abs(pivot(ti, root) - target)
        if gap > BISECT_TOL:
            logger.debug("inversion endpoint %.6g misses target %.3g by %.3g", root, target, gap)
        endpoints.append(float(root))

    mu_lo, mu_hi = endpoints
    return min(mu_lo, mu_hi), max(mu_lo, mu_hi)


def _bracket(ti, pivot, lo_target, hi_target) -> Tuple[float, float]:
    """Grow [vty - r, vty + r] until T(lo) < lo_target and T(hi) > hi_target."""
    limit = BRACKET_LIMIT * ti.scale
    step = BRACKET_START * ti.scale
    lo = ti.vty - step
    while pivot(ti, lo) >= lo_target:
        step *= 2.0
        if step > limit:
            raise BracketExpansionError(limit)
        lo = ti.vty - step

    step = BRACKET_START * ti.scale
    hi = ti.vty + step
    while pivot(ti, hi) <= hi_target:
        step *= 2.0
        if step > limit:
            raise BracketExpansionError(limit)
        hi = ti.vty + step

    logger.debug("inversion bracket [%.6g, %.6g]", lo, hi)
    return lo, hi
