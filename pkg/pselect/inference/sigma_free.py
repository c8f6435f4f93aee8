import logging
from typing import Optional, Tuple

import numpy as np

from pselect.core.errors import DegenerateResponseError, EmptyAcceptanceError
from pselect.core.output import Contrast, PivotConfig
from pselect.core.streams import philox_stream
from pselect.inference.output import BootstrapConfig, MomentStats, TruncationInterval
from pselect.inference.truncated import invert_interval, tg_pivot

logger = logging.getLogger(__name__)

# resample rows drawn per block, keeps memory bounded for large B
_BLOCK = 4096
# upper bound on the mu-grid used by bootstrap inversion
MAX_GRID = 1_000_000


def moment_stats(y: np.ndarray) -> MomentStats:
    """
    Sample mean, variance s_Y^2 = (1/n) sum (y_i - ybar)^2 and third absolute
    central moment of the response.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size < 2:
        raise ValueError(f"need a response vector with n >= 2, got shape {y.shape}.")
    centered = y - y.mean()
    s2 = float(np.mean(centered ** 2))
    r3 = float(np.mean(np.abs(centered) ** 3))
    degenerate = s2 == 0.0
    if degenerate:
        logger.warning("response is constant (s_Y^2 = 0)")
    return MomentStats(mean_y=float(y.mean()), s2=s2, r3=r3, degenerate=degenerate)


def plugin_scale(ti: TruncationInterval, ms: MomentStats, c: float) -> TruncationInterval:
    """The truncation interval rescaled to c * s_Y * ||v||."""
    if ms.degenerate or ms.s2 <= 0.0:
        raise DegenerateResponseError("s_Y^2 = 0: the plug-in scale is undefined.")
    return ti.with_sigma(c * ms.s)


def plugin_pivot(ti: TruncationInterval, mu: float, ms: MomentStats, cfg: PivotConfig) -> float:
    """TG pivot with sigma replaced by c * s_Y."""
    return tg_pivot(plugin_scale(ti, ms, cfg.c), mu)


def plugin_interval(ti: TruncationInterval, ms: MomentStats, cfg: PivotConfig) -> Tuple[float, float]:
    """Two-sided 1 - alpha interval from the plug-in statistic."""
    return invert_interval(plugin_scale(ti, ms, cfg.c), cfg.alpha)


def resample_contrasts(
    y: np.ndarray,
    contrast: Contrast,
    cfg: BootstrapConfig,
    rng: Optional[np.random.Generator] = None,
    B: Optional[int] = None,
) -> np.ndarray:
    """
    Bootstrap the centered contrast v^T (Y* - ybar 1).

    Each Y* resamples the components of y with replacement. The path is not
    rerun on the resamples.

    Args:
        y (np.ndarray): response
        contrast (Contrast): contrast v, fixed from the original fit
        cfg (BootstrapConfig): resample count and seed
        rng (Optional[np.random.Generator], optional): stream to draw from.
            Defaults to a Philox stream seeded with cfg.seed.
        B (Optional[int], optional): overrides cfg.B. Defaults to None.

    Returns:
        contrasts (np.ndarray): B resampled contrast values.
    """
    y = np.asarray(y, dtype=float)
    n = y.size
    if n < 2:
        raise ValueError("need n >= 2 to resample.")
    if rng is None:
        rng = philox_stream(cfg.seed)
    B = cfg.B if B is None else int(B)

    centered = y - y.mean()
    v = contrast.v
    out = np.empty(B)
    for start in range(0, B, _BLOCK):
        stop = min(start + _BLOCK, B)
        idx = rng.integers(0, n, size=(stop - start, n))
        out[start:stop] = centered[idx] @ v
    return out


def _window_counts(
    sorted_x: np.ndarray,
    lower: float,
    upper: float,
    mu: np.ndarray,
    c: float,
) -> np.ndarray:
    """#{x : lower <= c x + mu <= upper} for each mu, on sorted x."""
    mu = np.asarray(mu, dtype=float)
    hi = np.searchsorted(sorted_x, (upper - mu) / c, side="right")
    lo = np.searchsorted(sorted_x, (lower - mu) / c, side="left")
    return np.maximum(hi - lo, 0)


def _pivot_curve(
    ti: TruncationInterval,
    mu: np.ndarray,
    sorted_x: np.ndarray,
    n: int,
    cfg: BootstrapConfig,
) -> np.ndarray:
    B = sorted_x.size
    delta = cfg.delta(n)
    num = _window_counts(sorted_x, ti.vty, ti.b, mu, cfg.c) / B
    den = _window_counts(sorted_x, ti.a, ti.b, mu, cfg.c) / B
    return (num + delta) / (den + delta)


def bootstrap_pivot(
    ti: TruncationInterval,
    mu: float,
    contrasts: np.ndarray,
    n: int,
    cfg: BootstrapConfig,
) -> float:
    """
    Padded bootstrap TG statistic

        [P*(v^T y <= c x* + mu <= b) + delta_n] / [P*(a <= c x* + mu <= b) + delta_n]

    with x* the resampled contrasts and delta_n = gamma n^(-1/4). The numerator
    window sits inside the denominator window, so the value lies in (0, 1].
    """
    sorted_x = np.sort(np.asarray(contrasts, dtype=float))
    return float(_pivot_curve(ti, np.array([mu]), sorted_x, n, cfg)[0])


def bootstrap_interval(
    ti: TruncationInterval,
    contrasts: np.ndarray,
    n: int,
    cfg: BootstrapConfig,
    alpha: float,
    step: Optional[float] = None,
) -> Tuple[float, float]:
    """
    Hull of {mu : alpha/2 <= bootstrap pivot <= 1 - alpha/2} over a mu-grid.

    The bootstrap pivot is a step function of mu, so the acceptance set is found
    by scanning rather than root finding. One contrast sample serves the whole
    grid. Outside [a - c max x*, v^T y - c min x*] the pivot is 1 or
    delta/(1 + delta), so the grid only covers that range.

    Args:
        ti (TruncationInterval): truncation interval
        contrasts (np.ndarray): resampled contrasts
        n (int): sample size, for delta_n
        cfg (BootstrapConfig): c, gamma and grid_fraction
        alpha (float): level, in (0, 1)
        step (Optional[float], optional): grid step. Defaults to
            cfg.grid_fraction times c * sd(x*) (or the interval scale when that is 0).

    Returns:
        (mu_lo, mu_hi): hull of the accepted trial means.

    Raises:
        EmptyAcceptanceError: if no trial mean is accepted.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}.")
    sorted_x = np.sort(np.asarray(contrasts, dtype=float))
    c = cfg.c

    if step is None:
        spread = c * float(np.std(sorted_x))
        step = cfg.grid_fraction * (spread if spread > 0.0 else ti.scale)

    left = ti.a if np.isfinite(ti.a) else ti.vty
    lower = left - c * sorted_x[-1] - step
    upper = ti.vty - c * sorted_x[0] + step
    size = int(np.ceil((upper - lower) / step)) + 1
    if size > MAX_GRID:
        step = (upper - lower) / (MAX_GRID - 1)
        size = MAX_GRID
        logger.debug("bootstrap grid capped at %d points (step %.3g)", MAX_GRID, step)

    mu_grid = lower + step * np.arange(size)
    pivots = _pivot_curve(ti, mu_grid, sorted_x, n, cfg)
    accepted = (pivots >= alpha / 2.0) & (pivots <= 1.0 - alpha / 2.0)
    if not np.any(accepted):
        raise EmptyAcceptanceError(
            mu_grid, pivots,
            f"no trial mean accepted at alpha={alpha} over {size} grid points "
            f"[{lower:.4g}, {upper:.4g}]",
        )
    hits = mu_grid[accepted]
    return float(hits[0]), float(hits[-1])


def draw_bootstrap_contrasts(
    ti: TruncationInterval,
    y: np.ndarray,
    contrast: Contrast,
    cfg: BootstrapConfig,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[np.ndarray, bool]:
    """
    Draw cfg.B resampled contrasts, redrawing cfg.escalated_B of them when the
    draw is vacuous at mu = 0: no shifted contrast lands in [a, b], or every one
    that does also lands in [v^T y, b]. Either way the p-value would be exactly 1.

    Returns:
        (contrasts, escalated): the sample in use and whether it was escalated.
    """
    if rng is None:
        rng = philox_stream(cfg.seed)
    contrasts = resample_contrasts(y, contrast, cfg, rng=rng)
    if not cfg.escalate or cfg.escalated_B <= cfg.B:
        return contrasts, False

    sorted_x = np.sort(contrasts)
    den = _window_counts(sorted_x, ti.a, ti.b, np.zeros(1), cfg.c)[0]
    num = _window_counts(sorted_x, ti.vty, ti.b, np.zeros(1), cfg.c)[0]
    if num < den:
        return contrasts, False

    logger.debug(
        "%d of %d bootstrap contrasts inside [%.4g, %.4g], none below %.4g; redrawing with B=%d",
        den, cfg.B, ti.a, ti.b, ti.vty, cfg.escalated_B,
    )
    return resample_contrasts(y, contrast, cfg, rng=rng, B=cfg.escalated_B), True
