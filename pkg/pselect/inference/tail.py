import logging

import numpy as np
from scipy.special import log_ndtr, ndtr

from pselect.core.errors import PivotUnderflowError

logger = logging.getLogger(__name__)

# standardized arguments beyond this magnitude are evaluated in log-space
LOG_SPACE_THRESHOLD = 8.0


def log_survival(z: float) -> float:
    """log(1 - Phi(z))."""
    return float(log_ndtr(-z))


def log_diff_exp(la: float, lb: float) -> float:
    """log(exp(la) - exp(lb)) for la >= lb."""
    if la == -np.inf or la <= lb:
        return -np.inf
    return float(la + np.log1p(-np.exp(lb - la)))


def stable_survival_ratio(x1: float, x2: float) -> float:
    """
    (1 - Phi(x1)) / (1 - Phi(x2)) for x1 >= x2, through log-survival differences.

    Args:
        x1 (float): numerator argument
        x2 (float): denominator argument, at most x1

    Returns:
        ratio (float): value in [0, 1]. Saturates to 0 (with a warning) when the
            ratio is below the smallest positive double.
    """
    if x1 < x2:
        raise ValueError(f"need x1 >= x2, got x1={x1}, x2={x2}.")
    if x1 == x2:
        return 1.0
    log_ratio = log_survival(x1) - log_survival(x2)
    ratio = float(np.exp(log_ratio))
    if ratio == 0.0:
        logger.warning(
            "survival ratio saturated to 0 (log ratio %.6g) for x1=%.6g, x2=%.6g",
            log_ratio, x1, x2,
        )
    return ratio


def _mass(lo: float, hi: float) -> float:
    """P(lo <= Z <= hi), taken on the side of zero where both tails stay representable."""
    if lo >= 0.0:
        return float(ndtr(-lo) - ndtr(-hi))
    return float(ndtr(hi) - ndtr(lo))


def _log_mass(lo: float, hi: float) -> float:
    """log P(lo <= Z <= hi); upper-tail survivals from lo >= 0, lower-tail CDFs otherwise."""
    if lo >= 0.0:
        return log_diff_exp(log_survival(lo), log_survival(hi))
    return log_diff_exp(log_survival(-hi), log_survival(-lo))


def truncated_normal_sf(z: float, z_lower: float, z_upper: float) -> float:
    """
    Survival of a standard normal truncated to [z_lower, z_upper], evaluated at z:
    (Phi(z_upper) - Phi(z)) / (Phi(z_upper) - Phi(z_lower)).

    Numerator and denominator are each evaluated on their own side of zero, so
    a mass deep in either tail is never a difference of two numbers near 1.
    Moderate arguments use ndtr directly, larger ones log-space differences.

    Raises:
        PivotUnderflowError: if the denominator vanishes even in log-space.
    """
    z = min(max(z, z_lower), z_upper)
    if z_lower == -np.inf and z_upper == np.inf:
        return float(np.exp(log_survival(z)))

    finite = [abs(t) for t in (z_lower, z, z_upper) if np.isfinite(t)]
    if max(finite) <= LOG_SPACE_THRESHOLD:
        d = _mass(z_lower, z_upper)
        if not d > 0.0:
            raise PivotUnderflowError(z_lower, z_upper)
        return min(max(_mass(z, z_upper) / d, 0.0), 1.0)

    log_den = _log_mass(z_lower, z_upper)
    if log_den == -np.inf:
        raise PivotUnderflowError(z_lower, z_upper)
    log_num = _log_mass(z, z_upper)
    if log_num == -np.inf:
        return 0.0
    return min(max(float(np.exp(log_num - log_den)), 0.0), 1.0)
