from .output import DEFAULT_B, ESCALATED_B, BootstrapConfig, MomentStats, PivotResult, TruncationInterval
from .tail import stable_survival_ratio, truncated_normal_sf
from .truncated import invert_interval, one_sided_pvalue, tg_pivot, truncation_bounds
from .sigma_free import (
    bootstrap_interval,
    bootstrap_pivot,
    draw_bootstrap_contrasts,
    moment_stats,
    plugin_interval,
    plugin_pivot,
    resample_contrasts,
)
from .steps import infer_step

__all__ = [
    'DEFAULT_B',
    'ESCALATED_B',
    'BootstrapConfig',
    'MomentStats',
    'PivotResult',
    'TruncationInterval',
    'stable_survival_ratio',
    'truncated_normal_sf',
    'invert_interval',
    'one_sided_pvalue',
    'tg_pivot',
    'truncation_bounds',
    'bootstrap_interval',
    'bootstrap_pivot',
    'draw_bootstrap_contrasts',
    'moment_stats',
    'plugin_interval',
    'plugin_pivot',
    'resample_contrasts',
    'infer_step',
]
