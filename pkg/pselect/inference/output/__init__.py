from .truncation_output import TruncationInterval, PivotResult
from .bootstrap_output import MomentStats, BootstrapConfig, DEFAULT_B, ESCALATED_B

__all__ = [
    'TruncationInterval',
    'PivotResult',
    'MomentStats',
    'BootstrapConfig',
    'DEFAULT_B',
    'ESCALATED_B',
]
