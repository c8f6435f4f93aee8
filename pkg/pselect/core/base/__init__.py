from .base_output import BaseOutput
from .base_selector import BaseSelector, MEMBERSHIP_SLACK

__all__ = [
    'BaseOutput',
    'BaseSelector',
    'MEMBERSHIP_SLACK',
]
