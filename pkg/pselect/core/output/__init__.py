from .dataset import Dataset
from .selection import StepRecord, SelectedModel, SelectionEvent
from .contrast import Contrast
from .master import MasterStatistic
from .config import PivotConfig, PathConfig

__all__ = [
    'Dataset',
    'StepRecord',
    'SelectedModel',
    'SelectionEvent',
    'Contrast',
    'MasterStatistic',
    'PivotConfig',
    'PathConfig',
]
