from .fs_selector import ForwardStepwiseSelector, fs_path
from .lar_selector import LeastAngleSelector, lar_path
from .event import SELECTORS, check_membership, run_path

__all__ = [
    'ForwardStepwiseSelector',
    'LeastAngleSelector',
    'fs_path',
    'lar_path',
    'SELECTORS',
    'check_membership',
    'run_path',
]
