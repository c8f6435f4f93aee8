from typing import Dict, Type

import numpy as np

from pselect.core.base import BaseSelector, MEMBERSHIP_SLACK
from pselect.core.output import Dataset, PathConfig, SelectionEvent
from pselect.selector.fs_selector import ForwardStepwiseSelector
from pselect.selector.lar_selector import LeastAngleSelector

SELECTORS: Dict[str, Type[BaseSelector]] = {
    "fs": ForwardStepwiseSelector,
    "lar": LeastAngleSelector,
}


def run_path(ds: Dataset, cfg: PathConfig) -> SelectionEvent:
    """Run the path method named by `cfg.method`."""
    return SELECTORS[cfg.method]().select(ds, cfg)


def check_membership(ev: SelectionEvent, y: np.ndarray) -> bool:
    """
    Whether y lies in the selection cone, up to MEMBERSHIP_SLACK.

    Raises:
        ValueError: if y does not match the number of columns of Q.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.shape[0] != ev.n:
        raise ValueError(f"y has shape {y.shape} but the event expects length {ev.n}.")
    slack = ev.slack(y)
    return bool(slack.size == 0 or slack.min() >= -MEMBERSHIP_SLACK)
