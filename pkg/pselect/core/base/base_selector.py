from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Sequence

import numpy as np
import pandas as pd

from pselect.core.errors import NotInSelectionEventError, SelectiveInferenceError

if TYPE_CHECKING:
    from pselect.core.output import Dataset, PathConfig, SelectionEvent

logger = logging.getLogger(__name__)

MEMBERSHIP_SLACK = 1e-9
TIE_TOL = 1e-12


class BaseSelector():
    """
    Abstract class for sequential path selectors.
    """
    method: str = ""

    def select(self, ds: Dataset, cfg: PathConfig) -> SelectionEvent:
        raise NotImplementedError

    def _check_k(self, ds: Dataset, cfg: PathConfig) -> None:
        """
        Check the step count is admissible for the design.

        Raises:
            SelectiveInferenceError: if k exceeds the number of predictors.
        """
        if cfg.k > ds.d:
            raise SelectiveInferenceError(
                f"{self.method} adds one variable per step: k={cfg.k} exceeds d={ds.d}."
            )

    @staticmethod
    def _break_ties(step: int, candidates: Sequence[int], score: np.ndarray) -> int:
        """Position of the largest score; near-ties go to the lowest variable index."""
        top = float(score.max())
        tied = np.flatnonzero(score >= top - TIE_TOL * max(1.0, abs(top)))
        if tied.size > 1:
            logger.warning(
                "step %d: entry tie between variables %s, choosing the lowest index",
                step, [candidates[i] for i in tied],
            )
        return int(tied[0])

    @staticmethod
    def _verify(ev: SelectionEvent, y: np.ndarray) -> SelectionEvent:
        """Every row of Q must be satisfied by the generating response."""
        slack = ev.slack(y)
        if slack.size and slack.min() < -MEMBERSHIP_SLACK:
            raise NotInSelectionEventError(float(slack.min()))
        return ev

    @staticmethod
    def to_frame(ev: SelectionEvent) -> pd.DataFrame:
        """
        Format the path decisions as one row per step.

        Args:
            ev (SelectionEvent): selection event of a finished path.

        Returns:
            df (pd.DataFrame): step, entered, entry_sign, active_set, signs, knot.
        """
        rows = [
            {
                "step": s.step,
                "entered": s.entered,
                "entry_sign": s.entry_sign,
                "active_set": " ".join(str(j) for j in s.active_set),
                "signs": " ".join(f"{v:+d}" for v in s.signs),
                "knot": s.knot,
            }
            for s in ev.model.steps
        ]
        return pd.DataFrame(rows)
