from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from pselect.core.base import BaseOutput


class StepRecord(BaseOutput):
    step: int = Field(..., ge=1)
    entered: int = Field(..., ge=0)
    entry_sign: int = Field(...)
    active_set: Tuple[int, ...] = Field(...)
    signs: Tuple[int, ...] = Field(...)

    # LAR only
    knot: Optional[float] = Field(default=None)

    @model_validator(mode="after")
    def _check_step(self):
        if len(self.active_set) != self.step:
            raise ValueError(
                f"step {self.step} must hold {self.step} active variables, "
                f"got {len(self.active_set)}."
            )
        if len(self.signs) != len(self.active_set):
            raise ValueError("signs and active_set must have the same length.")
        if any(s not in (-1, 1) for s in self.signs) or self.entry_sign not in (-1, 1):
            raise ValueError("signs must be -1 or +1.")
        if self.active_set[-1] != self.entered:
            raise ValueError("the entered variable must close the active set.")
        return self


class SelectedModel(BaseOutput):
    """
    The decisions of a k-step path: nested active sets and their sign vectors.
    """
    method: Literal["fs", "lar"] = Field(...)
    steps: Tuple[StepRecord, ...] = Field(..., min_length=1)

    @model_validator(mode="after")
    def _check_nested(self):
        for prev, cur in zip(self.steps, self.steps[1:]):
            if cur.active_set[:-1] != prev.active_set:
                raise ValueError(
                    f"active sets are not nested between steps {prev.step} and {cur.step}."
                )
        return self

    @property
    def k(self) -> int:
        return len(self.steps)

    @property
    def entered(self) -> Tuple[int, ...]:
        return self.steps[-1].active_set

    @property
    def decisions(self) -> Tuple[Tuple[Tuple[int, ...], Tuple[int, ...], int], ...]:
        """(active set, signs, entry sign) per step; the selection identity of the model."""
        return tuple((s.active_set, s.signs, s.entry_sign) for s in self.steps)

    def step(self, step: int) -> StepRecord:
        return self.steps[step - 1]


class SelectionEvent(BaseOutput):
    """
    A selected model with the matrix Q defining its cone {y : Q y >= 0}.
    """
    model: SelectedModel = Field(...)
    Q: np.ndarray = Field(...)

    @field_validator("Q", mode="before")
    @classmethod
    def _check_Q(cls, value):
        Q = np.array(value, dtype=float, copy=True)
        if Q.ndim != 2:
            raise ValueError(f"Q must be 2-dimensional, got shape {Q.shape}.")
        Q.setflags(write=False)
        return Q

    @property
    def n(self) -> int:
        return int(self.Q.shape[1])

    def slack(self, y: np.ndarray) -> np.ndarray:
        return self.Q @ np.asarray(y, dtype=float)
