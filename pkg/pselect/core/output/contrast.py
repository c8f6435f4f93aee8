from typing import Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from pselect.core.base import BaseOutput


class Contrast(BaseOutput):
    """
    Linear contrast v with the metadata of the projection coefficient it targets.
    """
    v: np.ndarray = Field(...)
    active_set: Tuple[int, ...] = Field(...)
    coordinate: int = Field(...)
    orientation: int = Field(default=1)
    norm: float = Field(..., gt=0.0)

    @field_validator("v", mode="before")
    @classmethod
    def _check_v(cls, value):
        v = np.array(value, dtype=float, copy=True)
        if v.ndim != 1:
            raise ValueError("v must be a vector.")
        v.setflags(write=False)
        return v

    @model_validator(mode="after")
    def _check_meta(self):
        if self.orientation not in (-1, 1):
            raise ValueError("orientation must be -1 or +1.")
        if self.active_set and self.coordinate not in self.active_set:
            raise ValueError(f"coordinate {self.coordinate} is not in {self.active_set}.")
        return self

    @classmethod
    def from_vector(cls, v: np.ndarray) -> "Contrast":
        """Wrap an arbitrary contrast vector without projection metadata."""
        v = np.asarray(v, dtype=float)
        return cls(v=v, active_set=(), coordinate=-1, norm=float(np.linalg.norm(v)))

    def scale(self, sigma: float) -> float:
        """sigma * ||v||."""
        return float(sigma) * self.norm
