import numpy as np
from pydantic import Field, field_validator, model_validator

from pselect.core.base import BaseOutput
from pselect.core.errors import DatasetError


def _frozen_array(value, ndim: int, name: str) -> np.ndarray:
    arr = np.array(value, dtype=float, copy=True)
    if arr.ndim != ndim:
        raise DatasetError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}.")
    if not np.all(np.isfinite(arr)):
        raise DatasetError(f"{name} contains non-finite entries.")
    arr.setflags(write=False)
    return arr


class Dataset(BaseOutput):
    """
    A regression instance: fixed design X (n x d) and response y (length n).
    """
    X: np.ndarray = Field(...)
    y: np.ndarray = Field(...)

    @field_validator("X", mode="before")
    @classmethod
    def _check_X(cls, value):
        X = _frozen_array(value, 2, "X")
        n, d = X.shape
        if n < 2 or d < 1:
            raise DatasetError(f"X needs n >= 2 and d >= 1, got {X.shape}.")
        zero = np.flatnonzero(~np.any(X != 0.0, axis=0))
        if zero.size:
            raise DatasetError(f"columns {zero.tolist()} of X are identically zero.")
        return X

    @field_validator("y", mode="before")
    @classmethod
    def _check_y(cls, value):
        return _frozen_array(value, 1, "y")

    @model_validator(mode="after")
    def _check_shapes(self):
        if self.y.shape[0] != self.X.shape[0]:
            raise DatasetError(
                f"y has length {self.y.shape[0]} but X has {self.X.shape[0]} rows."
            )
        return self

    @property
    def n(self) -> int:
        return int(self.X.shape[0])

    @property
    def d(self) -> int:
        return int(self.X.shape[1])

    def with_response(self, y: np.ndarray) -> "Dataset":
        """Same design, new response."""
        return Dataset(X=self.X, y=y)
