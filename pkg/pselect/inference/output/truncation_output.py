import numpy as np
from pydantic import Field, field_validator, model_validator

from pselect.core.base import BaseOutput


class TruncationInterval(BaseOutput):
    """
    The interval [a, b] of contrast values that keep y in its selection cone,
    with the observed value v^T y and the Gaussian scale sigma * ||v||.
    """
    a: float = Field(...)
    b: float = Field(...)
    w: np.ndarray = Field(...)
    vty: float = Field(...)
    norm: float = Field(default=1.0, gt=0.0)
    scale: float = Field(default=1.0, gt=0.0)

    @field_validator("w", mode="before")
    @classmethod
    def _check_w(cls, value):
        w = np.array(value, dtype=float, copy=True)
        w.setflags(write=False)
        return w

    @model_validator(mode="after")
    def _check_order(self):
        if not self.a <= self.vty <= self.b:
            raise ValueError(f"need a <= v^T y <= b, got ({self.a}, {self.vty}, {self.b}).")
        return self

    def with_scale(self, scale: float) -> "TruncationInterval":
        return self.model_copy(update={"scale": float(scale)})

    def with_sigma(self, sigma: float) -> "TruncationInterval":
        """Scale sigma * ||v||."""
        return self.with_scale(float(sigma) * self.norm)


class PivotResult(BaseOutput):
    pivot: float = Field(..., ge=0.0, le=1.0)
    one_sided_p: float = Field(..., ge=0.0, le=1.0)
    two_sided_p: float = Field(..., ge=0.0, le=1.0)

    @classmethod
    def from_pivot(cls, pivot: float) -> "PivotResult":
        """One-sided p-value is the pivot at mu = 0; two-sided is 2 min(T, 1 - T)."""
        pivot = float(min(max(pivot, 0.0), 1.0))
        return cls(pivot=pivot, one_sided_p=pivot, two_sided_p=2.0 * min(pivot, 1.0 - pivot))
