import math
from typing import ClassVar, Literal, Optional, Tuple

from pydantic import Field, model_validator

from pselect.core.base import BaseOutput

ErrorFamily = Literal["normal", "laplace", "uniform", "skew_normal", "mixture3"]


class ErrorModel(BaseOutput):
    """
    Centered error law scaled to a target variance. With `hetero`, row i is
    further scaled so its variance is variance * 3 ||x_i||^2.
    """
    FAMILIES: ClassVar[Tuple[str, ...]] = ("normal", "laplace", "uniform", "skew_normal", "mixture3")

    family: ErrorFamily = Field(default="normal")
    variance: float = Field(default=1.0, gt=0.0)
    hetero: bool = Field(default=False)

    # skew_normal
    shape: float = Field(default=5.0)

    # mixture3: pi N(-shift, 1) + (1 - 2 pi) N(0, 1) + pi N(shift, 1)
    mixture_pi: Optional[float] = Field(default=None, ge=0.0, le=0.5)
    mixture_shift: Optional[float] = Field(default=None, ge=0.0)

    @model_validator(mode="after")
    def _check_mixture(self):
        if self.family == "mixture3" and (self.mixture_pi is None or self.mixture_shift is None):
            raise ValueError("mixture3 needs mixture_pi and mixture_shift.")
        return self

    @classmethod
    def keys(cls) -> Tuple[str, ...]:
        return cls.FAMILIES

    @property
    def sd(self) -> float:
        return math.sqrt(self.variance)


class DesignSpec(BaseOutput):
    """
    Fixed design recipe: each column is, with equal probability, i.i.d. N(0, 1),
    Bern(0.5) or SN(0, 1, 5).
    """
    COLUMN_LAWS: ClassVar[Tuple[str, ...]] = ("normal", "bernoulli", "skew_normal")

    n: int = Field(default=50, ge=2)
    d: int = Field(default=10, ge=1)
    unit_norm: bool = Field(default=True)
    seed: int = Field(default=0, ge=0)
