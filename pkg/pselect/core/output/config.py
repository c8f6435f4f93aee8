from typing import Literal

from pydantic import Field

from pselect.core.base import BaseOutput


class PivotConfig(BaseOutput):
    sigma: float = Field(default=1.0, gt=0.0)
    c: float = Field(default=1.0, ge=1.0)
    gamma: float = Field(default=1e-4, gt=0.0)
    alpha: float = Field(default=0.1, gt=0.0, lt=1.0)


class PathConfig(BaseOutput):
    method: Literal["fs", "lar"] = Field(default="lar")
    k: int = Field(default=1, ge=1)
    tie_break: Literal["lowest_index"] = Field(default="lowest_index")
