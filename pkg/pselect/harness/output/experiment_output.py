from typing import Any, Dict, List, Literal, Optional, Tuple

import pandas as pd
from pydantic import Field, model_validator

from pselect.core.base import BaseOutput
from pselect.inference.output import DEFAULT_B, ESCALATED_B

Experiment = Literal["null", "signal", "hetero", "highdim"]

DISTS = ("normal", "laplace", "uniform", "skew_normal")

# design drawn when no design seed is given; the repetition seed only drives the errors
REFERENCE_DESIGN_SEED = 0
# bootstrap resamples of the high-dimensional family, where B = 1000 leaves
# most step-1 windows nearly empty
HIGHDIM_B = ESCALATED_B


class ExperimentConfig(BaseOutput):
    """
    Settings of one experiment family. Fields left as None take the family's
    preset through the resolved properties below.
    """
    experiment: Experiment = Field(default="null")
    dists: Tuple[str, ...] = Field(default=DISTS, min_length=1)

    n: int = Field(default=50, ge=2)
    d: Optional[int] = Field(default=None, ge=1)
    k: Optional[int] = Field(default=None, ge=1)
    method: Literal["fs", "lar"] = Field(default="lar")

    # theta = X beta with beta's leading entries below, zero elsewhere
    signal: Optional[bool] = Field(default=None)
    beta: Tuple[float, ...] = Field(default=(-4.0, 4.0))

    sigma: float = Field(default=1.0, gt=0.0)
    c: float = Field(default=1.0, ge=1.0)
    gamma: float = Field(default=1e-4, gt=0.0)
    alpha: float = Field(default=0.1, gt=0.0, lt=1.0)
    B: Optional[int] = Field(default=None, ge=1)
    escalated_B: int = Field(default=ESCALATED_B, ge=1)
    intervals: Optional[bool] = Field(default=None)

    reps: int = Field(default=500, ge=1)
    seed: int = Field(default=0, ge=0)
    design_seed: Optional[int] = Field(default=None, ge=0)
    threads: Optional[int] = Field(default=None, ge=1)
    screen: bool = Field(default=False)

    @model_validator(mode="after")
    def _check_dists(self):
        bad = [f for f in self.dists if f not in DISTS]
        if bad:
            raise ValueError(f"unknown error distributions {bad}; choose from {list(DISTS)}.")
        if self.has_signal and len(self.beta) > self.dim:
            raise ValueError(f"beta has {len(self.beta)} entries but d={self.dim}.")
        if self.steps > self.dim:
            raise ValueError(f"k={self.steps} exceeds d={self.dim}.")
        return self

    @property
    def dim(self) -> int:
        if self.d is not None:
            return self.d
        return 1000 if self.experiment == "highdim" else 10

    @property
    def resamples(self) -> int:
        if self.B is not None:
            return self.B
        return HIGHDIM_B if self.experiment == "highdim" else DEFAULT_B

    @property
    def design(self) -> int:
        return REFERENCE_DESIGN_SEED if self.design_seed is None else self.design_seed

    @property
    def has_signal(self) -> bool:
        if self.signal is not None:
            return self.signal
        return self.experiment == "signal"

    @property
    def steps(self) -> int:
        if self.k is not None:
            return self.k
        return 3 if self.has_signal else 1

    @property
    def statistics(self) -> Tuple[str, ...]:
        # no single error variance exists under heteroskedastic errors
        if self.experiment == "hetero":
            return ("plugin", "bootstrap")
        return ("tg", "plugin", "bootstrap")

    @property
    def with_intervals(self) -> bool:
        return self.has_signal if self.intervals is None else self.intervals

    @property
    def support(self) -> Tuple[int, ...]:
        if not self.has_signal:
            return ()
        return tuple(j for j, b in enumerate(self.beta) if b != 0.0)


class ExperimentSummary(BaseOutput):
    """
    Per-repetition records of one (experiment, error distribution) run and
    their aggregates, one row per (step, statistic).
    """
    experiment: str = Field(...)
    family: str = Field(...)
    reps: int = Field(..., ge=0)

    pvalues: List[Dict[str, Any]] = Field(default_factory=list)
    intervals: List[Dict[str, Any]] = Field(default_factory=list)
    selections: List[Dict[str, Any]] = Field(default_factory=list)
    table: List[Dict[str, Any]] = Field(default_factory=list)

    escalations: int = Field(default=0, ge=0)
    failures: int = Field(default=0, ge=0)
    screened: bool = Field(default=False)

    @model_validator(mode="after")
    def _check_table(self):
        for row in self.table:
            for key in ("coverage", "power"):
                value = row.get(key)
                if value is not None and value == value and not 0.0 <= value <= 1.0:
                    raise ValueError(f"{key}={value} outside [0, 1].")
            width = row.get("median_width")
            if width is not None and width == width and width < 0.0:
                raise ValueError(f"negative median width {width}.")
        return self

    def frame(self, name: Literal["pvalues", "intervals", "selections", "table"]) -> pd.DataFrame:
        return pd.DataFrame(getattr(self, name))


class ManyMeansSummary(BaseOutput):
    d: int = Field(..., ge=2)
    m: int = Field(..., ge=1)
    reps: int = Field(..., ge=1)
    seed: int = Field(default=0, ge=0)

    pi: float = Field(..., gt=0.0, le=0.5)
    shift: float = Field(..., ge=0.0)
    capped: bool = Field(default=False)

    # rep, w1, w2, pivot
    records: List[Dict[str, Any]] = Field(default_factory=list)
    zero_fraction: float = Field(..., ge=0.0, le=1.0)
    ks: float = Field(..., ge=0.0, le=1.0)

    @property
    def pivots(self) -> List[float]:
        return [r["pivot"] for r in self.records]

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.records)
