import math

from pydantic import Field

from pselect.core.base import BaseOutput


class MomentStats(BaseOutput):
    mean_y: float = Field(...)
    s2: float = Field(..., ge=0.0)
    r3: float = Field(..., ge=0.0)

    # all responses equal
    degenerate: bool = Field(default=False)

    @property
    def s(self) -> float:
        return math.sqrt(self.s2)


DEFAULT_B = 1000
# resample count used once the draw at mu = 0 is vacuous
ESCALATED_B = 50_000


class BootstrapConfig(BaseOutput):
    B: int = Field(default=DEFAULT_B, ge=1)
    gamma: float = Field(default=1e-4, gt=0.0)
    c: float = Field(default=1.0, ge=1.0)
    seed: int = Field(default=0, ge=0, lt=2**64)

    escalated_B: int = Field(default=ESCALATED_B, ge=1)
    escalate: bool = Field(default=True)

    # mu-grid step of interval inversion, as a fraction of the contrast scale
    grid_fraction: float = Field(default=1.0 / 200.0, gt=0.0)

    def delta(self, n: int) -> float:
        """Padding delta_n = gamma * n^(-1/4)."""
        return self.gamma * n ** -0.25
