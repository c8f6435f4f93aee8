import numpy as np
from pydantic import Field, model_validator

from pselect.core.base import BaseOutput


class MasterStatistic(BaseOutput):
    """(X^T X / n, X^T y / sqrt(n)); selection and pivots depend on y only through it."""
    gram: np.ndarray = Field(...)
    score: np.ndarray = Field(...)

    @model_validator(mode="after")
    def _check_gram(self):
        if not np.allclose(self.gram, self.gram.T, rtol=0.0, atol=1e-12):
            raise ValueError("gram must be symmetric.")
        return self
