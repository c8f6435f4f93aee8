from typing import Optional, Sequence

import numpy as np


class SelectiveInferenceError(ValueError):
    """Root of every error raised by the selection and inference numerics."""
    pass


class DatasetError(SelectiveInferenceError):
    """Raised when a dataset cannot be parsed or violates its invariants."""
    pass


class IllConditionedError(SelectiveInferenceError):
    """Raised when the Gram matrix of an active set is singular or nearly so."""

    def __init__(self, active_set: Sequence[int], rcond: float):
        self.active_set = tuple(int(j) for j in active_set)
        self.rcond = float(rcond)
        super().__init__(
            f"X_A^T X_A is ill-conditioned for active set {list(self.active_set)} "
            f"(reciprocal condition {self.rcond:.3e})."
        )


class PathExhaustedError(SelectiveInferenceError):
    """Raised when the residual vanishes before the requested number of steps."""

    def __init__(self, step: int):
        self.step = step
        super().__init__(f"path exhausted: residual is zero before step {step}.")


class DegenerateKnotError(SelectiveInferenceError):
    """Raised when two successive LAR knots coincide."""

    def __init__(self, step: int, knots: Sequence[float]):
        self.step = step
        self.knots = tuple(float(k) for k in knots)
        super().__init__(
            f"repeated LAR knot at step {step}: {self.knots[-2:]} (non-generic data)."
        )


class NotInSelectionEventError(SelectiveInferenceError):
    """Raised when a response vector lies outside the selection cone."""

    def __init__(self, min_slack: float):
        self.min_slack = float(min_slack)
        super().__init__(
            f"y is outside the selection event (min (Q y)_i = {self.min_slack:.3e})."
        )


class InconsistentEventError(SelectiveInferenceError):
    """Raised when the contrast carries no truncation but a constraint is violated."""
    pass


class DegenerateIntervalError(SelectiveInferenceError):
    """Raised when the truncation interval collapses to a point."""

    def __init__(self, a: float, b: float):
        self.a = float(a)
        self.b = float(b)
        super().__init__(f"degenerate truncation interval [{self.a}, {self.b}].")


class PivotUnderflowError(SelectiveInferenceError):
    """Raised when the pivot denominator underflows even in log-space."""

    def __init__(self, z_lower: float, z_upper: float):
        self.z_lower = float(z_lower)
        self.z_upper = float(z_upper)
        super().__init__(
            "pivot denominator underflow for standardized endpoints "
            f"({self.z_lower}, {self.z_upper})."
        )


class BracketExpansionError(SelectiveInferenceError):
    """Raised when the interval inversion bracket grows past its limit."""

    def __init__(self, limit: float):
        self.limit = float(limit)
        super().__init__(f"bracket expansion exceeded {self.limit:.3e} (pathological truncation).")


class DegenerateResponseError(SelectiveInferenceError):
    """Raised when the response has zero sample variance."""
    pass


class EmptyAcceptanceError(SelectiveInferenceError):
    """Raised when no trial mean is accepted by the bootstrap pivot."""

    def __init__(
        self,
        mu_grid: np.ndarray,
        pivots: np.ndarray,
        message: Optional[str] = None,
    ):
        self.mu_grid = np.asarray(mu_grid)
        self.pivots = np.asarray(pivots)
        super().__init__(
            message or f"empty acceptance set over {self.mu_grid.size} trial means."
        )
