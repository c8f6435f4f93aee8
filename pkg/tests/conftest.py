import numpy as np
import pytest

from pselect.core.output import Dataset, SelectedModel, SelectionEvent, StepRecord


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def toy():
    """Orthonormal two-variable instance with y = (2, 1)."""
    return Dataset(X=np.eye(2), y=np.array([2.0, 1.0]))


@pytest.fixture
def correlated(rng):
    """n=10, d=4 correlated design with a two-variable signal."""
    Z = rng.standard_normal((10, 4))
    X = Z + 0.5 * Z[:, [0]]
    y = X @ np.array([2.0, -1.5, 0.0, 0.0]) + rng.standard_normal(10)
    return Dataset(X=X, y=y)


def make_event(Q, n=None):
    """Wrap a bare constraint matrix in a one-step selection event."""
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    rec = StepRecord(step=1, entered=0, entry_sign=1, active_set=(0,), signs=(1,))
    return SelectionEvent(model=SelectedModel(method="fs", steps=(rec,)), Q=Q)


def normal_sf_ratio(x1, x2):
    """High-precision (1 - Phi(x1)) / (1 - Phi(x2))."""
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 50
    sf = lambda x: mpmath.erfc(mpmath.mpf(x) / mpmath.sqrt(2)) / 2
    return float(sf(x1) / sf(x2))
