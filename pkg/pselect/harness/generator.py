import logging
from typing import Optional, Tuple, Union

import numpy as np
from scipy import stats

from pselect.core.streams import philox_stream
from pselect.harness.output import DesignSpec, ErrorModel

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.Generator]


def repetition_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent stream for one repetition, keyed by e.g. (distribution, rep)."""
    return philox_stream(seed, *key)


def _as_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return philox_stream(seed)


def gen_design(
    spec: DesignSpec,
    return_families: bool = False,
) -> Union[np.ndarray, Tuple[np.ndarray, Tuple[str, ...]]]:
    """
    Draw the fixed design matrix.

    Each column is filled, with equal probability, with i.i.d. N(0, 1),
    Bern(0.5) or SN(0, 1, 5) entries, then optionally scaled to unit norm.

    Args:
        spec (DesignSpec): size, unit-norm flag and seed
        return_families (bool, optional): also return the law of each column. Defaults to False.

    Returns:
        X (np.ndarray): n x d design, or (X, families) when return_families.
    """
    rng = philox_stream(spec.seed)
    laws = rng.integers(0, len(DesignSpec.COLUMN_LAWS), size=spec.d)
    X = np.empty((spec.n, spec.d))
    for j, law in enumerate(laws):
        col = _draw_column(DesignSpec.COLUMN_LAWS[law], spec.n, rng)
        # an all-zero Bernoulli column cannot be normalized
        while not np.any(col):
            col = _draw_column(DesignSpec.COLUMN_LAWS[law], spec.n, rng)
        X[:, j] = col

    if spec.unit_norm:
        X /= np.linalg.norm(X, axis=0)

    logger.debug("design %dx%d drawn with seed %d", spec.n, spec.d, spec.seed)
    if return_families:
        return X, tuple(DesignSpec.COLUMN_LAWS[law] for law in laws)
    return X


def _draw_column(law: str, n: int, rng: np.random.Generator) -> np.ndarray:
    if law == "normal":
        return rng.standard_normal(n)
    if law == "bernoulli":
        return rng.binomial(1, 0.5, size=n).astype(float)
    return stats.skewnorm.rvs(5.0, size=n, random_state=rng)


def gen_errors(
    model: ErrorModel,
    n: int,
    seed: SeedLike,
    X: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Draw n errors with mean 0 and variance model.variance.

    Args:
        model (ErrorModel): error law
        n (int): number of draws
        seed (SeedLike): seed or generator to draw from
        X (Optional[np.ndarray], optional): design rows, required when model.hetero.

    Returns:
        errors (np.ndarray): length-n vector.
    """
    rng = _as_rng(seed)
    unit = _unit_errors(model, n, rng)
    errors = model.sd * unit

    if model.hetero:
        if X is None or X.shape[0] != n:
            raise ValueError("heteroskedastic errors need the n design rows.")
        errors *= np.sqrt(3.0) * np.linalg.norm(X, axis=1)
    return errors


def _unit_errors(model: ErrorModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """Mean 0, variance 1 draws from the model's family."""
    if model.family == "normal":
        return rng.standard_normal(n)
    if model.family == "laplace":
        return rng.laplace(0.0, 1.0 / np.sqrt(2.0), size=n)
    if model.family == "uniform":
        return rng.uniform(-np.sqrt(3.0), np.sqrt(3.0), size=n)
    if model.family == "skew_normal":
        law = stats.skewnorm(model.shape)
        return (law.rvs(size=n, random_state=rng) - law.mean()) / law.std()

    pi, shift = model.mixture_pi, model.mixture_shift
    component = rng.choice(3, size=n, p=[pi, 1.0 - 2.0 * pi, pi])
    draws = rng.standard_normal(n) + shift * (component - 1)
    return draws / np.sqrt(1.0 + 2.0 * pi * shift ** 2)
