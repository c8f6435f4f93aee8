import logging
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import linalg

from pselect.core.errors import DatasetError, IllConditionedError
from pselect.core.output import (
    Contrast,
    Dataset,
    MasterStatistic,
    SelectedModel,
)

logger = logging.getLogger(__name__)

RCOND_MIN = 1e-10


def active_qr(X: np.ndarray, active_set: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Thin QR factorization of the active columns X_A.

    Args:
        X (np.ndarray): design matrix (n x d)
        active_set (Sequence[int]): ordered column indices A

    Returns:
        (Q, R): X_A = Q R with Q (n x |A|) orthonormal and R upper triangular.

    Raises:
        IllConditionedError: if the reciprocal condition of X_A^T X_A is below RCOND_MIN.
    """
    A = list(active_set)
    XA = np.asarray(X, dtype=float)[:, A]
    if XA.shape[1] > XA.shape[0]:
        raise IllConditionedError(A, 0.0)
    Q, R = linalg.qr(XA, mode="economic")
    # cond(X_A^T X_A) = cond(R)^2
    sv = linalg.svdvals(R)
    rcond = float((sv[-1] / sv[0]) ** 2) if sv[0] > 0 else 0.0
    if rcond < RCOND_MIN:
        raise IllConditionedError(A, rcond)
    return Q, R


def least_squares_coef(X: np.ndarray, active_set: Sequence[int], y: np.ndarray) -> np.ndarray:
    """(X_A^T X_A)^{-1} X_A^T y through the QR factors of X_A."""
    Q, R = active_qr(X, active_set)
    return linalg.solve_triangular(R, Q.T @ np.asarray(y, dtype=float))


def projection_contrast(
    ds: Dataset,
    active_set: Sequence[int],
    coordinate: int,
    orientation: int = 1,
) -> Contrast:
    """
    Contrast for the normalized coefficient of `coordinate` in the projection onto X_A.

    v = orientation * X_A (X_A^T X_A)^{-1} e_j / sqrt(e_j^T (X_A^T X_A)^{-1} e_j),
    so v^T y is the oriented, normalized least-squares coefficient and ||v|| = 1.

    Args:
        ds (Dataset): regression instance
        active_set (Sequence[int]): ordered variable indices A
        coordinate (int): variable index j, an element of A
        orientation (int): +1 or -1. Defaults to 1.

    Returns:
        contrast (Contrast): unit-norm contrast with its metadata.

    Raises:
        IllConditionedError: if X_A^T X_A is singular or ill-conditioned.
    """
    A = tuple(int(j) for j in active_set)
    if coordinate not in A:
        raise ValueError(f"coordinate {coordinate} is not in active set {list(A)}.")
    if orientation not in (-1, 1):
        raise ValueError("orientation must be -1 or +1.")

    Q, R = active_qr(ds.X, A)
    e = np.zeros(len(A))
    e[A.index(coordinate)] = 1.0
    r = linalg.solve_triangular(R, e, trans="T")
    v = orientation * (Q @ r) / np.linalg.norm(r)

    return Contrast(
        v=v,
        active_set=A,
        coordinate=int(coordinate),
        orientation=int(orientation),
        norm=float(np.linalg.norm(v)),
    )


def contrast_for_step(ds: Dataset, model: SelectedModel, step: int) -> Contrast:
    """
    Sign-oriented contrast for the variable entering at `step`.

    The orientation is the sign of that variable's least-squares coefficient on
    the step's active set, so small one-sided p-values mean an effect of the
    observed sign.
    """
    rec = model.step(step)
    return projection_contrast(ds, rec.active_set, rec.entered, rec.signs[-1])


def master_statistic(ds: Dataset) -> MasterStatistic:
    """
    Method for computing (X^T X / n, X^T y / sqrt(n)).
    """
    n = ds.n
    gram = ds.X.T @ ds.X / n
    gram = 0.5 * (gram + gram.T)
    score = ds.X.T @ ds.y / np.sqrt(n)
    return MasterStatistic(gram=gram, score=score)


def normalize_columns(ds: Dataset) -> Dataset:
    """Rescale every column of X to unit Euclidean norm."""
    norms = np.linalg.norm(ds.X, axis=0)
    return Dataset(X=ds.X / norms, y=ds.y)


def load_dataset(
    path: Union[str, Path],
    response: Union[str, int] = -1,
    header: Optional[bool] = None,
    normalize: bool = False,
) -> Dataset:
    """
    Read a dataset from CSV: one response column, the remaining columns predictors.

    Args:
        path (Union[str, Path]): csv file
        response (Union[str, int], optional): response column name, or its position
            (negative positions count from the end). Defaults to -1.
        header (Optional[bool], optional): whether the first row is a header;
            detected from the first row when None. Defaults to None.
        normalize (bool, optional): scale predictors to unit norm. Defaults to False.

    Returns:
        ds (Dataset): the parsed regression instance.

    Raises:
        DatasetError: unreadable file, non-numeric values or a missing response column.
    """
    try:
        raw = pd.read_csv(path, header=None, dtype=str, skipinitialspace=True)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DatasetError(f"cannot read {path}: {e}")

    if header is None:
        header = not pd.to_numeric(raw.iloc[0], errors="coerce").notna().all()

    if header:
        columns = [str(c).strip() for c in raw.iloc[0]]
        raw = raw.iloc[1:].reset_index(drop=True)
        raw.columns = columns
    else:
        raw.columns = [str(i) for i in range(raw.shape[1])]

    try:
        df = raw.apply(lambda col: pd.to_numeric(col.str.strip(), errors="raise"))
    except (ValueError, TypeError) as e:
        raise DatasetError(f"non-numeric value in {path}: {e}")

    name = _response_name(df, response)
    y = df[name].to_numpy(dtype=float)
    X = df.drop(columns=[name]).to_numpy(dtype=float)
    logger.debug("loaded %s: n=%d, d=%d, response=%s", path, X.shape[0], X.shape[1], name)

    ds = Dataset(X=X, y=y)
    return normalize_columns(ds) if normalize else ds


def _response_name(df: pd.DataFrame, response: Union[str, int]) -> str:
    columns = list(df.columns)
    if isinstance(response, str) and response in columns:
        return response
    try:
        pos = int(response)
    except (TypeError, ValueError):
        raise DatasetError(f"response column '{response}' not found in {columns}.")
    if not -len(columns) <= pos < len(columns):
        raise DatasetError(f"response column '{response}' not found in {columns}.")
    return columns[pos]
