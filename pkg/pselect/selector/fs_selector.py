import logging
from typing import List

import numpy as np
from scipy import linalg

from pselect.core.base import BaseSelector
from pselect.core.errors import PathExhaustedError
from pselect.core.model import active_qr
from pselect.core.output import Dataset, PathConfig, SelectedModel, SelectionEvent, StepRecord

logger = logging.getLogger(__name__)

# columns lying (numerically) in span(X_A) can no longer enter
SPAN_TOL = 1e-12


class ForwardStepwiseSelector(BaseSelector):
    """
    Forward stepwise regression run for k steps, conditioning on the sign of
    every active least-squares coefficient at every step.

    Per step l the cone gains 2(d-l) entry rows built from the projected columns
    P_perp X_j / ||P_perp X_j||^2 and l sign rows diag(s_l) (X_A^T X_A)^{-1} X_A^T.
    """
    method = "fs"

    def select(self, ds: Dataset, cfg: PathConfig) -> SelectionEvent:
        """
        Run forward stepwise and build its selection event.

        Args:
            ds (Dataset): regression instance
            cfg (PathConfig): step count and tie-break rule

        Returns:
            event (SelectionEvent): selected model and its constraint matrix Q.

        Raises:
            PathExhaustedError: if the residual vanishes before step k.
            IllConditionedError: if an active Gram matrix is singular.
        """
        self._check_k(ds, cfg)
        X, y = ds.X, ds.y
        d = ds.d

        active: List[int] = []
        rows: List[np.ndarray] = []
        steps: List[StepRecord] = []

        for step in range(1, cfg.k + 1):
            if active:
                Qa, _ = active_qr(X, active)
                Xt = X - Qa @ (Qa.T @ X)
                r = y - Qa @ (Qa.T @ y)
            else:
                Xt, r = X, y

            if not np.any(r):
                raise PathExhaustedError(step)

            candidates = [j for j in range(d) if j not in active]
            col_sq = np.sum(Xt[:, candidates] ** 2, axis=0)
            orig_sq = np.sum(X[:, candidates] ** 2, axis=0)
            eligible = col_sq > SPAN_TOL * orig_sq
            if not np.all(eligible):
                logger.debug(
                    "step %d: columns %s lie in span of the active set",
                    step, [j for j, e in zip(candidates, eligible) if not e],
                )
            candidates = [j for j, e in zip(candidates, eligible) if e]
            col_sq = col_sq[eligible]

            # coefficient of the residual regressed on each projected column
            U = Xt[:, candidates] / col_sq
            crit = U.T @ r
            if not np.any(np.abs(crit) > 0):
                raise PathExhaustedError(step)

            pos = self._break_ties(step, candidates, np.abs(crit))
            j_star = candidates[pos]
            s_star = 1 if crit[pos] > 0 else -1
            u_star = s_star * U[:, pos]

            for i, j in enumerate(candidates):
                if i == pos:
                    continue
                rows.append(u_star - U[:, i])
                rows.append(u_star + U[:, i])

            active.append(j_star)
            Qa, R = active_qr(X, active)
            coef = linalg.solve_triangular(R, Qa.T @ y)
            signs = np.where(coef >= 0.0, 1, -1)
            rows.extend(signs[:, None] * linalg.solve_triangular(R, Qa.T))

            logger.debug("fs step %d: entered %d with sign %+d", step, j_star, s_star)
            steps.append(
                StepRecord(
                    step=step,
                    entered=j_star,
                    entry_sign=s_star,
                    active_set=tuple(active),
                    signs=tuple(int(s) for s in signs),
                )
            )

        Q = np.vstack(rows) if rows else np.zeros((0, ds.n))
        ev = SelectionEvent(model=SelectedModel(method=self.method, steps=tuple(steps)), Q=Q)
        return self._verify(ev, y)


def fs_path(ds: Dataset, cfg: PathConfig) -> SelectionEvent:
    return ForwardStepwiseSelector().select(ds, cfg)
