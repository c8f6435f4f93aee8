import logging
from typing import List, Optional

import numpy as np
from scipy import linalg

from pselect.core.base import BaseSelector
from pselect.core.errors import DegenerateKnotError, PathExhaustedError
from pselect.core.model import active_qr
from pselect.core.output import Dataset, PathConfig, SelectedModel, SelectionEvent, StepRecord

logger = logging.getLogger(__name__)

KNOT_TIE_TOL = 1e-12
_SIGNS = (1, -1)


class LeastAngleSelector(BaseSelector):
    """
    Least angle regression run for k steps.

    With active set A and entry signs s_A, an inactive variable j with sign s
    joins at the knot lambda(j, s) = c(j, s)^T y where
    c(j, s) = P_perp X_j / (s - X_j^T X_A (X_A^T X_A)^{-1} s_A).
    The cone asserts, per step, that the entering pair has the largest knot
    among the pairs joining below the previous knot, that successive knots
    decrease, and the signs of the least-squares coefficients on the active set.
    Pairs whose knot lies above the previous one are excluded from the race and
    the cone records that they do.

    Generic position is assumed: when some |X_j^T X_A (X_A^T X_A)^{-1} s_A| >= 1
    this is logged at debug level since the event may then be finer than the
    sequence of active sets and signs.
    """
    method = "lar"

    def select(self, ds: Dataset, cfg: PathConfig) -> SelectionEvent:
        """
        Run least angle regression and build its selection event.

        Args:
            ds (Dataset): regression instance
            cfg (PathConfig): step count and tie-break rule

        Returns:
            event (SelectionEvent): selected model (with knots) and its constraint matrix Q.

        Raises:
            PathExhaustedError: if no positive knot remains before step k.
            DegenerateKnotError: if two successive knots coincide.
            IllConditionedError: if an active Gram matrix is singular.
        """
        self._check_k(ds, cfg)
        X, y = ds.X, ds.y
        d = ds.d

        active: List[int] = []
        entry_signs: List[int] = []
        knots: List[float] = []
        rows: List[np.ndarray] = []
        steps: List[StepRecord] = []
        c_prev: Optional[np.ndarray] = None

        for step in range(1, cfg.k + 1):
            candidates = [j for j in range(d) if j not in active]
            if active:
                Qa, R = active_qr(X, active)
                Xt = X[:, candidates] - Qa @ (Qa.T @ X[:, candidates])
                w = Qa @ linalg.solve_triangular(R, np.asarray(entry_signs, float), trans="T")
                q = X[:, candidates].T @ w
            else:
                Xt = X[:, candidates]
                q = np.zeros(len(candidates))

            if np.any(np.abs(q) >= 1.0):
                logger.debug(
                    "step %d: |q_j| >= 1 for variables %s; the event may be a union of cones",
                    step, [j for j, qj in zip(candidates, q) if abs(qj) >= 1.0],
                )

            # directions c(j, s), column 2*i for s=+1 and 2*i+1 for s=-1
            C = np.empty((ds.n, 2 * len(candidates)))
            for t, s in enumerate(_SIGNS):
                C[:, t::2] = Xt / (s - q)
            lam = C.T @ y

            # a pair can only join below the previous knot
            admissible = lam < knots[-1] if knots else np.ones(lam.size, dtype=bool)
            if not np.all(admissible):
                logger.warning(
                    "step %d: %d candidate pairs lie above the previous knot and are excluded",
                    step, int((~admissible).sum()),
                )
            masked = np.where(admissible, lam, -np.inf)
            joining = np.maximum(masked[0::2], masked[1::2])
            if not np.any(np.isfinite(joining)):
                raise PathExhaustedError(step)

            pos = self._break_ties(step, candidates, joining)
            t_star = 2 * pos + (0 if masked[2 * pos] >= masked[2 * pos + 1] else 1)
            j_star, s_star = candidates[pos], _SIGNS[t_star % 2]
            knot = float(lam[t_star])

            if not knot > 0.0:
                raise PathExhaustedError(step)
            if knots and abs(knots[-1] - knot) <= KNOT_TIE_TOL * max(1.0, knots[-1]):
                raise DegenerateKnotError(step, knots + [knot])

            c_star = C[:, t_star]
            others = [t for t in range(C.shape[1]) if t // 2 != pos]
            for t in others:
                rows.append(c_star - C[:, t] if admissible[t] else C[:, t] - c_prev)
            if not others:
                rows.append(c_star)
            if abs(q[pos]) >= 1.0:
                # both signs of the entering variable can be positive
                t_alt = t_star ^ 1
                rows.append(c_star - C[:, t_alt] if admissible[t_alt] else C[:, t_alt] - c_prev)
            if c_prev is not None:
                rows.append(c_prev - c_star)
            c_prev = c_star

            active.append(j_star)
            entry_signs.append(s_star)
            knots.append(knot)

            Qa, R = active_qr(X, active)
            coef = linalg.solve_triangular(R, Qa.T @ y)
            signs = np.where(coef >= 0.0, 1, -1)
            rows.extend(signs[:, None] * linalg.solve_triangular(R, Qa.T))

            logger.debug("lar step %d: entered %d with sign %+d at knot %.6g", step, j_star, s_star, knot)
            steps.append(
                StepRecord(
                    step=step,
                    entered=j_star,
                    entry_sign=s_star,
                    active_set=tuple(active),
                    signs=tuple(int(s) for s in signs),
                    knot=knot,
                )
            )

        Q = np.vstack(rows) if rows else np.zeros((0, ds.n))
        ev = SelectionEvent(model=SelectedModel(method=self.method, steps=tuple(steps)), Q=Q)
        return self._verify(ev, y)


def lar_path(ds: Dataset, cfg: PathConfig) -> SelectionEvent:
    return LeastAngleSelector().select(ds, cfg)
