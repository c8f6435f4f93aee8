import numpy as np
import pytest

from pselect.core.base import BaseSelector
from pselect.core.errors import PathExhaustedError, SelectiveInferenceError
from pselect.core.output import Dataset, PathConfig
from pselect.selector import check_membership, fs_path, lar_path, run_path


def _fs_rows(d, k):
    return sum(2 * (d - l) + l for l in range(1, k + 1))


def _orthonormal(rng, n, d):
    Q, _ = np.linalg.qr(rng.standard_normal((n, d)))
    return Q


def test_fs_toy_event(toy):
    ev = fs_path(toy, PathConfig(method="fs", k=1))
    rec = ev.model.step(1)
    assert rec.entered == 0 and rec.entry_sign == 1
    np.testing.assert_allclose(ev.Q[:2], [[1.0, -1.0], [1.0, 1.0]], atol=1e-12)
    np.testing.assert_allclose(ev.slack(toy.y)[:2], [1.0, 3.0], atol=1e-12)
    assert check_membership(ev, toy.y)


def test_fs_step_one_argmax(rng):
    X = rng.standard_normal((15, 6))
    ds = Dataset(X=X, y=rng.standard_normal(15))
    ev = fs_path(ds, PathConfig(method="fs", k=1))
    crit = [abs(X[:, j] @ ds.y) / (X[:, j] @ X[:, j]) for j in range(6)]
    assert ev.model.entered == (int(np.argmax(crit)),)


def test_fs_matches_refit_oracle(correlated):
    X, y = correlated.X, correlated.y
    ev = fs_path(correlated, PathConfig(method="fs", k=3))

    active = []
    for _ in range(3):
        if active:
            P = X[:, active] @ np.linalg.pinv(X[:, active])
            Xt, r = X - P @ X, y - P @ y
        else:
            Xt, r = X, y
        crit = {j: abs(Xt[:, j] @ r) / (Xt[:, j] @ Xt[:, j]) for j in range(X.shape[1]) if j not in active}
        active.append(max(crit, key=crit.get))
    assert ev.model.entered == tuple(active)

    for rec in ev.model.steps:
        coef = np.linalg.lstsq(X[:, list(rec.active_set)], y, rcond=None)[0]
        assert rec.signs == tuple(int(s) for s in np.sign(coef))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_fs_row_count(correlated, k):
    ev = fs_path(correlated, PathConfig(method="fs", k=k))
    assert ev.Q.shape == (_fs_rows(correlated.d, k), correlated.n)


@pytest.mark.parametrize("method", ["fs", "lar"])
def test_paths_are_nested(correlated, method):
    ev = run_path(correlated, PathConfig(method=method, k=3))
    for prev, cur in zip(ev.model.steps, ev.model.steps[1:]):
        assert set(prev.active_set) < set(cur.active_set)
    assert check_membership(ev, correlated.y)


def test_lar_matches_fs_on_orthonormal_first_step(rng):
    X = _orthonormal(rng, 12, 4)
    ds = Dataset(X=X, y=rng.standard_normal(12))
    fs = fs_path(ds, PathConfig(method="fs", k=1))
    lar = lar_path(ds, PathConfig(method="lar", k=1))
    assert fs.model.decisions == lar.model.decisions
    np.testing.assert_allclose(fs.Q, lar.Q, atol=1e-12)


def test_lar_orthonormal_order_is_inner_product_ranking(rng):
    X = _orthonormal(rng, 20, 5)
    y = rng.standard_normal(20)
    ev = lar_path(Dataset(X=X, y=y), PathConfig(method="lar", k=5))
    ranking = tuple(int(j) for j in np.argsort(-np.abs(X.T @ y)))
    assert ev.model.entered == ranking
    knots = [s.knot for s in ev.model.steps]
    np.testing.assert_allclose(knots, np.sort(np.abs(X.T @ y))[::-1], rtol=1e-10)


def test_lar_two_variable_knots(rng):
    X = np.column_stack([rng.standard_normal(8), rng.standard_normal(8)])
    X[:, 1] += 0.6 * X[:, 0]
    X /= np.linalg.norm(X, axis=0)
    y = rng.standard_normal(8)
    ev = lar_path(Dataset(X=X, y=y), PathConfig(method="lar", k=2))

    # first knot: largest |X_j^T y|; second: where the other correlation catches up
    c = X.T @ y
    j1 = int(np.argmax(np.abs(c)))
    j2 = 1 - j1
    s1 = np.sign(c[j1])
    rho = X[:, j1] @ X[:, j2]
    r = y - X[:, j1] * c[j1]
    u = X[:, j2] - rho * X[:, j1]
    second = max(u @ r / (s - rho * s1) for s in (1.0, -1.0))

    knots = [s.knot for s in ev.model.steps]
    assert ev.model.entered == (j1, j2)
    assert knots[0] == pytest.approx(abs(c[j1]), rel=1e-10)
    assert knots[1] == pytest.approx(second, rel=1e-10)


def test_lar_knots_match_sklearn(correlated):
    sklearn = pytest.importorskip("sklearn.linear_model")
    alphas, active, _ = sklearn.lars_path(correlated.X, correlated.y, method="lar", max_iter=3)
    ev = lar_path(correlated, PathConfig(method="lar", k=3))
    knots = [s.knot for s in ev.model.steps]
    np.testing.assert_allclose(knots, alphas[:3] * correlated.n, rtol=1e-8)
    assert list(ev.model.entered) == [int(j) for j in active[:3]]


def test_membership_of_generating_and_flipped_response(correlated):
    ev = fs_path(correlated, PathConfig(method="fs", k=1))
    assert check_membership(ev, correlated.y)
    assert not check_membership(ev, -correlated.y)
    with pytest.raises(ValueError):
        check_membership(ev, np.ones(3))


@pytest.mark.parametrize("method", ["fs", "lar"])
def test_membership_agrees_with_rerun(rng, method):
    # LAR on orthonormal columns stays in generic position for every y
    X = rng.standard_normal((8, 3)) if method == "fs" else _orthonormal(rng, 8, 3)
    ds = Dataset(X=X, y=rng.standard_normal(8))
    cfg = PathConfig(method=method, k=2)
    ev = run_path(ds, cfg)
    for _ in range(1000):
        y = rng.standard_normal(8)
        same = run_path(ds.with_response(y), cfg).model.decisions == ev.model.decisions
        assert check_membership(ev, y) == same


@pytest.mark.parametrize("method", ["fs", "lar"])
def test_scale_equivariance(correlated, method):
    cfg = PathConfig(method=method, k=3)
    ev = run_path(correlated, cfg)
    for lam in (1e-3, 0.5, 7.0):
        assert run_path(correlated.with_response(lam * correlated.y), cfg).model.decisions == ev.model.decisions


def test_k_larger_than_d(toy):
    with pytest.raises(SelectiveInferenceError):
        fs_path(toy, PathConfig(method="fs", k=3))


def test_fs_path_exhausted():
    X = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    ds = Dataset(X=X, y=np.array([1.0, 0.0, 0.0]))
    with pytest.raises(PathExhaustedError):
        fs_path(ds, PathConfig(method="fs", k=2))


def test_tie_break_picks_lowest_index(caplog):
    ds = Dataset(X=np.eye(3), y=np.array([1.0, 1.0, 0.5]))
    ev = fs_path(ds, PathConfig(method="fs", k=1))
    assert ev.model.entered == (0,)
    assert "tie" in caplog.text


def test_to_frame(correlated):
    ev = lar_path(correlated, PathConfig(method="lar", k=2))
    df = BaseSelector.to_frame(ev)
    assert list(df["step"]) == [1, 2]
    assert df["knot"].is_monotonic_decreasing
