import logging
from itertools import product

import numpy as np
import pytest
from scipy.stats import norm

from pselect.core.errors import DegenerateResponseError, EmptyAcceptanceError
from pselect.core.output import Contrast, PivotConfig
from pselect.core.streams import philox_stream
from pselect.inference import (
    BootstrapConfig,
    TruncationInterval,
    bootstrap_interval,
    bootstrap_pivot,
    draw_bootstrap_contrasts,
    moment_stats,
    plugin_interval,
    plugin_pivot,
    resample_contrasts,
    tg_pivot,
)


def _ti(a, b, vty, scale=1.0):
    return TruncationInterval(a=a, b=b, w=np.zeros(1), vty=vty, norm=1.0, scale=scale)


def test_moment_stats():
    ms = moment_stats(np.array([-1.0, 1.0]))
    assert (ms.mean_y, ms.s2, ms.r3) == (0.0, 1.0, 1.0)
    assert not ms.degenerate

    y = np.array([0.5, -2.0, 3.5, 1.0, 0.0])
    ms = moment_stats(y)
    ybar = sum(y) / len(y)
    assert ms.s2 == pytest.approx(sum((t - ybar) ** 2 for t in y) / len(y))
    assert ms.r3 == pytest.approx(sum(abs(t - ybar) ** 3 for t in y) / len(y))


def test_moment_stats_constant_response(caplog):
    ms = moment_stats(np.zeros(4))
    assert ms.degenerate and ms.s2 == 0.0
    assert "constant" in caplog.text
    with pytest.raises(DegenerateResponseError):
        plugin_pivot(_ti(1.0, np.inf, 2.0), 0.0, ms, PivotConfig())


def test_plugin_matches_known_sigma():
    # s_Y = 2, so c * s_Y equals sigma = 2
    ms = moment_stats(np.array([-2.0, 2.0]))
    ti = _ti(1.0, np.inf, 2.0)
    assert plugin_pivot(ti, 0.0, ms, PivotConfig(c=1.0)) == pytest.approx(
        tg_pivot(ti.with_sigma(2.0), 0.0), rel=1e-12
    )
    assert plugin_pivot(ti, 0.0, ms, PivotConfig(c=1.0)) == pytest.approx(
        norm.sf(1.0) / norm.sf(0.5), rel=1e-10
    )
    assert plugin_pivot(ti, 0.0, ms, PivotConfig(c=1.0)) == pytest.approx(0.514217, abs=1e-6)


def test_plugin_conservative_when_overestimating():
    ms = moment_stats(np.array([-1.5, 1.5]))
    lattice = np.linspace(0.0, 6.0, 7)
    for a in lattice:
        for b in lattice[lattice > a]:
            for x in np.linspace(a, b, 5)[1:-1]:
                ti = _ti(a, b, x)
                for c in (1.0, 1.5, 3.0):
                    assert plugin_pivot(ti, 0.0, ms, PivotConfig(c=c)) >= tg_pivot(ti, 0.0) - 1e-12


def test_plugin_interval_widens_with_c():
    ms = moment_stats(np.array([-1.0, 0.0, 1.0, 2.0]))
    ti = _ti(-np.inf, np.inf, 0.3)
    lo1, hi1 = plugin_interval(ti, ms, PivotConfig(c=1.0, alpha=0.1))
    lo2, hi2 = plugin_interval(ti, ms, PivotConfig(c=2.0, alpha=0.1))
    assert hi2 - lo2 == pytest.approx(2.0 * (hi1 - lo1), rel=1e-8)
    assert hi1 - lo1 == pytest.approx(2.0 * norm.ppf(0.95) * ms.s, rel=1e-8)


def test_resample_constant_response():
    out = resample_contrasts(np.full(5, 3.0), Contrast.from_vector(np.ones(5)), BootstrapConfig(B=50))
    np.testing.assert_array_equal(out, np.zeros(50))


def test_resample_distribution_n3():
    B = 30000
    out = resample_contrasts(
        np.array([0.0, 1.0, 2.0]), Contrast.from_vector([1.0, 0.0, 0.0]), BootstrapConfig(B=B, seed=7)
    )
    assert set(np.unique(out)) <= {-1.0, 0.0, 1.0}
    se = np.sqrt(2.0 / 9.0 / B)
    for value in (-1.0, 0.0, 1.0):
        assert np.mean(out == value) == pytest.approx(1.0 / 3.0, abs=4 * se)


def test_resample_is_seeded():
    y = np.array([0.3, -1.0, 2.2, 0.7, -0.4])
    c = Contrast.from_vector([1.0, -1.0, 0.0, 2.0, 0.5])
    cfg = BootstrapConfig(B=5000, seed=11)
    np.testing.assert_array_equal(resample_contrasts(y, c, cfg), resample_contrasts(y, c, cfg))
    a = resample_contrasts(y, c, cfg, rng=philox_stream(11, 1))
    b = resample_contrasts(y, c, cfg, rng=philox_stream(11, 2))
    assert not np.array_equal(a, b)


def test_bootstrap_pivot_padding():
    cfg = BootstrapConfig(gamma=1e-4)
    # nothing inside [a, b]: both windows empty
    assert bootstrap_pivot(_ti(100.0, np.inf, 100.0), 0.0, np.zeros(10), 16, cfg) == 1.0
    # every shifted contrast inside the numerator window
    assert bootstrap_pivot(_ti(-5.0, 5.0, -5.0), 0.0, np.linspace(-1, 1, 10), 16, cfg) == 1.0
    # none above v^T y while some inside [a, b]
    value = bootstrap_pivot(_ti(-5.0, 5.0, 4.0), 0.0, np.linspace(-1, 1, 10), 16, cfg)
    delta = cfg.delta(16)
    assert value == pytest.approx(delta / (1.0 + delta))


def test_bootstrap_pivot_exhaustive_n3():
    y = np.array([0.3, -1.2, 2.0])
    v = np.array([0.6, 0.0, -0.8])
    centered = y - y.mean()
    contrasts = np.array([centered[list(idx)] @ v for idx in product(range(3), repeat=3)])
    cfg = BootstrapConfig(c=1.2, gamma=1e-3)
    ti = _ti(-0.5, 1.5, 0.2)
    delta = cfg.delta(3)
    for mu in (-0.7, 0.13, 0.9):
        shifted = cfg.c * contrasts + mu
        num = np.mean((shifted >= ti.vty) & (shifted <= ti.b))
        den = np.mean((shifted >= ti.a) & (shifted <= ti.b))
        expected = (num + delta) / (den + delta)
        assert bootstrap_pivot(ti, mu, contrasts, 3, cfg) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("y,v", [
    ([0.3, -1.2, 2.0], [0.6, 0.0, -0.8]),
    ([1.1, -0.4, 0.25, 2.3], [0.5, -0.5, 0.5, 0.5]),
])
def test_bootstrap_monte_carlo_matches_enumeration(y, v):
    y, v = np.array(y), np.array(v)
    n, B = y.size, 30000
    centered = y - y.mean()
    exact = np.array([centered[list(idx)] @ v for idx in product(range(n), repeat=n)])
    drawn = resample_contrasts(y, Contrast.from_vector(v), BootstrapConfig(B=B, seed=13))

    cfg = BootstrapConfig(c=1.0, gamma=1e-4)
    ti = _ti(-0.4137, 1.7321, 0.2219)
    se = lambda p: np.sqrt(p * (1.0 - p) / B)
    for mu in (-0.3119, 0.4771):
        for lower in (ti.vty, ti.a):
            p = np.mean((exact + mu >= lower) & (exact + mu <= ti.b))
            freq = np.mean((drawn + mu >= lower) & (drawn + mu <= ti.b))
            assert abs(freq - p) <= 3 * se(p) + 1e-12
        delta = cfg.delta(n)
        num = np.mean((exact + mu >= ti.vty) & (exact + mu <= ti.b))
        den = np.mean((exact + mu >= ti.a) & (exact + mu <= ti.b))
        assert bootstrap_pivot(ti, mu, drawn, n, cfg) == pytest.approx((num + delta) / (den + delta), abs=0.05)


def test_bootstrap_untruncated_interval_is_quantile_band(rng):
    x = rng.standard_normal(2000)
    cfg = BootstrapConfig(c=1.0)
    ti = _ti(-np.inf, np.inf, 0.4)
    lo, hi = bootstrap_interval(ti, x, 50, cfg, alpha=0.1)
    assert lo == pytest.approx(0.4 - np.quantile(x, 0.95), abs=0.05)
    assert hi == pytest.approx(0.4 - np.quantile(x, 0.05), abs=0.05)


def test_bootstrap_interval_endpoints_accepted(rng):
    x = rng.standard_normal(1000) * 0.8
    cfg = BootstrapConfig(c=1.5)
    ti = _ti(0.2, np.inf, 1.1)
    alpha, step = 0.2, 0.01
    lo, hi = bootstrap_interval(ti, x, 40, cfg, alpha, step=step)
    assert lo <= hi
    for mu in (lo, hi):
        assert alpha / 2 <= bootstrap_pivot(ti, mu, x, 40, cfg) <= 1 - alpha / 2
    for mu in (lo - step, hi + step):
        value = bootstrap_pivot(ti, mu, x, 40, cfg)
        assert not alpha / 2 <= value <= 1 - alpha / 2


def test_bootstrap_interval_constant_response():
    with pytest.raises(EmptyAcceptanceError) as info:
        bootstrap_interval(_ti(0.0, np.inf, 1.0), np.zeros(100), 10, BootstrapConfig(), alpha=0.1)
    assert info.value.mu_grid.size == info.value.pivots.size > 0


def test_bootstrap_escalation(caplog):
    caplog.set_level(logging.DEBUG, logger="pselect")
    y = np.array([0.1, -0.1, 0.05, 0.0, -0.05])
    c = Contrast.from_vector(np.ones(5))
    ti = _ti(100.0, np.inf, 100.0)

    cfg = BootstrapConfig(B=50, escalated_B=200, seed=3)
    contrasts, escalated = draw_bootstrap_contrasts(ti, y, c, cfg)
    assert escalated and contrasts.size == 200
    assert "redrawing" in caplog.text

    contrasts, escalated = draw_bootstrap_contrasts(ti, y, c, cfg.model_copy(update={"escalate": False}))
    assert not escalated and contrasts.size == 50

    contrasts, escalated = draw_bootstrap_contrasts(_ti(-1.0, 1.0, 0.0), y, c, cfg)
    assert not escalated and contrasts.size == 50


def test_bootstrap_escalation_when_every_contrast_clears_vty():
    # |sum of 5 resampled values| <= 0.5, so every contrast sits in [vty, b]
    y = np.array([0.1, -0.1, 0.05, 0.0, -0.05])
    c = Contrast.from_vector(np.ones(5))
    ti = _ti(-1.0, 1.0, -0.6)
    cfg = BootstrapConfig(B=50, escalated_B=200, seed=3)
    assert bootstrap_pivot(ti, 0.0, resample_contrasts(y, c, cfg), 5, cfg) == 1.0

    contrasts, escalated = draw_bootstrap_contrasts(ti, y, c, cfg)
    assert escalated and contrasts.size == 200

    # a larger first draw is never redrawn
    contrasts, escalated = draw_bootstrap_contrasts(ti, y, c, cfg.model_copy(update={"B": 200}))
    assert not escalated and contrasts.size == 200


def test_bootstrap_pivot_reuses_one_sample():
    y = np.array([1.2, -0.3, 0.8, 2.5, -1.1, 0.4])
    c = Contrast.from_vector([0.5, 0.5, -0.5, 0.5, 0.0, 0.0])
    cfg = BootstrapConfig(B=800, seed=21)
    ti = _ti(0.1, 3.0, 0.9)
    shared = resample_contrasts(y, c, cfg)
    for mu in np.linspace(-2.0, 2.0, 9):
        fresh = resample_contrasts(y, c, cfg)
        assert bootstrap_pivot(ti, mu, shared, 6, cfg) == bootstrap_pivot(ti, mu, fresh, 6, cfg)
