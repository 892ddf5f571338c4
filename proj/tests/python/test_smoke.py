import math

import pytest

import isodelay as iso


def test_homogeneous_bound():
    v = iso.homogeneous_delay_bound(iso.EpidemicParams(0.075, 0.1, 0.8), 3.0)
    assert v.kind == iso.VerdictKind.STABLE_UP_TO
    assert v.t_max == pytest.approx(math.log(1.2) / 0.1, rel=1e-12)
    assert iso.homogeneous_delay_bound(iso.EpidemicParams(0.075, 0.1, 0.6), 3.0).t_max is None


def test_heterogeneous_bound_and_max_cv():
    stats = iso.DegreeStats.from_moments(4.0, 2.0)
    v = iso.heterogeneous_delay_bound(iso.EpidemicParams(0.075, 0.1, 0.8), stats)
    assert v.t_max == pytest.approx(math.log(0.3 / 0.275) / 0.1, rel=1e-12)
    assert iso.max_cv(3.0, 0.8) == pytest.approx(math.sqrt(2 / 3), abs=1e-12)
    with pytest.raises(ValueError):
        iso.max_cv(3.0, 1.0)


def test_distribution_stats():
    stats = iso.compute_stats(iso.DegreeDistribution({1: 500, 7: 500}))
    assert (stats.mu, stats.sigma, stats.h) == pytest.approx((4.0, 3.0, 1.5625))
    assert iso.degree_proportional_alpha(0.7, stats, 7) == pytest.approx(0.7 * 172 / 175)
    with pytest.raises(ValueError):
        iso.DegreeDistribution({})


def test_lambert_and_root():
    assert iso.lambert_w(math.e) == pytest.approx(1.0)
    w = iso.lambert_w(-0.2, -1)
    assert w * math.exp(w) == pytest.approx(-0.2)
    assert iso.rightmost_root(0.3, 0.0, 2.0) == 0.3


def test_reduced_growth_matches_root():
    p = iso.EpidemicParams(0.075, 0.1, 0.8, 0.5)
    stats = iso.DegreeStats.from_moments(4.0, 2.0)
    traj = iso.integrate_reduced(stats, p, t_end=100.0)
    rate = iso.estimate_growth_rate(traj["t"], traj["lambda"], 50.0, 100.0)
    bh = iso.effective_beta(p, stats)
    a = bh - 0.1
    b = -bh * 0.8 * math.exp(-0.1 * 0.5)
    assert rate == pytest.approx(iso.rightmost_root(a, b, 0.5).real, rel=0.02)


def test_homogeneous_trajectory_conserves():
    traj = iso.integrate_homogeneous(0.3, iso.EpidemicParams(0.075, 0.1), t_end=50.0)
    total = [s + i + r for s, i, r in zip(traj["S"], traj["I"], traj["R"])]
    assert max(abs(x - 1.0) for x in total) < 1e-9


def test_small_ensemble_is_deterministic():
    a = iso.run_ensemble(nodes=2000, runs=3, days=10, seed=5)
    b = iso.run_ensemble(nodes=2000, runs=3, days=10, seed=5)
    assert a == b
    rows, mu, eff = a
    assert len(rows) == 10 and rows[0]["day"] == 1
    assert mu == pytest.approx(4.0, rel=0.05)
    assert eff > mu
