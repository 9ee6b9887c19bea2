"""The sufficient-condition ladder and the Rayleigh minimum behind it."""

import numpy as np
import pytest
from hypothesis import given, settings

from rwj import (
    build_transition,
    corollary1,
    corollary2,
    corollary4,
    degree_stats,
    full_report,
    generate,
    rayleigh_minimum,
    spectrum,
    theorem2,
)

from conftest import connected_weighted, random_connected_weighted, two_node


def test_corollary1_examples():
    assert not corollary1(0.05, 30).holds
    assert corollary1(0.01, 30).holds
    assert not corollary1(1.0 / 30.0, 30).holds  # strict inequality at the boundary
    assert corollary1(0.05, 30).threshold == pytest.approx(1.0 / 30.0)


def test_corollary2_examples():
    r = corollary2(0.3, np.array([1.0, 1.0, -1.0, -1.0]))
    assert r.mu == pytest.approx(0.5) and r.threshold == pytest.approx(0.5) and r.holds
    r = corollary2(0.3, np.array([3.0, -1.0, -1.0, -1.0]))
    assert r.mu == pytest.approx(0.75) and r.threshold == pytest.approx(0.25)
    r = corollary2(0.3, np.array([1.0, 0.0, -1.0]))
    assert r.mu == pytest.approx(1.0 / 3.0) and r.threshold == pytest.approx(1.0 / 3.0)
    with pytest.raises(ValueError):
        corollary2(0.3, np.zeros(4))


def test_theorem2_thresholds(p3):
    stats = degree_stats(p3)
    assert theorem2(0.5, stats, "sharp").threshold == pytest.approx(8.0 / 9.0)
    assert theorem2(0.5, stats, "paper").threshold == pytest.approx(32.0 / 9.0)
    # divergence between the two constants
    assert not theorem2(0.9, stats, "sharp").holds
    assert theorem2(0.9, stats, "paper").holds
    regular = degree_stats(generate("complete", n=5))
    assert theorem2(0.99, regular, "sharp").threshold == pytest.approx(1.0)
    with pytest.raises(ValueError):
        theorem2(0.5, stats, "loose")


def test_corollary4_thresholds(p3):
    stats = degree_stats(p3)
    assert corollary4(0.5, stats, "sharp").threshold == pytest.approx(2.0 / 3.0)
    assert corollary4(0.5, stats, "paper").threshold == pytest.approx(8.0 / 3.0)
    regular = degree_stats(generate("cycle", n=6))
    assert corollary4(0.5, regular, "sharp").threshold == pytest.approx(1.0)


@given(connected_weighted(max_n=8))
@settings(max_examples=40)
def test_threshold_algebra_and_chain(g):
    stats = degree_stats(g)
    # thresholds are snr*c and (d_mean/d_max)*c exactly
    assert theorem2(0.1, stats, "paper").threshold == pytest.approx(4.0 * stats.snr, rel=1e-14)
    assert corollary4(0.1, stats, "sharp").threshold == pytest.approx(
        stats.d_mean / stats.d_max, rel=1e-14
    )
    # cor4's threshold never exceeds thm2's, so cor4 implies thm2 at equal constants
    assert stats.d_mean / stats.d_max <= stats.snr + 1e-14
    for gamma in (0.01, 0.3, 0.9):
        if corollary4(gamma, stats, "sharp").holds:
            assert theorem2(gamma, stats, "sharp").holds


# ---------------------------------------------------------------------------
# Rayleigh minimum
# ---------------------------------------------------------------------------

def test_rayleigh_minimum_path3(p3):
    stats = degree_stats(p3)
    value, f = rayleigh_minimum(stats)
    assert value == pytest.approx(8.0 / 9.0, rel=1e-14)
    assert np.abs(f) == pytest.approx(np.full(3, 1.0 / np.sqrt(3.0)), rel=1e-12)
    _assert_feasible_and_attains(stats, value, f)


def test_rayleigh_minimum_regular():
    stats = degree_stats(generate("complete", n=4))
    value, f = rayleigh_minimum(stats)
    assert value == pytest.approx(1.0, rel=1e-14)
    _assert_feasible_and_attains(stats, value, f)


def _rayleigh(f, n):
    return (n * float(f @ f) - float(f.sum()) ** 2) / (n * float(f @ f))


def _assert_feasible_and_attains(stats, value, f):
    n = len(stats.d)
    assert abs(float(f @ f) - 1.0) <= 1e-12
    assert abs(float(f @ stats.d)) <= 1e-12 * float(np.linalg.norm(stats.d))
    assert _rayleigh(f, n) == pytest.approx(value, abs=1e-12)


def test_rayleigh_minimum_monte_carlo_floor():
    rng = np.random.default_rng(17)
    for i in range(3):
        g = random_connected_weighted(rng, int(rng.integers(4, 12)), self_loops=True)
        stats = degree_stats(g)
        value, f = rayleigh_minimum(stats)
        _assert_feasible_and_attains(stats, value, f)
        n = g.n
        samples = rng.normal(size=(10_000, n))
        d = stats.d
        samples -= np.outer(samples @ d, d) / float(d @ d)
        norms = np.linalg.norm(samples, axis=1)
        samples = samples[norms > 1e-8] / norms[norms > 1e-8, None]
        values = (n - samples.sum(axis=1) ** 2) / n
        assert values.min() >= value - 1e-10


# ---------------------------------------------------------------------------
# full report
# ---------------------------------------------------------------------------

def test_full_report_k4(k4):
    rep = full_report(k4, "slem")
    assert rep.nand_s is None  # lambda_star < 0
    assert rep.lambda_star == pytest.approx(-1.0 / 3.0)
    assert rep.thm2_sharp.threshold == pytest.approx(1.0)
    assert rep.cor4_sharp.threshold == pytest.approx(1.0)
    assert rep.thm2_sharp.holds and rep.cor4_sharp.holds  # gamma = 2/3 < 1
    assert not rep.consistency
    assert rep.alpha_bar is not None and rep.alpha_bar.searched is not None


def test_full_report_regular_two_node_consistent():
    rep = full_report(two_node(3.0, 1.0, 3.0), "slem", search_alpha_bar=False)
    assert rep.nand_s is not None and rep.nand_s.holds
    assert rep.thm2_sharp.threshold == pytest.approx(1.0)
    assert rep.thm2_sharp.holds  # gamma = 0.5 < 1
    assert not rep.consistency


def test_full_report_near_singular_all_sharp_false():
    rep = full_report(two_node(4.0, 2.0, 1.05), "slem", search_alpha_bar=False)
    assert rep.nand_s is not None and not rep.nand_s.holds
    assert not rep.cor1.holds
    assert not rep.cor2.holds
    assert not rep.thm2_sharp.holds
    assert not rep.cor4_sharp.holds
    assert not rep.consistency


def test_rayleigh_floor_for_v_star():
    rng = np.random.default_rng(29)
    for i in range(15):
        g = random_connected_weighted(rng, int(rng.integers(3, 12)), self_loops=True)
        stats = degree_stats(g)
        s = spectrum(build_transition(g, 0.0), "slem")
        floor, _ = rayleigh_minimum(stats)
        assert _rayleigh(s.v_star, g.n) >= floor - 1e-10


def test_implication_soundness_random():
    rng = np.random.default_rng(37)
    positives = 0
    for i in range(100):
        g = random_connected_weighted(rng, int(rng.integers(3, 14)), extra=0.15, self_loops=True)
        rep = full_report(g, "slem", search_alpha_bar=False)
        assert not rep.consistency
        if rep.nand_s is not None and rep.lambda_star_simple:
            positives += 1
    assert positives >= 10
