"""Coupon-collector upper bound, the pair-statistic lower-bound selection,
and the four example weight families."""

import math

import numpy as np
import pytest

from shufflemix import (
    RngStream,
    example_weights,
    mtf_lower_bound_time,
    tau_u,
    uniform_weights,
)
from shufflemix.coupon_bounds import coupon_tail_sum


def test_tau_u_two_cards():
    assert tau_u(uniform_weights(2)) == 2  # (1/2)^2 hits 1/4 exactly


def test_tau_u_four_cards():
    # 3 (3/4)^9 ~ 0.2253 <= 1/4 < 3 (3/4)^8
    assert tau_u(uniform_weights(4)) == 9


def test_tau_u_single_card():
    assert tau_u(uniform_weights(1)) == 0


def test_tau_u_matches_linear_scan():
    gen = RngStream(44).generator()
    for _ in range(10):
        w = gen.dirichlet(np.ones(6) * 1.5)
        sorted_desc = np.sort(w)[::-1]
        t = 0
        while float(np.sum((1.0 - sorted_desc[:-1]) ** t)) > 0.25:
            t += 1
        assert tau_u(w) == t


def test_tau_u_ignores_input_order():
    w = [0.1, 0.4, 0.2, 0.3]
    assert tau_u(w) == tau_u(sorted(w, reverse=True))


def test_tau_u_threshold_parameter():
    w = uniform_weights(4)
    assert tau_u(w, threshold=0.5) <= tau_u(w, threshold=0.25)


def test_coupon_tail_sum_strictly_decreasing():
    w = np.sort(example_weights("d", 8))[::-1]
    vals = [coupon_tail_sum(w, t) for t in range(30)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_lower_bound_report_uniform_96():
    rep = mtf_lower_bound_time(uniform_weights(96))
    assert rep.tau_0 == 10
    assert rep.tau_1 == 27
    assert rep.lower_bound == 27
    assert rep.third_rule_ok


def test_lower_bound_report_degenerate_small_n():
    rep = mtf_lower_bound_time(uniform_weights(4))
    assert rep.tau_0 is None
    assert rep.tau_1 == 0
    assert rep.lower_bound == 0


def test_lower_bound_never_exceeds_upper():
    gen = RngStream(45).generator()
    for size in (4, 8, 16, 64):
        for _ in range(5):
            w = gen.dirichlet(np.ones(size) * 2.0)
            rep = mtf_lower_bound_time(w)
            assert rep.lower_bound <= rep.tau_u


def test_sandwich_floor_guarantee_when_weights_spread():
    gen = RngStream(46).generator()
    checked = 0
    for size in (48, 96, 192):
        for _ in range(6):
            w = gen.dirichlet(np.ones(size) * 5.0)
            rep = mtf_lower_bound_time(w)
            if rep.third_rule_ok:
                assert rep.lower_bound >= math.ceil(rep.tau_u / 25) - 1
                assert rep.lower_bound >= rep.sandwich_floor
                checked += 1
    assert checked >= 10


def test_example_weights_linear_family():
    assert np.allclose(example_weights("d", 4), [0.4, 0.3, 0.2, 0.1], atol=1e-15)


def test_example_weights_harmonic_family():
    assert np.allclose(example_weights("c", 2), [2.0 / 3.0, 1.0 / 3.0], atol=1e-15)


def test_example_weights_two_level_family():
    assert np.allclose(example_weights("b", 4), [0.4, 0.4, 0.1, 0.1], atol=1e-15)


def test_example_weights_two_level_needs_even_n():
    with pytest.raises(ValueError):
        example_weights("b", 5)


def test_example_weights_unknown_family():
    with pytest.raises(ValueError):
        example_weights("e", 4)


def test_example_weights_sum_to_one():
    for fam in "abcd":
        for n in (2, 4, 10, 96, 1000):
            if fam == "b" and n % 2:
                continue
            w = example_weights(fam, n)
            assert abs(float(np.sum(w)) - 1.0) < 1e-12
            assert np.all(w > 0)


def test_uniform_family_scales_like_n_log_n():
    n = 10_000
    ratio = tau_u(uniform_weights(n)) / (n * math.log(n))
    assert 0.9 <= ratio <= 1.3


def test_harmonic_family_scales_like_n_log_squared():
    n = 1000
    ratio = tau_u(example_weights("c", n)) / (n * math.log(n) ** 2)
    assert 0.5 <= ratio <= 1.5


def test_linear_family_bounded_by_n_squared():
    for n in (2, 10, 100, 1000, 10_000):
        assert tau_u(example_weights("d", n)) <= n * n
