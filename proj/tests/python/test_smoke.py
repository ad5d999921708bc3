"""Smoke tests for the python bindings."""

import math

import pytest

import _waveica as w


def test_contrast_two_point_fixture():
    rows = [[0.1, 0.1], [0.9, 0.9]]
    assert w.contrast(rows, estimator="c2", wavelet=1, level=1) == pytest.approx(1.0, abs=1e-15)


def test_contrast_is_zero_in_one_dimension():
    rows = [[0.13], [0.41], [0.68], [0.92]]
    assert abs(w.contrast(rows, estimator="c2", wavelet=1, level=2)) <= 1e-15


def test_filter_coefficients():
    haar = w.filter_coefficients(1)
    assert haar == pytest.approx([1 / math.sqrt(2)] * 2)
    d4 = w.filter_coefficients(2)
    assert sum(d4) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert sum(h * h for h in d4) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(Exception):
        w.filter_coefficients(0)


def test_theoretical_rate():
    assert w.theoretical_rate("c2", 1.0, 2, "small_j") == (-2, 3)
    assert w.theoretical_rate("delta2", 1.0, 2, "small_j") == (-1, 1)
    assert w.theoretical_rate("d2", 0.25, 1, "small_j") == (-1, 2)
    with pytest.raises(Exception):
        w.theoretical_rate("c2", 1.0, 2, "large_j")


def test_generate_is_deterministic_and_in_cube():
    a = w.generate_mixed(50, 2, seed=11)
    b = w.generate_mixed(50, 2, seed=11)
    assert a == b
    assert all(0.0 <= v <= 1.0 for row in a for v in row)


def test_demix_and_amari():
    assert w.amari_error([[1.0, 0.0], [0.0, 1.0]]) == 0.0
    assert w.amari_error([[0.0, 3.0], [-2.0, 0.0]]) == pytest.approx(0.0, abs=1e-15)

    theta = math.pi / 6
    mix = [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
    rows = w.generate_mixed(1500, 2, mix=mix, seed=21)
    result = w.demix(rows, wavelet=1, level=2, sweeps=3, grid_size=45)
    assert result["final_contrast"] >= 0.0
    assert len(result["rotation"]) == 2
