"""Single best-affine L1 fits."""

import numpy as np
import pytest

from rankbound import ResolutionError, best_affine_l1, power_law, uniform
from rankbound.affine import best_affine_on_table
from rankbound.kernels import line_error
from rankbound.measures import matched


def test_square_golden():
    # the L1-optimal line for x^2 on [0,1] crosses at 1/4 and 3/4:
    # slope 1, intercept -3/16, error 1/16
    slope, intercept, err = best_affine_l1(power_law(2.0))
    assert slope == pytest.approx(1.0, abs=1e-6)
    assert intercept == pytest.approx(-3.0 / 16.0, abs=1e-6)
    assert err == pytest.approx(1.0 / 16.0, abs=1e-8)


def test_recovers_affine_target():
    slope, intercept, err = best_affine_l1(uniform(2.0, 6.0))
    assert slope == pytest.approx(0.25, abs=1e-9)
    assert intercept == pytest.approx(-0.5, abs=1e-8)
    assert err <= 1e-10


def test_subinterval_golden():
    # x^2 on [1/4, 3/4] is the unit problem shrunk by 2: error 1/128
    slope, intercept, err = best_affine_l1(power_law(2.0), interval=(0.25, 0.75))
    assert slope == pytest.approx(1.0, abs=1e-6)
    assert intercept == pytest.approx(-15.0 / 64.0, abs=1e-6)
    assert err == pytest.approx(1.0 / 128.0, abs=1e-8)


def test_interval_validation():
    with pytest.raises(ResolutionError):
        best_affine_l1(uniform(0.0, 1.0), interval=(0.5, 0.2))
    with pytest.raises(ResolutionError):
        best_affine_l1(uniform(0.0, 1.0), interval=(-0.5, 0.5))


def test_grid_floor():
    with pytest.raises(ResolutionError):
        best_affine_l1(uniform(0.0, 1.0), grid=32)


def test_matched_measure_beats_candidates():
    slope, intercept, err = best_affine_l1(power_law(2.0), measure=matched())
    assert 0.0 < err < 1.0 / 16.0  # mass shifts right where x^2 is steep/linear
    # must not lose to the lebesgue-optimal line under the same measure
    xs = np.linspace(0.0, 1.0, 2049)
    ys = xs**2
    dens = 2.0 * xs
    masses = 0.5 * (dens[:-1] + dens[1:]) * np.diff(xs)
    rival = line_error(xs, ys, masses, 0, 2048, -3.0 / 16.0, 1.0)
    assert err <= rival + 1e-12


def test_non_monotone_table():
    xs = np.linspace(0.0, 1.0, 513)
    ys = np.sin(2.0 * np.pi * xs)
    masses = np.diff(xs) / (xs[-1] - xs[0])
    slope, intercept, err = best_affine_on_table(xs, ys)
    # cannot lose to hand-picked rivals under the same masses
    for a, b in ((0.0, 0.0), (float(ys.mean()), 0.0), (ys[0], (ys[-1] - ys[0]))):
        assert err <= line_error(xs, ys, masses, 0, 512, a, b) + 1e-12
    # is the error of the line it returns
    assert err == pytest.approx(line_error(xs, ys, masses, 0, 512, intercept, slope), abs=1e-12)


def test_default_masses_are_probability():
    xs = np.linspace(3.0, 7.0, 65)
    ys = np.sqrt(xs)
    _, _, err = best_affine_on_table(xs, ys)
    # probability normalisation keeps the error in value units
    assert err < (ys.max() - ys.min())


def test_deterministic():
    xs = np.linspace(0.0, 1.0, 257)
    ys = np.cos(3.0 * xs) * 0.3 + xs
    a = best_affine_on_table(xs, ys)
    b = best_affine_on_table(xs, ys)
    assert a == b
