"""Piecewise models, their L1 error, and the closed-form constructions."""

import numpy as np
import pytest

from rankbound import (
    DomainError,
    ResolutionError,
    SingularityError,
    UnsupportedError,
    adversarial_lower_bound,
    cdf_from_lipschitz,
    interpolation_upper_bound,
    l1_error,
    lebesgue,
    make_model,
    matched,
    optimal_p0_matched,
    power_law,
    pushforward_density,
    staircase,
    truncated_exponential,
    truncated_logistic,
    uniform,
)
from rankbound.measures import explicit


# -- model construction and evaluation -----------------------------------


def test_make_model_validation():
    with pytest.raises(DomainError):
        make_model([0.0, 1.0], [0.0], [0.5], "p7")
    with pytest.raises(DomainError):
        make_model([0.0, 1.0, 2.0], [0.0], [0.5], "p0")  # count mismatch
    with pytest.raises(DomainError):
        make_model([0.0, 1.0, 0.5], [0.0, 0.0], [0.1, 0.2], "p0")  # not increasing
    with pytest.raises(DomainError):
        make_model([0.0, 0.5, 1.0], [0.0, 1.0], [0.1, 0.2], "p0")  # p0 with slope
    with pytest.raises(DomainError):
        make_model([0.0], [], [], "p0")


def test_segment_conventions():
    m = make_model([0.0, 0.5, 1.0], [0.0, 0.0], [0.25, 0.75], "p0")
    assert m.k == 2
    # intervals are right-open, last closed; out-of-range clips
    assert m.segment_of(0.49) == 0
    assert m.segment_of(0.5) == 1
    assert m.segment_of(1.0) == 1
    assert m.segment_of(-3.0) == 0
    assert m.segment_of(7.0) == 1
    assert m.evaluate(0.1) == 0.25
    assert m.evaluate(0.9) == 0.75


def test_scaled_model():
    m = make_model([0.0, 1.0], [2.0], [0.5], "p1")
    s = m.scaled(10.0)
    assert s.evaluate(0.25) == 10.0 * m.evaluate(0.25)
    assert np.array_equal(s.breakpoints, m.breakpoints)


# -- L1 error --------------------------------------------------------------


def test_l1_error_exact_fit_is_zero():
    target = uniform(0.0, 1.0)
    m = make_model([0.0, 1.0], [1.0], [0.0], "p1")
    assert l1_error(m, target) <= 1e-15


def test_l1_error_two_constants():
    # 2 * int_0^0.5 |x - 0.25| dx = 0.125
    target = uniform(0.0, 1.0)
    m = make_model([0.0, 0.5, 1.0], [0.0, 0.0], [0.25, 0.75], "p0")
    assert l1_error(m, target) == pytest.approx(0.125, abs=1e-10)


def test_l1_error_affine_vs_square():
    # |x^2 - (x - 3/16)| integrates to exactly 1/16 on [0,1]
    target = power_law(2.0)
    m = make_model([0.0, 1.0], [1.0], [-3.0 / 16.0], "p1")
    assert l1_error(m, target, lebesgue(), grid=4096) == pytest.approx(1.0 / 16.0, abs=1e-7)


def test_l1_error_measure_matters():
    target = power_law(2.0)
    m = make_model([0.0, 1.0], [0.0], [0.5], "p0")
    a = l1_error(m, target, lebesgue(), grid=2048)
    b = l1_error(m, target, matched(), grid=2048)
    assert abs(a - b) > 1e-3


def test_l1_error_grid_floor():
    m = make_model([0.0, 1.0], [0.0], [0.5], "p0")
    with pytest.raises(ResolutionError):
        l1_error(m, uniform(0.0, 1.0), grid=500)


def test_l1_error_explicit_measure_support_check():
    m = make_model([0.0, 1.0], [0.0], [0.5], "p0")
    with pytest.raises(DomainError):
        l1_error(m, uniform(0.0, 1.0), explicit(uniform(0.0, 2.0)), grid=2048)


# -- matched-measure closed form ---------------------------------------------


def test_optimal_p0_matched_k1():
    res = optimal_p0_matched(uniform(0.0, 1.0), 1)
    assert res.error == 0.25
    assert res.method == "ClosedForm"
    assert list(res.model.intercepts) == [0.5]


def test_optimal_p0_matched_k5_uniform():
    res = optimal_p0_matched(uniform(0.0, 1.0), 5)
    assert np.allclose(res.model.breakpoints, np.arange(6) / 5.0, atol=1e-15)
    assert np.allclose(res.model.intercepts, (2 * np.arange(1, 6) - 1) / 10.0, atol=1e-15)
    assert res.error == 0.05


def test_optimal_p0_matched_quantile_breakpoints():
    # x^2 CDF: the k/5 quantiles are sqrt(k/5)
    res = optimal_p0_matched(staircase(1), 5)
    assert np.allclose(res.model.breakpoints, np.sqrt(np.arange(6) / 5.0), atol=1e-14)


@pytest.mark.parametrize("k", [1, 2, 3, 8, 21])
@pytest.mark.parametrize(
    "target",
    [uniform(0.0, 1.0), power_law(2.0), truncated_exponential(1.0, 0.0, 2.0), staircase(3)],
    ids=lambda m: m.kind + str(m.params),
)
def test_optimal_p0_matched_error_is_quarter_over_k(target, k):
    res = optimal_p0_matched(target, k)
    assert res.error == 0.25 / k
    # the closed form agrees with direct numeric integration
    measured = l1_error(res.model, target, matched(), grid=4096)
    assert measured == pytest.approx(0.25 / k, abs=2e-4)


def test_optimal_p0_matched_rejects_flat_quantiles():
    class _Flat:
        # quantile function that collapses the upper tail
        def inverse(self, u):
            return np.minimum(np.asarray(u, dtype=np.float64), 0.6)

    with pytest.raises(UnsupportedError):
        optimal_p0_matched(_Flat(), 4)
    with pytest.raises(DomainError):
        optimal_p0_matched(uniform(0.0, 1.0), 0)


# -- pushforward density --------------------------------------------------------


def test_pushforward_matched_is_one():
    u = np.linspace(0.0, 1.0, 11)
    out = pushforward_density(power_law(2.0), matched(), u)
    assert np.array_equal(out, np.ones(11))


def test_pushforward_uniform_data_pow2_queries():
    # f = 1, g = 2x, F^{-1}(u) = u  =>  f_Y(u) = 2u
    u = np.linspace(0.1, 0.9, 9)
    out = pushforward_density(uniform(0.0, 1.0), power_law(2.0), u)
    assert np.allclose(out, 2.0 * u, atol=1e-14)


@pytest.mark.parametrize(
    "data,query",
    [
        (uniform(0.0, 1.0), truncated_exponential(2.0, 0.0, 1.0)),
        (truncated_logistic(0.5, 0.3, 0.0, 1.0), uniform(0.0, 1.0)),
        (truncated_exponential(1.0, 0.0, 2.0), truncated_logistic(1.0, 0.4, 0.0, 2.0)),
    ],
)
def test_pushforward_integrates_to_one(data, query):
    u = np.linspace(0.0, 1.0, 200001)
    fy = pushforward_density(data, explicit(query), u)
    assert abs(np.trapezoid(fy, u) - 1.0) <= 1e-6


def test_pushforward_degenerate_ratio():
    # staircase density vanishes at step starts while the query density
    # does not; the ratio blows up
    with pytest.raises(SingularityError):
        pushforward_density(staircase(2), lebesgue(), np.linspace(0.0, 1.0, 41))


# -- adversarial witness -----------------------------------------------------------


def test_adversarial_lower_bound_values():
    assert adversarial_lower_bound(2) == (2, 1.0 / 64.0)
    assert adversarial_lower_bound(5) == (8, 1.0 / 256.0)
    assert adversarial_lower_bound(33) == (64, 1.0 / 2048.0)


def test_adversarial_lower_bound_needs_k2():
    with pytest.raises(DomainError):
        adversarial_lower_bound(1)


# -- interpolation upper bound ---------------------------------------------------


def test_interpolation_exact_on_uniform():
    res, ceiling = interpolation_upper_bound(uniform(0.0, 1.0), 4, ("lipschitz", 1.0))
    assert res.error <= 1e-12
    assert ceiling == pytest.approx(0.25)


def test_interpolation_square_c2():
    # equal-width interpolant of x^2 pays exactly 1/(6 K^2)
    res, ceiling = interpolation_upper_bound(power_law(2.0), 10, ("c2", 2.0))
    assert res.error == pytest.approx(1.0 / 600.0, rel=1e-4)
    assert ceiling == pytest.approx(1.0 / 300.0)
    assert res.error <= ceiling


def test_interpolation_quadratic_decay():
    r10, _ = interpolation_upper_bound(power_law(2.0), 10, ("c2", 2.0))
    r20, _ = interpolation_upper_bound(power_law(2.0), 20, ("c2", 2.0))
    assert r20.error == pytest.approx(r10.error / 4.0, rel=0.02)


def test_interpolation_lipschitz_ceiling():
    res, ceiling = interpolation_upper_bound(power_law(2.0), 8, ("lipschitz", 2.0))
    assert ceiling == pytest.approx(0.25)
    assert res.error <= ceiling


def test_interpolation_scales_with_support_length():
    res, ceiling = interpolation_upper_bound(uniform(0.0, 4.0), 2, ("lipschitz", 0.25))
    assert ceiling == pytest.approx(0.5)
    assert res.error <= 1e-12


def test_interpolation_validation():
    with pytest.raises(UnsupportedError):
        interpolation_upper_bound(uniform(0.0, 1.0), 4, ("c3", 1.0))
    with pytest.raises(DomainError):
        interpolation_upper_bound(uniform(0.0, 1.0), 4, ("lipschitz", float("inf")))
    with pytest.raises(DomainError):
        interpolation_upper_bound(uniform(0.0, 1.0), 0, ("lipschitz", 1.0))


# -- Lipschitz-to-CDF embedding ------------------------------------------------------


def test_embed_zero_function():
    xs = np.linspace(0.0, 1.0, 11)
    model, norm = cdf_from_lipschitz(xs, np.zeros(11))
    assert norm == 2.0
    assert np.allclose(np.asarray(model.cdf(xs)), xs, atol=1e-15)


def test_embed_identity():
    xs = np.linspace(0.0, 1.0, 11)
    model, norm = cdf_from_lipschitz(xs, xs.copy())
    assert norm == 3.0
    assert np.allclose(np.asarray(model.cdf(xs)), xs, atol=1e-15)


def test_embed_negative_identity():
    xs = np.linspace(0.0, 1.0, 11)
    model, norm = cdf_from_lipschitz(xs, -xs)
    assert norm == 1.0
    assert np.allclose(np.asarray(model.cdf(xs)), xs, atol=1e-15)


def test_embed_triangle_wave():
    xs = np.linspace(0.0, 1.0, 257)
    fs = 0.25 - np.abs((xs * 2.0) % 2.0 - 1.0) * 0.25
    model, norm = cdf_from_lipschitz(xs, fs)
    assert model.cdf(0.0) == 0.0 and model.cdf(1.0) == 1.0
    # slopes of the embedded CDF live in [(2-1)/norm, (2+1)/norm]
    lo, hi = model.density_bounds
    assert lo >= 1.0 / norm - 1e-12
    assert hi <= 3.0 / norm + 1e-12


def test_embed_rejects_bad_tables():
    xs = np.linspace(0.0, 1.0, 5)
    with pytest.raises(DomainError):
        cdf_from_lipschitz(xs, np.array([0.0, 0.9, 0.0, 0.1, 0.0]))  # slope > 1
    with pytest.raises(DomainError):
        cdf_from_lipschitz(np.linspace(0.2, 1.0, 5), np.zeros(5))  # wrong span
    with pytest.raises(DomainError):
        cdf_from_lipschitz(np.array([0.0, 0.0, 1.0]), np.zeros(3))  # not increasing
