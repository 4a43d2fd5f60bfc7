import pytest
from hypothesis import given, strategies as st

from gravdist import (DomainError, ParameterSet, ProductionSpec, factor_step,
                      growth_rate_equivalence_check, output_from_factor, step_discrete)

rate = st.floats(-1.0, 1.0)
positive = st.floats(0.01, 10.0)


def test_output_from_factor_values():
    assert output_from_factor(0.0, ProductionSpec(3.0, 0.2)) == 0.2
    assert output_from_factor(1.0, ProductionSpec(1.0, 0.0)) == 1.0
    assert output_from_factor(0.4, ProductionSpec(2.5, 0.1)) == pytest.approx(1.1)
    with pytest.raises(DomainError):
        output_from_factor(-0.1)


@given(st.floats(-5, 5), st.floats(0, 5), positive, positive, positive)
def test_output_is_affine(A, y_min, n1, n2, n3):
    spec = ProductionSpec(A, y_min)
    assert output_from_factor(0.0, spec) == y_min
    for n in (n1, n2, n3):
        assert output_from_factor(n, spec) == pytest.approx(y_min + A * n, rel=1e-12, abs=1e-12)


def test_factor_step_values():
    assert factor_step(1.0, ParameterSet(0.04, 1.0, 0.5, 1.0), 0.0) == pytest.approx(1.04)
    assert factor_step(1.0, ParameterSet(0.04, 0.48, 0.5, 1.0), 0.04 / 0.48) == pytest.approx(1.0)
    assert factor_step(0.5, ParameterSet(0.04, 1.1, 0.5, 1.0), 0.5) == pytest.approx(0.245)
    with pytest.raises(DomainError):
        factor_step(-1.0, ParameterSet(0.04, 1.1, 0.5, 1.0), 0.5)


def test_growth_rate_attenuation():
    p = ParameterSet(0.04, 1.0, 0.5, 1.0)
    rates = growth_rate_equivalence_check(0.5, p, 0.0, ProductionSpec(1.0, 0.5))
    assert rates == pytest.approx((0.04, 0.02), abs=1e-15)
    assert growth_rate_equivalence_check(0.5, ParameterSet(0, 1, 1, 1), 0.0) == (0.0, 0.0)


@given(positive, rate, rate, st.floats(0, 2), st.floats(0.1, 5))
def test_rates_agree_without_minimum_output(N, g, mu, d, A):
    r_n, r_y = growth_rate_equivalence_check(N, ParameterSet(g, mu, 0.5, 1.0), d, ProductionSpec(A))
    assert abs(r_n - r_y) <= 1e-12


@given(positive, rate, rate, st.floats(0, 2), st.floats(0.1, 5), st.floats(0.01, 5))
def test_attenuation_factor(N, g, mu, d, A, y_min):
    spec = ProductionSpec(A, y_min)
    r_n, r_y = growth_rate_equivalence_check(N, ParameterSet(g, mu, 0.5, 1.0), d, spec)
    assert r_y == pytest.approx(r_n * A * N / (y_min + A * N), rel=1e-9, abs=1e-12)


@given(positive, st.floats(-0.5, 0.5), st.floats(0, 0.5), st.floats(0, 1), st.integers(1, 20))
def test_factor_map_equals_discrete_output_map(N, g, mu, d, n):
    # A = 1, Y_min = 0: the factor and output maps are the same recursion
    p = ParameterSet(g, mu, 0.5, 1.0)
    ys = step_discrete(output_from_factor(N), d, p, n, 1.0)
    x = N
    for k in range(n):
        x = factor_step(x, p, d)
        assert ys[k + 1] == output_from_factor(x)
