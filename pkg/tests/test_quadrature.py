import math

import numpy as np
import pytest

from dunkl_up.errors import ConfigError, ContractError, NumericError
from dunkl_up.oracle import oracle_integrate
from dunkl_up.quadrature import (
    Domain,
    SampledFunction,
    build_scheme,
    default_scheme,
    fsum_complex,
    integrate_weighted,
    measure_weights,
    values_on,
)


def test_default_scheme_shape(scheme):
    assert scheme.size == 768
    assert scheme.radius == 12.0
    assert np.array_equal(scheme.nodes, -scheme.nodes[::-1])
    assert np.array_equal(scheme.weights, scheme.weights[::-1])
    assert not np.any(scheme.nodes == 0)
    assert math.isclose(math.fsum(scheme.weights), 24.0, rel_tol=1e-14)
    assert default_scheme() is scheme


def test_scheme_is_immutable_and_hashable(scheme):
    with pytest.raises(ValueError):
        scheme.nodes[0] = 1.0
    assert build_scheme() == scheme
    assert hash(build_scheme()) == hash(scheme)
    assert build_scheme(panels=24) != scheme


@pytest.mark.parametrize(
    "kwargs", [dict(radius=0), dict(radius=-1), dict(panels=3), dict(panels=0), dict(nodes_per_panel=2), dict(nodes_per_panel=100)]
)
def test_bad_scheme_parameters(kwargs):
    with pytest.raises(ConfigError):
        build_scheme(**kwargs)


@pytest.mark.parametrize("mu", [-0.5, 0.0, 0.5, 1.0, 1.5, 3.0])
def test_gaussian_moment_is_gamma(scheme, mu):
    # int exp(-x^2) |x|^(2mu+1) dx = Gamma(mu+1)
    got = integrate_weighted(lambda x: np.exp(-x * x), mu, scheme)
    assert abs(got - math.gamma(mu + 1)) < 1e-13 * math.gamma(mu + 1)


def test_odd_integrand_vanishes(scheme):
    for mu in (-0.5, 0.0, 1.5):
        assert abs(integrate_weighted(lambda x: x**3 * np.exp(-x * x), mu, scheme)) < 1e-15


def test_measure_weights(scheme):
    w = measure_weights(0.0, scheme)
    assert np.array_equal(w, scheme.weights * np.abs(scheme.nodes))
    assert np.array_equal(measure_weights(-0.5, scheme), scheme.weights)


@pytest.mark.parametrize("mu", [-0.5, 0.0, 0.5, 1.5])
def test_agrees_with_trapezoid_oracle(scheme, mu):
    f = lambda x: np.exp(-0.5 * (x - 0.7) ** 2) * (1 + 0.3 * x * x) * np.exp(0.4j * x)
    a = integrate_weighted(f, mu, scheme)
    b = oracle_integrate(f, mu)
    assert abs(a - b) < 1e-8 * abs(b)


def test_non_finite_integrand_names_node(scheme):
    def f(x):
        v = np.exp(-x * x)
        v[5] = np.nan
        return v

    with pytest.raises(NumericError, match="node 5"):
        integrate_weighted(f, 0.0, scheme)


def test_sampled_function_validation(scheme):
    with pytest.raises(ContractError):
        SampledFunction(scheme, np.zeros(10))
    bad = np.zeros(scheme.size)
    bad[3] = np.inf
    with pytest.raises(NumericError):
        SampledFunction(scheme, bad)
    s = SampledFunction(scheme, np.arange(scheme.size, dtype=float), Domain.FREQUENCY)
    assert s.values.dtype == complex
    assert np.array_equal(s.reflected().values, s.values[::-1])
    with pytest.raises(ContractError):
        values_on(s, build_scheme(panels=24))


def test_values_on_accepts_several_inputs(scheme):
    f = lambda x: np.cos(x)
    ref = np.cos(scheme.nodes)
    assert np.allclose(values_on(f, scheme), ref)
    assert np.allclose(values_on(ref, scheme), ref)
    assert np.allclose(values_on(SampledFunction(scheme, ref), scheme), ref)
    assert np.allclose(values_on(lambda x: 2.0, scheme), 2.0)


def test_fsum_complex_is_order_independent(rng):
    v = rng.normal(size=1000) * 10.0 ** rng.integers(-8, 8, size=1000) + 1j * rng.normal(size=1000)
    a = fsum_complex(v)
    b = fsum_complex(v[rng.permutation(1000)])
    assert a == b


@pytest.mark.parametrize("mu,tol", [(0.1, 2e-7), (0.25, 1e-7), (0.75, 1e-9)])
def test_fractional_weight_exponent_accuracy(scheme, mu, tol):
    # |x|^(2mu+1) with fractional exponent is not polynomial on the origin panel;
    # the default rule then stops at about 1e-7 relative.
    got = integrate_weighted(lambda x: np.exp(-x * x), mu, scheme).real
    err = abs(got / math.gamma(mu + 1) - 1)
    assert err < tol
    assert oracle_integrate(lambda x: np.exp(-x * x), mu).real == pytest.approx(math.gamma(mu + 1), rel=1e-10)


def test_small_rule_and_constant_integrand(scheme):
    s = build_scheme(radius=1.0, panels=2, nodes_per_panel=4)
    assert s.size == 8 and np.all(np.abs(s.nodes) < 1)
    assert math.isclose(math.fsum(s.weights), 2.0, rel_tol=1e-15)
    assert integrate_weighted(lambda x: np.ones_like(x), -0.5, scheme) == pytest.approx(24.0, rel=1e-15)


def test_panel_doubling_converges(scheme):
    f = lambda x: np.exp(-0.5 * (x - 0.7) ** 2) * np.cos(3 * x)
    fine = build_scheme(panels=96)
    for mu in (-0.5, 0.0, 1.5):
        assert abs(integrate_weighted(f, mu, scheme) - integrate_weighted(f, mu, fine)) < 1e-10
