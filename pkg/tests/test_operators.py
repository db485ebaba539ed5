import numpy as np
import pytest

from dunkl_up.errors import ContractError
from dunkl_up.operators import (
    FunctionHandle,
    PolarHandle,
    antisymmetry_residual,
    apply_T_mu,
    commutator_minus,
    commutator_plus,
    product_rule_check,
    times_x,
)

X = np.linspace(-3.0, 3.0, 61) + 0.013  # avoid the origin exactly

gauss = FunctionHandle(lambda x: np.exp(-x * x / 2), lambda x: -x * np.exp(-x * x / 2), "g")
shifted = FunctionHandle(
    lambda x: np.exp(-((x - 0.7) ** 2) / 2 + 0.3j * x),
    lambda x: (-(x - 0.7) + 0.3j) * np.exp(-((x - 0.7) ** 2) / 2 + 0.3j * x),
    "s",
)
ident = FunctionHandle(lambda x: x + 0j, lambda x: np.ones_like(x) + 0j, "x")
square = FunctionHandle(lambda x: x * x + 0j, lambda x: 2 * x + 0j, "x2")
cube = FunctionHandle(lambda x: x**3 + 0j, lambda x: 3 * x * x + 0j, "x3")
sine = FunctionHandle(lambda x: np.sin(x) + 0j, lambda x: np.cos(x) + 0j, "sin")


def test_classical_case_is_derivative():
    assert np.array_equal(apply_T_mu(shifted, -0.5, X), shifted.deriv(X))


@pytest.mark.parametrize("mu", [-0.5, 0.0, 0.5, 1.5, 4.0])
def test_monomials(mu):
    # T x = 1 + (2mu+1) = 2mu+2 ; T x^2 = 2x ; T x^3 = 3x^2 + (2mu+1) x^2
    assert np.allclose(apply_T_mu(ident, mu, X), 2 * mu + 2, rtol=0, atol=1e-13)
    assert np.allclose(apply_T_mu(square, mu, X), 2 * X, rtol=0, atol=1e-13)
    assert np.allclose(apply_T_mu(cube, mu, X), (2 * mu + 4) * X * X, rtol=0, atol=1e-12)


@pytest.mark.parametrize("mu", [0.0, 1.0, 2.5])
def test_even_gaussian(mu):
    # even f: T f = f'
    assert np.allclose(apply_T_mu(gauss, mu, X), gauss.deriv(X), atol=1e-15)


@pytest.mark.parametrize("mu", [0.0, 0.5, 1.5])
def test_near_origin_limit(mu):
    x = np.array([-1e-9, 0.0, 1e-9])
    # limit of (f(x)-f(-x))/x is 2 f'(0) for odd part; here f' + (mu+1/2)*2f'_odd(0)
    expect = shifted.deriv(0.0) + (mu + 0.5) * 2 * shifted.deriv(0.0)
    got = apply_T_mu(shifted, mu, x)
    assert np.allclose(got, expect, atol=1e-8)
    far = apply_T_mu(shifted, mu, np.array([2e-6]))
    assert abs(far[0] - expect) < 1e-5


@pytest.mark.parametrize("mu", [0.0, 0.5, 1.5])
@pytest.mark.parametrize("f", [gauss, shifted, sine])
def test_commutators(mu, f):
    cm = commutator_minus(f, mu, X)
    assert np.allclose(cm, -f.eval(X) - (2 * mu + 1) * f.eval(-X), atol=1e-12)
    cp = commutator_plus(f, mu, X)
    assert np.allclose(cp, 2 * X * f.deriv(X) + 2 * (mu + 1) * f.eval(X), atol=1e-12)


@pytest.mark.parametrize("mu", [0.0, 1.5])
def test_product_rule_holds_with_an_even_factor(mu):
    assert product_rule_check(gauss, shifted, mu, X).max() < 1e-12
    assert product_rule_check(square, cube, mu, X).max() < 1e-11


def test_product_rule_fails_for_two_odd_factors():
    # x * x: T(x^2) = 2x while 2 * (2mu+2) x differ unless mu = -1/2
    r = product_rule_check(ident, ident, 1.0, X)
    assert np.allclose(r, np.abs(2 * X - 2 * (2 * 1.0 + 2) * X), atol=1e-12)
    assert product_rule_check(ident, sine, 0.5, X).max() > 0.1
    assert product_rule_check(ident, ident, -0.5, X).max() < 1e-14


def test_product_rule_rejects_origin():
    with pytest.raises(ContractError):
        product_rule_check(gauss, gauss, 0.0, np.array([0.0, 1.0]))


@pytest.mark.parametrize("mu", [-0.5, 0.0, 0.5, 1.5])
def test_antisymmetry(scheme, mu):
    g_odd = times_x(gauss)
    assert antisymmetry_residual(shifted, gauss, mu, scheme) < 1e-12
    assert antisymmetry_residual(shifted, g_odd, mu, scheme) < 1e-12


def test_missing_derivative():
    f = FunctionHandle(lambda x: np.exp(-x * x))
    with pytest.raises(ContractError):
        apply_T_mu(f, 0.0, X)
    with pytest.raises(ContractError):
        PolarHandle.from_handle(f)


def test_polar_round_trip():
    p = PolarHandle.from_handle(shifted)
    assert np.allclose(p.eval(X), shifted.eval(X), atol=1e-15)
    assert np.allclose(p.deriv(X), shifted.deriv(X), atol=1e-14)
    assert np.allclose(p.phi_deriv(X), 0.3, atol=1e-14)
    assert np.allclose(p.rho_deriv(X), -(X - 0.7) * np.exp(-((X - 0.7) ** 2) / 2), atol=1e-14)


def test_scaled_handles():
    c = 2.0 - 1.5j
    assert np.allclose(shifted.scaled(c).eval(X), c * shifted.eval(X))
    assert np.allclose(shifted.scaled(c).deriv(X), c * shifted.deriv(X))
    p = PolarHandle.from_handle(shifted).scaled(c)
    assert np.allclose(p.eval(X), c * shifted.eval(X), atol=1e-14)
    assert np.allclose(p.deriv(X), c * shifted.deriv(X), atol=1e-13)
