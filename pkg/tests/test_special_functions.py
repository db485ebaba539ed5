import math

import mpmath as mp
import numpy as np
import pytest

from dunkl_up.errors import AccuracyError, DomainError
from dunkl_up.oracle import oracle_bessel_j_norm, oracle_dunkl_kernel
from dunkl_up.special_functions import (
    SERIES_RADIUS,
    SeriesControl,
    bessel_j_norm,
    dunkl_kernel,
    dunkl_kernel_deriv,
    dunkl_kernel_imag,
    gamma_fn,
)

mp.mp.dps = 40


def mp_j(mu, z):
    z = mp.mpc(z)
    if z == 0:
        return mp.mpf(1)
    return mp.gamma(mu + 1) * (z / 2) ** (-mu) * mp.besselj(mu, z)


def mp_E(mu, z):
    # E_mu(z) = j_mu(iz) + z/(2(mu+1)) j_{mu+1}(iz)
    z = mp.mpc(z)
    return mp_j(mu, 1j * z) + z / (2 * (mu + 1)) * mp_j(mu + 1, 1j * z)


@pytest.mark.parametrize("z", [0.0, 0.3, 2.5, 7.9, 8.1, 15.0, 33.0, 60.0])
@pytest.mark.parametrize("mu", [-0.5, 0.0, 0.5, 1.5, 3.25])
def test_j_norm_real_against_mpmath(mu, z):
    ref = complex(mp_j(mu, z)).real
    got = bessel_j_norm(mu, z)
    assert isinstance(got, float)
    assert abs(got - ref) < 1e-13 * max(1.0, abs(ref)) + 1e-15


@pytest.mark.parametrize("z", [1 + 1j, -3 + 2j, 5j, 9 - 6j, -20 + 0.5j])
@pytest.mark.parametrize("mu", [-0.5, 0.0, 1.5])
def test_j_norm_complex_against_mpmath(mu, z):
    ref = complex(mp_j(mu, z))
    got = bessel_j_norm(mu, z)
    assert abs(got - ref) < 1e-12 * max(1.0, abs(ref))


def test_j_norm_special_values():
    assert bessel_j_norm(0.7, 0.0) == 1.0
    # j_{-1/2}(z) = cos z and j_{1/2}(z) = sin z / z
    z = np.linspace(-30, 30, 601)
    assert np.max(np.abs(bessel_j_norm(-0.5, z) - np.cos(z))) < 1e-13
    zz = z[z != 0]
    assert np.max(np.abs(bessel_j_norm(0.5, zz) - np.sin(zz) / zz)) < 1e-13


def test_j_norm_is_even_and_continuous_at_branch_switch():
    z = np.array([SERIES_RADIUS * (1 - 1e-12), SERIES_RADIUS * (1 + 1e-12)])
    v = bessel_j_norm(1.5, z)
    assert abs(v[0] - v[1]) < 1e-12
    assert np.array_equal(bessel_j_norm(2.0, -z), bessel_j_norm(2.0, z))


def test_kernel_reduces_to_exponential():
    z = np.linspace(-5, 5, 41)[:, None] + 1j * np.linspace(-20, 20, 41)[None, :]
    # even and odd parts are each of size exp(|Re z|); that sets the error scale
    scale = np.exp(np.abs(z.real))
    assert np.max(np.abs(dunkl_kernel(-0.5, z) - np.exp(z)) / scale) < 1e-13


@pytest.mark.parametrize("z", [0.5, -2.0, 3j, 1.5 - 4j, 12j])
@pytest.mark.parametrize("mu", [0.0, 0.5, 2.0])
def test_kernel_against_mpmath(mu, z):
    ref = complex(mp_E(mu, z))
    assert abs(dunkl_kernel(mu, z) - ref) < 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("z", [0.5, -2.0, 3j, 1.5 - 4j])
@pytest.mark.parametrize("mu", [-0.5, 0.0, 1.5])
def test_kernel_derivative_against_numerical_derivative(mu, z):
    ref = complex(mp.diff(lambda t: mp_E(mu, t), mp.mpc(z)))
    assert abs(dunkl_kernel_deriv(mu, z) - ref) < 1e-11 * max(1.0, abs(ref))


def test_kernel_derivative_at_minus_half_is_exponential():
    z = np.array([0.3, -1.0 + 2j, 4j])
    assert np.allclose(dunkl_kernel_deriv(-0.5, z), np.exp(z), rtol=1e-13, atol=0)


def test_kernel_imag_matches_complex_path():
    t = np.linspace(-40, 40, 801)
    for mu in (-0.5, 0.0, 1.5):
        assert np.max(np.abs(dunkl_kernel_imag(mu, t) - dunkl_kernel(mu, -1j * t))) < 1e-13


def test_against_decimal_oracle():
    for mu in (0.0, 1.5):
        z = np.array([3.0, 5 + 7j, -12j, 0.25])
        assert np.allclose(bessel_j_norm(mu, z), oracle_bessel_j_norm(mu, z), rtol=1e-13, atol=0)
        assert np.allclose(dunkl_kernel(mu, z), oracle_dunkl_kernel(mu, z), rtol=1e-13, atol=0)


def test_gamma_fn():
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert gamma_fn(5) == 24.0
    with pytest.raises(DomainError):
        gamma_fn(0.0)
    with pytest.raises(DomainError):
        gamma_fn(-1.5)


def test_domain_and_control_errors():
    with pytest.raises(DomainError):
        bessel_j_norm(-0.6, 1.0)
    with pytest.raises(DomainError):
        SeriesControl(abs_tol=0)
    with pytest.raises(DomainError):
        SeriesControl(max_terms=3)
    with pytest.raises(AccuracyError) as exc:
        bessel_j_norm(0.0, 7.5, SeriesControl(abs_tol=1e-15, max_terms=8))
    assert exc.value.last_term > 0


def test_array_shape_preserved():
    z = np.ones((3, 4)) * 0.5
    assert bessel_j_norm(0.0, z).shape == (3, 4)
    assert dunkl_kernel(0.0, z).shape == (3, 4)
