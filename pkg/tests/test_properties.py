import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl_up.battery import battery_function
from dunkl_up.bounds import sami_rhs
from dunkl_up.functionals import summarize
from dunkl_up.operators import FunctionHandle, apply_T_mu
from dunkl_up.quadrature import default_scheme, integrate_weighted
from dunkl_up.special_functions import bessel_j_norm, dunkl_kernel, dunkl_kernel_deriv
from dunkl_up.transforms import ALPHA_EPS, fractional_dunkl_transform

mus = st.sampled_from([-0.5, 0.0, 0.25, 0.5, 1.0, 1.5, 3.0])
# |x|^(2mu+1) is polynomial on each half of the origin panel only for these
grid_mus = st.sampled_from([-0.5, 0.0, 0.5, 1.0, 1.5, 3.0])
small = st.floats(-6, 6, allow_nan=False)
angles = st.floats(-10, 10, allow_nan=False)


@given(mus, small, small)
def test_normalized_bessel_is_even(mu, a, b):
    z = complex(a, b)
    assert abs(bessel_j_norm(mu, z) - bessel_j_norm(mu, -z)) <= 1e-13 * max(1, abs(bessel_j_norm(mu, z)))


@given(mus, small, small)
def test_kernel_conjugate_symmetry(mu, a, b):
    z = complex(a, b)
    e = dunkl_kernel(mu, z)
    assert abs(dunkl_kernel(mu, z.conjugate()) - np.conj(e)) <= 1e-13 * max(1, abs(e))


@given(mus, st.floats(-3, 3), st.floats(-3, 3))
def test_kernel_is_eigenfunction(mu, lr, li):
    lam = complex(lr, li)
    f = FunctionHandle(lambda x: dunkl_kernel(mu, lam * x), lambda x: lam * dunkl_kernel_deriv(mu, lam * x))
    x = np.linspace(-2, 2, 9) + 0.05
    tf = apply_T_mu(f, mu, x)
    ref = lam * f.eval(x)
    assert np.abs(tf - ref).max() <= 1e-11 * max(1, np.abs(ref).max())


@given(
    st.floats(0.01, 10), st.floats(0.01, 10), st.floats(-5, 5), angles, angles,
)
def test_product_of_fractional_dispersions(X, Y, C, a, b):
    # any (X, Y, C) with |C| <= sqrt(XY) fed to the rotation rule
    C = C / 5 * math.sqrt(X * Y)
    d2 = lambda t: math.cos(t) ** 2 * X + 2 * math.cos(t) * math.sin(t) * C + math.sin(t) ** 2 * Y
    lhs = d2(a) * d2(b)
    sq = math.cos(a) * math.cos(b) * X + math.sin(a + b) * C + math.sin(a) * math.sin(b) * Y
    rhs = math.sin(a - b) ** 2 * (X * Y - C * C) + sq * sq
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs), X * Y)


_SUMMARY = None


def _summary():
    global _SUMMARY
    if _SUMMARY is None:
        s = default_scheme()
        _SUMMARY = summarize(battery_function("mixed", 0.5, s), 0.5, s)
    return _SUMMARY


@given(angles, angles, st.integers(-4, 4), st.integers(-4, 4))
def test_sami_bound_has_period_pi(a, b, j, k):
    if abs(math.sin(a - b)) < 1e-6:
        return
    s = _summary()
    base = sami_rhs(s, 0.5, a, b)
    shifted = sami_rhs(s, 0.5, a + j * math.pi, b + k * math.pi)
    assert shifted == pytest.approx(base, rel=1e-9, abs=1e-15)


@settings(max_examples=25, deadline=None)
@given(
    grid_mus,
    st.floats(-1.5, 1.5),
    st.floats(-1.0, 1.0),
    st.floats(0.6, 1.6),
    st.floats(-7, 7).filter(lambda t: abs(math.sin(t)) > 0.2),
)
def test_plancherel_random_gaussians(mu, c, k, s, alpha):
    scheme = default_scheme()
    f = lambda x: np.exp(-((x - c) ** 2) / (2 * s * s) + 1j * k * x)
    n0 = integrate_weighted(np.abs(f(scheme.nodes)) ** 2, mu, scheme).real
    F = fractional_dunkl_transform(f, mu, alpha, scheme).values
    n1 = integrate_weighted(np.abs(F) ** 2, mu, scheme).real
    assert abs(n1 - n0) <= 1e-9 * n0
