"""Scalar functionals of the uncertainty framework on L^2(|x|^(2mu+1) dx).

All moment functionals assume ||f||_{mu,2} = 1 and enforce it.

For f = rho exp(i phi) the Dunkl operator splits as

    exp(-i phi) T_mu f = B + i rho A,
    B = rho' + (mu+1/2) (rho(x) - rho(-x) cos[phi(x)-phi(-x)]) / x,
    A = phi' + (mu+1/2) rho(-x) sin[phi(x)-phi(-x)] / (x rho(x)),

so A is the bracket of the covariance integrands after the phase differences
cancel. Working with ``rho*A`` avoids any division by rho.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .errors import ConsistencyError, ContractError, DomainError, AccuracyError, check_mu
from .operators import X_EPS, PolarHandle, apply_T_mu
from .quadrature import fsum_complex, integrate_weighted, measure_weights, values_on
from .transforms import FracOrder, OrderKind, dunkl_transform, fractional_dunkl_transform

__all__ = [
    "NORM_TOL",
    "DISPERSION_P_GRID",
    "FunctionalSummary",
    "normalize",
    "lp_norm",
    "mean_position",
    "mean_frequency",
    "dispersion",
    "moments",
    "even_odd_energies",
    "polar_brackets",
    "covariance",
    "covariance_alt",
    "abs_covariance",
    "a_term",
    "lemma31_decomposition",
    "lemma32_chirp_shift",
    "lemma33_fractional_moments",
    "summarize",
]

NORM_TOL = 1e-8
COV_FORM_TOL = 1e-6
LEMMA_TOL = 1e-5
FREQ_RESIDUE_TOL = 1e-6
DISPERSION_P_GRID = (1.0, 1.25, 1.5, 1.75, 2.0)


def _real_integral(values, mu, scheme):
    return math.fsum((np.real(values) * measure_weights(mu, scheme)).tolist())


def normalize(f, mu, scheme):
    """Rescale a FunctionHandle or PolarHandle to unit L^2_mu norm.

    Returns ``(normalized, factor)`` with ``normalized = factor * f``.
    """
    norm = lp_norm(f, mu, 2.0, scheme)
    if norm == 0:
        raise ContractError("cannot normalize the zero function")
    factor = 1.0 / norm
    return f.scaled(factor), factor


def lp_norm(f, mu, p, scheme):
    """Weighted L^p norm (int |f|^p |x|^(2mu+1) dx)^(1/p), p >= 1."""
    p = float(p)
    if not p >= 1:
        raise DomainError(f"lp_norm needs p >= 1, got {p}")
    vals = np.abs(values_on(f, scheme))
    return _real_integral(vals**p, mu, scheme) ** (1.0 / p)


def _check_normalized(vals, mu, scheme):
    norm = math.sqrt(_real_integral(np.abs(vals) ** 2, mu, scheme))
    if abs(norm - 1.0) > NORM_TOL:
        raise ContractError(f"function must satisfy ||f||_(mu,2) = 1, measured {norm!r}")


def mean_position(f, mu, scheme, check=True):
    """First moment <x>_f = int x |f|^2 |x|^(2mu+1) dx."""
    mu = check_mu(mu)
    vals = values_on(f, scheme)
    if check:
        _check_normalized(vals, mu, scheme)
    return _real_integral(scheme.nodes * np.abs(vals) ** 2, mu, scheme)


def mean_frequency(f, mu, scheme, check=True, return_residue=False):
    """<x> of D_mu f, computed as int (-i T_mu f) conj(f) |x|^(2mu+1) dx.

    The integral is real for decaying f; its imaginary part is a resolution
    diagnostic (returned with ``return_residue=True``).
    """
    mu = check_mu(mu)
    x = scheme.nodes
    vals = values_on(f, scheme)
    if check:
        _check_normalized(vals, mu, scheme)
    z = integrate_weighted(-1j * apply_T_mu(f, mu, x) * np.conj(vals), mu, scheme)
    residue = abs(z.imag)
    if residue > FREQ_RESIDUE_TOL:
        raise AccuracyError(
            f"imaginary residue {residue:.3e} in <x>_(D f): insufficient decay or resolution",
            last_term=residue,
        )
    return (z.real, residue) if return_residue else z.real


def dispersion(f, mu, p, center, scheme):
    """Delta_{mu,p}(f) = (int |(x - center) f|^p |x|^(2mu+1) dx)^(1/p), 1 <= p <= 2."""
    p = float(p)
    if not 1.0 <= p <= 2.0:
        raise DomainError(f"dispersion is defined for p in [1, 2], got {p}")
    mu = check_mu(mu)
    vals = values_on(f, scheme)
    return _real_integral(np.abs((scheme.nodes - center) * vals) ** p, mu, scheme) ** (1.0 / p)


def moments(f, mu, scheme, check=True):
    """(<x>, Delta^2_{mu,2}) of a normalized function or sample vector."""
    mean = mean_position(f, mu, scheme, check=check)
    return mean, dispersion(f, mu, 2.0, mean, scheme) ** 2


def even_odd_energies(f, mu, scheme):
    """(||f_e||^2, ||f_o||^2) in L^2_mu."""
    vals = values_on(f, scheme)
    refl = vals[::-1]
    even = 0.5 * (vals + refl)
    odd = 0.5 * (vals - refl)
    return (
        _real_integral(np.abs(even) ** 2, mu, scheme),
        _real_integral(np.abs(odd) ** 2, mu, scheme),
    )


@dataclass
class PolarBrackets:
    x: np.ndarray
    rho: np.ndarray
    rho_reflected: np.ndarray
    cos_diff: np.ndarray
    sin_diff: np.ndarray
    B: np.ndarray
    rhoA: np.ndarray
    phi_deriv: np.ndarray


def polar_brackets(pf, mu, x):
    """Evaluate rho, B and rho*A at the points ``x``.

    Near the origin the difference quotients are replaced by their limits
    computed from the supplied derivatives.
    """
    mu = check_mu(mu)
    if not isinstance(pf, PolarHandle):
        raise ContractError("polar functionals need a PolarHandle")
    x = np.asarray(x, dtype=float)
    rho, rho_m = pf.rho(x), pf.rho(-x)
    drho, dphi = pf.rho_deriv(x), pf.phi_deriv(x)
    diff = pf.phi(x) - pf.phi(-x)
    c, s = np.cos(diff), np.sin(diff)
    k = mu + 0.5
    near = np.abs(x) < X_EPS
    safe = np.where(near, 1.0, x)
    amp_q = (rho - rho_m * c) / safe
    phase_q = s / safe
    if near.any():
        amp_q = np.where(near, drho + pf.rho_deriv(-x), amp_q)
        phase_q = np.where(near, dphi + pf.phi_deriv(-x), phase_q)
    B = drho + k * amp_q
    rhoA = rho * dphi + k * rho_m * phase_q
    return PolarBrackets(x, rho, rho_m, c, s, B, rhoA, dphi)


def _means(pf, mu, scheme, means):
    if means is not None:
        return means
    return mean_position(pf, mu, scheme), mean_frequency(pf, mu, scheme)


def covariance(pf, mu, scheme, means=None, check=True):
    """Cov_mu(f) = int x phi'(x) rho^2 |x|^(2mu+1) dx - <x>_f <x>_(D f).

    With ``check=True`` the value is compared with :func:`covariance_alt`
    and a ConsistencyError is raised beyond 1e-6.
    """
    a, m = _means(pf, mu, scheme, means)
    br = polar_brackets(pf, mu, scheme.nodes)
    cov = _real_integral(br.x * br.phi_deriv * br.rho**2, mu, scheme) - a * m
    if check:
        alt = covariance_alt(pf, mu, scheme, means=(a, m), brackets=br)
        if abs(cov - alt) > COV_FORM_TOL:
            raise ConsistencyError(f"covariance forms disagree: {cov!r} vs {alt!r}")
    return cov


def covariance_alt(pf, mu, scheme, means=None, brackets=None):
    """Cov_mu(f) as int (x - <x>_f) (A - <x>_(D f)) rho^2 |x|^(2mu+1) dx."""
    a, m = _means(pf, mu, scheme, means)
    br = brackets if brackets is not None else polar_brackets(pf, mu, scheme.nodes)
    return _real_integral((br.x - a) * (br.rhoA - m * br.rho) * br.rho, mu, scheme)


def abs_covariance(pf, mu, scheme, means=None):
    """COV_mu(f) = int |(x - <x>_f)(A - <x>_(D f))| rho^2 |x|^(2mu+1) dx."""
    a, m = _means(pf, mu, scheme, means)
    br = polar_brackets(pf, mu, scheme.nodes)
    return _real_integral(np.abs((br.x - a) * (br.rhoA - m * br.rho)) * br.rho, mu, scheme)


def a_term(pf, mu, scheme):
    """(mu+1/2) int rho(x) rho(-x) cos[phi(x)-phi(-x)] |x|^(2mu+1) dx + 1/2."""
    mu = check_mu(mu)
    _check_normalized(values_on(pf, scheme), mu, scheme)
    br = polar_brackets(pf, mu, scheme.nodes)
    return (mu + 0.5) * _real_integral(br.rho * br.rho_reflected * br.cos_diff, mu, scheme) + 0.5


def lemma31_decomposition(pf, mu, scheme, means=None):
    """The amplitude and phase integrals whose sum is Delta^2_{mu,2}(D_mu f).

    amp = int B^2 dmu and phase = int (A - <x>_(D f))^2 rho^2 dmu.
    """
    a, m = _means(pf, mu, scheme, means)
    br = polar_brackets(pf, mu, scheme.nodes)
    amp = _real_integral(br.B**2, mu, scheme)
    phase = _real_integral((br.rhoA - m * br.rho) ** 2, mu, scheme)
    return amp, phase


def _chirped(pf, c):
    phi, dphi = pf.phi, pf.phi_deriv
    return PolarHandle(
        pf.rho,
        lambda x: phi(x) + 0.5 * c * x * x,
        pf.rho_deriv,
        lambda x: dphi(x) + c * x,
        f"chirp({c:g})*{pf.name}",
    )


def lemma32_chirp_shift(pf, mu, cot_alpha, scheme, check=True):
    """Frequency moments of g = exp(i x^2 cot(alpha) / 2) f in closed form.

    <x>_(D g) = cot <x>_f + <x>_(D f) and
    Delta^2(D g) = Delta^2(D f) + 2 cot Cov(f) + cot^2 Delta^2(f).
    """
    c = float(cot_alpha)
    if not math.isfinite(c):
        raise ContractError("cot(alpha) must be finite (alpha outside pi*Z)")
    a, m = mean_position(pf, mu, scheme), mean_frequency(pf, mu, scheme)
    disp_f = dispersion(pf, mu, 2.0, a, scheme) ** 2
    amp, phase = lemma31_decomposition(pf, mu, scheme, means=(a, m))
    cov = covariance(pf, mu, scheme, means=(a, m))
    mean = c * a + m
    disp2 = amp + phase + 2.0 * c * cov + c * c * disp_f
    if check:
        g = _chirped(pf, c)
        direct_mean = mean_frequency(g, mu, scheme)
        direct_disp = sum(lemma31_decomposition(g, mu, scheme, means=(a, direct_mean)))
        if abs(direct_mean - mean) > LEMMA_TOL or abs(direct_disp - disp2) > LEMMA_TOL:
            raise ConsistencyError(
                f"chirp-shift closed form ({mean}, {disp2}) vs direct ({direct_mean}, {direct_disp})"
            )
    return mean, disp2


def lemma33_fractional_moments(pf, mu, alpha, scheme, check=True):
    """Moments of D^alpha f from those of f and D_mu f.

    <x> = cos a <x>_f + sin a <x>_(D f) and
    Delta^2 = cos^2 a Delta^2(f) + 2 cos a sin a Cov(f) + sin^2 a Delta^2(D f).
    With ``check=True`` the pair is compared with moments of the computed
    fractional transform.
    """
    alpha = float(alpha)
    a, m = mean_position(pf, mu, scheme), mean_frequency(pf, mu, scheme)
    disp_f = dispersion(pf, mu, 2.0, a, scheme) ** 2
    disp_D = sum(lemma31_decomposition(pf, mu, scheme, means=(a, m)))
    cov = covariance(pf, mu, scheme, means=(a, m))
    ca, sa = math.cos(alpha), math.sin(alpha)
    mean = ca * a + sa * m
    disp2 = ca * ca * disp_f + 2.0 * ca * sa * cov + sa * sa * disp_D
    if check:
        F = fractional_dunkl_transform(pf, mu, alpha, scheme).samples
        dm, dd = moments(F, mu, scheme, check=False)
        if abs(dm - mean) > LEMMA_TOL or abs(dd - disp2) > LEMMA_TOL:
            raise ConsistencyError(f"fractional moments closed form ({mean}, {disp2}) vs direct ({dm}, {dd})")
    return mean, disp2


@dataclass
class FunctionalSummary:
    """Every scalar functional of a normalized f used by the bounds."""

    norm2: float
    mean_pos: float
    mean_freq: float
    disp_p: dict
    even_energy: float
    odd_energy: float
    cov: float
    abs_cov: float
    a_term: float
    disp2_f: float
    disp2_Df: float
    diagnostics: dict = field(default_factory=dict)


def summarize(pf, mu, scheme, p_grid=DISPERSION_P_GRID, transform=None):
    """Compute a FunctionalSummary; Delta^2(D_mu f) comes from the transform.

    ``transform`` may supply precomputed samples of D_mu f.
    """
    mu = check_mu(mu)
    vals = values_on(pf, scheme)
    norm2 = math.sqrt(_real_integral(np.abs(vals) ** 2, mu, scheme))
    _check_normalized(vals, mu, scheme)
    a = mean_position(vals, mu, scheme, check=False)
    m, residue = mean_frequency(pf, mu, scheme, check=False, return_residue=True)
    disp_p = {float(p): dispersion(vals, mu, p, a, scheme) for p in p_grid}
    even, odd = even_odd_energies(vals, mu, scheme)
    cov = covariance(pf, mu, scheme, means=(a, m))
    cov_alt = covariance_alt(pf, mu, scheme, means=(a, m))
    abs_cov = abs_covariance(pf, mu, scheme, means=(a, m))
    at = a_term(pf, mu, scheme)
    if transform is None:
        transform = dunkl_transform(vals, mu, scheme)
    F = values_on(transform, scheme)
    mean_D = mean_position(F, mu, scheme, check=False)
    disp2_Df = dispersion(F, mu, 2.0, mean_D, scheme) ** 2
    amp, phase = lemma31_decomposition(pf, mu, scheme, means=(a, m))
    diagnostics = {
        "freq_residue": residue,
        "cov_alt": cov_alt,
        "mean_freq_transform": mean_D,
        "disp2_Df_lemma31": amp + phase,
        "norm_Df": math.sqrt(_real_integral(np.abs(F) ** 2, mu, scheme)),
    }
    return FunctionalSummary(
        norm2=norm2,
        mean_pos=a,
        mean_freq=m,
        disp_p=disp_p,
        even_energy=even,
        odd_energy=odd,
        cov=cov,
        abs_cov=abs_cov,
        a_term=at,
        disp2_f=disp_p[2.0] ** 2 if 2.0 in disp_p else dispersion(vals, mu, 2.0, a, scheme) ** 2,
        disp2_Df=disp2_Df,
        diagnostics=diagnostics,
    )
