"""Gamma function, normalized spherical Bessel function and the Dunkl kernel.

The normalized Bessel function is

    j_mu(z) = Gamma(mu+1) * sum_n (-1)^n (z/2)^(2n) / (n! Gamma(n+mu+1))

and the one-dimensional Dunkl kernel is

    E_mu(z) = j_mu(iz) + z / (2(mu+1)) * j_{mu+1}(iz).

Small arguments are summed directly with compensated summation. Beyond
``SERIES_RADIUS`` the alternating series cancels badly on the real axis, so
j_mu is obtained from ``scipy.special.jv`` through
j_mu(z) = Gamma(mu+1) (z/2)^(-mu) J_mu(z).
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy import special as sp

from .errors import AccuracyError, DomainError, check_mu

__all__ = [
    "SeriesControl",
    "DEFAULT_CONTROL",
    "SERIES_RADIUS",
    "gamma_fn",
    "bessel_j_norm",
    "dunkl_kernel",
    "dunkl_kernel_deriv",
    "dunkl_kernel_imag",
]

# Past |z| = 8 the real-axis series loses more than ~1e-12 absolute accuracy.
SERIES_RADIUS = 8.0


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for the power series."""

    abs_tol: float = 1e-15
    max_terms: int = 400

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 8:
            raise DomainError(f"max_terms must be an integer >= 8, got {self.max_terms}")


DEFAULT_CONTROL = SeriesControl()


def gamma_fn(x):
    """Gamma function for positive real ``x``."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


def _two_sum(s, c, t):
    # Neumaier step on real arrays: returns new (sum, compensation).
    new = s + t
    big = np.abs(s) >= np.abs(t)
    c = c + np.where(big, (s - new) + t, (t - new) + s)
    return new, c


def _series(mu, z, ctl):
    """Direct compensated summation of the j_mu series (vectorized)."""
    is_complex = np.iscomplexobj(z)
    q = -(z * z) / 4.0
    term = np.ones_like(z)
    sr = np.ones(z.shape)
    cr = np.zeros(z.shape)
    if is_complex:
        si = np.zeros(z.shape)
        ci = np.zeros(z.shape)
    active = np.ones(z.shape, dtype=bool)
    prev = np.abs(term)
    for n in range(1, ctl.max_terms + 1):
        term = term * q / (n * (n + mu))
        mag = np.abs(term)
        if is_complex:
            sr, cr = _two_sum(sr, cr, np.where(active, term.real, 0.0))
            si, ci = _two_sum(si, ci, np.where(active, term.imag, 0.0))
            partial = np.hypot(sr, si)
        else:
            sr, cr = _two_sum(sr, cr, np.where(active, term, 0.0))
            partial = np.abs(sr)
        done = (mag < ctl.abs_tol * np.maximum(1.0, partial)) & (mag <= prev)
        active &= ~done
        prev = mag
        if not active.any():
            break
    else:
        raise AccuracyError(
            f"j_mu series did not converge in {ctl.max_terms} terms",
            last_term=float(np.max(np.where(active, mag, 0.0))),
        )
    if is_complex:
        return (sr + cr) + 1j * (si + ci)
    return sr + cr


def _large(mu, z):
    # j_mu is even; fold onto Re z >= 0 to stay clear of the branch cut.
    z = np.where(np.real(z) < 0, -z, z)
    return math.gamma(mu + 1.0) * (z / 2.0) ** (-mu) * sp.jv(mu, z)


def bessel_j_norm(mu, z, ctl=DEFAULT_CONTROL):
    """Normalized spherical Bessel function j_mu(z).

    Parameters
    ----------
    mu : float
        Order, ``mu >= -1/2``.
    z : scalar or array_like, real or complex
        Argument. Real input gives real output.
    ctl : SeriesControl
        Series truncation settings for the small-argument branch.
    """
    mu = check_mu(mu)
    za = np.asarray(z)
    scalar = za.ndim == 0
    za = np.atleast_1d(za)
    za = za.astype(complex if np.iscomplexobj(za) else float)
    out = np.empty_like(za)
    small = np.abs(za) <= SERIES_RADIUS
    if small.any():
        out[small] = _series(mu, za[small], ctl)
    if (~small).any():
        out[~small] = _large(mu, za[~small])
    return out[0] if scalar else out


def dunkl_kernel(mu, z, ctl=DEFAULT_CONTROL):
    """Dunkl kernel E_mu(z) for complex ``z`` (scalar or array)."""
    mu = check_mu(mu)
    z = np.asarray(z, dtype=complex)
    iz = 1j * z
    return bessel_j_norm(mu, iz, ctl) + z / (2.0 * (mu + 1.0)) * bessel_j_norm(mu + 1.0, iz, ctl)


def dunkl_kernel_deriv(mu, z, ctl=DEFAULT_CONTROL):
    """Classical derivative dE_mu/dz, from j_nu'(z) = -z j_{nu+1}(z) / (2(nu+1))."""
    mu = check_mu(mu)
    z = np.asarray(z, dtype=complex)
    iz = 1j * z
    j1 = bessel_j_norm(mu + 1.0, iz, ctl)
    j2 = bessel_j_norm(mu + 2.0, iz, ctl)
    return (1.0 + z) * j1 / (2.0 * (mu + 1.0)) + z * z * j2 / (4.0 * (mu + 1.0) * (mu + 2.0))


def dunkl_kernel_imag(mu, t, ctl=DEFAULT_CONTROL):
    """E_mu(-i t) for real ``t``; the kernel of the Dunkl transform.

    Only real-argument Bessel evaluations are needed:
    E_mu(-it) = j_mu(t) - i t / (2(mu+1)) j_{mu+1}(t).
    """
    mu = check_mu(mu)
    t = np.asarray(t, dtype=float)
    return bessel_j_norm(mu, t, ctl) - 1j * t / (2.0 * (mu + 1.0)) * bessel_j_norm(mu + 1.0, t, ctl)
