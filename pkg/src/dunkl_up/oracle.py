"""Brute-force reference computations for the test suite.

Nothing here touches the quadrature, kernel or transform modules: integrals
are uniform-grid trapezoid sums with Richardson extrapolation, the Fourier
transform is a dense direct sum, and the Dunkl kernel series is summed in
decimal arithmetic.
"""
from dataclasses import dataclass
import cmath
import decimal
import math

import numpy as np

__all__ = [
    "OracleConfig",
    "oracle_integrate",
    "oracle_classical_ft",
    "oracle_bessel_j_norm",
    "oracle_dunkl_kernel",
]

REFERENCE_NODES = 768


@dataclass(frozen=True)
class OracleConfig:
    density_multiplier: int = 4
    working_precision: str = "double_compensated"

    def __post_init__(self):
        if int(self.density_multiplier) != self.density_multiplier or self.density_multiplier < 4:
            raise ValueError(f"density_multiplier must be an integer >= 4, got {self.density_multiplier}")
        if self.working_precision != "double_compensated":
            raise ValueError(f"unsupported working precision {self.working_precision!r}")

    @property
    def n_points(self):
        return self.density_multiplier * REFERENCE_NODES


def _csum(v):
    v = np.asarray(v, dtype=complex)
    return complex(math.fsum(v.real.tolist()), math.fsum(v.imag.tolist()))


def _trapezoid(f, s, R, n):
    # Symmetric grid with x = 0 as a node; the integrand decays at +-R.
    x = np.linspace(-R, R, n + 1)
    h = 2.0 * R / n
    v = np.asarray(f(x), dtype=complex) * np.abs(x) ** s
    v[0] *= 0.5
    v[-1] *= 0.5
    return h * _csum(v)


def oracle_integrate(f, mu, R=12.0, n_points=None, config=OracleConfig()):
    """Trapezoid value of int_{-R}^{R} f(x) |x|^(2mu+1) dx.

    With smooth f the error expansion only carries powers h^(2mu+2+2j)
    coming from the origin, which two Richardson steps remove. When 2mu+1
    is an even integer the plain trapezoid sum is already spectrally
    accurate and is returned as is.
    """
    n = config.n_points if n_points is None else int(n_points)
    if n < config.n_points:
        raise ValueError(f"n_points must be at least {config.n_points}")
    n -= n % 4
    s = 2.0 * mu + 1.0
    t1 = _trapezoid(f, s, R, n)
    if s == 0 or (s == int(s) and int(s) % 2 == 0):
        return t1
    t2 = _trapezoid(f, s, R, n // 2)
    t4 = _trapezoid(f, s, R, n // 4)
    e0, e1 = s + 1.0, s + 3.0
    r0, r1 = 2.0**e0, 2.0**e1
    a1 = (r0 * t1 - t2) / (r0 - 1.0)
    a2 = (r0 * t2 - t4) / (r0 - 1.0)
    return (r1 * a1 - a2) / (r1 - 1.0)


def oracle_classical_ft(samples, w, R=12.0, n_points=None, config=OracleConfig()):
    """(2 pi)^(-1/2) int f(x) exp(-i w x) dx by dense direct summation.

    ``samples`` is either a vectorized callable or a pair ``(x, values)`` on
    a uniform grid that reaches the decayed tails.
    """
    if callable(samples):
        n = config.n_points if n_points is None else int(n_points)
        x = np.linspace(-R, R, n + 1)
        vals = np.asarray(samples(x), dtype=complex)
    else:
        x, vals = (np.asarray(a) for a in samples)
        vals = vals.astype(complex)
    h = x[1] - x[0]
    wt = np.full(x.size, h)
    wt[0] = wt[-1] = 0.5 * h
    w = np.atleast_1d(np.asarray(w, dtype=float))
    out = np.empty(w.size, dtype=complex)
    for k, wk in enumerate(w):
        out[k] = _csum(vals * wt * np.exp(-1j * wk * x))
    return out / math.sqrt(2.0 * math.pi)


class _DecimalComplex:
    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re, self.im = re, im

    def __add__(self, o):
        return _DecimalComplex(self.re + o.re, self.im + o.im)

    def __mul__(self, o):
        return _DecimalComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def scale(self, d):
        return _DecimalComplex(self.re / d, self.im / d)

    def mag(self):
        return abs(self.re) + abs(self.im)

    def to_complex(self):
        return complex(float(self.re), float(self.im))


def _decimal_j(mu, z, digits):
    # sum_n q^n / (n! prod_{k<=n} (k + mu)), q = -z^2/4; no Gamma function needed.
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        D = decimal.Decimal
        zr, zi = D(repr(z.real)), D(repr(z.imag))
        q = _DecimalComplex(-(zr * zr - zi * zi) / 4, -(2 * zr * zi) / 4)
        m = D(repr(float(mu)))
        term = _DecimalComplex(D(1), D(0))
        total = _DecimalComplex(D(1), D(0))
        eps = D(10) ** (-digits + 5)
        n = 0
        while True:
            n += 1
            term = (term * q).scale(D(n) * (D(n) + m))
            total = total + term
            if term.mag() <= eps * max(total.mag(), D(1)) and n > abs(z):
                break
            if n > 10000:
                raise RuntimeError("decimal series failed to converge")
        return total.to_complex()


def oracle_bessel_j_norm(mu, z, digits=50):
    """Normalized Bessel j_mu(z) from its series in ``digits``-digit decimals."""
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.array([_decimal_j(mu, complex(v), digits) for v in zs])
    return out[0] if np.ndim(z) == 0 else out


def oracle_dunkl_kernel(mu, z, digits=50):
    """E_mu(z) = j_mu(iz) + z/(2(mu+1)) j_{mu+1}(iz) with decimal series."""
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.array(
        [
            _decimal_j(mu, 1j * complex(v), digits)
            + complex(v) / (2.0 * (mu + 1.0)) * _decimal_j(mu + 1.0, 1j * complex(v), digits)
            for v in zs
        ]
    )
    return out[0] if np.ndim(z) == 0 else out
