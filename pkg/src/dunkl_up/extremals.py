"""Extremal families of the equality cases and their equality ODE residuals.

    gauss_kernel: d exp(-x^2/(2 zeta)) E_mu(b x)
    form12:       d exp(-x^2/(2 zeta)) exp(+i x^2/(2 xi)) E_mu(b x)
    form13:       d exp(-x^2/(2 zeta)) exp(-i x^2/(2 xi)) E_mu(b' x)
    form14:       form12 piece for x >= split, form13 piece below
    form15:       form13 piece for x >= split, form12 piece below

For the smooth forms T_mu f = (b - x/zeta +- i x/xi) f, so the phase
bracket A is exactly linear. The glued forms 14/15 have a kinked A, and
their means are not free: int (A - <x>_(D f)) rho^2 dmu = 0 is incompatible
with A - <x>_(D f) = +-|x - split| / xi. They are constructed and measured,
not assumed to be equality cases.
"""
from dataclasses import dataclass
from enum import Enum
import cmath
import math

import numpy as np

from .errors import ConfigError, ContractError, DomainError, RangeError, check_mu
from .functionals import mean_frequency, mean_position, polar_brackets
from .operators import X_EPS, FunctionHandle, PolarHandle
from .quadrature import default_scheme, integrate_weighted, measure_weights
from .special_functions import dunkl_kernel, dunkl_kernel_deriv

__all__ = [
    "ExtremalForm",
    "ExtremalSpec",
    "EqualityCase",
    "ClassifierResult",
    "PRESETS",
    "RHO_FLOOR",
    "preset",
    "make_extremal",
    "normalization_constant",
    "ode_residuals",
    "case_classifier",
    "perturb_amplitude",
    "measured_means",
]

# Nodes with rho below RHO_FLOOR * max(rho) are left out of residual sup norms.
RHO_FLOOR = 1e-13
LARGE_XI = 1e6
CLASSIFY_TOL = 1e-6


class ExtremalForm(str, Enum):
    GAUSS_KERNEL = "gauss_kernel"
    FORM12 = "form12"
    FORM13 = "form13"
    FORM14 = "form14"
    FORM15 = "form15"


@dataclass(frozen=True)
class ExtremalSpec:
    """Parameters of an extremal function.

    ``xi`` is ignored by gauss_kernel; ``b_prime`` is used by the pieces
    carrying the negative chirp; ``split_point`` only matters for the glued
    forms.
    """

    form: ExtremalForm = ExtremalForm.FORM12
    zeta: float = 1.0
    xi: float = LARGE_XI
    b: complex = 0.0
    b_prime: complex = 0.0
    split_point: float = 0.0
    theta: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "form", ExtremalForm(self.form))
        object.__setattr__(self, "mu", check_mu(self.mu))
        for name in ("zeta", "xi"):
            v = float(getattr(self, name))
            if not (v > 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be a positive finite number, got {v}")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "b", complex(self.b))
        object.__setattr__(self, "b_prime", complex(self.b_prime))
        object.__setattr__(self, "split_point", float(self.split_point))
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def glued(self):
        return self.form in (ExtremalForm.FORM14, ExtremalForm.FORM15)


_PRESETS = {
    "centered-gauss": dict(form="gauss_kernel", zeta=1.0, b=0.0),
    "shifted-gauss": dict(form="gauss_kernel", zeta=1.0, b=0.3),
    "complex-gauss": dict(form="gauss_kernel", zeta=2.0, b=0.2 + 0.1j),
    "centered": dict(form="form12", zeta=1.0, xi=2.0, b=0.0, b_prime=0.0),
    "chirped-gauss": dict(form="form12", zeta=1.0, xi=2.0, b=0.0),
    "form12-shifted": dict(form="form12", zeta=1.0, xi=2.0, b=0.3 + 0.2j),
    "form13-shifted": dict(form="form13", zeta=0.5, xi=1.5, b_prime=0.2 - 0.1j),
    "split-form14": dict(form="form14", zeta=1.0, xi=2.0, b=0.3j, b_prime=0.3j),
    "split-form15": dict(form="form15", zeta=1.0, xi=2.0, b=0.3j, b_prime=0.3j),
}
PRESETS = tuple(_PRESETS)


def preset(name, mu, **overrides):
    """ExtremalSpec of a named preset."""
    try:
        params = dict(_PRESETS[name])
    except KeyError:
        raise ConfigError(f"unknown extremal preset {name!r}; choose from {PRESETS}") from None
    params.update(overrides)
    return ExtremalSpec(mu=mu, **params)


def normalization_constant(spec):
    """Closed-form d making ||f||_(mu,2) = 1 for gauss_kernel, form12, form13.

    int exp(-x^2/zeta) |E_mu(bx)|^2 dmu
        = zeta^(mu+1) Gamma(mu+1) exp(Re(b^2) zeta / 2) E_mu(|b|^2 zeta / 2),
    so d = exp(i theta) times the inverse square root of the right side.
    """
    if spec.glued:
        raise ContractError("glued forms are normalized numerically")
    mu, z = spec.mu, spec.zeta
    b = spec.b_prime if spec.form is ExtremalForm.FORM13 else spec.b
    with np.errstate(over="raise", invalid="raise"):
        try:
            kern = float(np.real(dunkl_kernel(mu, abs(b) ** 2 * z / 2.0)))
            mass = z ** (mu + 1.0) * math.gamma(mu + 1.0) * math.exp((b * b).real * z / 2.0) * kern
        except (OverflowError, FloatingPointError) as exc:
            raise RangeError(f"normalization overflows for b={b}, zeta={z}") from exc
    if not (math.isfinite(mass) and mass > 0):
        raise RangeError(f"normalization mass is not finite and positive: {mass}")
    return cmath.exp(1j * spec.theta) / math.sqrt(mass)


class _Piece:
    """exp(-x^2/(2 zeta) + i s x^2/(2 xi)) E_mu(b x) and its log-derivative."""

    def __init__(self, mu, zeta, xi, sign, b):
        self.mu, self.zeta, self.b = mu, zeta, b
        self.c = sign / xi

    def values(self, x):
        g = np.exp(-x * x / (2.0 * self.zeta) + 0.5j * self.c * x * x)
        return g * dunkl_kernel(self.mu, self.b * x)

    def log_deriv(self, x):
        bx = self.b * x
        if self.b == 0:
            k = np.zeros_like(x, dtype=complex)
        else:
            k = self.b * dunkl_kernel_deriv(self.mu, bx) / dunkl_kernel(self.mu, bx)
        return k - x / self.zeta + 1j * self.c * x

    def polar(self, x):
        e = dunkl_kernel(self.mu, self.b * x)
        rho = np.exp(-x * x / (2.0 * self.zeta)) * np.abs(e)
        phi = 0.5 * self.c * x * x + np.angle(e)
        return rho, phi


def _pieces(spec):
    mu, z, xi = spec.mu, spec.zeta, spec.xi
    plus = _Piece(mu, z, xi, +1.0, spec.b)
    minus = _Piece(mu, z, xi, -1.0, spec.b_prime)
    form = spec.form
    if form is ExtremalForm.GAUSS_KERNEL:
        p = _Piece(mu, z, xi, 0.0, spec.b)
        return p, p
    if form is ExtremalForm.FORM12:
        return plus, plus
    if form is ExtremalForm.FORM13:
        return minus, minus
    if form is ExtremalForm.FORM14:
        return plus, minus
    return minus, plus


def _build(spec, d):
    upper, lower = _pieces(spec)
    s = spec.split_point
    r, th = abs(d), cmath.phase(d)

    def pick(fu, fl, x):
        x = np.asarray(x, dtype=float)
        if upper is lower:
            return fu(x)
        hi = x >= s
        return np.where(hi, fu(x), fl(x))

    def ev(x):
        return d * pick(upper.values, lower.values, x)

    def dv(x):
        return ev(x) * pick(upper.log_deriv, lower.log_deriv, x)

    def rho(x):
        return r * pick(lambda t: upper.polar(t)[0], lambda t: lower.polar(t)[0], x)

    def phi(x):
        return th + pick(lambda t: upper.polar(t)[1], lambda t: lower.polar(t)[1], x)

    def drho(x):
        return rho(x) * np.real(pick(upper.log_deriv, lower.log_deriv, x))

    def dphi(x):
        return np.imag(pick(upper.log_deriv, lower.log_deriv, x))

    name = spec.form.value
    return FunctionHandle(ev, dv, name), PolarHandle(rho, phi, drho, dphi, name)


def make_extremal(spec, scheme=None):
    """Build the (FunctionHandle, PolarHandle) pair of an extremal.

    Smooth forms use the closed-form constant; glued forms are normalized by
    quadrature on ``scheme`` (default scheme if omitted) with d3 = d4 and
    d5 = d6 times exp(i theta).
    """
    if spec.glued:
        scheme = scheme or default_scheme()
        _, pf = _build(spec, 1.0)
        mass = integrate_weighted(np.abs(pf.eval(scheme.nodes)) ** 2, spec.mu, scheme).real
        if not (math.isfinite(mass) and mass > 0):
            raise RangeError(f"glued extremal has non-finite mass {mass}")
        d = cmath.exp(1j * spec.theta) / math.sqrt(mass)
    else:
        d = normalization_constant(spec)
    fh, pf = _build(spec, d)
    x = (scheme or default_scheme()).nodes
    if np.any(pf.rho(x) == 0):
        raise ContractError("the modulus vanishes at a quadrature node; polar form undefined")
    return fh, pf


def perturb_amplitude(pf, eps=0.1):
    """Polar handle of the non-normalized (1 + eps x^2)-modulated function."""
    rho, drho = pf.rho, pf.rho_deriv
    return PolarHandle(
        lambda x: rho(x) * (1.0 + eps * x * x),
        pf.phi,
        lambda x: drho(x) * (1.0 + eps * x * x) + 2.0 * eps * x * rho(x),
        pf.phi_deriv,
        f"perturbed({pf.name})",
    )


def _mask(br, split, exclude_split):
    keep = (br.rho >= RHO_FLOOR * np.max(br.rho)) & (np.abs(br.x) >= X_EPS)
    if exclude_split is not None:
        keep &= np.abs(br.x - split) >= X_EPS
        # The node pair straddling the junction has a one-sided reflection partner.
        j = np.searchsorted(br.x, split)
        keep[max(j - 1, 0) : j + 1] = False
    return keep


def ode_residuals(pf, mu, zeta, xi, means, scheme, split=None, return_diagnostics=False):
    """Sup-norm residuals of the two equality conditions.

    res117 = sup |(x - a) rho + zeta B| and
    res118 = sup | |x - a| - xi |A - m| |, with (a, m) = ``means``.
    Nodes where rho is below RHO_FLOOR * max(rho), the x_eps neighborhood of
    the origin and, if ``split`` is given, the junction are excluded.
    """
    a, m = map(float, means)
    br = polar_brackets(pf, mu, scheme.nodes)
    keep = _mask(br, split, split)
    x, rho = br.x[keep], br.rho[keep]
    r117 = np.abs((x - a) * rho + zeta * br.B[keep])
    A = br.rhoA[keep] / rho
    r118 = np.abs(np.abs(x - a) - xi * np.abs(A - m))
    res = (float(np.max(r117)), float(np.max(r118)))
    if return_diagnostics:
        return res, {"excluded": int(np.count_nonzero(~keep)), "used": int(np.count_nonzero(keep))}
    return res


class EqualityCase(str, Enum):
    EQ38 = "eq38"
    EQ39 = "eq39"
    EQ40 = "eq40"
    EQ41 = "eq41"
    NONE = "none"


@dataclass
class ClassifierResult:
    case: EqualityCase
    xi: float
    residual: float
    intercept: float
    mean_freq: float
    scores: dict

    def __eq__(self, other):
        if isinstance(other, (EqualityCase, str)):
            return self.case == EqualityCase(other)
        return NotImplemented


def case_classifier(pf, mu, means, scheme, split=None, tol=CLASSIFY_TOL):
    """Which of the four linear phase-bracket shapes A(x) follows.

    A is fitted by weighted least squares (weights rho^2 dmu) to
    c0 + c1 s(x) (x - a) for each sign pattern s: +1, -1,
    sgn(x - split), -sgn(x - split). A pattern matches when c1 > tol and the
    weighted RMS residual is below ``tol`` times the RMS of A. The intercept
    c0 is free and reported next to the measured <x>_(D f).
    """
    a, m = map(float, means)
    split = a if split is None else float(split)
    br = polar_brackets(pf, mu, scheme.nodes)
    keep = _mask(br, split, split)
    x, rho = br.x[keep], br.rho[keep]
    A = br.rhoA[keep] / rho
    w = np.sqrt(rho * rho * measure_weights(mu, scheme)[keep])
    sg = np.where(x >= split, 1.0, -1.0)
    patterns = {
        EqualityCase.EQ38: np.ones_like(x),
        EqualityCase.EQ39: -np.ones_like(x),
        EqualityCase.EQ40: sg,
        EqualityCase.EQ41: -sg,
    }
    scale = math.sqrt(float(np.sum((w * A) ** 2))) or 1.0
    scores = {}
    for case, s in patterns.items():
        M = np.column_stack([w, w * s * (x - a)])
        coef, *_ = np.linalg.lstsq(M, w * A, rcond=None)
        resid = math.sqrt(float(np.sum((M @ coef - w * A) ** 2))) / scale
        scores[case] = (float(coef[0]), float(coef[1]), resid)
    best = min(scores, key=lambda c: scores[c][2] if scores[c][1] > 0 else math.inf)
    c0, c1, resid = scores[best]
    # A constant bracket (xi -> infinity) is not one of the four cases.
    if not (c1 > tol and resid < tol):
        return ClassifierResult(EqualityCase.NONE, math.nan, resid, c0, m, scores)
    return ClassifierResult(best, 1.0 / c1, resid, c0, m, scores)


def measured_means(pf, mu, scheme):
    """(<x>_f, <x>_(D f)) of a normalized polar handle."""
    return mean_position(pf, mu, scheme), mean_frequency(pf, mu, scheme)

