"""The Dunkl operator T_mu f(x) = f'(x) + (mu + 1/2) (f(x) - f(-x)) / x."""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ContractError, check_mu
from .quadrature import integrate_weighted

__all__ = [
    "X_EPS",
    "FunctionHandle",
    "PolarHandle",
    "apply_T_mu",
    "times_x",
    "product",
    "product_rule_check",
    "commutator_minus",
    "commutator_plus",
    "antisymmetry_residual",
]

# Below this |x| the difference quotient is replaced by its limit.
X_EPS = 1e-6


@dataclass(frozen=True)
class FunctionHandle:
    """Complex function of a real variable with optional classical derivative.

    Both callables must accept and return numpy arrays.
    """

    eval: Callable
    deriv: Optional[Callable] = None
    name: str = ""

    def __call__(self, x):
        return self.eval(x)

    def scaled(self, c, name=None):
        """The handle of ``c * f``."""
        f, df = self.eval, self.deriv
        return FunctionHandle(
            lambda x: c * f(x),
            None if df is None else (lambda x: c * df(x)),
            self.name if name is None else name,
        )


@dataclass(frozen=True)
class PolarHandle:
    """Amplitude-phase form f = rho * exp(i phi) with analytic derivatives.

    ``phi`` may carry 2 pi jumps: every functional uses it only through
    ``phi_deriv`` and trigonometric functions of phi(x) - phi(-x).
    """

    rho: Callable
    phi: Callable
    rho_deriv: Callable
    phi_deriv: Callable
    name: str = ""

    def eval(self, x):
        return self.rho(x) * np.exp(1j * self.phi(x))

    def deriv(self, x):
        phase = np.exp(1j * self.phi(x))
        return (self.rho_deriv(x) + 1j * self.rho(x) * self.phi_deriv(x)) * phase

    def __call__(self, x):
        return self.eval(x)

    def to_handle(self):
        return FunctionHandle(self.eval, self.deriv, self.name)

    def scaled(self, c, name=None):
        """Polar form of ``c * f`` for complex ``c``."""
        r, th = abs(c), float(np.angle(c))
        rho, phi, drho, dphi = self.rho, self.phi, self.rho_deriv, self.phi_deriv
        return PolarHandle(
            lambda x: r * rho(x),
            lambda x: phi(x) + th,
            lambda x: r * drho(x),
            dphi,
            self.name if name is None else name,
        )

    @classmethod
    def from_handle(cls, f, name=None):
        """Polar form of a handle whose modulus stays positive.

        rho' = Re(conj(f) f') / |f| and phi' = Im(conj(f) f') / |f|^2; phi is
        the principal argument, which is harmless (see class docstring).
        """
        if f.deriv is None:
            raise ContractError("polar form needs the classical derivative")
        ev, dv = f.eval, f.deriv

        def drho(x):
            v = ev(x)
            return np.real(np.conj(v) * dv(x)) / np.abs(v)

        def dphi(x):
            v = ev(x)
            return np.imag(np.conj(v) * dv(x)) / np.abs(v) ** 2

        return cls(
            lambda x: np.abs(ev(x)),
            lambda x: np.angle(ev(x)),
            drho,
            dphi,
            f.name if name is None else name,
        )


def _require_deriv(f):
    if getattr(f, "deriv", None) is None:
        raise ContractError(f"T_mu needs the classical derivative of {getattr(f, 'name', f)!r}")


def apply_T_mu(f, mu, x):
    """Evaluate T_mu f at the point(s) ``x``."""
    mu = check_mu(mu)
    _require_deriv(f)
    x = np.asarray(x, dtype=float)
    d = np.asarray(f.deriv(x), dtype=complex)
    if mu == -0.5:
        return d
    near = np.abs(x) < X_EPS
    safe = np.where(near, 1.0, x)
    quotient = (f.eval(x) - f.eval(-x)) / safe
    if np.any(near):
        quotient = np.where(near, d + f.deriv(-x), quotient)
    return d + (mu + 0.5) * quotient


def times_x(f):
    """Handle of y -> y f(y)."""
    ev, dv = f.eval, f.deriv
    return FunctionHandle(
        lambda y: y * ev(y),
        None if dv is None else (lambda y: ev(y) + y * dv(y)),
        f"x*{f.name}",
    )


def product(f, g):
    """Handle of the pointwise product with the Leibniz derivative."""
    return FunctionHandle(
        lambda x: f.eval(x) * g.eval(x),
        lambda x: f.deriv(x) * g.eval(x) + f.eval(x) * g.deriv(x),
        f"{f.name}*{g.name}",
    )


def product_rule_check(f, g, mu, x):
    """Residual |T(fg) - (Tf) g - f (Tg)|.

    The identity holds when one factor is even; for two odd factors the
    reflection parts do not combine and the residual is nonzero.
    """
    _require_deriv(f)
    _require_deriv(g)
    x = np.asarray(x, dtype=float)
    if np.any(x == 0):
        raise ContractError("product_rule_check is evaluated off the origin")
    lhs = apply_T_mu(product(f, g), mu, x)
    rhs = apply_T_mu(f, mu, x) * g.eval(x) + f.eval(x) * apply_T_mu(g, mu, x)
    return np.abs(lhs - rhs)


def commutator_minus(f, mu, x):
    """(x T_mu - T_mu x) f, which equals -f(x) - (2mu+1) f(-x)."""
    x = np.asarray(x, dtype=float)
    return x * apply_T_mu(f, mu, x) - apply_T_mu(times_x(f), mu, x)


def commutator_plus(f, mu, x):
    """(x T_mu + T_mu x) f, which equals 2x f'(x) + 2(mu+1) f(x)."""
    x = np.asarray(x, dtype=float)
    return x * apply_T_mu(f, mu, x) + apply_T_mu(times_x(f), mu, x)


def antisymmetry_residual(f, g, mu, scheme):
    """|int T f g dmu + int f T g dmu| by quadrature."""
    x = scheme.nodes
    tf_g = apply_T_mu(f, mu, x) * g.eval(x)
    f_tg = f.eval(x) * apply_T_mu(g, mu, x)
    return abs(integrate_weighted(tf_g, mu, scheme) + integrate_weighted(f_tg, mu, scheme))
