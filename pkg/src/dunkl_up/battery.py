"""The fixed set of smooth, rapidly decaying test functions.

Every member is given in polar form with analytic derivatives and is
normalized in L^2_mu by quadrature on request.
"""
from functools import lru_cache

import numpy as np

from .errors import ConfigError, check_mu
from .functionals import normalize
from .operators import PolarHandle
from .quadrature import default_scheme

__all__ = ["BATTERY_NAMES", "raw_function", "battery_function", "battery"]


def _gauss(x, c=0.0):
    return np.exp(-0.5 * (np.asarray(x, dtype=float) - c) ** 2)


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float))


def _gauss_p():
    return PolarHandle(_gauss, _zero, lambda x: -x * _gauss(x), _zero, "gauss")


def _shifted_p():
    c = 0.7
    return PolarHandle(
        lambda x: _gauss(x, c), _zero, lambda x: -(x - c) * _gauss(x, c), _zero, "shifted"
    )


def _chirped_p():
    return PolarHandle(_gauss, lambda x: 0.5 * x * x, lambda x: -x * _gauss(x), lambda x: x, "chirped")


def _poly_p():
    def rho(x):
        return _gauss(x) * (1.0 + 0.3 * x * x)

    def drho(x):
        return _gauss(x) * (0.6 * x - x * (1.0 + 0.3 * x * x))

    return PolarHandle(rho, _zero, drho, _zero, "poly")


def _odd_p():
    # x e^{-x^2/2}: modulus |x| e^{-x^2/2}, phase pi on the negative axis.
    def rho(x):
        return np.abs(x) * _gauss(x)

    def phi(x):
        return np.where(np.asarray(x) < 0, np.pi, 0.0)

    def drho(x):
        return np.sign(x) * (1.0 - x * x) * _gauss(x)

    return PolarHandle(rho, phi, drho, _zero, "odd")


def _mixed_p():
    def p(x):
        return 1.0 + 0.5 * x + 0.5 * x * x

    def rho(x):
        return _gauss(x) * p(x)

    def drho(x):
        return _gauss(x) * (0.5 + x - x * p(x))

    return PolarHandle(rho, lambda x: 0.8 * x, drho, lambda x: np.full_like(np.asarray(x, dtype=float), 0.8), "mixed")


_BUILDERS = {
    "gauss": _gauss_p,
    "shifted": _shifted_p,
    "chirped": _chirped_p,
    "poly": _poly_p,
    "odd": _odd_p,
    "mixed": _mixed_p,
}
BATTERY_NAMES = tuple(_BUILDERS)


def raw_function(name):
    """Unnormalized polar handle of a battery member."""
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise ConfigError(f"unknown battery function {name!r}; choose from {BATTERY_NAMES}") from None


@lru_cache(maxsize=None)
def _normalized(name, mu, scheme):
    return normalize(raw_function(name), mu, scheme)[0]


def battery_function(name, mu, scheme=None):
    """Battery member ``name`` with unit L^2_mu norm on ``scheme``."""
    mu = check_mu(mu)
    return _normalized(name, mu, scheme or default_scheme())


def battery(mu, scheme=None):
    """Dict of every normalized battery member for this mu."""
    return {name: battery_function(name, mu, scheme) for name in BATTERY_NAMES}
