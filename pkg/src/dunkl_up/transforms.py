"""Dunkl transform and fractional Dunkl transform by direct O(N^2) summation.

The fractional transform of order alpha, for (2n-1)pi < alpha < (2n+1)pi and
alpha not a multiple of pi, is

    N * exp(i (x^2 + w^2) cot(alpha) / 2) E_mu(-i w x / sin(alpha))

integrated against f(x) |x|^(2mu+1) dx, with

    N = exp(-i (mu+1) (sgn(sin alpha) pi/2 - (alpha - 2n pi)))
        / (Gamma(mu+1) (2 |sin alpha|)^(mu+1)).

The phase sign is the one for which alpha -> 0 tends to the identity and the
orders compose additively. At even multiples of pi the transform is the
identity and at odd multiples it is the reflection f(-x).
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
import math
import warnings

import numpy as np

from .errors import ChirpResolutionWarning, ContractError, NumericError, TailWarning, check_mu
from .quadrature import Domain, SampledFunction, measure_weights, values_on
from .special_functions import dunkl_kernel, dunkl_kernel_imag

__all__ = [
    "ALPHA_EPS",
    "CHIRP_WARN_SIN",
    "OrderKind",
    "FracOrder",
    "TransformPath",
    "TransformResult",
    "dunkl_constant",
    "fractional_normalizer",
    "dunkl_transform",
    "fractional_dunkl_transform",
    "fractional_via_chirp",
    "inverse_fractional",
    "group_law_residual",
    "clear_kernel_cache",
]

ALPHA_EPS = 1e-8
CHIRP_WARN_SIN = 0.05
TAIL_RATIO = 1e-10


class OrderKind(str, Enum):
    GENERIC = "generic"
    IDENTITY = "identity"
    PARITY = "parity"


@dataclass(frozen=True)
class FracOrder:
    """A fractional angle together with its branch classification."""

    alpha: float
    branch_n: int
    kind: OrderKind

    @classmethod
    def classify(cls, alpha, eps=ALPHA_EPS):
        alpha = float(alpha)
        if not math.isfinite(alpha):
            raise ContractError(f"fractional order must be finite, got {alpha}")
        k = round(alpha / math.pi)
        if abs(alpha - k * math.pi) <= eps:
            if k % 2 == 0:
                return cls(alpha, k // 2, OrderKind.IDENTITY)
            return cls(alpha, (k - 1) // 2, OrderKind.PARITY)
        n = math.floor((alpha + math.pi) / (2.0 * math.pi))
        return cls(alpha, n, OrderKind.GENERIC)

    @property
    def sin(self):
        return math.sin(self.alpha)

    @property
    def cot(self):
        return math.cos(self.alpha) / math.sin(self.alpha)

    @property
    def alpha_hat(self):
        return math.copysign(1.0, math.sin(self.alpha))


def _as_order(order):
    return order if isinstance(order, FracOrder) else FracOrder.classify(order)


class TransformPath(str, Enum):
    DIRECT = "direct"
    CHIRP_FACTORED = "chirp_factored"
    EXACT_BRANCH = "exact_branch"


@dataclass
class TransformResult:
    samples: object  # SampledFunction on the scheme, or an array for custom grids
    normalizer_used: complex
    path: TransformPath
    warnings: list = field(default_factory=list)

    @property
    def values(self):
        s = self.samples
        return s.values if isinstance(s, SampledFunction) else s


def dunkl_constant(mu):
    """2^(mu+1) Gamma(mu+1), the Dunkl transform normalizer."""
    mu = check_mu(mu)
    return 2.0 ** (mu + 1.0) * math.gamma(mu + 1.0)


def fractional_normalizer(mu, order):
    """N_{mu,n} for a generic order."""
    mu = check_mu(mu)
    order = _as_order(order)
    if order.kind is not OrderKind.GENERIC:
        raise ContractError(f"no normalizer at the degenerate order {order.alpha}")
    return _branch_phase(mu, order) / (math.gamma(mu + 1.0) * (2.0 * abs(order.sin)) ** (mu + 1.0))


def _branch_phase(mu, order):
    theta = order.alpha_hat * math.pi / 2.0 - (order.alpha - 2.0 * math.pi * order.branch_n)
    return complex(np.exp(-1j * (mu + 1.0) * theta))


@lru_cache(maxsize=24)
def _scheme_kernel(mu, scale, scheme):
    """E_mu(-i w_j x_k scale) on the scheme's own node grid, scale > 0."""
    t = np.multiply.outer(scheme.nodes, scheme.nodes) * scale
    K = _kernel_on(mu, t, dunkl_kernel_imag)
    K.setflags(write=False)
    return K


def clear_kernel_cache():
    _scheme_kernel.cache_clear()


def _kernel_on(mu, t, evaluator):
    # E_mu(-it) = j_mu(|t|) - i t/(2(mu+1)) j_{mu+1}(|t|): evaluate on unique |t| once.
    a = np.abs(t)
    u, inv = np.unique(a, return_inverse=True)
    if evaluator is dunkl_kernel_imag:
        vals = dunkl_kernel_imag(mu, u)
    else:
        vals = evaluator(mu, -1j * u)
    j_part = vals.real[inv].reshape(t.shape)
    odd_part = (vals.imag[inv] / np.where(u == 0, 1.0, u)[inv]).reshape(t.shape)
    return j_part + 1j * odd_part * t


def _reduce_rows(K, v):
    # Fixed-order pairwise reduction along each row; independent of BLAS threading.
    return np.add.reduce(K * v[None, :], axis=1)


def _check_tail(vals, label, sink):
    peak = np.max(np.abs(vals))
    edge = max(abs(vals[0]), abs(vals[-1]))
    if peak > 0 and edge > TAIL_RATIO * peak:
        msg = f"{label}: |f(+-R)| = {edge:.3e} exceeds {TAIL_RATIO:g} of the peak {peak:.3e}"
        warnings.warn(msg, TailWarning, stacklevel=3)
        sink.append(msg)


def _input_values(f, scheme):
    vals = values_on(f, scheme)
    if not np.all(np.isfinite(vals)):
        k = int(np.flatnonzero(~np.isfinite(vals))[0])
        raise NumericError(f"non-finite input at node {k}")
    return vals


def _wrap(values, scheme, custom):
    if custom:
        return values
    return SampledFunction(scheme, values, Domain.FREQUENCY)


def _integral(mu, vals, scheme, scale, w_nodes):
    """sum_k E_mu(-i w x_k scale) vals_k |x_k|^(2mu+1) w_k; scale may be negative."""
    v = vals * measure_weights(mu, scheme)
    if w_nodes is None:
        K = _scheme_kernel(mu, abs(scale), scheme)
        if scale > 0:
            return _reduce_rows(K, v)
        # E_mu(i t) = conj(E_mu(-i t)) for real t.
        return np.conj(_reduce_rows(K, np.conj(v)))
    t = np.multiply.outer(np.asarray(w_nodes, dtype=float), scheme.nodes) * scale
    return _reduce_rows(_kernel_on(mu, t, dunkl_kernel_imag), v)


def dunkl_transform(f, mu, scheme, w_nodes=None):
    """Dunkl transform D_mu f sampled at ``w_nodes``.

    With ``w_nodes=None`` the output lives on the scheme's own nodes and a
    SampledFunction is returned; otherwise an array of values.
    """
    mu = check_mu(mu)
    vals = _input_values(f, scheme)
    _check_tail(vals, "dunkl_transform", [])
    out = _integral(mu, vals, scheme, 1.0, w_nodes) / dunkl_constant(mu)
    return _wrap(out, scheme, w_nodes is not None)


def _exact_branch(f, order, scheme, w_nodes):
    sign = 1.0 if order.kind is OrderKind.IDENTITY else -1.0
    if w_nodes is None:
        vals = values_on(f, scheme)
        out = vals if sign > 0 else vals[::-1]
        return TransformResult(SampledFunction(scheme, out, Domain.FREQUENCY), 1.0, TransformPath.EXACT_BRANCH)
    if isinstance(f, (SampledFunction, np.ndarray)):
        raise ContractError("sampled input cannot be evaluated on a custom grid")
    fn = getattr(f, "eval", f)
    out = np.asarray(fn(sign * np.asarray(w_nodes, dtype=float)), dtype=complex)
    return TransformResult(out, 1.0, TransformPath.EXACT_BRANCH)


def _chirp_warning(order, sink):
    s = abs(order.sin)
    if s < CHIRP_WARN_SIN:
        msg = f"|sin(alpha)| = {s:.3e} < {CHIRP_WARN_SIN}: chirp under-resolved on this scheme"
        warnings.warn(msg, ChirpResolutionWarning, stacklevel=3)
        sink.append(msg)


def fractional_dunkl_transform(f, mu, order, scheme, w_nodes=None):
    """Fractional Dunkl transform of order ``order`` (float or FracOrder)."""
    mu = check_mu(mu)
    order = _as_order(order)
    if order.kind is not OrderKind.GENERIC:
        return _exact_branch(f, order, scheme, w_nodes)
    notes = []
    _chirp_warning(order, notes)
    vals = _input_values(f, scheme)
    _check_tail(vals, "fractional_dunkl_transform", notes)
    cot = order.cot
    x = scheme.nodes
    w = x if w_nodes is None else np.asarray(w_nodes, dtype=float)
    norm = fractional_normalizer(mu, order)
    inner = _integral(mu, vals * np.exp(0.5j * cot * x * x), scheme, 1.0 / order.sin, w_nodes)
    out = norm * np.exp(0.5j * cot * w * w) * inner
    return TransformResult(_wrap(out, scheme, w_nodes is not None), norm, TransformPath.DIRECT, notes)


def fractional_via_chirp(f, mu, order, scheme, w_nodes=None):
    """Fractional transform through the Dunkl transform of the chirped input.

    D^alpha f(w) = phase / |sin a|^(mu+1) * exp(i w^2 cot a / 2) * D_mu(g)(w / sin a),
    g(x) = exp(i x^2 cot a / 2) f(x). The inner Dunkl transform is evaluated
    at the scaled frequencies with the complex-argument kernel, so this path
    shares no kernel matrix with :func:`fractional_dunkl_transform`.
    """
    mu = check_mu(mu)
    order = _as_order(order)
    if order.kind is not OrderKind.GENERIC:
        raise ContractError("the chirp factorization needs alpha outside pi*Z")
    notes = []
    _chirp_warning(order, notes)
    vals = _input_values(f, scheme)
    cot, s = order.cot, order.sin
    x = scheme.nodes
    w = x if w_nodes is None else np.asarray(w_nodes, dtype=float)
    g = vals * np.exp(0.5j * cot * x * x)
    t = np.multiply.outer(w / s, x)
    Dg = _reduce_rows(_kernel_on(mu, t, dunkl_kernel), g * measure_weights(mu, scheme)) / dunkl_constant(mu)
    prefactor = _branch_phase(mu, order) / abs(s) ** (mu + 1.0)
    out = prefactor * np.exp(0.5j * cot * w * w) * Dg
    return TransformResult(_wrap(out, scheme, w_nodes is not None), prefactor, TransformPath.CHIRP_FACTORED, notes)


def inverse_fractional(result, mu, order, scheme, x_nodes=None):
    """Invert a fractional transform by applying the order -alpha."""
    order = _as_order(order)
    samples = result.samples if isinstance(result, TransformResult) else result
    if not isinstance(samples, SampledFunction) or samples.scheme != scheme:
        raise ContractError("inversion needs forward samples on the nodes of the same scheme")
    back = fractional_dunkl_transform(samples, mu, -order.alpha, scheme, x_nodes)
    out = back.values
    if x_nodes is None:
        return SampledFunction(scheme, out, Domain.POSITION)
    return out


def group_law_residual(f, mu, alpha, beta, scheme):
    """sup |D^alpha(D^beta f) - D^(alpha+beta) f| over the scheme nodes."""
    inner = fractional_dunkl_transform(f, mu, beta, scheme).samples
    composed = fractional_dunkl_transform(inner, mu, alpha, scheme).values
    single = fractional_dunkl_transform(f, mu, float(alpha) + float(beta), scheme).values
    return float(np.max(np.abs(composed - single)))
