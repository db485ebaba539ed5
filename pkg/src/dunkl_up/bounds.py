"""Right-hand sides of the uncertainty inequalities and gap reports.

The left-hand side Delta^2_{mu,p}(D^alpha f) Delta^2_{mu,p}(D^beta f) is always
measured by transforming f and taking quadrature moments; the closed-form
moment identities only appear as diagnostics.
"""
from dataclasses import dataclass, field
from enum import Enum
import math

from .errors import ContractError, DomainError, check_mu
from .functionals import dispersion, mean_position, summarize
from .operators import PolarHandle
from .quadrature import default_scheme
from .transforms import ALPHA_EPS, fractional_dunkl_transform

__all__ = [
    "BoundKind",
    "BoundSpec",
    "UncertaintyReport",
    "rosler_rhs",
    "fei_rhs",
    "sami_rhs",
    "lp_fractional_rhs",
    "sharp_fractional_rhs",
    "lp_prefactor",
    "tol_report",
    "REPORT_TOL",
    "evaluate_bound",
]

HALF_PI = 0.5 * math.pi


class BoundKind(str, Enum):
    ROSLER = "rosler"
    FEI = "fei"
    SAMI = "sami"
    LP_FRACTIONAL = "lp_fractional"
    SHARP_FRACTIONAL = "sharp_fractional"


_ANGLE_KINDS = (BoundKind.SAMI, BoundKind.LP_FRACTIONAL, BoundKind.SHARP_FRACTIONAL)


def _check_angles(alpha, beta):
    d = float(beta) - float(alpha)
    k = round(d / math.pi)
    if abs(d - k * math.pi) <= ALPHA_EPS:
        raise ContractError(f"beta-alpha in piZ (alpha={alpha}, beta={beta})")


@dataclass(frozen=True)
class BoundSpec:
    """Which inequality to test and at which (mu, alpha, beta, p).

    rosler and fei compare f with D_mu f, i.e. (alpha, beta) = (0, pi/2);
    only lp_fractional accepts p != 2.
    """

    kind: BoundKind
    mu: float
    alpha: float = None
    beta: float = None
    p: float = 2.0

    def __post_init__(self):
        kind = BoundKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "mu", check_mu(self.mu))
        p = float(self.p)
        if not 1.0 <= p <= 2.0:
            raise DomainError(f"p must lie in [1, 2], got {p}")
        if kind is not BoundKind.LP_FRACTIONAL and p != 2.0:
            raise ContractError(f"bound {kind.value} is stated for p = 2 only, got {p}")
        object.__setattr__(self, "p", p)
        if kind in _ANGLE_KINDS:
            if self.alpha is None or self.beta is None:
                raise ContractError(f"bound {kind.value} needs both alpha and beta")
            _check_angles(self.alpha, self.beta)
        else:
            for name, want in (("alpha", 0.0), ("beta", HALF_PI)):
                v = getattr(self, name)
                if v is not None and abs(float(v) - want) > ALPHA_EPS:
                    raise ContractError(f"bound {kind.value} compares f with D_mu f; {name} must be {want}")
            object.__setattr__(self, "alpha", 0.0)
            object.__setattr__(self, "beta", HALF_PI)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))


@dataclass
class UncertaintyReport:
    spec: BoundSpec
    lhs: float
    rhs: float
    components: dict
    gap: float
    rel_gap: float
    tol: float
    violated: bool
    warnings: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)


def _parity_bracket(summary, mu):
    return (mu + 0.5) * (summary.even_energy - summary.odd_energy) + 0.5


def rosler_rhs(summary, mu):
    """{(mu+1/2)(||f_e||^2 - ||f_o||^2) + 1/2}^2."""
    return _parity_bracket(summary, check_mu(mu)) ** 2


def fei_rhs(summary, mu):
    """A^2 + COV^2."""
    check_mu(mu)
    return summary.a_term**2 + summary.abs_cov**2


def sami_rhs(summary, mu, alpha, beta):
    """sin^2(alpha - beta) times the Rosler bound."""
    _check_angles(alpha, beta)
    return math.sin(alpha - beta) ** 2 * rosler_rhs(summary, mu)


def lp_prefactor(mu, alpha, beta, p):
    """|sin(beta-alpha)|^(2(mu+1)(2/p-1)) / (2^(mu+1) Gamma(mu+1))^(2(2/p-1))."""
    mu = check_mu(mu)
    e = 2.0 / p - 1.0
    if e == 0:
        return 1.0
    c = 2.0 ** (mu + 1.0) * math.gamma(mu + 1.0)
    return abs(math.sin(beta - alpha)) ** (2.0 * (mu + 1.0) * e) / c ** (2.0 * e)


def _square_term(summary, alpha, beta):
    ca, sa = math.cos(alpha), math.sin(alpha)
    cb, sb = math.cos(beta), math.sin(beta)
    return (ca * cb * summary.disp2_f + math.sin(alpha + beta) * summary.cov + sa * sb * summary.disp2_Df) ** 2


def lp_fractional_rhs(summary, mu, alpha, beta, p):
    """prefactor * {sin^2(beta-alpha) A^2 + (cos a cos b X + sin(a+b) Cov + sin a sin b Y)^2}."""
    _check_angles(alpha, beta)
    p = float(p)
    if not 1.0 <= p <= 2.0:
        raise DomainError(f"p must lie in [1, 2], got {p}")
    brace = math.sin(beta - alpha) ** 2 * summary.a_term**2 + _square_term(summary, alpha, beta)
    return lp_prefactor(mu, alpha, beta, p) * brace


def sharp_fractional_rhs(summary, mu, alpha, beta):
    """sin^2(a-b) (A^2 + COV^2 - Cov^2) + (cos a cos b X + sin(a+b) Cov + sin a sin b Y)^2."""
    _check_angles(alpha, beta)
    check_mu(mu)
    inner = summary.a_term**2 + summary.abs_cov**2 - summary.cov**2
    return math.sin(alpha - beta) ** 2 * inner + _square_term(summary, alpha, beta)


REPORT_TOL = 1e-6


def tol_report(lhs, scale=REPORT_TOL):
    """Allowed negative gap: two stacked quadratures at ~1e-8 relative each."""
    return scale * max(1.0, abs(lhs))


def _rhs(summary, spec):
    k, mu, a, b = spec.kind, spec.mu, spec.alpha, spec.beta
    if k is BoundKind.ROSLER:
        return rosler_rhs(summary, mu), 1.0
    if k is BoundKind.FEI:
        return fei_rhs(summary, mu), 1.0
    if k is BoundKind.SAMI:
        return sami_rhs(summary, mu, a, b), 1.0
    if k is BoundKind.LP_FRACTIONAL:
        return lp_fractional_rhs(summary, mu, a, b, spec.p), lp_prefactor(mu, a, b, spec.p)
    return sharp_fractional_rhs(summary, mu, a, b), 1.0


def _disp2(pf, mu, alpha, p, scheme, notes):
    res = fractional_dunkl_transform(pf, mu, alpha, scheme)
    notes.extend(res.warnings)
    F = res.samples
    center = mean_position(F, mu, scheme, check=False)
    return dispersion(F, mu, p, center, scheme) ** 2


def _closed_disp2(summary, alpha):
    c, s = math.cos(alpha), math.sin(alpha)
    return c * c * summary.disp2_f + 2.0 * c * s * summary.cov + s * s * summary.disp2_Df


def _as_polar(f):
    if isinstance(f, PolarHandle):
        return f
    # Principal-argument phase: acceptable because only phase differences enter.
    return PolarHandle.from_handle(f)


def evaluate_bound(f, spec, scheme=None, summary=None, tol_scale=REPORT_TOL):
    """Measure lhs, evaluate the matching rhs and report the gap.

    ``summary`` may carry a precomputed FunctionalSummary of f for
    ``spec.mu`` on ``scheme``. The report flags a violation when
    gap < -tol_scale * max(1, lhs).
    """
    scheme = scheme or default_scheme()
    pf = _as_polar(f)
    mu = spec.mu
    if summary is None:
        summary = summarize(pf, mu, scheme)
    notes = []
    lhs = _disp2(pf, mu, spec.alpha, spec.p, scheme, notes) * _disp2(pf, mu, spec.beta, spec.p, scheme, notes)
    rhs, prefactor = _rhs(summary, spec)
    gap = lhs - rhs
    if rhs > 0:
        rel = gap / rhs
    else:
        rel = 0.0 if gap == 0 else math.copysign(math.inf, gap)
    tol = tol_report(lhs, tol_scale)
    components = {
        "a_term": summary.a_term,
        "cov": summary.cov,
        "abs_cov": summary.abs_cov,
        "disp2_f": summary.disp2_f,
        "disp2_Df": summary.disp2_Df,
        "even_energy": summary.even_energy,
        "odd_energy": summary.odd_energy,
        "prefactor": prefactor,
    }
    diagnostics = {}
    if spec.p == 2.0:
        diagnostics["lhs_closed_form"] = _closed_disp2(summary, spec.alpha) * _closed_disp2(summary, spec.beta)
    violated = gap < -tol
    if violated:
        notes.append(f"bound violated: gap {gap:.3e} below -{tol:.1e}")
    return UncertaintyReport(spec, lhs, rhs, components, gap, rel, tol, violated, notes, diagnostics)
