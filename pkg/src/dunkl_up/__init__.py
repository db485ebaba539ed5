"""One-dimensional Dunkl and fractional Dunkl transforms with uncertainty-principle checks."""

__version__ = "0.1.0"

from .errors import (
    AccuracyError,
    ChirpResolutionWarning,
    ConfigError,
    ConsistencyError,
    ContractError,
    DomainError,
    DunklError,
    NumericError,
    RangeError,
    TailWarning,
)
from .special_functions import bessel_j_norm, dunkl_kernel, dunkl_kernel_deriv, gamma_fn
from .quadrature import QuadratureScheme, SampledFunction, build_scheme, default_scheme, integrate_weighted
from .operators import FunctionHandle, PolarHandle, apply_T_mu
from .transforms import FracOrder, dunkl_transform, fractional_dunkl_transform, inverse_fractional
from .functionals import FunctionalSummary, normalize, summarize
from .bounds import BoundKind, BoundSpec, UncertaintyReport, evaluate_bound
from .extremals import ExtremalSpec, make_extremal, preset
from .battery import BATTERY_NAMES, battery, battery_function
