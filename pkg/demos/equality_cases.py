"""Which extremal shapes attain the fractional uncertainty bounds.

Builds the named extremal presets, measures the sharp and Lp (p = 2)
fractional bounds at a few angle pairs and prints the relative gaps, the
ODE residuals and the phase-bracket classification.

    python demos/equality_cases.py
"""
import math
import warnings

from dunkl_up.bounds import BoundSpec, evaluate_bound
from dunkl_up.extremals import case_classifier, make_extremal, measured_means, ode_residuals, preset
from dunkl_up.quadrature import default_scheme

warnings.simplefilter("ignore")

scheme = default_scheme()
names = ["chirped-gauss", "form12-shifted", "form13-shifted", "split-form14", "split-form15"]
pairs = [(0.0, math.pi / 2), (math.pi / 6, math.pi / 2), (0.3, 1.7)]

print(f"{'preset':16s} {'mu':>5s} {'max sharp gap':>14s} {'max lp gap':>12s} {'res117':>10s} {'res118':>10s}  case")
for mu in (-0.5, 0.5, 1.5):
    for name in names:
        spec = preset(name, mu)
        _, pf = make_extremal(spec)
        means = measured_means(pf, mu, scheme)
        split = spec.split_point if spec.glued else None
        sharp = max(evaluate_bound(pf, BoundSpec("sharp_fractional", mu, a, b), scheme).rel_gap for a, b in pairs)
        lp = max(evaluate_bound(pf, BoundSpec("lp_fractional", mu, a, b), scheme).rel_gap for a, b in pairs)
        r117, r118 = ode_residuals(pf, mu, spec.zeta, spec.xi, means, scheme, split=split)
        case = case_classifier(pf, mu, means, scheme, split=split).case.value
        print(f"{name:16s} {mu:5.1f} {sharp:14.3e} {lp:12.3e} {r117:10.2e} {r118:10.2e}  {case}")

# The glued shapes switch the chirp sign at the split point. Their phase
# bracket A - <x>_(D f) would have to equal +-|x - <x>_f| / xi, a function of
# one sign, yet it integrates to zero against |f|^2; so they stay strict.
