"""Rotation of position/frequency moments under the fractional Dunkl transform.

For a normalized f the mean and variance of D^alpha f follow from those of
f and D_mu f through

    <x>       = cos a <x>_f + sin a <x>_(D f)
    Delta^2   = cos^2 a Delta^2(f) + 2 cos a sin a Cov(f) + sin^2 a Delta^2(D f)

This script compares both sides along a sweep of alpha.

    python demos/fractional_moments.py
"""
import math

import numpy as np

from dunkl_up.battery import battery_function
from dunkl_up.functionals import moments, summarize
from dunkl_up.quadrature import default_scheme
from dunkl_up.transforms import fractional_dunkl_transform

scheme = default_scheme()
mu = 1.5
f = battery_function("mixed", mu, scheme)
s = summarize(f, mu, scheme)
print(f"mu={mu}  <x>_f={s.mean_pos:.6f}  <x>_Df={s.mean_freq:.6f}  Cov={s.cov:.6f}")
print(f"{'alpha':>7s} {'mean (direct)':>14s} {'mean (rule)':>12s} {'var (direct)':>13s} {'var (rule)':>12s}")
for a in np.linspace(0.2, 2 * math.pi - 0.2, 9):
    F = fractional_dunkl_transform(f, mu, a, scheme).samples
    m, v = moments(F, mu, scheme, check=False)
    c, sn = math.cos(a), math.sin(a)
    m_rule = c * s.mean_pos + sn * s.mean_freq
    v_rule = c * c * s.disp2_f + 2 * c * sn * s.cov + sn * sn * s.disp2_Df
    print(f"{a:7.3f} {m:14.8f} {m_rule:12.8f} {v:13.8f} {v_rule:12.8f}")
