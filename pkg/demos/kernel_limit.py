"""The bracket-to-sinc limit, numerically.

The exact span-pair kernel depends on the span loss through
y = n L_s / L_inf; as y grows it collapses onto sin(x)/x, which is what
licenses the sine-integral closed form.  This prints the collapse for a
few frequencies and the resulting shrinking gap between the exact-series
and sine-integral coherence corrections at 13 / 20 / 26 dB span loss.

Run:  python demos/kernel_limit.py
"""

import math

import numpy as np

from nli_coherence import (FiberSpan, QuadratureSettings, SignalSpec,
                           g_cc_exact_series, g_cc_sinint)
from nli_coherence.specfun import kernel_bracket

print("kernel vs its sinc limit, |kernel_bracket(y, x) - sin(x)/x|:")
xs = np.array([0.5, 1.0, 2.0, 5.0])
print(f"{'y':>6} " + " ".join(f"{f'x={x:g}':>10}" for x in xs))
for y in (2.0, 4.0, 8.0, 16.0, 32.0):
    gaps = np.abs(kernel_bracket(y, xs) - np.sin(xs) / xs)
    print(f"{y:>6.0f} " + " ".join(f"{g:>10.2e}" for g in gaps))

print()
print("coherence correction, exact series vs sine-integral form, 8 spans:")
signal = SignalSpec(g0_w_per_thz=0.03125, bandwidth_thz=0.032)
settings = QuadratureSettings(rel_tol=1e-9)
for loss_db in (13.0, 20.0, 26.0):
    loss = loss_db / (10 * math.log10(math.e)) / 100.0
    span = FiberSpan(length_km=100.0, loss_coeff_per_km=loss,
                     beta2_ps2_per_km=21.0, gamma_per_w_km=1.3)
    exact = g_cc_exact_series(signal, span, 8, settings).value
    approx = g_cc_sinint(signal, span, 8)
    print(f"  {loss_db:4.0f} dB span: exact {exact:.5e}  sinint {approx:.5e}  "
          f"rel gap {abs(approx - exact) / exact:.2e}")
