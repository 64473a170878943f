"""Walk the estimator ladder on a standard single-mode-fiber link.

Each rung trades accuracy for simplicity: full 2-D quadrature, the
semi-analytic exact series, the sine-integral closed form, its
piecewise-linear surrogate, and the summation-free lower bound.  On a
strongly dispersive link all rungs land within a fraction of a dB of
each other, which is the whole point of the closed forms.

Run:  python demos/method_ladder.py
"""

import math

from nli_coherence import (CcMethod, DomainShape, EfficiencyModel, FiberSpan,
                           QuadratureSettings, SignalSpec, g_nli_2d,
                           g_nli_total, span_loss_db)

span = FiberSpan(length_km=100.0, loss_coeff_per_km=0.2 / (10 * math.log10(math.e)),
                 beta2_ps2_per_km=21.0, gamma_per_w_km=1.3)
signal = SignalSpec(g0_w_per_thz=0.001 / 0.032, bandwidth_thz=0.032)
n_spans = 10
settings = QuadratureSettings(rel_tol=1e-8)

print(f"{n_spans} x {span.length_km:.0f} km spans, "
      f"{span_loss_db(span):.1f} dB each, B = {signal.bandwidth_thz * 1e3:.0f} GHz, "
      f"P = {signal.power_w * 1e3:.1f} mW")
print()

oracle = g_nli_2d(signal, span, n_spans, DomainShape.SQUARE,
                  EfficiencyModel.LORENTZIAN, settings)
print(f"{'2-D quadrature':>16}: total = {oracle.value:.6e} W/THz "
      f"(+- {oracle.error_estimate:.1e}, {oracle.evals} evals)")

for method in CcMethod:
    est = g_nli_total(signal, span, n_spans, method, settings)
    delta_db = 10.0 * math.log10(est.total_w_per_thz / oracle.value)
    print(f"{method.value:>16}: total = {est.total_w_per_thz:.6e} W/THz "
          f"({delta_db:+.4f} dB vs 2-D)  [g_cc share "
          f"{est.g_cc_w_per_thz / est.total_w_per_thz:6.1%}]")
