"""Estimators of nonlinear-interference accumulation in multi-span
amplified fiber links: integral oracles, closed forms, and a comparison
CLI.

Internal units are canonical (THz, ps^2/km, km, W/THz); see
:mod:`nli_coherence.link`.
"""

from .closed_form import (CcMethod, Q1Params, cos_lorentzian_integral,
                          cos_lorentzian_integral_cisi, g_cc_exact_series,
                          g_cc_heterogeneous, g_cc_lower_bound, g_cc_plateau,
                          g_cc_siapp, g_cc_sinint, g_inc_approx, g_inc_closed,
                          g_nli_total, g_nli_total_heterogeneous,
                          plateau_is_valid, q1_closed)
from .link import (DerivedSpan, FiberSpan, LinkConfig, NliEstimate,
                   SignalSpec, ValidationError, derive_effective_lengths,
                   span_loss_db, span_warnings)
from .oracle import (DomainShape, EfficiencyModel, fwm_efficiency,
                     g_cc_quadrature, g_cc_sinc_quadrature, g_nli_2d,
                     q1_quadrature)
from .quadrature import (QuadratureBudgetError, QuadratureResult,
                         QuadratureSettings, integrate_1d)

__version__ = "0.1.0"

__all__ = [
    "CcMethod", "DerivedSpan", "DomainShape", "EfficiencyModel", "FiberSpan",
    "LinkConfig", "NliEstimate", "Q1Params", "QuadratureBudgetError",
    "QuadratureResult", "QuadratureSettings", "SignalSpec", "ValidationError",
    "cos_lorentzian_integral", "cos_lorentzian_integral_cisi",
    "derive_effective_lengths", "fwm_efficiency", "g_cc_exact_series",
    "g_cc_heterogeneous", "g_cc_lower_bound", "g_cc_plateau",
    "g_cc_quadrature", "g_cc_siapp", "g_cc_sinc_quadrature", "g_cc_sinint",
    "g_inc_approx", "g_inc_closed", "g_nli_2d", "g_nli_total",
    "g_nli_total_heterogeneous", "integrate_1d", "plateau_is_valid",
    "q1_closed", "q1_quadrature", "span_loss_db", "span_warnings",
]
