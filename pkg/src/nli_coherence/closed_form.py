"""Analytic NLI estimators: the exact inner integral, the incoherent
dilogarithm term, and the coherence-correction ladder.

The ladder, from most to least accurate:

1. ``g_cc_exact_series``  — inner frequency integral analytic, outer numeric
2. ``g_cc_sinint``        — fully closed form via the sine integral
3. ``g_cc_siapp``         — sine integral replaced by its two-piece surrogate
4. ``g_cc_plateau``       — surrogate pinned at its plateau value pi/2
5. ``g_cc_lower_bound``   — summation collapsed to a harmonic number

All estimators share the consolidated prefactor
``(8/27) gamma^2 G0^3 L_eff^2 / (pi^2 beta2)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .link import (PLATEAU_INVALID, FiberSpan, LinkConfig, NliEstimate,
                   SignalSpec, ValidationError, derive_effective_lengths,
                   span_warnings)
from .quadrature import QuadratureResult, QuadratureSettings, integrate_1d
from .specfun import harnum, kernel_bracket, li2_combo_approx, li2_imag_combo, si_app, sin_int


class CcMethod(enum.Enum):
    """Coherence-correction estimator selector; values double as the
    method tags used in CLI output."""
    EXACT_SERIES = "exact-series"
    SININT = "sinint"
    SIAPP = "siapp"
    PLATEAU = "plateau"
    LOWER_BOUND = "lower-bound"


@dataclass(frozen=True)
class Q1Params:
    """Dimensionless parameters of the inner (f1) integral.

    ``b`` is half the span loss in nepers, ``q`` the half-bandwidth,
    ``h`` the frequency-scaling factor of the phased-array argument at a
    fixed second frequency.
    """

    b: float
    q: float
    h: float
    n_spans: int

    def __post_init__(self):
        if not (math.isfinite(self.b) and self.b > 0.0):
            raise ValidationError("b", f"must be finite and > 0, got {self.b!r}")
        if not (math.isfinite(self.q) and self.q > 0.0):
            raise ValidationError("q", f"must be finite and > 0, got {self.q!r}")
        if not math.isfinite(self.h):
            raise ValidationError("h", f"must be finite, got {self.h!r}")
        if not isinstance(self.n_spans, (int, np.integer)) or self.n_spans < 1:
            raise ValidationError(
                "n_spans", f"must be a positive integer, got {self.n_spans!r}")

    @classmethod
    def from_physical(cls, span: FiberSpan, signal: SignalSpec, f2_thz: float,
                      n_spans: int) -> "Q1Params":
        """Map a span/signal pair at second frequency ``f2_thz`` [THz]
        onto the dimensionless form: b = loss*L_s/2, q = B/2,
        h = 2 pi^2 f2 beta2 L_s."""
        d = derive_effective_lengths(span)
        return cls(
            b=0.5 * span.length_km / d.l_inf_km,
            q=0.5 * signal.bandwidth_thz,
            h=2.0 * math.pi**2 * f2_thz * span.beta2_ps2_per_km * span.length_km,
            n_spans=int(n_spans),
        )


def cos_lorentzian_integral(p: Q1Params, n: int) -> float:
    """``int_{-q}^{q} b^2 cos(2 n h f) / (b^2 + h^2 f^2) df``.

    Evaluated through the cancellation-aware exponential-integral
    bracket; even in ``h`` and well defined at ``h = 0`` (value ``2q``).
    """
    if not (1 <= n):
        raise ValueError(f"n must be >= 1, got {n!r}")
    return 2.0 * p.q * kernel_bracket(2.0 * n * p.b, 2.0 * n * abs(p.h) * p.q)


def cos_lorentzian_integral_cisi(p: Q1Params, n: int) -> float:
    """Same integral through the cosine/sine-integral route at 50
    significant digits; slow, used only as an independent cross-check of
    :func:`cos_lorentzian_integral`."""
    if not (1 <= n):
        raise ValueError(f"n must be >= 1, got {n!r}")
    if p.h == 0.0:
        return 2.0 * p.q
    with mp.workdps(50):
        b, t_end, c = mp.mpf(p.b), mp.mpf(abs(p.h)) * mp.mpf(p.q), 2 * n
        a = mp.mpc(0, 1) * b
        ca = c * a
        val = (mp.cos(ca) * (mp.ci(c * (t_end - a)) - mp.ci(-ca))
               - mp.sin(ca) * (mp.si(c * (t_end - a)) - mp.si(-ca)))
        return float(2 * b / abs(p.h) * mp.im(val))


def q1_closed(p: Q1Params) -> float:
    """The inner integral in closed form: arctangent term plus the
    finite cosine-series corrections."""
    n_s = p.n_spans
    if p.h == 0.0:
        # Fejer peak N^2 times a flat Lorentzian
        return 2.0 * p.q * n_s**2
    acc = 2.0 * p.b * n_s / abs(p.h) * math.atan(abs(p.h) * p.q / p.b)
    for n in range(1, n_s):
        acc += 2.0 * (n_s - n) * cos_lorentzian_integral(p, n)
    return acc


# ---------------------------------------------------------------------------
# Incoherent term
# ---------------------------------------------------------------------------

def _common_prefactor(signal: SignalSpec, span: FiberSpan) -> float:
    """(8/27) gamma^2 G0^3 L_eff^2 / (pi^2 beta2), units W/THz * km."""
    l_eff = derive_effective_lengths(span).l_eff_km
    return ((8.0 / 27.0) * span.gamma_per_w_km**2 * signal.g0_w_per_thz**3
            * l_eff**2 / (math.pi**2 * span.beta2_ps2_per_km))


def g_inc_closed(signal: SignalSpec, span: FiberSpan, n_spans: int) -> float:
    """Incoherent (span-additive) NLI PSD at f = 0 [W/THz]; exactly
    linear in the span count."""
    if n_spans < 1:
        raise ValueError(f"n_spans must be >= 1, got {n_spans!r}")
    l_inf = derive_effective_lengths(span).l_inf_km
    rho = math.pi**2 * span.beta2_ps2_per_km * l_inf * signal.bandwidth_thz**2
    return n_spans * _common_prefactor(signal, span) * li2_imag_combo(rho) / l_inf


def g_inc_approx(signal: SignalSpec, span: FiberSpan, n_spans: int,
                 variant: str = "asinh") -> float:
    """Incoherent term with the dilogarithm combination replaced by an
    elementary surrogate (``asinh`` or ``log``)."""
    if n_spans < 1:
        raise ValueError(f"n_spans must be >= 1, got {n_spans!r}")
    l_inf = derive_effective_lengths(span).l_inf_km
    rho = math.pi**2 * span.beta2_ps2_per_km * l_inf * signal.bandwidth_thz**2
    return n_spans * _common_prefactor(signal, span) * li2_combo_approx(rho, variant) / l_inf


# ---------------------------------------------------------------------------
# Coherence-correction ladder
# ---------------------------------------------------------------------------

def _xi(signal: SignalSpec, span: FiberSpan) -> float:
    """Strong-dispersion parameter pi^2 beta2 L_s B^2 (dimensionless)."""
    return math.pi**2 * span.beta2_ps2_per_km * span.length_km * signal.bandwidth_thz**2


def g_cc_exact_series(signal: SignalSpec, span: FiberSpan, n_spans: int,
                      settings: QuadratureSettings | None = None) -> QuadratureResult:
    """Coherence correction with the inner integral analytic and the
    outer frequency integral numeric — the accuracy reference below the
    full 2-D quadrature.
    """
    if n_spans < 1:
        raise ValueError(f"n_spans must be >= 1, got {n_spans!r}")
    if n_spans == 1:
        return QuadratureResult(0.0, 0.0, 0)
    if settings is None:
        settings = QuadratureSettings()
    d = derive_effective_lengths(span)
    b = 0.5 * span.length_km / d.l_inf_km
    q = 0.5 * signal.bandwidth_thz
    h_scale = 2.0 * math.pi**2 * span.beta2_ps2_per_km * span.length_km

    def summation(f2):
        # 2 * sum_n (N-n) * cos_lorentzian_integral, vectorised over f2
        x_scale = 2.0 * abs(h_scale) * q * f2
        acc = np.zeros_like(f2)
        for n in range(1, n_spans):
            acc += (n_spans - n) * 2.0 * q * kernel_bracket(2.0 * n * b, n * x_scale)
        return 2.0 * acc

    n0 = max(8, math.ceil((n_spans - 1) * _xi(signal, span) / math.pi))
    res = integrate_1d(summation, 0.0, q, settings, initial_panels=n0)
    scale = 2.0 * (16.0 / 27.0) * span.gamma_per_w_km**2 * signal.g0_w_per_thz**3 * d.l_eff_km**2
    return QuadratureResult(scale * res.value, scale * res.error_estimate, res.evals)


def _coeff_sum(n_spans: int, factors) -> float:
    """sum_{n=1}^{N-1} (N/n - 1) * factors[n-1], evaluated exactly."""
    n = np.arange(1, n_spans)
    return float(np.sum((n_spans / n - 1.0) * factors))


def g_cc_sinint(signal: SignalSpec, span: FiberSpan, n_spans: int) -> float:
    """Coherence correction in fully closed form via the sine integral;
    zero for a single span, strictly positive otherwise."""
    if n_spans < 1:
        raise ValueError(f"n_spans must be >= 1, got {n_spans!r}")
    if n_spans == 1:
        return 0.0
    xi = _xi(signal, span)
    terms = sin_int(xi * np.arange(1, n_spans))
    return (_common_prefactor(signal, span) * 4.0 / span.length_km
            * _coeff_sum(n_spans, terms))


def g_cc_siapp(signal: SignalSpec, span: FiberSpan, n_spans: int) -> float:
    """Sine integral replaced by the piecewise-linear surrogate."""
    if n_spans < 1:
        raise ValueError(f"n_spans must be >= 1, got {n_spans!r}")
    if n_spans == 1:
        return 0.0
    xi = _xi(signal, span)
    terms = si_app(xi * np.arange(1, n_spans))
    return (_common_prefactor(signal, span) * 4.0 / span.length_km
            * _coeff_sum(n_spans, terms))


def g_cc_plateau(signal: SignalSpec, span: FiberSpan, n_spans: int) -> float:
    """All surrogate factors pinned at pi/2.

    Exact match of :func:`g_cc_siapp` once the n = 1 argument already
    sits past the plateau knee; check :func:`plateau_is_valid` first.
    """
    if n_spans < 1:
        raise ValueError(f"n_spans must be >= 1, got {n_spans!r}")
    if n_spans == 1:
        return 0.0
    coeff = 1.0 - n_spans + n_spans * harnum(n_spans - 1)
    return (_common_prefactor(signal, span) * 4.0 / span.length_km
            * 0.5 * math.pi * coeff)


def plateau_is_valid(signal: SignalSpec, span: FiberSpan) -> bool:
    """True when the n = 1 surrogate argument reaches the plateau."""
    return _xi(signal, span) >= 0.5 * math.pi


def g_cc_lower_bound(signal: SignalSpec, span: FiberSpan, n_spans: int) -> float:
    """Summation-free lower bound: one surrogate factor, harmonic-number
    coefficient."""
    if n_spans < 1:
        raise ValueError(f"n_spans must be >= 1, got {n_spans!r}")
    if n_spans == 1:
        return 0.0
    bracket = (1.0 - n_spans) / n_spans + harnum(n_spans - 1)
    return (n_spans * _common_prefactor(signal, span) * 4.0 / span.length_km
            * si_app(_xi(signal, span)) * bracket)


def g_cc_heterogeneous(link: LinkConfig, signal: SignalSpec,
                       si_mode: str = "siapp") -> float:
    """Per-span coherence-correction bound for links with distinct spans.

    Each span contributes with its own parameters; the harmonic-number
    bracket uses the global span count.  ``si_mode`` selects the
    surrogate ("siapp") or the true sine integral ("sinint") in the
    per-span factor.  Reduces to :func:`g_cc_lower_bound` on a
    homogeneous link with si_mode="siapp".
    """
    if si_mode == "siapp":
        si_fun = si_app
    elif si_mode == "sinint":
        si_fun = sin_int
    else:
        raise ValueError(f"si_mode must be 'siapp' or 'sinint', got {si_mode!r}")
    n_s = link.n_spans
    bracket = (1.0 - n_s) / n_s + harnum(n_s - 1)
    total = 0.0
    for span in link.spans:
        total += (_common_prefactor(signal, span) * 4.0 / span.length_km
                  * si_fun(_xi(signal, span)) * bracket)
    return total


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------

def g_nli_total(signal: SignalSpec, span: FiberSpan, n_spans: int,
                method: CcMethod = CcMethod.SININT,
                settings: QuadratureSettings | None = None) -> NliEstimate:
    """Total NLI PSD at f = 0: incoherent term plus the selected
    coherence correction, through the single consolidated prefactor.

    Attaches span-validity warnings; the plateau method additionally
    flags configurations below the plateau knee.
    """
    if n_spans < 1:
        raise ValueError(f"n_spans must be >= 1, got {n_spans!r}")
    common = _common_prefactor(signal, span)
    l_inf = derive_effective_lengths(span).l_inf_km
    rho = math.pi**2 * span.beta2_ps2_per_km * l_inf * signal.bandwidth_thz**2
    g_inc = n_spans * common * li2_imag_combo(rho) / l_inf

    warnings = list(span_warnings(span))
    if method is CcMethod.EXACT_SERIES:
        g_cc = g_cc_exact_series(signal, span, n_spans, settings).value
    elif method is CcMethod.SININT:
        if n_spans == 1:
            g_cc = 0.0
        else:
            xi = _xi(signal, span)
            terms = sin_int(xi * np.arange(1, n_spans))
            g_cc = common * 4.0 / span.length_km * _coeff_sum(n_spans, terms)
    elif method is CcMethod.SIAPP:
        g_cc = g_cc_siapp(signal, span, n_spans)
    elif method is CcMethod.PLATEAU:
        g_cc = g_cc_plateau(signal, span, n_spans)
        if not plateau_is_valid(signal, span):
            warnings.append(PLATEAU_INVALID)
    elif method is CcMethod.LOWER_BOUND:
        g_cc = g_cc_lower_bound(signal, span, n_spans)
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown method {method!r}")
    return NliEstimate(g_inc_w_per_thz=g_inc, g_cc_w_per_thz=g_cc,
                       method=method.value, warnings=tuple(warnings))


def g_nli_total_heterogeneous(link: LinkConfig, signal: SignalSpec,
                              si_mode: str = "siapp") -> NliEstimate:
    """Total NLI for a possibly heterogeneous link: per-span incoherent
    terms summed, per-span coherence bound added."""
    g_inc = sum(g_inc_closed(signal, span, 1) for span in link.spans)
    g_cc = g_cc_heterogeneous(link, signal, si_mode)
    warnings: list[str] = []
    for span in link.spans:
        for w in span_warnings(span):
            if w not in warnings:
                warnings.append(w)
    return NliEstimate(g_inc_w_per_thz=g_inc, g_cc_w_per_thz=g_cc,
                       method="heterogeneous", warnings=tuple(warnings))
