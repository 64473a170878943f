"""Ground-truth numerical integration of the NLI integrals.

Every closed form in :mod:`nli_coherence.closed_form` is validated against
the quadratures here.  The 2-D integrand oscillates on the scale of the
multi-span phased-array factor, so meshes are seeded fine enough to
resolve one oscillation per cell before any error-driven refinement
happens; otherwise adaptivity can step over entire peaks.
"""

from __future__ import annotations

import enum
import math

import numpy as np
from numpy.polynomial.legendre import leggauss

from .link import FiberSpan, SignalSpec, derive_effective_lengths
from .quadrature import (QuadratureBudgetError, QuadratureResult,
                         QuadratureSettings, integrate_1d)
from .specfun import fejer_kernel, kernel_bracket

_X8, _W8 = leggauss(8)

# The 2-D oracle cost grows like (n_spans * bandwidth^2)^2; keep it at
# desk scale.
MAX_ORACLE_SPANS = 20


class DomainShape(enum.Enum):
    """Integration domain: the exact lozenge cut by the spectral
    indicator, or its enclosing square."""
    LOZENGE = "lozenge"
    SQUARE = "square"


class EfficiencyModel(enum.Enum):
    """Four-wave-mixing efficiency: exact per-span form, or the
    large-span-loss Lorentzian approximation."""
    EXACT = "exact"
    LORENTZIAN = "lorentzian"


def _efficiency_product(s, span: FiberSpan, model: EfficiencyModel):
    """FWM efficiency as a function of the frequency product s = f1*f2
    [THz^2]; returns km^2."""
    loss = span.loss_coeff_per_km
    ls = span.length_km
    beta2 = span.beta2_ps2_per_km
    d = derive_effective_lengths(span)
    if model is EfficiencyModel.LORENTZIAN:
        return d.l_eff_km**2 / (1.0 + (4.0 * math.pi**2 * beta2 * d.l_inf_km * s) ** 2)
    att = math.exp(-loss * ls)
    num = (1.0 - att) ** 2 + 4.0 * att * np.sin(2.0 * math.pi**2 * beta2 * ls * s) ** 2
    den = loss**2 + (4.0 * math.pi**2 * beta2 * s) ** 2
    return num / den


def fwm_efficiency(f1, f2, span: FiberSpan, model: EfficiencyModel):
    """FWM power efficiency [km^2] of the beat at frequencies f1, f2
    [THz]."""
    s = np.asarray(f1, dtype=float) * np.asarray(f2, dtype=float)
    res = _efficiency_product(s, span, model)
    return float(res) if np.ndim(res) == 0 else res


def _product_nodes(a: float, n_panels: int):
    """Gauss nodes and weights for a composite rule on [0, a]."""
    edges = np.linspace(0.0, a, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = edges[:-1] + half
    nodes = (mid[:, None] + half[:, None] * _X8[None, :]).ravel()
    weights = (half[:, None] * _W8[None, :]).ravel()
    return nodes, weights


def _quarter_square(g, a: float, n_panels: int) -> float:
    """integral of g(u*v) over [0,a]^2."""
    u, wu = _product_nodes(a, n_panels)
    vals = g(np.outer(u, u))
    return float(wu @ vals @ wu)


def _triangle(g, a: float, n_panels: int) -> float:
    """integral of g(u*v) over the triangle u,v >= 0, u + v <= a.

    The u-range shrinks linearly with v; mapping it to a fixed reference
    grid keeps every cell free of the domain boundary.
    """
    v, wv = _product_nodes(a, n_panels)
    xi, wxi = _product_nodes(1.0, n_panels)
    span_u = a - v
    u = span_u[:, None] * xi[None, :]
    vals = g(v[:, None] * u)
    inner = (vals @ wxi) * span_u
    return float(wv @ inner)


def g_nli_2d(signal: SignalSpec, span: FiberSpan, n_spans: int,
             shape: DomainShape, model: EfficiencyModel,
             settings: QuadratureSettings) -> QuadratureResult:
    """NLI PSD at f = 0 [W/THz] by direct 2-D quadrature.

    Exploits the two mirror symmetries of the integrand plus its
    dependence on the product f1*f2 alone, reducing the work to one
    quarter-square and (for the lozenge) one triangle.  Refines by mesh
    doubling; the difference between successive meshes is the reported
    error estimate.
    """
    if n_spans < 1:
        raise ValueError(f"n_spans must be >= 1, got {n_spans!r}")
    if n_spans > MAX_ORACLE_SPANS:
        raise ValueError(
            f"2-D oracle is limited to {MAX_ORACLE_SPANS} spans, got {n_spans}")
    a = 0.5 * signal.bandwidth_thz
    c = 2.0 * math.pi**2 * span.beta2_ps2_per_km * span.length_km

    def g(s):
        return _efficiency_product(s, span, model) * fejer_kernel(n_spans, c * s)

    def raw(n_panels):
        t = _quarter_square(g, a, n_panels)
        if shape is DomainShape.SQUARE:
            return 4.0 * t
        return 2.0 * (t + _triangle(g, a, n_panels))

    pref = (16.0 / 27.0) * span.gamma_per_w_km**2 * signal.g0_w_per_thz**3
    cells = 2 if shape is DomainShape.LOZENGE else 1
    n = max(8, math.ceil(c * n_spans * a * a / math.pi))
    value = pref * raw(n)
    evals = cells * (8 * n) ** 2
    while True:
        n *= 2
        new_value = pref * raw(n)
        evals += cells * (8 * n) ** 2
        err = abs(new_value - value)
        value = new_value
        tol = max(settings.abs_tol, settings.rel_tol * abs(value))
        if err <= tol:
            return QuadratureResult(value, err, evals)
        if evals >= settings.max_evals:
            raise QuadratureBudgetError(
                "2-D oracle budget exhausted",
                QuadratureResult(value, err, evals))


def q1_quadrature(b: float, q: float, h: float, n_spans: int,
                  settings: QuadratureSettings) -> QuadratureResult:
    """Inner integral of the dimensionless Lorentzian-times-Fejér form.

    Evaluates ``int_{-q}^{q} b^2/(b^2 + h^2 f^2) * sin^2(N h f)/sin^2(h f)
    df`` adaptively, seeding one panel per Fejér oscillation period.
    """
    if not (b > 0.0 and q > 0.0):
        raise ValueError(f"b and q must be > 0, got b={b!r}, q={q!r}")
    if n_spans < 1:
        raise ValueError(f"n_spans must be >= 1, got {n_spans!r}")

    def integrand(f):
        return b * b / (b * b + (h * f) ** 2) * fejer_kernel(n_spans, h * f)

    n0 = max(4, math.ceil(abs(h) * q * n_spans / math.pi))
    res = integrate_1d(integrand, 0.0, q, settings, initial_panels=n0)
    return QuadratureResult(2.0 * res.value, 2.0 * res.error_estimate, res.evals)


def _cc_prefactor(signal: SignalSpec, span: FiberSpan) -> float:
    l_eff = derive_effective_lengths(span).l_eff_km
    return (16.0 / 27.0) * span.gamma_per_w_km**2 * signal.g0_w_per_thz**3 * l_eff**2


def g_cc_quadrature(signal: SignalSpec, span: FiberSpan, n_spans: int,
                    settings: QuadratureSettings) -> QuadratureResult:
    """Coherence-correction PSD [W/THz] from the span-pair Ei bracket,
    integrated numerically over frequency.

    Returns exactly zero for a single span (empty pair sum).
    """
    if n_spans < 1:
        raise ValueError(f"n_spans must be >= 1, got {n_spans!r}")
    if n_spans == 1:
        return QuadratureResult(0.0, 0.0, 0)
    beta2, ls = span.beta2_ps2_per_km, span.length_km
    loss = span.loss_coeff_per_km
    bw = signal.bandwidth_thz

    def integrand(f2):
        acc = np.zeros_like(f2)
        for n in range(1, n_spans):
            y = n * loss * ls
            x = 2.0 * math.pi**2 * n * beta2 * ls * bw * f2
            acc += (n_spans - n) * bw * kernel_bracket(y, x)
        return acc

    xi = math.pi**2 * beta2 * ls * bw**2
    n0 = max(8, math.ceil((n_spans - 1) * xi / math.pi))
    res = integrate_1d(integrand, 0.0, 0.5 * bw, settings, initial_panels=n0)
    scale = 4.0 * _cc_prefactor(signal, span)
    return QuadratureResult(scale * res.value, scale * res.error_estimate, res.evals)


def g_cc_sinc_quadrature(signal: SignalSpec, span: FiberSpan, n_spans: int,
                         settings: QuadratureSettings) -> QuadratureResult:
    """Coherence correction with the bracket replaced by its sinc limit,
    integrated numerically (the target the SinInt closed form must hit)."""
    if n_spans < 1:
        raise ValueError(f"n_spans must be >= 1, got {n_spans!r}")
    if n_spans == 1:
        return QuadratureResult(0.0, 0.0, 0)
    beta2, ls = span.beta2_ps2_per_km, span.length_km
    bw = signal.bandwidth_thz

    def integrand(f2):
        acc = np.zeros_like(f2)
        for n in range(1, n_spans):
            arg = 2.0 * math.pi * n * math.pi * beta2 * ls * bw * f2
            acc += (n_spans - n) * bw * np.sinc(arg / math.pi)
        return acc

    xi = math.pi**2 * beta2 * ls * bw**2
    n0 = max(8, math.ceil((n_spans - 1) * xi / math.pi))
    res = integrate_1d(integrand, 0.0, 0.5 * bw, settings, initial_panels=n0)
    scale = 4.0 * _cc_prefactor(signal, span)
    return QuadratureResult(scale * res.value, scale * res.error_estimate, res.evals)
