"""Physical link description: spans, signal, and derived quantities.

Canonical internal units throughout the library:

* frequency / bandwidth : THz
* dispersion            : ps^2/km (absolute value)
* length                : km
* power loss coefficient: 1/km (power decays as ``exp(-loss * z)``)
* Kerr coefficient      : 1/(W km)
* PSD                   : W/THz

With these units every transcendental argument in the model is a pure
number, because (1 ps) * (1 THz) = 1.  Conversions from field-engineering
units (dB/km loss, GBaud bandwidth, dBm power) happen at the CLI boundary
only, see :mod:`nli_coherence.cli`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


DB_PER_NEPER = 10.0 * math.log10(math.e)

# Below this span loss the large-loss (Lorentzian) approximation of the
# FWM efficiency degrades; results are flagged, not rejected.
LOW_SPAN_LOSS_DB = 10.0

LOW_SPAN_LOSS = "LOW_SPAN_LOSS"
PLATEAU_INVALID = "PLATEAU_INVALID"
ROLLOFF_HIGH = "ROLLOFF_HIGH"
QUAD_BUDGET = "QUAD_BUDGET"


class ValidationError(ValueError):
    """Raised when a physical parameter violates its constraints.

    ``field`` names the offending parameter.
    """

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


def _require_positive(name: str, value: float) -> None:
    if not math.isfinite(value) or value <= 0.0:
        raise ValidationError(name, f"must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class FiberSpan:
    """One amplified fiber span.

    Parameters
    ----------
    length_km : float
        Span length.
    loss_coeff_per_km : float
        Power loss coefficient, so span power transmission is
        ``exp(-loss_coeff_per_km * length_km)``.  For a field loss of
        a_dB dB/km this is ``a_dB / (10 log10 e)``.
    beta2_ps2_per_km : float
        Absolute value of the group-velocity dispersion.  Zero dispersion
        is rejected: the closed forms divide by beta2.
    gamma_per_w_km : float
        Kerr non-linearity coefficient.
    """

    length_km: float
    loss_coeff_per_km: float
    beta2_ps2_per_km: float
    gamma_per_w_km: float

    def __post_init__(self):
        _require_positive("length_km", self.length_km)
        _require_positive("loss_coeff_per_km", self.loss_coeff_per_km)
        _require_positive("beta2_ps2_per_km", self.beta2_ps2_per_km)
        if not math.isfinite(self.gamma_per_w_km) or self.gamma_per_w_km < 0.0:
            raise ValidationError(
                "gamma_per_w_km",
                f"must be finite and >= 0, got {self.gamma_per_w_km!r}")
        if not math.isfinite(self.loss_coeff_per_km * self.length_km):
            raise ValidationError("length_km", "span loss must be finite")


@dataclass(frozen=True)
class DerivedSpan:
    """Effective lengths derived from a :class:`FiberSpan`.

    ``l_eff_km`` is the usual non-linearity effective length, and
    ``l_inf_km`` its infinite-span asymptote 1/loss.  Always
    ``0 < l_eff_km < l_inf_km``.
    """

    l_eff_km: float
    l_inf_km: float


def derive_effective_lengths(span: FiberSpan) -> DerivedSpan:
    """Effective length (1 - exp(-loss*L))/loss and asymptote 1/loss."""
    a = span.loss_coeff_per_km
    l_inf = 1.0 / a
    l_eff = -math.expm1(-a * span.length_km) / a
    return DerivedSpan(l_eff_km=l_eff, l_inf_km=l_inf)


def span_loss_db(span: FiberSpan) -> float:
    """Total span loss in power dB."""
    return DB_PER_NEPER * span.loss_coeff_per_km * span.length_km


def span_warnings(span: FiberSpan) -> tuple[str, ...]:
    """Validity flags for one span (currently only the low-loss guard)."""
    if span_loss_db(span) < LOW_SPAN_LOSS_DB:
        return (LOW_SPAN_LOSS,)
    return ()


@dataclass(frozen=True)
class SignalSpec:
    """Rectangular-spectrum signal: flat PSD ``g0_w_per_thz`` over
    ``bandwidth_thz`` centered at f = 0."""

    g0_w_per_thz: float
    bandwidth_thz: float

    def __post_init__(self):
        _require_positive("g0_w_per_thz", self.g0_w_per_thz)
        _require_positive("bandwidth_thz", self.bandwidth_thz)

    @property
    def power_w(self) -> float:
        return self.g0_w_per_thz * self.bandwidth_thz


@dataclass(frozen=True)
class LinkConfig:
    """Ordered list of spans.

    Use :meth:`homogeneous` for the identical-span links that most of the
    model requires; the heterogeneous constructor is accepted only by the
    per-span coherence correction.
    """

    spans: tuple[FiberSpan, ...]

    def __post_init__(self):
        if len(self.spans) == 0:
            raise ValidationError("spans", "link must contain at least one span")
        object.__setattr__(self, "spans", tuple(self.spans))

    @classmethod
    def homogeneous(cls, span: FiberSpan, n_spans: int) -> "LinkConfig":
        if not isinstance(n_spans, int) or n_spans < 1:
            raise ValidationError("n_spans", f"must be a positive integer, got {n_spans!r}")
        return cls(spans=(span,) * n_spans)

    @property
    def n_spans(self) -> int:
        return len(self.spans)

    @property
    def is_homogeneous(self) -> bool:
        return all(s == self.spans[0] for s in self.spans)


@dataclass(frozen=True)
class NliEstimate:
    """NLI PSD at f = 0 split into incoherent and coherence-correction
    parts, tagged with the producing method."""

    g_inc_w_per_thz: float
    g_cc_w_per_thz: float
    method: str
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def total_w_per_thz(self) -> float:
        return self.g_inc_w_per_thz + self.g_cc_w_per_thz
