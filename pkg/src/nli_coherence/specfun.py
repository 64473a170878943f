"""Special-function kernels used by every estimator in the package.

The exponential integral of complex argument is evaluated through two
regimes:

* power series ``Ei(z) = gamma + log z + sum z^k/(k k!)`` for small
  arguments and for moderate arguments close to the positive real axis
  (where the series suffers no cancellation),
* a Lentz continued fraction for ``E1(-z)`` everywhere else; the fraction
  converges slowly only close to its branch cut at moderate radius, a
  region the series already covers.

The branch cut sits on the negative real axis.  On the cut the real
principal value is returned; limits from above carry ``+j*pi``.  Arguments
with negative imaginary part are evaluated by conjugate reflection, so the
symmetry ``Ei(conj(z)) == conj(Ei(z))`` holds exactly by construction.

The coherence-correction bracket is never formed from raw ``Ei`` values:
for large decay exponents the ``pi*e^y`` and ``e^y*Im{Ei(-y+jx)}`` pieces
cancel almost completely, so the scaled combinations are computed directly
(continued fraction and asymptotic forms carry the ``e^y`` factor
analytically).
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import expi, sici

EULER_GAMMA = float(np.euler_gamma)
CATALAN = 0.9159655941772190150546035149323841107741493742816721342664981196

_SERIES_RADIUS = 8.0
_SERIES_MAX_RADIUS = 60.0
_SERIES_CANCEL_BUDGET = 5.0
_MAX_SERIES_TERMS = 400
_MAX_CF_ITER = 4000

# Fixed Gauss-Legendre rule for the mid-range inverse-tangent integral.
_TI2_NODES, _TI2_WEIGHTS = leggauss(40)


def _check_finite(name, value):
    if not np.all(np.isfinite(value)):
        raise ValueError(f"{name} must be finite, got {value!r}")


# ---------------------------------------------------------------------------
# Exponential integral machinery (vectorised internals, Im z >= 0 assumed)
# ---------------------------------------------------------------------------

def _ei_series(z):
    """Power series for Ei on the principal branch, complex ndarray input."""
    z = np.asarray(z, dtype=complex)
    p = z.copy()             # z^k / k!
    s = p.copy()             # running sum of z^k / (k k!)
    for k in range(2, _MAX_SERIES_TERMS):
        p *= z / k
        s += p / k
        if np.all(np.abs(p) <= 1e-18 * k * (np.abs(s) + 1.0)):
            break
    return EULER_GAMMA + np.log(z) + s


def _e1_series(w):
    """Power series for E1 on the principal branch, complex ndarray input.

    Unlike going through ``Ei``, the imaginary part carries no ``pi``
    offset, so small imaginary parts survive at full precision.
    """
    w = np.asarray(w, dtype=complex)
    p = -w.copy()            # (-1)^k w^k / k!
    s = p.copy()
    for k in range(2, _MAX_SERIES_TERMS):
        p *= -w / k
        s += p / k
        if np.all(np.abs(p) <= 1e-18 * k * (np.abs(s) + 1.0)):
            break
    return -EULER_GAMMA - np.log(w) - s


def _e1_cf(w):
    """Continued fraction ``C(w)`` with ``E1(w) = exp(-w) * C(w)``.

    Modified Lentz iteration with active-set compaction.  Reliable in the
    whole cut plane except close to the negative real axis at moderate
    radius (a region the callers route to the power series instead).
    """
    shape = np.asarray(w).shape
    w = np.asarray(w, dtype=complex).ravel()
    tiny = 1e-300
    out = np.empty(w.shape, dtype=complex)
    idx = np.arange(w.size)
    b = w + 1.0
    c = np.full(w.shape, 1.0 / tiny, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, _MAX_CF_ITER):
        a = -float(i * i)
        b = b + 2.0
        den = a * d + b
        den = np.where(np.abs(den) < tiny, tiny, den)
        d = 1.0 / den
        c = b + a / c
        c = np.where(np.abs(c) < tiny, tiny, c)
        delta = c * d
        h *= delta
        done = np.abs(delta - 1.0) < 1e-16
        if np.all(done):
            break
        if i % 16 == 0 and np.count_nonzero(done) > done.size // 4:
            out[idx[done]] = h[done]
            keep = ~done
            idx, b, c, d, h = idx[keep], b[keep], c[keep], d[keep], h[keep]
    out[idx] = h
    return out.reshape(shape)


def _series_safe(r, re_part):
    """Where the Ei power series keeps full accuracy: small radius, or a
    moderate radius with little cancellation (``|z| - Re z`` bounds the
    log10 of the cancellation loss)."""
    return (r <= _SERIES_RADIUS) | (
        (r <= _SERIES_MAX_RADIUS) & (r - re_part < _SERIES_CANCEL_BUDGET))


def ei_complex(z: complex) -> complex:
    """Principal-branch exponential integral of a complex argument.

    The branch cut lies along the negative real axis; on-cut arguments
    return the real principal value.  ``Ei(conj z) == conj(Ei(z))``.

    Raises
    ------
    ValueError
        If ``z`` is zero or non-finite.
    """
    z = complex(z)
    if z == 0:
        raise ValueError("Ei is singular at z = 0")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"Ei argument must be finite, got {z!r}")
    if z.imag < 0.0:
        return ei_complex(z.conjugate()).conjugate()
    if z.imag == 0.0:
        return complex(float(expi(z.real)), 0.0)

    r = abs(z)
    if _series_safe(r, z.real):
        return complex(_ei_series(np.array([z]))[0])
    # Ei(z) = -E1(-z) + j*pi for Im z > 0, E1 via continued fraction
    c = _e1_cf(np.array([-z]))[0]
    return -cmath.exp(z) * c + 1j * math.pi


# ---------------------------------------------------------------------------
# Coherence bracket
# ---------------------------------------------------------------------------

def kernel_bracket(y: float, x):
    """Scaled Ei combination whose large-``y`` limit is ``sin(x)/x``.

    Evaluates ``(y/(2x)) * [-e^y Im{Ei(-y+jx)} - e^-y Im{Ei(y-jx)}
    + pi e^y]`` for ``y > 0``.  Even in ``x``; ``x = 0`` is handled by its
    Taylor limit.  All exponentially large factors are carried
    analytically, so the result stays accurate for arbitrarily large
    ``y``.

    Accepts a scalar or array ``x``; ``y`` is scalar.
    """
    y = float(y)
    if not (math.isfinite(y) and y > 0.0):
        raise ValueError(f"y must be finite and > 0, got {y!r}")
    x_arr = np.asarray(x, dtype=float)
    _check_finite("x", x_arr)
    scalar = x_arr.ndim == 0
    ax = np.abs(np.atleast_1d(x_arr))
    out = np.empty(ax.shape)

    small = ax * (1.0 + 1.0 / y) < 1e-3
    if np.any(small):
        xs = ax[small]
        x2 = xs * xs
        c2 = (0.5 + 1.0 / y**2) / 3.0
        c4 = (1.0 / 24.0 + 0.5 / y**2 + 1.0 / y**4) / 5.0
        out[small] = 1.0 - c2 * x2 + c4 * x2 * x2

    big = ~small
    if np.any(big):
        xb = ax[big]
        phase = np.exp(1j * xb)

        # A = e^y * (pi - Im{Ei(-y+jx)}) = e^y * Im{E1(y-jx)}
        w = y - 1j * xb
        a_term = np.empty(xb.shape)
        cf_ok = np.abs(w) > _SERIES_RADIUS
        if np.any(cf_ok):
            a_term[cf_ok] = (phase[cf_ok] * _e1_cf(w[cf_ok])).imag
        if np.any(~cf_ok):
            a_term[~cf_ok] = math.exp(y) * _e1_series(w[~cf_ok]).imag

        # t2 = Im{e^-y * Ei(y+jx)}
        z2 = y + 1j * xb
        r2 = np.abs(z2)
        t2 = np.empty(xb.shape)
        m_series = _series_safe(r2, y)
        if np.any(m_series):
            t2[m_series] = math.exp(-y) * _ei_series(z2[m_series]).imag
        if np.any(~m_series):
            # e^-y Ei(z2) = -e^{jx} C(-z2) + j pi e^-y
            t2[~m_series] = (-phase[~m_series] * _e1_cf(-z2[~m_series])).imag \
                + math.pi * math.exp(-y)

        out[big] = y * (a_term + t2) / (2.0 * xb)

    return float(out[0]) if scalar else out.reshape(x_arr.shape)


# ---------------------------------------------------------------------------
# Fejér kernel
# ---------------------------------------------------------------------------

def fejer_kernel(n_spans: int, x):
    """``sin^2(N x) / sin^2(x)`` with removable singularities filled in.

    Away from multiples of pi the direct ratio is used; inside a narrow
    guard band the exact finite cosine series is evaluated instead, which
    yields ``N^2`` at the peaks.  Accepts scalar or array ``x``.
    """
    n = int(n_spans)
    if n < 1:
        raise ValueError(f"n_spans must be >= 1, got {n_spans!r}")
    x_arr = np.asarray(x, dtype=float)
    _check_finite("x", x_arr)
    scalar = x_arr.ndim == 0
    xv = np.atleast_1d(x_arr)
    if n == 1:
        res = np.ones(xv.shape)
        return float(res[0]) if scalar else res.reshape(x_arr.shape)

    out = np.empty(xv.shape)
    r = xv - math.pi * np.round(xv / math.pi)
    near_peak = np.abs(r) < 1e-6
    safe = ~near_peak
    if np.any(safe):
        s = np.sin(xv[safe])
        out[safe] = (np.sin(n * xv[safe]) / s) ** 2
    if np.any(near_peak):
        out[near_peak] = fejer_series(n, xv[near_peak])
    return float(out[0]) if scalar else out.reshape(x_arr.shape)


def fejer_series(n_spans: int, x):
    """Finite-series form ``N + 2 sum_{k<N} (N-k) cos(2 k x)``, exact
    everywhere."""
    n = int(n_spans)
    xv = np.asarray(x, dtype=float)
    acc = np.full(xv.shape, float(n))
    for k in range(1, n):
        acc += 2.0 * (n - k) * np.cos(2.0 * k * xv)
    return acc


# ---------------------------------------------------------------------------
# Sine integral and its plateau surrogate
# ---------------------------------------------------------------------------

def sin_int(x):
    """Sine integral Si(x); odd, tends to pi/2 at +inf."""
    x_arr = np.asarray(x, dtype=float)
    _check_finite("x", x_arr)
    si, _ = sici(x_arr)
    return float(si) if x_arr.ndim == 0 else si


def si_app(x):
    """Piecewise-linear surrogate of Si: identity below pi/2, then flat.

    Defined for nonnegative arguments only.
    """
    x_arr = np.asarray(x, dtype=float)
    _check_finite("x", x_arr)
    if np.any(x_arr < 0.0):
        raise ValueError("si_app is defined for nonnegative arguments only")
    res = np.minimum(x_arr, math.pi / 2.0)
    return float(res) if x_arr.ndim == 0 else res


# ---------------------------------------------------------------------------
# Dilogarithm combination on the imaginary axis
# ---------------------------------------------------------------------------

def _ti2(x: float) -> float:
    """Inverse tangent integral ``Ti2(x) = int_0^x atan(t)/t dt``, x >= 0."""
    if x == 0.0:
        return 0.0
    if x <= 0.5:
        # alternating series sum (-1)^k x^(2k+1)/(2k+1)^2
        acc = 0.0
        term = x
        k = 0
        while True:
            contrib = term / (2 * k + 1) ** 2
            acc += contrib if k % 2 == 0 else -contrib
            k += 1
            term *= x * x
            if term / (2 * k + 1) ** 2 < 1e-18 * abs(acc):
                return acc
    if x >= 2.0:
        return 0.5 * math.pi * math.log(x) + _ti2(1.0 / x)
    # mid range: anchor at Ti2(1) = Catalan and integrate atan(t)/t
    half = 0.5 * (x - 1.0)
    mid = 0.5 * (x + 1.0)
    t = mid + half * _TI2_NODES
    integral = half * np.sum(_TI2_WEIGHTS * np.arctan(t) / t)
    return CATALAN + float(integral)


def li2_imag_combo(x: float) -> float:
    """The real number ``j[Li2(-jx) - Li2(jx)]`` for ``x >= 0``.

    By Schwarz reflection this equals ``2 Im{Li2(jx)}``, i.e. twice the
    inverse tangent integral; nondecreasing, 0 at 0.
    """
    x = float(x)
    if not (math.isfinite(x) and x >= 0.0):
        raise ValueError(f"argument must be finite and >= 0, got {x!r}")
    return 2.0 * _ti2(x)


def li2_combo_approx(x: float, variant: str = "asinh") -> float:
    """Elementary surrogates of :func:`li2_imag_combo`:
    ``pi*asinh(x/2)`` or ``pi*log(1+x)``."""
    x = float(x)
    if not (math.isfinite(x) and x >= 0.0):
        raise ValueError(f"argument must be finite and >= 0, got {x!r}")
    if variant == "asinh":
        return math.pi * math.asinh(0.5 * x)
    if variant == "log":
        return math.pi * math.log1p(x)
    raise ValueError(f"unknown variant {variant!r} (expected 'asinh' or 'log')")


# ---------------------------------------------------------------------------
# Harmonic numbers
# ---------------------------------------------------------------------------

def harnum(m: int, approximate: bool = False) -> float:
    """Harmonic number ``sum_{k=1}^m 1/k`` (0 for m = 0).

    With ``approximate=True`` returns the ``log(m) + gamma_e`` shortcut
    instead of the exact sum.
    """
    if not isinstance(m, (int, np.integer)) or m < 0:
        raise ValueError(f"m must be a nonnegative integer, got {m!r}")
    if m == 0:
        return 0.0
    if approximate:
        return math.log(m) + EULER_GAMMA
    return float(np.sum(1.0 / np.arange(1, m + 1)))
