import math

import numpy as np
import pytest

from nli_coherence.quadrature import (QuadratureBudgetError, QuadratureSettings,
                                      integrate_1d)


def test_polynomial_exact():
    res = integrate_1d(lambda x: x**3 - 2 * x + 1, 0.0, 2.0, QuadratureSettings())
    assert res.value == pytest.approx(2.0, rel=1e-14)


def test_oscillatory_with_seeding():
    res = integrate_1d(lambda x: np.sin(50 * x), 0.0, math.pi / 4,
                       QuadratureSettings(rel_tol=1e-11), initial_panels=16)
    assert res.value == pytest.approx((1 - math.cos(12.5 * math.pi)) / 50, rel=1e-9)


def test_error_estimate_honest():
    res = integrate_1d(np.exp, -1.0, 1.0, QuadratureSettings(rel_tol=1e-10))
    exact = math.e - 1 / math.e
    assert abs(res.value - exact) <= max(res.error_estimate, 1e-13)


def test_budget_exhaustion_carries_best_result():
    settings = QuadratureSettings(rel_tol=1e-15, max_evals=1000)
    with pytest.raises(QuadratureBudgetError) as exc:
        integrate_1d(lambda x: np.sqrt(np.abs(x)), -1.0, 1.0, settings,
                     initial_panels=4)
    assert exc.value.result.value == pytest.approx(4.0 / 3.0, rel=1e-3)
    assert exc.value.result.evals >= 1000


def test_settings_validation():
    with pytest.raises(ValueError):
        QuadratureSettings(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSettings(max_evals=10)


def test_invalid_interval():
    with pytest.raises(ValueError):
        integrate_1d(np.sin, 1.0, 1.0, QuadratureSettings())
