"""Closed forms against the integral oracles and against each other."""

import math

import numpy as np
import pytest

from nli_coherence import closed_form as cf
from nli_coherence import oracle
from nli_coherence.link import (FiberSpan, LinkConfig, SignalSpec,
                                ValidationError)
from nli_coherence.quadrature import QuadratureSettings

DB2NEP = 10 * math.log10(math.e)

SMF = FiberSpan(length_km=100.0, loss_coeff_per_km=0.2 / DB2NEP,
                beta2_ps2_per_km=21.0, gamma_per_w_km=1.3)
NZDSF = FiberSpan(length_km=100.0, loss_coeff_per_km=0.22 / DB2NEP,
                  beta2_ps2_per_km=4.0, gamma_per_w_km=1.5)
SIG = SignalSpec(g0_w_per_thz=0.03125, bandwidth_thz=0.032)
SET = QuadratureSettings(rel_tol=1e-10)


class TestQ1Params:
    def test_physical_mapping(self):
        p = cf.Q1Params.from_physical(SMF, SIG, f2_thz=0.01, n_spans=5)
        assert p.b == pytest.approx(0.5 * SMF.loss_coeff_per_km * SMF.length_km)
        assert p.q == pytest.approx(0.016)
        assert p.h == pytest.approx(2 * math.pi**2 * 0.01 * 21.0 * 100.0)
        assert p.n_spans == 5

    def test_validation(self):
        with pytest.raises(ValidationError):
            cf.Q1Params(b=0.0, q=0.1, h=1.0, n_spans=2)
        with pytest.raises(ValidationError):
            cf.Q1Params(b=0.1, q=-0.1, h=1.0, n_spans=2)
        with pytest.raises(ValidationError):
            cf.Q1Params(b=0.1, q=0.1, h=1.0, n_spans=0)


class TestCosLorentzianIntegral:
    def test_h_sign_invariance(self):
        up = cf.Q1Params(b=0.2, q=0.1, h=33.0, n_spans=4)
        dn = cf.Q1Params(b=0.2, q=0.1, h=-33.0, n_spans=4)
        for n in (1, 2, 3):
            assert cf.cos_lorentzian_integral(up, n) == \
                cf.cos_lorentzian_integral(dn, n)

    def test_decay_with_n(self):
        p = cf.Q1Params(b=0.2, q=0.1, h=60.0, n_spans=40)
        vals = [abs(cf.cos_lorentzian_integral(p, n)) for n in (1, 5, 30)]
        assert vals[0] > vals[1] > vals[2]

    def test_cisi_route_agrees(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            p = cf.Q1Params(b=float(rng.uniform(0.05, 3.0)),
                            q=float(rng.uniform(0.01, 0.3)),
                            h=float(rng.uniform(-300, 300)),
                            n_spans=8)
            n = int(rng.integers(1, 8))
            a = cf.cos_lorentzian_integral(p, n)
            b = cf.cos_lorentzian_integral_cisi(p, n)
            assert a == pytest.approx(b, rel=1e-10, abs=1e-300)


class TestQ1Closed:
    def test_single_span_arctan(self):
        p = cf.Q1Params(b=0.4, q=0.2, h=17.0, n_spans=1)
        assert cf.q1_closed(p) == pytest.approx(
            2 * 0.4 / 17.0 * math.atan(17.0 * 0.2 / 0.4), rel=1e-14)

    def test_h_zero_limit(self):
        p = cf.Q1Params(b=0.4, q=0.2, h=0.0, n_spans=6)
        assert cf.q1_closed(p) == pytest.approx(2 * 0.2 * 36, rel=1e-14)

    def test_continuous_at_small_h(self):
        big = cf.q1_closed(cf.Q1Params(b=0.4, q=0.2, h=1e-9, n_spans=6))
        assert big == pytest.approx(2 * 0.2 * 36, rel=1e-9)


class TestIncoherentTerm:
    def test_linear_in_span_count(self):
        one = cf.g_inc_closed(SIG, SMF, 1)
        assert cf.g_inc_closed(SIG, SMF, 8) == pytest.approx(8 * one, rel=1e-15)

    def test_scaling_in_power_and_gamma(self):
        double_g0 = SignalSpec(g0_w_per_thz=2 * SIG.g0_w_per_thz,
                               bandwidth_thz=SIG.bandwidth_thz)
        assert cf.g_inc_closed(double_g0, SMF, 1) == pytest.approx(
            8 * cf.g_inc_closed(SIG, SMF, 1), rel=1e-14)
        double_gamma = FiberSpan(length_km=SMF.length_km,
                                 loss_coeff_per_km=SMF.loss_coeff_per_km,
                                 beta2_ps2_per_km=SMF.beta2_ps2_per_km,
                                 gamma_per_w_km=2 * SMF.gamma_per_w_km)
        assert cf.g_inc_closed(SIG, double_gamma, 1) == pytest.approx(
            4 * cf.g_inc_closed(SIG, SMF, 1), rel=1e-14)

    def test_approx_variants_within_envelope(self):
        exact = cf.g_inc_closed(SIG, SMF, 1)
        for variant in ("asinh", "log"):
            approx = cf.g_inc_approx(SIG, SMF, 1, variant)
            assert approx == pytest.approx(exact, rel=0.12)

    def test_vanishes_with_bandwidth(self):
        tiny = SignalSpec(g0_w_per_thz=SIG.g0_w_per_thz, bandwidth_thz=1e-6)
        # quadratic vanishing: li2 combo ~ 2x at small argument
        assert cf.g_inc_closed(tiny, SMF, 1) < 1e-8 * cf.g_inc_closed(SIG, SMF, 1)


class TestCoherenceLadder:
    def test_all_zero_for_single_span(self):
        assert cf.g_cc_sinint(SIG, SMF, 1) == 0.0
        assert cf.g_cc_siapp(SIG, SMF, 1) == 0.0
        assert cf.g_cc_plateau(SIG, SMF, 1) == 0.0
        assert cf.g_cc_lower_bound(SIG, SMF, 1) == 0.0
        assert cf.g_cc_exact_series(SIG, SMF, 1).value == 0.0

    def test_sinint_positive_and_superlinear(self):
        vals = [cf.g_cc_sinint(SIG, NZDSF, n) for n in (2, 4, 8, 16)]
        assert all(v > 0 for v in vals)
        # growth faster than linear: value(2N)/value(N) > 2
        assert vals[1] / vals[0] > 2.0
        assert vals[2] / vals[1] > 2.0
        assert vals[3] / vals[2] > 2.0

    def test_exact_series_matches_bracket_quadrature(self):
        a = cf.g_cc_exact_series(SIG, SMF, 6, SET).value
        b = oracle.g_cc_quadrature(SIG, SMF, 6, SET).value
        assert a == pytest.approx(b, rel=1e-10)

    def test_plateau_equals_siapp_when_plateaued(self):
        # SMF at 32 GBaud sits far past the plateau knee
        assert cf.plateau_is_valid(SIG, SMF)
        assert cf.g_cc_plateau(SIG, SMF, 7) == pytest.approx(
            cf.g_cc_siapp(SIG, SMF, 7), rel=1e-13)

    def test_pre_plateau_regime_engages_linear_branch(self):
        narrow = SignalSpec(g0_w_per_thz=SIG.g0_w_per_thz, bandwidth_thz=0.010)
        assert not cf.plateau_is_valid(narrow, NZDSF)
        assert cf.g_cc_plateau(narrow, NZDSF, 5) > cf.g_cc_siapp(narrow, NZDSF, 5)

    def test_lower_bound_ordering(self):
        for span in (SMF, NZDSF):
            for sig in (SIG, SignalSpec(g0_w_per_thz=0.03125, bandwidth_thz=0.008)):
                for n in (2, 5, 13):
                    assert cf.g_cc_lower_bound(sig, span, n) <= \
                        cf.g_cc_siapp(sig, span, n) * (1 + 1e-14)


class TestHeterogeneous:
    def test_homogeneous_reduction(self):
        link = LinkConfig.homogeneous(NZDSF, 9)
        assert cf.g_cc_heterogeneous(link, SIG) == pytest.approx(
            cf.g_cc_lower_bound(SIG, NZDSF, 9), rel=1e-14)

    def test_two_span_additivity(self):
        link = LinkConfig(spans=(SMF, NZDSF))
        n_s = 2
        bracket = (1.0 - n_s) / n_s + 1.0  # HarNum(1) = 1
        expected = 0.0
        for span in (SMF, NZDSF):
            xi = (math.pi**2 * span.beta2_ps2_per_km * span.length_km
                  * SIG.bandwidth_thz**2)
            expected += (cf._common_prefactor(SIG, span) * 4.0 / span.length_km
                         * min(xi, math.pi / 2) * bracket)
        assert cf.g_cc_heterogeneous(link, SIG) == pytest.approx(expected, rel=1e-14)

    def test_single_span_zero_via_bracket(self):
        link = LinkConfig.homogeneous(SMF, 1)
        assert cf.g_cc_heterogeneous(link, SIG) == 0.0

    def test_sinint_mode(self):
        link = LinkConfig(spans=(SMF, NZDSF))
        assert cf.g_cc_heterogeneous(link, SIG, "sinint") > 0.0
        with pytest.raises(ValueError):
            cf.g_cc_heterogeneous(link, SIG, "bogus")


class TestAssembly:
    def test_consolidated_equals_parts(self):
        est = cf.g_nli_total(SIG, SMF, 9, cf.CcMethod.SININT)
        assert est.g_inc_w_per_thz == pytest.approx(
            cf.g_inc_closed(SIG, SMF, 9), rel=1e-14)
        assert est.g_cc_w_per_thz == pytest.approx(
            cf.g_cc_sinint(SIG, SMF, 9), rel=1e-14)

    def test_single_span_sinint_is_incoherent_only(self):
        est = cf.g_nli_total(SIG, SMF, 1, cf.CcMethod.SININT)
        assert est.g_cc_w_per_thz == 0.0
        assert est.total_w_per_thz == est.g_inc_w_per_thz

    def test_plateau_warning_attached(self):
        narrow = SignalSpec(g0_w_per_thz=SIG.g0_w_per_thz, bandwidth_thz=0.010)
        est = cf.g_nli_total(narrow, NZDSF, 4, cf.CcMethod.PLATEAU)
        assert "PLATEAU_INVALID" in est.warnings
        est2 = cf.g_nli_total(SIG, NZDSF, 4, cf.CcMethod.PLATEAU)
        assert "PLATEAU_INVALID" not in est2.warnings

    def test_bandwidth_monotonicity_every_method(self):
        bands = (0.016, 0.032, 0.064)
        for method in cf.CcMethod:
            totals = []
            for b in bands:
                sig = SignalSpec(g0_w_per_thz=SIG.g0_w_per_thz, bandwidth_thz=b)
                totals.append(cf.g_nli_total(sig, SMF, 5, method).total_w_per_thz)
            assert totals[0] < totals[1] < totals[2], method
