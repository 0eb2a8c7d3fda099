"""Sequential test: likelihood ratios, decisions, report counts, bounds."""

import math

import numpy as np
import pytest
import scipy.stats

from seqdef import (
    AttackPlan,
    ConfigError,
    DetectorProfile,
    NumericalError,
    RiskBudget,
    SprtTrace,
    decision_by_counts,
    expected_reports_intentional,
    expected_reports_random,
    normal_cdf,
    per_report_llr,
    simulate_detection,
    step,
    truncate,
    worst_case_bounds,
)

from oracles import exact_mean_stop

RISK = RiskBudget(0.01, 0.001)


class TestTypes:
    def test_risk_thresholds(self):
        assert RISK.log_a == pytest.approx(math.log(0.999 / 0.01), abs=1e-15)
        assert RISK.log_b == pytest.approx(math.log(0.001 / 0.99), abs=1e-15)
        assert RISK.log_b < 0.0 < RISK.log_a

    def test_risk_duality(self):
        # swapping delta and theta mirrors the thresholds
        swapped = RiskBudget(RISK.theta, RISK.delta)
        assert swapped.log_a == -RISK.log_b
        assert swapped.log_b == -RISK.log_a

    @pytest.mark.parametrize(
        "build",
        [
            lambda: DetectorProfile(0.5, 0.6),
            lambda: DetectorProfile(1.0, 0.1),
            lambda: DetectorProfile(0.5, 0.0),
            lambda: RiskBudget(0.0, 0.1),
            lambda: RiskBudget(0.6, 0.5),
            lambda: AttackPlan("random", 0.0, 10),
            lambda: AttackPlan("sneaky", 0.5, 10),
        ],
    )
    def test_invalid_inputs_rejected(self, build):
        with pytest.raises(ConfigError):
            build()

    def test_attack_probabilities(self):
        det = DetectorProfile(0.9, 0.001)
        random_plan = AttackPlan("random", 0.37, 100)
        assert random_plan.attack_probability(1, det) == 0.37
        assert random_plan.attack_probability(100, det) == 0.37
        targeted = AttackPlan("intentional", 0.25, 100)
        assert targeted.m == 25
        assert targeted.attack_probability(25, det) == 1.0
        assert targeted.attack_probability(26, det) == pytest.approx(0.001 / 0.9)

    def test_ceil_report_count(self):
        assert AttackPlan("intentional", 0.2, 10).m == 2
        assert AttackPlan("intentional", 0.21, 10).m == 3
        assert AttackPlan("intentional", 1.0, 7).m == 7


class TestPerReportLLR:
    def test_random_success_value(self):
        det = DetectorProfile(0.9, 0.001)
        plan = AttackPlan("random", 0.5, 10000)
        assert per_report_llr(1, plan, det, 1) == pytest.approx(math.log(450), abs=1e-12)

    def test_intentional_beyond_target_is_zero(self):
        det = DetectorProfile(0.9, 0.001)
        plan = AttackPlan("intentional", 0.01, 1000)  # M = 10
        for x in (0, 1):
            assert per_report_llr(x, plan, det, 11) == 0.0
            assert per_report_llr(x, plan, det, 500) == 0.0

    def test_boundary_identical_hypotheses(self):
        # q * p_d == p_f exactly: both outcomes carry no information
        det = DetectorProfile(0.5, 0.25)
        plan = AttackPlan("random", 0.5, 100)
        assert per_report_llr(0, plan, det, 3) == 0.0
        assert per_report_llr(1, plan, det, 3) == 0.0


class TestStepAndTruncate:
    def test_strong_first_report_accepts_immediately(self):
        det = DetectorProfile(0.9, 0.001)
        plan = AttackPlan("random", 0.5, 10000)
        trace = step(SprtTrace(), 1, plan, det, RISK)
        assert trace.state == "accept_attack"
        assert trace.stop_index == 1

    def test_symmetric_alternation_continues(self):
        det = DetectorProfile(0.8, 0.2)  # z(1) = -z(0) = log 4
        plan = AttackPlan("intentional", 1.0, 10)
        trace = SprtTrace()
        for x in (1, 0, 1, 0, 1, 0):
            step(trace, x, plan, det, RISK)
        assert trace.state == "continue"
        assert trace.cumulative_llr == pytest.approx(0.0, abs=1e-12)

    def test_null_run_accepts_null(self):
        det = DetectorProfile(0.9, 0.001)
        plan = AttackPlan("random", 0.5, 10000)
        trace = SprtTrace()
        while trace.state == "continue":
            step(trace, 0, plan, det, RISK)
        assert trace.state == "accept_null"
        assert trace.cumulative_llr <= RISK.log_b

    def test_stepping_decided_trace_rejected(self):
        det = DetectorProfile(0.9, 0.001)
        plan = AttackPlan("random", 0.5, 10000)
        trace = step(SprtTrace(), 1, plan, det, RISK)
        with pytest.raises(ValueError, match="decided"):
            step(trace, 0, plan, det, RISK)

    def test_llr_matches_scratch_recomputation(self):
        det = DetectorProfile(0.7, 0.05)
        plan = AttackPlan("random", 0.4, 1000)
        rng = np.random.default_rng(5)
        trace = SprtTrace()
        xs = []
        while trace.state == "continue" and len(xs) < 200:
            x = int(rng.random() < 0.28)
            xs.append(x)
            step(trace, x, plan, det, RISK)
        scratch = sum(per_report_llr(x, plan, det, i) for i, x in enumerate(xs, start=1))
        assert trace.cumulative_llr == pytest.approx(scratch, abs=1e-12)
        assert trace.d_count == sum(xs)

    @pytest.mark.parametrize("llr,expected", [(0.5, "accept_attack"), (0.0, "accept_null"), (-0.5, "accept_null")])
    def test_truncation_sign_rule(self, llr, expected):
        trace = SprtTrace(cumulative_llr=llr)
        assert truncate(trace, 10) == expected
        assert trace.stop_index == 10

    def test_truncate_validation(self):
        with pytest.raises(ValueError):
            truncate(SprtTrace(), 0)
        decided = SprtTrace(state="accept_attack")
        with pytest.raises(ValueError):
            truncate(decided, 5)


class TestCountFormAgreement:
    @pytest.mark.parametrize("scheme,q", [("random", 0.35), ("random", 0.7), ("intentional", 0.02)])
    def test_count_form_matches_llr_form(self, scheme, q):
        # the rearranged d_m thresholds must agree with the stepwise test;
        # for targeted plans d_m counts successes in the first min(m, M) reports
        rng = np.random.default_rng(11)
        plan = AttackPlan(scheme, q, 500)
        det = DetectorProfile(0.6, 0.02)
        for _ in range(200):
            trace = SprtTrace()
            m = 0
            while trace.state == "continue" and m < 80:
                x = int(rng.random() < 0.3)
                m += 1
                step(trace, x, plan, det, RISK)
                d_m = sum(trace.reports[: plan.m]) if plan.targeted else trace.d_count
                assert decision_by_counts(d_m, m, plan, det, RISK) == trace.state


class TestExpectedReports:
    def test_reference_evaluation(self):
        det = DetectorProfile(0.9, 0.001)
        numerator = RISK.theta * RISK.log_b + (1 - RISK.theta) * RISK.log_a
        assert numerator == pytest.approx(4.5927, abs=1e-4)
        assert expected_reports_random(0.5, det, RISK) == pytest.approx(1.897, abs=1e-3)
        assert expected_reports_intentional(det, RISK) == pytest.approx(0.7795, abs=1e-4)

    def test_intentional_equals_random_at_full_fraction(self):
        det = DetectorProfile(0.9, 0.001)
        assert expected_reports_intentional(det, RISK) == expected_reports_random(1.0, det, RISK)

    def test_random_decreasing_in_q(self):
        det = DetectorProfile(0.5, 0.01)
        qs = np.linspace(0.03, 1.0, 40)  # beyond p_f / p_d = 0.02
        m1 = [expected_reports_random(q, det, RISK) for q in qs]
        assert all(a > b for a, b in zip(m1, m1[1:]))

    def test_random_decreasing_in_pd(self):
        m1 = [expected_reports_random(0.4, DetectorProfile(pd, 0.001), RISK) for pd in np.linspace(0.1, 0.95, 20)]
        assert all(a > b for a, b in zip(m1, m1[1:]))

    def test_intentional_increasing_in_pf(self):
        m1 = [expected_reports_intentional(DetectorProfile(0.6, pf), RISK) for pf in np.linspace(0.001, 0.3, 20)]
        assert all(a < b for a, b in zip(m1, m1[1:]))

    def test_degenerate_rejected(self):
        with pytest.raises(NumericalError):
            expected_reports_random(0.5, DetectorProfile(0.5, 0.25), RISK)


class TestNormalCdf:
    def test_half_at_zero(self):
        assert normal_cdf(0.0) == 0.5

    def test_symmetry(self):
        for x in np.linspace(-8, 8, 81):
            assert abs(normal_cdf(x) + normal_cdf(-x) - 1.0) < 1e-14

    def test_against_scipy(self):
        for x in np.linspace(-6, 6, 37):
            assert normal_cdf(x) == pytest.approx(scipy.stats.norm.cdf(x), abs=1e-12)


class TestWorstCaseBounds:
    def test_large_budget_accepts_surely(self):
        det = DetectorProfile(0.5, 0.001)
        b = worst_case_bounds(0.3, det, RISK, 10**4)
        assert b.accept_lower_bound > 1 - 1e-9

    def test_error_caps_dominate_targets_on_grid(self):
        for q in (0.1, 0.3, 0.6):
            for pd in (0.3, 0.6, 0.9):
                for mc in (5, 50, 500):
                    b = worst_case_bounds(q, DetectorProfile(pd, 0.01), RISK, mc)
                    assert b.sigma_z_h0 > 0 and b.sigma_z_h1 > 0
                    assert normal_cdf(b.y3) >= normal_cdf(b.y4)
                    assert normal_cdf(b.y5) >= normal_cdf(b.y6)
                    assert b.delta_at_mc >= RISK.delta
                    assert b.theta_at_mc >= RISK.theta
                    for p in (b.accept_lower_bound, b.reject_lower_bound, b.delta_at_mc, b.theta_at_mc):
                        assert 0.0 <= p <= 1.0

    def test_degenerate_rejected(self):
        with pytest.raises(NumericalError):
            worst_case_bounds(0.001, DetectorProfile(0.5, 0.01), RISK, 10)

    def test_termination_frequency_vs_bound(self):
        # Monte-Carlo termination frequency dominates the normal lower bound
        det = DetectorProfile(0.5, 0.001)
        b = worst_case_bounds(0.3, det, RISK, 100)
        sim = simulate_detection(AttackPlan("random", 0.3, 10**4), det, RISK, 100, 10**4, seed=9, truth="h1")
        se = math.sqrt(b.accept_lower_bound * (1 - b.accept_lower_bound) / 10**4)
        assert sim.attack_frequency >= b.accept_lower_bound - 3 * se


class TestSimulateDetection:
    def test_mean_stop_matches_exact_oracle(self):
        det = DetectorProfile(0.5, 0.01)
        plan = AttackPlan("random", 0.3, 10**4)
        sim = simulate_detection(plan, det, RISK, 10**4, 10**4, seed=42, truth="h1")
        oracle = exact_mean_stop(0.15, 0.01, RISK)
        assert sim.mean_stop_index == pytest.approx(oracle, rel=0.05)

    def test_h0_false_alarm_within_wald_bound(self):
        det = DetectorProfile(0.5, 0.01)
        plan = AttackPlan("random", 0.3, 10**4)
        sim = simulate_detection(plan, det, RISK, 10**4, 10**4, seed=43, truth="h0")
        bound = RISK.delta / (1 - RISK.theta)
        se = math.sqrt(bound * (1 - bound) / 10**4)
        assert sim.attack_frequency <= bound + 3 * se

    def test_small_m_regime_vs_exact_oracle(self):
        # strong detectors decide within a couple of reports; the Wald
        # approximation is loose here, so the exact oracle is the anchor
        det = DetectorProfile(0.9, 0.001)
        plan = AttackPlan("random", 0.5, 10**4)
        sim = simulate_detection(plan, det, RISK, 10**4, 10**4, seed=3, truth="h1")
        assert sim.mean_stop_index == pytest.approx(exact_mean_stop(0.45, 0.001, RISK), rel=0.05)

    def test_intentional_never_stops_after_target(self):
        det = DetectorProfile(0.5, 1e-6)
        plan = AttackPlan("intentional", 0.05, 1000)  # M = 50
        sim = simulate_detection(plan, det, RISK, 200, 1000, seed=5, truth="h1")
        assert sim.max_stop_index <= plan.m
        assert sim.truncated_frequency == 0.0

    def test_intentional_llr_frozen_beyond_target(self):
        # low-information detector so no trace decides within 2M reports
        det = DetectorProfile(0.6, 0.4)
        risk = RiskBudget(1e-6, 1e-6)
        plan = AttackPlan("intentional", 0.02, 1000)  # M = 20
        rng = np.random.default_rng(31)
        for _ in range(100):
            trace = SprtTrace()
            for i in range(1, plan.m + 1):
                step(trace, int(rng.random() < 0.6), plan, det, risk)
            frozen = trace.cumulative_llr
            for i in range(plan.m + 1, 2 * plan.m + 1):
                step(trace, int(rng.random() < 0.4), plan, det, risk)
                assert trace.cumulative_llr == frozen  # bitwise

    def test_determinism(self):
        det = DetectorProfile(0.5, 0.01)
        plan = AttackPlan("random", 0.3, 10**4)
        a = simulate_detection(plan, det, RISK, 500, 2000, seed=7, truth="h1")
        b = simulate_detection(plan, det, RISK, 500, 2000, seed=7, truth="h1")
        assert a == b
        c = simulate_detection(plan, det, RISK, 500, 2000, seed=8, truth="h1")
        assert c != a

    def test_truncation_applies_sign_rule(self):
        # weak signal and tiny budget force truncation decisions
        det = DetectorProfile(0.3, 0.2)
        plan = AttackPlan("random", 0.9, 100)
        sim = simulate_detection(plan, det, RISK, 3, 2000, seed=1, truth="h1")
        assert sim.truncated_attack + sim.truncated_null > 0
        assert sim.trials == sim.threshold_attack + sim.threshold_null + sim.truncated_attack + sim.truncated_null

    def test_validation(self):
        det = DetectorProfile(0.5, 0.01)
        plan = AttackPlan("random", 0.3, 100)
        with pytest.raises(ConfigError):
            simulate_detection(plan, det, RISK, 0, 10, seed=0)
        with pytest.raises(ConfigError):
            simulate_detection(plan, det, RISK, 10, 0, seed=0)
        with pytest.raises(ConfigError):
            simulate_detection(plan, det, RISK, 10, 10, seed=0, truth="maybe")
