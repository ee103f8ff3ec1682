import numpy as np
import pytest

from ueiqc.adversary import (
    AttackReport, InterceptResend, NoAttack, intercept_resend_trial,
    run_attack_campaign, strategy_from_dict, strategy_to_dict,
)
from ueiqc.protocol import SessionConfig, run_session


def attacked(policy="uniform-coset", **kw):
    return SessionConfig(code="833", k_prime=1, seed=kw.pop("seed", 99),
                         adversary=InterceptResend(policy), **kw)


def within(report, name, expected, k=3.0):
    return abs(report.rate(name) - expected) <= k * report.sigma(name, expected)


class TestStrategies:
    @pytest.mark.parametrize("strategy", [NoAttack(), InterceptResend(),
                                          InterceptResend("copy-syndrome-representative")])
    def test_round_trip(self, strategy):
        assert strategy_from_dict(strategy_to_dict(strategy)) == strategy

    def test_unknown_policy(self):
        with pytest.raises(ValueError):
            InterceptResend("telepathy")
        with pytest.raises(ValueError):
            strategy_from_dict({"strategy": "bribe"})


class TestNoAttack:
    @pytest.mark.parametrize("backend", ["frame", "statevector"])
    def test_nothing_detected(self, backend):
        cfg = SessionConfig(seed=4, adversary=NoAttack())
        r = run_attack_campaign(cfg, 200, backend)
        assert r.detected == 0 and r.extraction_successes == 0


class TestUniformCoset:
    report = run_attack_campaign(attacked(), 20_000)

    def test_zero_syndrome_check_always_passes(self):
        # E_un * E' has zero syndrome whenever E' shares E_un's syndrome
        assert self.report.syndrome_passes == self.report.trials

    def test_class_match_rate(self):
        assert within(self.report, "coset_matches", 1 / 64)

    def test_dummy_check_rate(self):
        assert within(self.report, "undetected", 1 / 4)

    def test_position_guess_rate(self):
        assert within(self.report, "position_hits", 1 / 3)
        assert self.report.extraction_successes == self.report.position_hits

    def test_wilson_interval(self):
        lo, hi = self.report.interval("undetected")
        assert lo < self.report.rate("undetected") < hi

    def test_reproducible(self):
        again = run_attack_campaign(attacked(), 20_000)
        assert again == self.report

    def test_statevector_agrees(self):
        sv = run_attack_campaign(attacked(seed=5), 300, "statevector")
        assert sv.syndrome_passes == 300
        assert within(sv, "undetected", 1 / 4, 3.5)
        assert within(sv, "position_hits", 1 / 3, 3.5)


class TestCopyRepresentative:
    def test_never_matches(self):
        r = run_attack_campaign(attacked("copy-syndrome-representative"), 3000)
        assert r.coset_matches == 0 and r.syndrome_passes == r.trials

    def test_statevector(self):
        r = run_attack_campaign(attacked("copy-syndrome-representative"), 100, "statevector")
        assert r.coset_matches == 0


class TestMeasureForward:
    def test_frame_backend_unsupported(self):
        with pytest.raises(ValueError):
            intercept_resend_trial(attacked("measure-forward"), backend="frame")

    def test_statevector_runs(self):
        r = run_attack_campaign(attacked("measure-forward"), 100, "statevector")
        assert r.syndrome_passes == 100 and 0 < r.undetected < 100


class TestTrial:
    def test_session_scoring(self):
        report = run_session(attacked(seed=1))
        assert report.attack is not None and report.adversary_detected == (not report.delivered)

    def test_report_sum(self):
        a = AttackReport(trials=2, undetected=1)
        assert (a + a).rate("undetected") == 0.5

    def test_bad_trials(self):
        with pytest.raises(ValueError):
            run_attack_campaign(attacked(), 0)
