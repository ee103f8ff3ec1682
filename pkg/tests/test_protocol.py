import numpy as np
import pytest

from ueiqc.frames import ChannelModel, frame_trials
from ueiqc.keys import keygen
from ueiqc.pauli import Pauli, from_label, syndrome_of
from ueiqc.protocol import (
    Abort, AbortReason, Ack1, ProtocolOrderError, RevealEun, RevealKeys,
    SessionConfig, SessionConfigError, Syndrome, check_transcript, config_from_dict,
    config_to_dict, exit_status, format_transcript, load_config, parse_transcript,
    receiver_run, relay_correct, run_session, sender_prepare,
)
from ueiqc.rng import substream
from ueiqc.statevector import (
    StateVector, apply_pauli, encode, fidelity, measure_syndrome,
)


def honest(seed, **kw):
    return run_session(SessionConfig(seed=seed, **kw))


class TestSender:
    def test_prepared_state(self, eight, rng):
        payload = StateVector.random(1, rng)
        prep = sender_prepare(eight, 1, payload, rng)
        measured, _ = measure_syndrome(prep.state, eight.generators, rng)
        assert measured == prep.s == syndrome_of(prep.e_un, eight.generators)

    def test_payload_size(self, eight, rng):
        with pytest.raises(SessionConfigError):
            sender_prepare(eight, 1, StateVector.zero(2), rng)


class TestRelay:
    def test_noiseless_hop(self, five, rng):
        cw = apply_pauli(encode(five, StateVector.random(1, rng)), from_label("XXIII"))
        s = syndrome_of(from_label("XXIII"), five.generators)
        assert fidelity(relay_correct(cw, s, five, rng), cw) == pytest.approx(1, abs=1e-10)

    def test_single_error_undone(self, five, rng):
        e_un = five.logical_x[0] * from_label("IZIII")
        s = syndrome_of(e_un, five.generators)
        sent = apply_pauli(encode(five, StateVector.random(1, rng)), e_un)
        for q in range(5):
            for letter in "XYZ":
                noisy = apply_pauli(sent, Pauli.single(5, q, letter))
                out = relay_correct(noisy, s, five, rng)
                assert fidelity(out, sent) == pytest.approx(1, abs=1e-10)

    def test_two_relays(self, eight, rng):
        e_un = from_label("XIIZIIYI")
        s = syndrome_of(e_un, eight.generators)
        state = apply_pauli(encode(eight, StateVector.random(3, rng)), e_un)
        for q in (2, 6):
            state = relay_correct(apply_pauli(state, Pauli.single(8, q, "Y")), s, eight, rng)
        assert measure_syndrome(state, eight.generators, rng)[0] == s


class TestReceiver:
    def setup_prepared(self, eight, seed):
        rng = substream(seed, "rx-test")
        payload = StateVector.random(1, rng)
        prep = sender_prepare(eight, 1, payload, rng)
        k = prep.keys
        keys_msg = RevealKeys(k.kappa4, k.kappa1, k.kappa2, k.kappa3)
        return rng, payload, prep, keys_msg

    def test_honest(self, eight):
        rng, payload, prep, keys_msg = self.setup_prepared(eight, 1)
        outcome, out = receiver_run(eight, 1, prep.state,
                                    [Syndrome(prep.s), RevealEun(prep.e_un), keys_msg], rng)
        assert outcome.delivered
        assert [type(m).__name__ for m in out] == ["Ack1", "Ack2"]

    def test_wrong_class_caught_later(self, eight):
        # a same-syndrome substitute passes the zero-syndrome check and
        # is only exposed, if at all, by the dummies
        rng, payload, prep, keys_msg = self.setup_prepared(eight, 2)
        wrong = prep.e_un * eight.logical_x[0]
        outcome, out = receiver_run(eight, 1, prep.state,
                                    [Syndrome(prep.s), RevealEun(wrong), keys_msg], rng)
        assert type(out[1]).__name__ == "Ack2"

    def test_wrong_syndrome_aborts(self, eight):
        rng, payload, prep, keys_msg = self.setup_prepared(eight, 3)
        wrong = prep.e_un * Pauli.single(8, 0, "Z") * Pauli.single(8, 5, "X")
        assert any(syndrome_of(wrong * prep.e_un, eight.generators))
        outcome, out = receiver_run(eight, 1, prep.state,
                                    [Syndrome(prep.s), RevealEun(wrong), keys_msg], rng)
        assert outcome.abort_reason is AbortReason.NON_ZERO_SYNDROME
        assert isinstance(out[-1], Abort)

    def test_out_of_order(self, eight, rng):
        with pytest.raises(ProtocolOrderError):
            receiver_run(eight, 1, encode(eight, StateVector.zero(3)),
                         [RevealEun(Pauli.identity(8))], rng)


class TestSession:
    def test_noiseless(self):
        r = honest(11)
        assert r.delivered and r.fidelity == pytest.approx(1, abs=1e-10)
        assert exit_status(r) == 0

    def test_three_nodes(self):
        r = honest(12, hop_p=(0.0, 0.0))
        assert r.delivered and r.fidelity == pytest.approx(1, abs=1e-10)
        assert len(r.hop_syndromes) == 2

    def test_forced_errors(self):
        for seed in range(40):
            r = honest(seed, hop_p=(0.0, 0.0, 0.0), hop_error_weight=1)
            assert r.delivered and r.fidelity == pytest.approx(1, abs=1e-10)

    def test_five_qubit_rejected(self):
        with pytest.raises(SessionConfigError):
            run_session(SessionConfig(code="513"))

    def test_unknown_code(self):
        with pytest.raises(SessionConfigError):
            run_session(SessionConfig(code="999"))

    def test_deterministic(self):
        a, b = honest(7, hop_p=(0.05, 0.05)), honest(7, hop_p=(0.05, 0.05))
        assert format_transcript(a.transcript) == format_transcript(b.transcript)
        assert a.fidelity == b.fidelity

    def test_transcript_round_trip(self):
        r = honest(5, hop_p=(0.0, 0.0))
        text = format_transcript(r.transcript)
        assert format_transcript(parse_transcript(text)) == text
        check_transcript(r.transcript)

    def test_transcript_order(self):
        r = honest(5)
        kinds = [rec.kind for rec in r.transcript]
        assert kinds == ["Syndrome", "Ack1", "RevealEun", "Ack2", "RevealKeys"]
        assert kinds.index("RevealKeys") > kinds.index("Ack2")

    def test_order_violation_detected(self):
        r = honest(5)
        bad = (r.transcript[0], r.transcript[2], r.transcript[1])
        with pytest.raises(ProtocolOrderError):
            check_transcript(bad)

    def test_dummy_abort_possible(self):
        # a logical flip on the channel lands on a dummy often enough
        aborted = 0
        for seed in range(30):
            r = run_session(SessionConfig(seed=seed, hop_errors=(get_logical(),)))
            aborted += r.abort_reason is AbortReason.DUMMY_MISMATCH
        assert aborted > 0

    def test_delivered_fraction_consistent(self, eight):
        p, hops, sessions = 0.01, 2, 4000
        stats = frame_trials(eight, ChannelModel(p), substream(3, "pl-hop"), 200_000)
        clean = sum(not honest(s, hop_p=(p,) * hops).oracle.logical_failure for s in range(sessions))
        expected = (1 - stats.rate) ** hops
        sigma = np.sqrt(expected * (1 - expected) / sessions)
        assert abs(clean / sessions - expected) < 3 * sigma + 2 * hops * stats.sigma


def get_logical():
    from ueiqc.codes import get_code
    spec = get_code("833")
    return spec.logical_x[1] * spec.logical_x[2]


class TestConfig:
    def test_round_trip(self):
        cfg = SessionConfig(code="833", hop_p=(0.01, 0.02), seed=4, exclude_zero_syndrome=True)
        back = config_from_dict(config_to_dict(cfg))
        assert back == cfg and back.digest() == cfg.digest()

    def test_yaml(self, tmp_path):
        path = tmp_path / "s.yaml"
        path.write_text("code: '833'\nk_prime: 1\nseed: 3\nchannel:\n  p: 0.01\n  relays: 2\n")
        cfg = load_config(path)
        assert cfg.hop_p == (0.01,) * 3 and cfg.parties[-1] == "receiver"

    @pytest.mark.parametrize("text", ["[1, 2]", "code: 833\nbogus: 1\n", "a: [", "channel:\n  p: 2\n"])
    def test_malformed(self, tmp_path, text):
        path = tmp_path / "bad.yaml"
        path.write_text(text)
        with pytest.raises(SessionConfigError):
            load_config(path)
