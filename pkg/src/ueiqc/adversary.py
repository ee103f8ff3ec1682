"""Intercept-and-resend eavesdropper and attack campaigns.

The attacker sits on the first quantum hop.  It sees the quantum state in
transit and every classical record once posted, and nothing else; trial
outcomes are scored afterwards against the sender's ground truth.
"""
from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np
from scipy.stats import binomtest

from .codes import (CodeSpec, build_decoder_table, in_stabilizer_group,
                    logical_label, random_syndrome_consistent,
                    sample_uncorrectable)
from .frames import ChannelModel, sample_error
from .keys import keygen
from .pauli import Pauli, int_to_bits, multiply, syndrome_of
from .rng import substream
from .statevector import (StateVector, apply_pauli, encode, measure_pauli)

SPOOF_POLICIES = ("uniform-coset", "copy-syndrome-representative", "measure-forward")


@dataclass(frozen=True)
class NoAttack:
    pass


@dataclass(frozen=True)
class InterceptResend:
    """Capture the state, forward a fake consistent with the syndrome.

    ``uniform-coset`` draws the spoofed error uniformly from every Pauli with
    the announced syndrome; ``copy-syndrome-representative`` uses the
    decoder representative.  ``measure-forward`` is an exploratory variant:
    the genuine state is forwarded after measuring a random logical
    X or Z on each guessed dummy slot.
    """
    spoof_policy: str = "uniform-coset"
    guess_policy: str = "uniform"

    def __post_init__(self):
        if self.spoof_policy not in SPOOF_POLICIES:
            raise ValueError(f"unknown spoof policy {self.spoof_policy!r}")
        if self.guess_policy != "uniform":
            raise ValueError(f"unknown guess policy {self.guess_policy!r}")


def strategy_to_dict(strategy) -> dict:
    if strategy is None or isinstance(strategy, NoAttack):
        return {"strategy": "none"}
    return {"strategy": "intercept-resend", "spoof_policy": strategy.spoof_policy,
            "guess_policy": strategy.guess_policy}


def strategy_from_dict(data):
    if data is None:
        return NoAttack()
    if isinstance(data, str):
        data = {"strategy": data}
    kind = data.get("strategy", "none")
    if kind == "none":
        return NoAttack()
    if kind == "intercept-resend":
        return InterceptResend(data.get("spoof_policy", "uniform-coset"),
                               data.get("guess_policy", "uniform"))
    raise ValueError(f"unknown adversary strategy {kind!r}")


def _guess_positions(k: int, k_prime: int, rng) -> tuple[int, ...]:
    guess = np.zeros(k, dtype=int)
    guess[rng.choice(k, size=k - k_prime, replace=False)] = 1
    return tuple(int(b) for b in guess)


class InterceptResendAttacker:
    def __init__(self, strategy: InterceptResend, spec: CodeSpec, k_prime: int,
                 rng: np.random.Generator):
        self.strategy = strategy
        self.spec = spec
        self.k_prime = k_prime
        self.rng = rng
        self.seen: list = []
        self.syndrome: tuple[int, ...] | None = None
        self.e_un: Pauli | None = None
        self.keys_msg = None
        self.retained: StateVector | None = None
        self.spoof: Pauli | None = None
        self.guess = _guess_positions(spec.k, k_prime, rng)

    def on_classical(self, record) -> None:
        self.seen.append(record)
        kind = record.kind
        if kind == "Syndrome" and self.syndrome is None:
            self.syndrome = record.message.s
        elif kind == "RevealEun":
            self.e_un = record.message.e_un
        elif kind == "RevealKeys":
            self.keys_msg = record.message

    def on_quantum(self, state: StateVector) -> StateVector:
        self.retained = state.copy()
        spec = self.spec
        if self.strategy.spoof_policy == "measure-forward":
            for slot, bit in enumerate(self.guess):
                if bit:
                    op = spec.logical_x[slot] if self.rng.integers(2) else spec.logical_z[slot]
                    _, state = measure_pauli(state, op, self.rng)
            return state
        if self.strategy.spoof_policy == "uniform-coset":
            self.spoof = random_syndrome_consistent(spec, self.syndrome, self.rng)
        else:
            self.spoof = build_decoder_table(spec).lookup(self.syndrome)
        fake = encode(spec, StateVector.zero(spec.k))
        return apply_pauli(fake, self.spoof)


def build_attacker(strategy, spec: CodeSpec, k_prime: int, rng):
    if strategy is None or isinstance(strategy, NoAttack):
        return None
    return InterceptResendAttacker(strategy, spec, k_prime, rng)


@dataclass(frozen=True)
class AttackTrial:
    syndrome_pass: bool
    dummy_pass: bool
    coset_match: bool
    keys_revealed: bool
    position_hit: bool
    class_identified: bool

    @property
    def undetected(self) -> bool:
        return self.syndrome_pass and self.dummy_pass

    @property
    def extraction(self) -> bool:
        return self.position_hit and self.class_identified


def score_attacker(attacker: InterceptResendAttacker, kappa4, e_un: Pauli,
                   syndrome_pass: bool, dummy_pass: bool) -> AttackTrial:
    spec = attacker.spec
    match = attacker.spoof is not None and in_stabilizer_group(spec, multiply(attacker.spoof, e_un))
    return AttackTrial(
        syndrome_pass=syndrome_pass,
        dummy_pass=dummy_pass,
        coset_match=bool(match),
        keys_revealed=attacker.keys_msg is not None,
        position_hit=attacker.guess == tuple(kappa4),
        # RevealEun hands the attacker E_un itself, hence its class.
        class_identified=attacker.e_un is not None and attacker.e_un == e_un,
    )


# -- Pauli-frame fast path --------------------------------------------------

def _frame_session(spec: CodeSpec, k_prime: int, hop_p, strategy, rng,
                   exclude_zero_syndrome: bool = False) -> AttackTrial | None:
    """One session tracked as a Pauli frame relative to a reference codeword.

    The reference is the genuine register for honest runs and the
    attacker's logical |0...0> for intercept-resend.
    """
    keys = keygen(spec.k, k_prime, rng)
    e_un = sample_uncorrectable(spec, rng, exclude_zero_syndrome)
    s = syndrome_of(e_un, spec.generators)
    table = build_decoder_table(spec)
    attacking = not (strategy is None or isinstance(strategy, NoAttack))
    guess = _guess_positions(spec.k, k_prime, rng) if attacking else None
    if attacking:
        if strategy.spoof_policy == "uniform-coset":
            frame = random_syndrome_consistent(spec, s, rng)
        elif strategy.spoof_policy == "copy-syndrome-representative":
            frame = table.lookup(s)
        else:
            raise ValueError("measure-forward needs the statevector backend")
        spoof = frame
    else:
        frame = e_un
    for p in hop_p:
        frame = multiply(sample_error(ChannelModel(p), spec.n, rng), frame)
        measured = syndrome_of(frame, spec.generators)
        corr = table.lookup(tuple(a ^ b for a, b in zip(measured, s)))
        frame = multiply(corr, frame)
    frame = multiply(e_un, frame)
    syndrome_pass = not any(syndrome_of(frame, spec.generators))
    dummy_pass = False
    if syndrome_pass:
        bits = int_to_bits(logical_label(spec, frame), 2 * spec.k)
        a, b = bits[: spec.k], bits[spec.k:]
        slots = [j for j, bit in enumerate(keys.kappa4) if bit]
        dummy_pass = True
        for i, slot in enumerate(slots):
            if keys.kappa3[i] == 0:
                ok = (a[slot] == 0) if not attacking else (a[slot] == keys.kappa1[i])
            else:
                ok = (b[slot] == 0) if not attacking else (int(rng.integers(2)) == keys.kappa2[i])
            dummy_pass &= bool(ok)
    if not attacking:
        return AttackTrial(syndrome_pass, dummy_pass, False, False, False, False)
    return AttackTrial(
        syndrome_pass=syndrome_pass,
        dummy_pass=dummy_pass,
        coset_match=in_stabilizer_group(spec, multiply(spoof, e_un)),
        keys_revealed=syndrome_pass,
        position_hit=guess == keys.kappa4,
        class_identified=True,
    )


def intercept_resend_trial(cfg, rng: np.random.Generator | None = None,
                           backend: str = "frame", index: int = 0) -> AttackTrial:
    """One attack trial; ``cfg`` is a SessionConfig."""
    spec = cfg.spec()
    if backend == "frame":
        if rng is None:
            rng = substream(cfg.seed, "attack-trial", index)
        return _frame_session(spec, cfg.k_prime, cfg.hop_p, cfg.adversary, rng,
                              cfg.exclude_zero_syndrome)
    if backend == "statevector":
        from dataclasses import replace

        from .protocol import run_session

        seed = int(np.random.SeedSequence([cfg.seed, index]).generate_state(1)[0])
        report = run_session(replace(cfg, seed=seed))
        if report.attack is None:
            kinds = {r.kind for r in report.transcript}
            return AttackTrial("Ack2" in kinds, report.delivered, False, False, False, False)
        return report.attack
    raise ValueError(f"unknown backend {backend!r}")


# -- campaigns --------------------------------------------------------------

@dataclass(frozen=True)
class AttackReport:
    trials: int = 0
    syndrome_passes: int = 0
    undetected: int = 0
    coset_matches: int = 0
    keys_revealed: int = 0
    position_hits: int = 0
    class_identified: int = 0
    extraction_successes: int = 0

    @property
    def detected(self) -> int:
        return self.trials - self.undetected

    @classmethod
    def from_trial(cls, t: AttackTrial) -> "AttackReport":
        return cls(1, int(t.syndrome_pass), int(t.undetected), int(t.coset_match),
                   int(t.keys_revealed), int(t.position_hit), int(t.class_identified),
                   int(t.extraction))

    def __add__(self, other: "AttackReport") -> "AttackReport":
        return AttackReport(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))

    def rate(self, name: str) -> float:
        return getattr(self, name) / self.trials

    def sigma(self, name: str, expected: float | None = None) -> float:
        p = self.rate(name) if expected is None else expected
        return float(np.sqrt(p * (1 - p) / self.trials))

    def interval(self, name: str, level: float = 0.95) -> tuple[float, float]:
        """Wilson score interval for the named count."""
        ci = binomtest(getattr(self, name), self.trials).proportion_ci(level, method="wilson")
        return float(ci.low), float(ci.high)

    def as_dict(self) -> dict:
        out = {"trials": self.trials, "detected": self.detected}
        for f in fields(self):
            if f.name == "trials":
                continue
            lo, hi = self.interval(f.name)
            out[f.name] = {"count": getattr(self, f.name), "rate": self.rate(f.name),
                           "wilson95": [lo, hi]}
        return out


def run_attack_campaign(cfg, trials: int, backend: str = "frame") -> AttackReport:
    if trials < 1:
        raise ValueError("need at least one trial")
    total = AttackReport()
    for i in range(trials):
        total = total + AttackReport.from_trial(intercept_resend_trial(cfg, None, backend, i))
    return total
