"""Sender / relay / receiver state machines and session orchestration.

Classical messages travel on an authenticated, reliable, in-order channel
and are logged to a transcript.  The quantum state hops
sender -> relay_1 -> ... -> receiver through independent channels.

Transcript records are tab-separated::

    seq  from  to  type  body

Bit-vectors in a body are written ``<nbits>/<hex>`` with the first bit as
the most significant one; multi-field bodies join fields with ``:``.
"""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
import yaml

from .codes import (CodeSpec, build_decoder_table, get_code, logical_label,
                    sample_uncorrectable)
from .frames import ChannelModel, sample_error
from .keys import KeyMaterial, dummy_spec, keygen, slot_order
from .pauli import Pauli, bits_to_int, int_to_bits, multiply, pauli_of_weight, syndrome_of
from .rng import substream
from .statevector import (StateVector, apply_pauli, decode, encode,
                          measure_qubit, measure_syndrome, permute_qubits,
                          reduced_density, state_fidelity, tensor)


class ProtocolOrderError(RuntimeError):
    """A message arrived that the party's state machine does not expect."""


class SessionConfigError(ValueError):
    pass


class AbortReason(str, Enum):
    NON_ZERO_SYNDROME = "NonZeroSyndrome"
    DUMMY_MISMATCH = "DummyMismatch"


# -- messages ---------------------------------------------------------------

@dataclass(frozen=True)
class Syndrome:
    s: tuple[int, ...]


@dataclass(frozen=True)
class Ack1:
    pass


@dataclass(frozen=True)
class RevealEun:
    e_un: Pauli


@dataclass(frozen=True)
class Ack2:
    pass


@dataclass(frozen=True)
class RevealKeys:
    kappa4: tuple[int, ...]
    kappa1: tuple[int, ...]
    kappa2: tuple[int, ...]
    kappa3: tuple[int, ...]


@dataclass(frozen=True)
class Abort:
    reason: AbortReason


MESSAGE_TYPES = {cls.__name__: cls for cls in (Syndrome, Ack1, RevealEun, Ack2, RevealKeys, Abort)}
PROTOCOL_ORDER = ("Syndrome", "Ack1", "RevealEun", "Ack2", "RevealKeys")


def _bv(bits) -> str:
    bits = tuple(bits)
    width = max(1, -(-len(bits) // 4))
    return f"{len(bits)}/{bits_to_int(bits):0{width}x}"


def _unbv(token: str) -> tuple[int, ...]:
    size, hexval = token.split("/")
    return int_to_bits(int(hexval, 16), int(size))


def encode_body(msg) -> str:
    if isinstance(msg, Syndrome):
        return _bv(msg.s)
    if isinstance(msg, RevealEun):
        e = msg.e_un
        return f"{_bv(e.x_bits)}:{_bv(e.z_bits)}:{e.phase}"
    if isinstance(msg, RevealKeys):
        return ":".join(_bv(v) for v in (msg.kappa4, msg.kappa1, msg.kappa2, msg.kappa3))
    if isinstance(msg, Abort):
        return msg.reason.value
    return "-"


def decode_body(kind: str, body: str):
    if kind not in MESSAGE_TYPES:
        raise ValueError(f"unknown message type {kind!r}")
    if kind == "Syndrome":
        return Syndrome(_unbv(body))
    if kind == "RevealEun":
        xs, zs, phase = body.split(":")
        return RevealEun(Pauli.from_bits(_unbv(xs), _unbv(zs), int(phase)))
    if kind == "RevealKeys":
        k4, k1, k2, k3 = (_unbv(t) for t in body.split(":"))
        return RevealKeys(k4, k1, k2, k3)
    if kind == "Abort":
        return Abort(AbortReason(body))
    return MESSAGE_TYPES[kind]()


@dataclass(frozen=True)
class Record:
    seq: int
    sender: str
    receiver: str
    message: object

    @property
    def kind(self) -> str:
        return type(self.message).__name__

    def line(self) -> str:
        return f"{self.seq}\t{self.sender}\t{self.receiver}\t{self.kind}\t{encode_body(self.message)}"


def parse_record(line: str) -> Record:
    seq, src, dst, kind, body = line.rstrip("\n").split("\t")
    return Record(int(seq), src, dst, decode_body(kind, body))


def format_transcript(records) -> str:
    return "".join(r.line() + "\n" for r in records)


def parse_transcript(text: str) -> list[Record]:
    return [parse_record(ln) for ln in text.splitlines() if ln and not ln.startswith("#")]


def check_transcript(records) -> None:
    """Enforce message order and the secrecy ordering; raises ProtocolOrderError."""
    kinds = [k for k, _ in itertools.groupby(r.kind for r in records)]
    if kinds and kinds[-1] == "Abort":
        kinds = kinds[:-1]
        if tuple(kinds) not in (PROTOCOL_ORDER[:3], PROTOCOL_ORDER):
            raise ProtocolOrderError(f"abort at unexpected point: {kinds}")
    if tuple(kinds) != PROTOCOL_ORDER[:len(kinds)]:
        raise ProtocolOrderError(f"message order violated: {kinds}")


# -- configuration ----------------------------------------------------------

@dataclass(frozen=True)
class SessionConfig:
    """One protocol session.

    ``hop_p`` holds one depolarizing probability per hop, so the topology is
    the sender, ``len(hop_p) - 1`` relays and the receiver.
    ``hop_error_weight`` and ``hop_errors`` replace channel sampling and
    ``inject_error=False`` skips the uncorrectable error; all three are
    test hooks.
    """
    code: str = "833"
    k_prime: int = 1
    hop_p: tuple[float, ...] = (0.0,)
    seed: int = 0
    exclude_zero_syndrome: bool = False
    adversary: object = None
    inject_error: bool = True
    hop_error_weight: int | None = None
    hop_errors: tuple | None = None

    def __post_init__(self):
        if len(self.hop_p) < 1:
            raise SessionConfigError("need at least one hop (sender and receiver)")
        for p in self.hop_p:
            ChannelModel(p)
        if self.adversary is None:
            from .adversary import NoAttack
            object.__setattr__(self, "adversary", NoAttack())

    @property
    def hops(self) -> int:
        return len(self.hop_p)

    @property
    def parties(self) -> list[str]:
        return ["sender"] + [f"relay{i}" for i in range(1, self.hops)] + ["receiver"]

    def spec(self) -> CodeSpec:
        try:
            spec = get_code(self.code)
        except KeyError as exc:
            raise SessionConfigError(str(exc)) from None
        if not 1 <= self.k_prime < spec.k:
            raise SessionConfigError(
                f"code {spec} has k={spec.k}; payload k'={self.k_prime} must satisfy 1 <= k' < k")
        return spec

    def digest(self) -> str:
        canon = yaml.safe_dump(config_to_dict(self), sort_keys=True)
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def config_to_dict(cfg: SessionConfig) -> dict:
    from .adversary import strategy_to_dict

    out = {
        "code": cfg.code,
        "k_prime": cfg.k_prime,
        "seed": cfg.seed,
        "exclude_zero_syndrome": cfg.exclude_zero_syndrome,
        "channel": {"hops": [float(p) for p in cfg.hop_p]},
        "adversary": strategy_to_dict(cfg.adversary),
    }
    if not cfg.inject_error:
        out["inject_error"] = False
    if cfg.hop_error_weight is not None:
        out["channel"]["forced_weight"] = cfg.hop_error_weight
    return out


def config_from_dict(data: dict) -> SessionConfig:
    from .adversary import strategy_from_dict

    data = dict(data or {})
    channel = dict(data.pop("channel", {}) or {})
    known = {"code", "k_prime", "seed", "exclude_zero_syndrome", "adversary", "inject_error"}
    unknown = set(data) - known
    if unknown:
        raise SessionConfigError(f"unknown config keys: {sorted(unknown)}")
    if "hops" in channel:
        hop_p = tuple(float(p) for p in channel["hops"])
    else:
        hop_p = (float(channel.get("p", 0.0)),) * (int(channel.get("relays", 0)) + 1)
    try:
        return SessionConfig(
            code=str(data.get("code", "833")),
            k_prime=int(data.get("k_prime", 1)),
            hop_p=hop_p,
            seed=int(data.get("seed", 0)),
            exclude_zero_syndrome=bool(data.get("exclude_zero_syndrome", False)),
            adversary=strategy_from_dict(data.get("adversary")),
            inject_error=bool(data.get("inject_error", True)),
            hop_error_weight=channel.get("forced_weight"),
        )
    except (TypeError, ValueError) as exc:
        raise SessionConfigError(str(exc)) from None


def load_config(path: str | Path) -> SessionConfig:
    try:
        data = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        raise SessionConfigError(f"malformed config: {exc}") from None
    if not isinstance(data, dict):
        raise SessionConfigError("config must be a mapping")
    return config_from_dict(data)


# -- sender -----------------------------------------------------------------

@dataclass(frozen=True)
class Prepared:
    state: StateVector
    keys: KeyMaterial
    e_un: Pauli
    s: tuple[int, ...]


def prepare_register(payload: StateVector, keys: KeyMaterial) -> StateVector:
    """Payload and MUB dummies laid out in the k slots selected by kappa4."""
    dummies = [d.state() for d in dummy_spec(keys)]
    ordered = tensor(payload, *dummies)
    return permute_qubits(ordered, slot_order(keys.kappa4))


def sender_prepare(spec: CodeSpec, k_prime: int, payload: StateVector,
                   rng: np.random.Generator, exclude_zero_syndrome: bool = False,
                   inject_error: bool = True) -> Prepared:
    if payload.n != k_prime:
        raise SessionConfigError(f"payload has {payload.n} qubits, expected {k_prime}")
    if abs(payload.norm() - 1) > 1e-10:
        raise SessionConfigError("payload state is not normalised")
    keys = keygen(spec.k, k_prime, rng)
    encoded = encode(spec, prepare_register(payload, keys))
    if inject_error:
        e_un = sample_uncorrectable(spec, rng, exclude_zero_syndrome)
    else:
        e_un = Pauli.identity(spec.n)
    return Prepared(apply_pauli(encoded, e_un), keys, e_un, syndrome_of(e_un, spec.generators))


class Sender:
    def __init__(self, spec: CodeSpec, k_prime: int, rng: np.random.Generator,
                 exclude_zero_syndrome: bool = False, inject_error: bool = True):
        self.spec = spec
        self.k_prime = k_prime
        self.rng = rng
        self.exclude_zero_syndrome = exclude_zero_syndrome
        self.inject_error = inject_error
        self.phase = "idle"
        self.prepared: Prepared | None = None
        self.abort_reason: AbortReason | None = None

    def prepare(self, payload: StateVector):
        if self.phase != "idle":
            raise ProtocolOrderError("sender already prepared a state")
        self.prepared = sender_prepare(self.spec, self.k_prime, payload, self.rng,
                                       self.exclude_zero_syndrome, self.inject_error)
        self.phase = "sent"
        return self.prepared.state, Syndrome(self.prepared.s)

    def handle(self, msg):
        if isinstance(msg, Ack1) and self.phase == "sent":
            self.phase = "revealed_eun"
            return RevealEun(self.prepared.e_un)
        if isinstance(msg, Ack2) and self.phase == "revealed_eun":
            self.phase = "revealed_keys"
            k = self.prepared.keys
            return RevealKeys(k.kappa4, k.kappa1, k.kappa2, k.kappa3)
        if isinstance(msg, Abort) and self.phase in ("revealed_eun", "revealed_keys"):
            self.phase = "aborted"
            self.abort_reason = msg.reason
            return None
        raise ProtocolOrderError(f"sender in phase {self.phase!r} got {type(msg).__name__}")


# -- relays -----------------------------------------------------------------

def correct_to_syndrome(state: StateVector, s, spec: CodeSpec, rng: np.random.Generator):
    """Measure the syndrome and steer it back to ``s``.

    Returns (state, measured syndrome, applied correction).
    """
    if len(s) != spec.m:
        raise ValueError(f"syndrome must have {spec.m} bits")
    measured, state = measure_syndrome(state, spec.generators, rng)
    diff = tuple(a ^ b for a, b in zip(measured, s))
    correction = build_decoder_table(spec).lookup(diff)
    return apply_pauli(state, correction), measured, correction


def relay_correct(state: StateVector, s, spec: CodeSpec, rng: np.random.Generator) -> StateVector:
    return correct_to_syndrome(state, s, spec, rng)[0]


class Relay:
    """Holds only the announced syndrome and what it measured and applied."""
    __slots__ = ("name", "spec", "rng", "syndrome", "observed", "corrections")

    def __init__(self, name: str, spec: CodeSpec, rng: np.random.Generator):
        self.name = name
        self.spec = spec
        self.rng = rng
        self.syndrome: tuple[int, ...] | None = None
        self.observed: list[tuple[int, ...]] = []
        self.corrections: list[Pauli] = []

    def on_syndrome(self, msg: Syndrome) -> Syndrome:
        if self.syndrome is not None:
            raise ProtocolOrderError(f"{self.name} received a second syndrome")
        self.syndrome = msg.s
        return msg

    def process(self, state: StateVector) -> StateVector:
        if self.syndrome is None:
            raise ProtocolOrderError(f"{self.name} got a state before the syndrome")
        state, measured, corr = correct_to_syndrome(state, self.syndrome, self.spec, self.rng)
        self.observed.append(measured)
        self.corrections.append(corr)
        return state


# -- receiver ---------------------------------------------------------------

@dataclass
class ReceiverOutcome:
    delivered: bool = False
    abort_reason: AbortReason | None = None
    payload_rho: np.ndarray | None = None
    dummy_results: tuple[tuple[int, int], ...] = ()


class Receiver:
    def __init__(self, spec: CodeSpec, k_prime: int, rng: np.random.Generator):
        self.spec = spec
        self.k_prime = k_prime
        self.rng = rng
        self.phase = "await_syndrome"
        self.syndrome: tuple[int, ...] | None = None
        self.observed: tuple[int, ...] | None = None
        self.correction: Pauli | None = None
        self.state: StateVector | None = None
        self.outcome = ReceiverOutcome()

    def on_syndrome(self, msg: Syndrome) -> None:
        if self.phase != "await_syndrome":
            raise ProtocolOrderError(f"receiver in phase {self.phase!r} got Syndrome")
        self.syndrome = msg.s
        self.phase = "await_state"

    def receive_state(self, state: StateVector) -> Ack1:
        if self.phase != "await_state":
            raise ProtocolOrderError(f"receiver in phase {self.phase!r} got a quantum state")
        self.state, self.observed, self.correction = correct_to_syndrome(
            state, self.syndrome, self.spec, self.rng)
        self.phase = "await_eun"
        return Ack1()

    def handle(self, msg):
        if isinstance(msg, RevealEun) and self.phase == "await_eun":
            return self._check_syndrome(msg.e_un)
        if isinstance(msg, RevealKeys) and self.phase == "await_keys":
            return self._check_dummies(msg)
        raise ProtocolOrderError(f"receiver in phase {self.phase!r} got {type(msg).__name__}")

    def _abort(self, reason: AbortReason) -> Abort:
        self.phase = "done"
        self.outcome.abort_reason = reason
        return Abort(reason)

    def _check_syndrome(self, e_un: Pauli):
        state = apply_pauli(self.state, e_un)
        syn, self.state = measure_syndrome(state, self.spec.generators, self.rng)
        if any(syn):
            return self._abort(AbortReason.NON_ZERO_SYNDROME)
        self.phase = "await_keys"
        return Ack2()

    def _check_dummies(self, msg: RevealKeys):
        keys = KeyMaterial(self.spec.k, self.k_prime, msg.kappa1, msg.kappa2, msg.kappa3, msg.kappa4)
        order = slot_order(keys.kappa4)
        logical = decode(self.spec, self.state)
        # undo the slot permutation: payload qubits first, then dummies
        inverse = [order.index(i) for i in range(self.spec.k)]
        logical = permute_qubits(logical, inverse)
        results = []
        for i, d in enumerate(dummy_spec(keys)):
            q = self.k_prime + i
            bit, logical = measure_qubit(logical, q, d.basis, self.rng)
            results.append((bit, d.expected))
        self.outcome.dummy_results = tuple(results)
        if any(b != e for b, e in results):
            return self._abort(AbortReason.DUMMY_MISMATCH)
        self.outcome.delivered = True
        self.outcome.payload_rho = reduced_density(logical, range(self.k_prime))
        self.phase = "done"
        return None


def receiver_run(spec: CodeSpec, k_prime: int, state: StateVector, messages,
                 rng: np.random.Generator):
    """Drive a receiver with a fixed incoming sequence.

    ``messages`` is (Syndrome, RevealEun, RevealKeys); the quantum state is
    delivered right after the Syndrome.  Returns (outcome, outgoing messages).
    """
    rx = Receiver(spec, k_prime, rng)
    out = []
    for i, msg in enumerate(messages):
        if isinstance(msg, Syndrome):
            rx.on_syndrome(msg)
            out.append(rx.receive_state(state))
            continue
        reply = rx.handle(msg)
        if reply is not None:
            out.append(reply)
        if rx.phase == "done":
            break
    return rx.outcome, out


# -- session ----------------------------------------------------------------

@dataclass(frozen=True)
class GroundTruth:
    """Oracle-only bookkeeping; never visible to any party."""
    e_un: Pauli
    hop_errors: tuple[Pauli, ...]
    hop_failures: tuple[bool, ...]

    @property
    def logical_failure(self) -> bool:
        return any(self.hop_failures)


@dataclass(frozen=True)
class TrialReport:
    outcome: str
    abort_reason: AbortReason | None
    fidelity: float | None
    transcript: tuple[Record, ...]
    hop_syndromes: tuple[tuple[int, ...], ...]
    adversary_detected: bool | None
    oracle: GroundTruth
    attack: object = None

    @property
    def delivered(self) -> bool:
        return self.outcome == "Delivered"

    @property
    def undetected_logical_failure(self) -> bool:
        return self.delivered and self.oracle.logical_failure


def exit_status(report: TrialReport) -> int:
    return 0 if report.delivered else 3


class _Bus:
    def __init__(self, observers=()):
        self.records: list[Record] = []
        self.observers = list(observers)

    def post(self, src: str, dst: str, msg) -> None:
        rec = Record(len(self.records), src, dst, msg)
        self.records.append(rec)
        for obs in self.observers:
            obs.on_classical(rec)


def _random_weight_error(n: int, w: int, rng: np.random.Generator) -> Pauli:
    qubits = sorted(rng.choice(n, size=w, replace=False).tolist())
    letters = ["XYZ"[i] for i in rng.integers(0, 3, size=w)]
    return pauli_of_weight(n, qubits, letters)


def _hop_error(cfg: SessionConfig, hop: int, n: int, rng) -> Pauli:
    if cfg.hop_errors is not None and cfg.hop_errors[hop] is not None:
        return cfg.hop_errors[hop]
    if cfg.hop_error_weight is not None:
        return _random_weight_error(n, cfg.hop_error_weight, rng)
    return sample_error(ChannelModel(cfg.hop_p[hop]), n, rng)


def run_session(cfg: SessionConfig, payload: StateVector | None = None) -> TrialReport:
    """Run one full session; deterministic in ``cfg.seed``."""
    from .adversary import build_attacker, score_attacker

    spec = cfg.spec()
    seed = cfg.seed
    if payload is None:
        payload = StateVector.random(cfg.k_prime, substream(seed, "payload"))
    sender = Sender(spec, cfg.k_prime, substream(seed, "sender"),
                    cfg.exclude_zero_syndrome, cfg.inject_error)
    receiver = Receiver(spec, cfg.k_prime, substream(seed, "receiver"))
    relays = [Relay(name, spec, substream(seed, "relay", i))
              for i, name in enumerate(cfg.parties[1:-1], 1)]
    attacker = build_attacker(cfg.adversary, spec, cfg.k_prime, substream(seed, "adversary"))
    bus = _Bus([attacker] if attacker else [])
    parties = cfg.parties

    state, syn_msg = sender.prepare(payload)
    hop_errors, hop_failures, hop_syndromes = [], [], []
    for hop in range(cfg.hops):
        src, dst = parties[hop], parties[hop + 1]
        bus.post(src, dst, syn_msg)
        if attacker is not None and hop == 0:
            state = attacker.on_quantum(state)
        e = _hop_error(cfg, hop, spec.n, substream(seed, "channel", hop))
        state = apply_pauli(state, e)
        hop_errors.append(e)
        if hop < cfg.hops - 1:
            relay = relays[hop]
            relay.on_syndrome(syn_msg)
            state = relay.process(state)
            measured, correction = relay.observed[-1], relay.corrections[-1]
        else:
            receiver.on_syndrome(syn_msg)
            ack1 = receiver.receive_state(state)
            measured, correction = receiver.observed, receiver.correction
        hop_syndromes.append(measured)
        hop_failures.append(logical_label(spec, multiply(correction, e)) != 0)

    bus.post("receiver", "sender", ack1)
    reveal = sender.handle(ack1)
    bus.post("sender", "receiver", reveal)
    reply = receiver.handle(reveal)
    bus.post("receiver", "sender", reply)
    if isinstance(reply, Ack2):
        keys_msg = sender.handle(reply)
        bus.post("sender", "receiver", keys_msg)
        reply = receiver.handle(keys_msg)
        if reply is not None:
            bus.post("receiver", "sender", reply)
            sender.handle(reply)
    else:
        sender.handle(reply)

    out = receiver.outcome
    fid = state_fidelity(payload, out.payload_rho) if out.delivered else None
    truth = GroundTruth(sender.prepared.e_un, tuple(hop_errors), tuple(hop_failures))
    return TrialReport(
        outcome="Delivered" if out.delivered else "Aborted",
        abort_reason=out.abort_reason,
        fidelity=fid,
        transcript=tuple(bus.records),
        hop_syndromes=tuple(hop_syndromes),
        adversary_detected=None if attacker is None else not out.delivered,
        oracle=truth,
        attack=None if attacker is None else score_attacker(
            attacker, sender.prepared.keys.kappa4, truth.e_un,
            syndrome_pass=any(r.kind == "Ack2" for r in bus.records),
            dummy_pass=out.delivered),
    )


def message_ensemble(spec: CodeSpec, keys: KeyMaterial) -> list[StateVector]:
    """Encoded states for every computational-basis payload message."""
    out = []
    for m in range(1 << keys.k_prime):
        payload = StateVector(np.eye(1 << keys.k_prime, dtype=complex)[m], keys.k_prime)
        out.append(encode(spec, prepare_register(payload, keys)))
    return out
