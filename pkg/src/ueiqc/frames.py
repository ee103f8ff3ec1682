"""Depolarizing channel and Pauli-frame Monte Carlo."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import (CodeSpec, build_decoder_table, classify_error,
                    vector_labels, vector_syndromes)
from .pauli import Pauli, multiply
from .statevector import StateVector, apply_pauli

FRAME_MAX_QUBITS = 63


@dataclass(frozen=True)
class ChannelModel:
    """Each qubit independently suffers X, Y or Z with probability p/3 each."""
    p: float
    kind: str = "depolarizing"

    def __post_init__(self):
        if not 0 <= self.p < 1:
            raise ValueError(f"error probability {self.p} outside [0, 1)")
        if self.kind != "depolarizing":
            raise ValueError(f"unsupported channel kind {self.kind!r}")


@dataclass(frozen=True)
class PauliFrame:
    error: Pauli
    code: CodeSpec

    def __post_init__(self):
        if self.error.n != self.code.n:
            raise ValueError("frame length must equal code length")


def _draw(model: ChannelModel, r: np.ndarray):
    third = model.p / 3
    xb = r < 2 * third                      # X or Y
    zb = (r >= third) & (r < model.p)       # Y or Z
    return xb, zb


def sample_error(model: ChannelModel, n: int, rng: np.random.Generator) -> Pauli:
    xb, zb = _draw(model, rng.random(n))
    return Pauli.from_bits(xb.astype(int), zb.astype(int))


def channel_apply(target, model: ChannelModel, rng: np.random.Generator):
    """Apply sampled noise; returns (new target, ground-truth error)."""
    if isinstance(target, PauliFrame):
        e = sample_error(model, target.code.n, rng)
        return PauliFrame(multiply(target.error, e), target.code), e
    if isinstance(target, StateVector):
        e = sample_error(model, target.n, rng)
        return apply_pauli(target, e), e
    raise TypeError(f"cannot apply a channel to {type(target).__name__}")


@dataclass(frozen=True)
class FrameResult:
    residual_class: int
    failed: bool


def frame_trial(spec: CodeSpec, model: ChannelModel, rng: np.random.Generator) -> FrameResult:
    e = sample_error(model, spec.n, rng)
    label = classify_error(spec, e).logical_class
    return FrameResult(label, label != 0)


@dataclass(frozen=True)
class FrameStats:
    trials: int
    failures: int

    @property
    def rate(self) -> float:
        return self.failures / self.trials

    @property
    def sigma(self) -> float:
        r = self.rate
        return float(np.sqrt(r * (1 - r) / self.trials))

    def __add__(self, other: "FrameStats") -> "FrameStats":
        return FrameStats(self.trials + other.trials, self.failures + other.failures)


def frame_trials(spec: CodeSpec, model: ChannelModel, rng: np.random.Generator,
                 trials: int, chunk: int = 1 << 20) -> FrameStats:
    """Vectorised equivalent of ``trials`` calls to :func:`frame_trial`.

    Draws the same random stream, so failure counts match the scalar path.
    """
    if spec.n > FRAME_MAX_QUBITS:
        raise ValueError(f"vectorised frames support n <= {FRAME_MAX_QUBITS}")
    table = build_decoder_table(spec)
    rep_x = np.array([r.x for r in table.representatives], dtype=np.uint64)
    rep_z = np.array([r.z for r in table.representatives], dtype=np.uint64)
    weights = np.uint64(1) << np.arange(spec.n, dtype=np.uint64)
    failures, done = 0, 0
    while done < trials:
        size = min(chunk, trials - done)
        xb, zb = _draw(model, rng.random((size, spec.n)))
        xs = (xb * weights).sum(axis=1, dtype=np.uint64)
        zs = (zb * weights).sum(axis=1, dtype=np.uint64)
        syn = vector_syndromes(spec, xs, zs)
        labels = vector_labels(spec, xs ^ rep_x[syn], zs ^ rep_z[syn])
        failures += int(np.count_nonzero(labels))
        done += size
    return FrameStats(trials, failures)
