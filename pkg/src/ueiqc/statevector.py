"""Dense statevector backend for full protocol runs at small n.

Qubit 0 is the most significant bit of the basis index, matching
``np.kron`` ordering and the leftmost letter of Pauli labels.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .codes import CodeSpec
from .pauli import DimensionError, Pauli, multiply

MAX_QUBITS = 14
NORM_TOL = 1e-10

H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


class StateSizeError(ValueError):
    pass


class StateVector:
    __slots__ = ("n", "amps")

    def __init__(self, amps, n: int | None = None):
        amps = np.asarray(amps, dtype=complex)
        if n is None:
            n = int(round(np.log2(amps.size)))
        if amps.shape != (1 << n,):
            raise DimensionError(f"{amps.shape} amplitudes for {n} qubits")
        if n > MAX_QUBITS:
            raise StateSizeError(f"{n} qubits exceeds statevector cap {MAX_QUBITS}")
        self.n = n
        self.amps = amps

    @classmethod
    def zero(cls, n: int) -> "StateVector":
        a = np.zeros(1 << n, dtype=complex)
        a[0] = 1
        return cls(a, n)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "StateVector":
        a = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        return cls(a / np.linalg.norm(a), n)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def copy(self) -> "StateVector":
        return StateVector(self.amps.copy(), self.n)

    def __repr__(self) -> str:
        return f"StateVector(n={self.n})"


def tensor(*states: StateVector) -> StateVector:
    amps = np.ones(1, dtype=complex)
    for s in states:
        amps = np.kron(amps, s.amps)
    return StateVector(amps, sum(s.n for s in states))


def _index_mask(mask: int, n: int) -> int:
    return sum(1 << (n - 1 - j) for j in range(n) if (mask >> j) & 1)


@lru_cache(maxsize=64)
def _indices(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def apply_pauli(state: StateVector, p: Pauli) -> StateVector:
    if p.n != state.n:
        raise DimensionError(f"Pauli on {p.n} qubits, state has {state.n}")
    xm, zm = _index_mask(p.x, p.n), _index_mask(p.z, p.n)
    src = _indices(state.n) ^ xm
    signs = 1 - 2 * (np.bitwise_count(src & zm) & 1).astype(np.int64)
    coeff = 1j ** ((p.phase + (p.x & p.z).bit_count()) % 4)
    return StateVector(coeff * signs * state.amps[src], state.n)


def apply_single(state: StateVector, qubit: int, gate: np.ndarray) -> StateVector:
    t = state.amps.reshape((2,) * state.n)
    t = np.moveaxis(np.tensordot(gate, t, axes=([1], [qubit])), 0, qubit)
    return StateVector(t.reshape(-1), state.n)


def expectation(state: StateVector, p: Pauli) -> float:
    return float(np.vdot(state.amps, apply_pauli(state, p).amps).real)


def measure_pauli(state: StateVector, p: Pauli, rng: np.random.Generator):
    """Projective measurement of a Hermitian Pauli; returns (+1 | -1, post-state)."""
    if not p.is_hermitian():
        raise ValueError(f"{p!r} is not Hermitian, cannot be measured")
    pp = apply_pauli(state, p).amps
    plus = (state.amps + pp) / 2
    prob_plus = float(np.vdot(plus, plus).real)
    if rng.random() < prob_plus:
        return 1, StateVector(plus / np.sqrt(prob_plus), state.n)
    minus = (state.amps - pp) / 2
    return -1, StateVector(minus / np.sqrt(1 - prob_plus), state.n)


measure_generator = measure_pauli


def measure_syndrome(state: StateVector, generators, rng: np.random.Generator):
    """Measure every generator in order; bit is 1 for a -1 outcome."""
    bits = []
    for g in generators:
        outcome, state = measure_pauli(state, g, rng)
        bits.append(0 if outcome == 1 else 1)
    return tuple(bits), state


def measure_qubit(state: StateVector, index: int, basis: str, rng: np.random.Generator):
    """Single-qubit measurement in 'Z' or 'X' basis; bit 1 means |1> or |->."""
    if basis not in ("Z", "X"):
        raise ValueError(f"basis must be 'Z' or 'X', got {basis!r}")
    outcome, post = measure_pauli(state, Pauli.single(state.n, index, basis), rng)
    return (0 if outcome == 1 else 1), post


def fidelity(a: StateVector, b: StateVector) -> float:
    if a.n != b.n:
        raise DimensionError("fidelity of states on different qubit counts")
    return float(min(1.0, abs(np.vdot(a.amps, b.amps)) ** 2))


def permute_qubits(state: StateVector, order) -> StateVector:
    """New qubit i is old qubit ``order[i]``."""
    t = state.amps.reshape((2,) * state.n).transpose(tuple(order))
    return StateVector(t.reshape(-1), state.n)


def reduced_density(state: StateVector, keep) -> np.ndarray:
    keep = list(keep)
    rest = [q for q in range(state.n) if q not in keep]
    t = state.amps.reshape((2,) * state.n).transpose(keep + rest)
    m = t.reshape(1 << len(keep), -1)
    return m @ m.conj().T


def state_fidelity(psi: StateVector, rho: np.ndarray) -> float:
    """<psi| rho |psi> for a pure reference state."""
    return float(min(1.0, np.vdot(psi.amps, rho @ psi.amps).real))


# -- encoding ---------------------------------------------------------------

@lru_cache(maxsize=None)
def logical_basis(spec: CodeSpec) -> np.ndarray:
    """Rows are |j_L>, with logical qubit 0 the top bit of j.

    |0_L> is the joint +1 eigenstate of the generators and the logical Z's,
    obtained by projecting a fixed vector, then |j_L> = X_L^j |0_L>.
    """
    if spec.n > MAX_QUBITS:
        raise StateSizeError(f"{spec.n} qubits exceeds statevector cap {MAX_QUBITS}")
    rng = np.random.default_rng(0x5EED)
    dim = 1 << spec.n
    v = StateVector(rng.normal(size=dim) + 1j * rng.normal(size=dim), spec.n)
    for g in spec.generators + spec.logical_z:
        v = StateVector((v.amps + apply_pauli(v, g).amps) / 2, spec.n)
    amps = v.amps / np.linalg.norm(v.amps)
    lead = np.flatnonzero(np.abs(amps) > 1e-9)[0]
    amps = amps * (abs(amps[lead]) / amps[lead])
    zero = StateVector(amps, spec.n)
    rows = []
    for j in range(1 << spec.k):
        op = Pauli.identity(spec.n)
        for i in range(spec.k):
            if (j >> (spec.k - 1 - i)) & 1:
                op = multiply(op, spec.logical_x[i])
        rows.append(apply_pauli(zero, op).amps)
    basis = np.array(rows)
    basis.setflags(write=False)
    return basis


def encode(spec: CodeSpec, logical: StateVector) -> StateVector:
    """Map a k-qubit state (with implicit |0>^(n-k) ancillas) into the code."""
    if logical.n != spec.k:
        raise DimensionError(f"{spec.name} encodes {spec.k} qubits, got {logical.n}")
    return StateVector(logical.amps @ logical_basis(spec), spec.n)


def decode(spec: CodeSpec, state: StateVector, tol: float = 1e-8) -> StateVector:
    """Inverse of :func:`encode`; the state must lie in the code space."""
    if state.n != spec.n:
        raise DimensionError(f"{spec.name} has {spec.n} qubits, got {state.n}")
    c = logical_basis(spec).conj() @ state.amps
    norm = np.linalg.norm(c)
    if abs(norm - 1) > tol:
        raise ValueError(f"state is not in the code space (overlap norm {norm:.3g})")
    return StateVector(c / norm, spec.k)
