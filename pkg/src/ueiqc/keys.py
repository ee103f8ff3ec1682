"""Key material, MUB dummy states, the slot permutation and code choice."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import logical_error_rate
from .statevector import H, X, Z, StateVector


class KeyParameterError(ValueError):
    pass


class CodeSelectionError(ValueError):
    pass


@dataclass(frozen=True)
class KeyMaterial:
    k: int
    k_prime: int
    kappa1: tuple[int, ...]
    kappa2: tuple[int, ...]
    kappa3: tuple[int, ...]
    kappa4: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.k_prime < self.k:
            raise KeyParameterError(f"need 1 <= k' < k, got k'={self.k_prime}, k={self.k}")
        d = self.k - self.k_prime
        if not all(len(v) == d for v in (self.kappa1, self.kappa2, self.kappa3)):
            raise KeyParameterError(f"kappa1..3 must have {d} bits")
        if len(self.kappa4) != self.k or sum(self.kappa4) != d:
            raise KeyParameterError(f"kappa4 must be {self.k} bits of weight {d}")

    @property
    def dummies(self) -> int:
        return self.k - self.k_prime


def keygen(k: int, k_prime: int, rng: np.random.Generator) -> KeyMaterial:
    if not 1 <= k_prime < k:
        raise KeyParameterError(f"need 1 <= k' < k, got k'={k_prime}, k={k}")
    d = k - k_prime
    bits = rng.integers(0, 2, size=(3, d))
    kappa4 = np.zeros(k, dtype=int)
    kappa4[rng.choice(k, size=d, replace=False)] = 1
    return KeyMaterial(k, k_prime, *(tuple(int(b) for b in row) for row in bits),
                       tuple(int(b) for b in kappa4))


@dataclass(frozen=True)
class Dummy:
    kappa1: int
    kappa2: int
    kappa3: int

    @property
    def basis(self) -> str:
        return "X" if self.kappa3 else "Z"

    @property
    def expected(self) -> int:
        """Outcome bit: |1> in the Z basis, |-> in the X basis."""
        # X only contributes a global phase on |+>/|->, Z only on |0>/|1>.
        return self.kappa2 if self.kappa3 else self.kappa1

    def state(self) -> StateVector:
        v = np.array([1, 0], dtype=complex)
        if self.kappa3:
            v = H @ v
        if self.kappa2:
            v = Z @ v
        if self.kappa1:
            v = X @ v
        return StateVector(v, 1)


def dummy_spec(keys: KeyMaterial) -> tuple[Dummy, ...]:
    return tuple(Dummy(a, b, c) for a, b, c in zip(keys.kappa1, keys.kappa2, keys.kappa3))


def _check_slots(items, kappa4):
    if len(items) != len(kappa4):
        raise KeyParameterError("register size differs from kappa4 length")


def permute(payload, dummies, kappa4) -> list:
    """Dummies fill the 1-positions of kappa4 in ascending order, payload the 0s."""
    payload, dummies = list(payload), list(dummies)
    if sum(kappa4) != len(dummies) or len(kappa4) != len(payload) + len(dummies):
        raise KeyParameterError("kappa4 weight must equal the number of dummies")
    p, d = iter(payload), iter(dummies)
    return [next(d) if bit else next(p) for bit in kappa4]


def inverse_permute(register, kappa4) -> tuple[list, list]:
    """Split a register back into (payload, dummies)."""
    register = list(register)
    _check_slots(register, kappa4)
    return ([r for r, b in zip(register, kappa4) if not b],
            [r for r, b in zip(register, kappa4) if b])


def slot_order(kappa4) -> list[int]:
    """Source index (payload first, then dummies) for every register slot."""
    kp = len(kappa4) - sum(kappa4)
    return permute(range(kp), range(kp, len(kappa4)), kappa4)


def select_code(qber: float, catalog, target_residual: float, min_k: int = 1):
    """Smallest-n code whose logical error rate at ``qber`` meets the target."""
    if not 0 <= qber < 0.5:
        raise ValueError("QBER must lie in [0, 0.5)")
    codes = sorted((c for c in (catalog.values() if isinstance(catalog, dict) else catalog)
                    if c.k >= min_k), key=lambda c: (c.n, c.name))
    if not codes:
        raise CodeSelectionError("catalog has no code with enough logical qubits")
    rated = [(float(logical_error_rate(c.n, c.t, qber, exact=False)), c) for c in codes]
    for rate, c in rated:
        if rate <= target_residual:
            return c
    best_rate, best = min(rated, key=lambda rc: rc[0])
    raise CodeSelectionError(
        f"no code reaches {target_residual:.3g} at QBER {qber}; best is {best} with {best_rate:.4g}")


def probe_qber(model, n_qubits: int, rng: np.random.Generator) -> float:
    """Estimate the per-qubit error rate by sending ``n_qubits`` known test states.

    A test qubit in a random MUB state is flagged when a sampled channel
    Pauli anticommutes with its preparation basis; the estimate rescales
    the flagged fraction by 3/2 (two of the three Paulis flip any basis).
    """
    from .frames import sample_error

    e = sample_error(model, n_qubits, rng)
    basis = rng.integers(0, 2, size=n_qubits)
    flips = [((e.z >> j) & 1) if basis[j] else ((e.x >> j) & 1) for j in range(n_qubits)]
    return 1.5 * float(np.mean(flips))
