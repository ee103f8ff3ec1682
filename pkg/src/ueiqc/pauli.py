"""Symplectic GF(2) representation of n-qubit Pauli operators.

A Pauli is stored as two packed bit masks (``x`` and ``z``, bit ``j`` is
qubit ``j``) plus a phase exponent, so that the operator is

    i**phase * sigma(x_0, z_0) (x) ... (x) sigma(x_{n-1}, z_{n-1})

with sigma(1, 1) = Y.  Letter strings put qubit 0 leftmost.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

MAX_QUBITS = 1024

_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {"+": 0, "+i": 1, "-": 2, "-i": 3, "": 0}
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}


class DimensionError(ValueError):
    """Operands act on different numbers of qubits."""


class PauliParseError(ValueError):
    pass


def _popcount(v: int) -> int:
    return v.bit_count()


@dataclass(frozen=True)
class Pauli:
    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"qubit count {self.n} outside [1, {MAX_QUBITS}]")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full or self.x < 0 or self.z < 0:
            raise ValueError("bit masks wider than n")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> "Pauli":
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "Pauli":
        bx, bz = _LETTER_BITS[letter]
        return cls(n, bx << qubit, bz << qubit)

    @classmethod
    def from_bits(cls, x_bits, z_bits, phase: int = 0) -> "Pauli":
        """Build from 0/1 sequences indexed by qubit."""
        if len(x_bits) != len(z_bits):
            raise DimensionError("x and z bit-vectors differ in length")
        x = sum(int(b) << j for j, b in enumerate(x_bits))
        z = sum(int(b) << j for j, b in enumerate(z_bits))
        return cls(len(x_bits), x, z, phase)

    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple((self.x >> j) & 1 for j in range(self.n))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple((self.z >> j) & 1 for j in range(self.n))

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def support(self) -> tuple[int, ...]:
        s = self.x | self.z
        return tuple(j for j in range(self.n) if (s >> j) & 1)

    def is_identity(self, up_to_phase: bool = True) -> bool:
        return self.x == 0 and self.z == 0 and (up_to_phase or self.phase == 0)

    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    def stripped(self) -> "Pauli":
        """Same bit pattern, phase dropped."""
        return Pauli(self.n, self.x, self.z, 0)

    def key(self) -> tuple[int, int]:
        return (self.x, self.z)

    def __mul__(self, other: "Pauli") -> "Pauli":
        return multiply(self, other)

    def __str__(self) -> str:
        return to_label(self)

    def __repr__(self) -> str:
        return f"Pauli('{to_label(self, phase=True)}')"

    def to_matrix(self) -> np.ndarray:
        """Dense 2**n x 2**n matrix (qubit 0 is the leftmost kron factor)."""
        mats = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]),
                "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1, -1])}
        m = reduce(np.kron, (mats[c] for c in to_label(self)), np.eye(1))
        return (1j ** self.phase) * m.astype(complex)


def _check(a: Pauli, b: Pauli) -> None:
    if a.n != b.n:
        raise DimensionError(f"Pauli lengths differ: {a.n} vs {b.n}")


def multiply(a: Pauli, b: Pauli) -> Pauli:
    """Group product ``a @ b`` with the phase tracked mod 4."""
    _check(a, b)
    # Rewrite in X^x Z^z form (Y = i X Z), multiply, rewrite back.
    qa = a.phase + _popcount(a.x & a.z)
    qb = b.phase + _popcount(b.x & b.z)
    x, z = a.x ^ b.x, a.z ^ b.z
    q = qa + qb + 2 * _popcount(a.z & b.x)
    return Pauli(a.n, x, z, q - _popcount(x & z))


def product(paulis, n: int | None = None) -> Pauli:
    paulis = list(paulis)
    if not paulis:
        if n is None:
            raise ValueError("empty product needs n")
        return Pauli.identity(n)
    return reduce(multiply, paulis)


def symplectic_product(a: Pauli, b: Pauli) -> int:
    _check(a, b)
    return (_popcount(a.x & b.z) + _popcount(a.z & b.x)) & 1


def commutes(a: Pauli, b: Pauli) -> bool:
    return symplectic_product(a, b) == 0


def syndrome_of(e: Pauli, generators) -> tuple[int, ...]:
    """Bit i is 1 iff ``e`` anticommutes with generator i."""
    return tuple(symplectic_product(e, g) for g in generators)


def bits_to_int(bits) -> int:
    """Most-significant-bit-first packing: bits[0] is the top bit."""
    v = 0
    for b in bits:
        v = (v << 1) | int(b)
    return v


def int_to_bits(v: int, length: int) -> tuple[int, ...]:
    return tuple((v >> (length - 1 - i)) & 1 for i in range(length))


def from_label(label: str) -> Pauli:
    """Parse ``"XIZY"`` or ``"-iXX"``.  Leftmost letter is qubit 0."""
    letters = label.lstrip("+-i")
    prefix = label[: len(label) - len(letters)]
    if prefix not in _PREFIX_PHASE:
        raise PauliParseError(f"bad phase prefix {prefix!r} in {label!r}")
    if not letters:
        raise PauliParseError("empty Pauli label")
    x = z = 0
    for j, c in enumerate(letters):
        try:
            bx, bz = _LETTER_BITS[c]
        except KeyError:
            raise PauliParseError(f"invalid Pauli letter {c!r} in {label!r}") from None
        x |= bx << j
        z |= bz << j
    return Pauli(len(letters), x, z, _PREFIX_PHASE[prefix])


def to_label(p: Pauli, phase: bool = False) -> str:
    letters = "".join(_BITS_LETTER[((p.x >> j) & 1, (p.z >> j) & 1)] for j in range(p.n))
    if phase and p.phase:
        return _PHASE_PREFIX[p.phase] + letters
    return letters


def random_pauli(n: int, rng: np.random.Generator) -> Pauli:
    """Uniform over the 4**n phase-stripped Paulis."""
    bits = rng.integers(0, 2, size=(2, n))
    return Pauli.from_bits(bits[0], bits[1])


def pauli_of_weight(n: int, qubits, letters) -> Pauli:
    x = z = 0
    for q, c in zip(qubits, letters):
        bx, bz = _LETTER_BITS[c]
        x |= bx << q
        z |= bz << q
    return Pauli(n, x, z)


def gf2_rank(paulis) -> int:
    """Rank of the symplectic vectors (x | z) over GF(2)."""
    rows = [(p.x << p.n) | p.z for p in paulis]
    rank = 0
    while rows:
        pivot = max(rows)
        rows.remove(pivot)
        if pivot == 0:
            break
        rank += 1
        top = pivot.bit_length() - 1
        rows = [r ^ pivot if (r >> top) & 1 else r for r in rows]
    return rank
