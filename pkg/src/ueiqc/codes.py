"""Stabilizer codes: validation, lookup decoding, error classes and census.

Logical classes are labelled by a 2k-bit integer ``(a | b)``: an error
``e`` with label ``(a, b)`` equals ``X_L^a Z_L^b`` times a stabilizer,
times the decoder representative of its syndrome.  Bit ``a_i`` is the
anticommutation of ``e`` with ``logical_z[i]`` and ``b_i`` the
anticommutation with ``logical_x[i]``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .pauli import (
    DimensionError,
    Pauli,
    bits_to_int,
    commutes,
    from_label,
    gf2_rank,
    int_to_bits,
    multiply,
    pauli_of_weight,
    product,
    symplectic_product,
    syndrome_of,
    to_label,
)

EXHAUSTIVE_MAX_N = 10


class CodeValidationError(ValueError):
    pass


class CensusSizeError(ValueError):
    pass


@dataclass(frozen=True)
class CodeSpec:
    name: str
    n: int
    k: int
    d: int
    generators: tuple[Pauli, ...]
    logical_x: tuple[Pauli, ...]
    logical_z: tuple[Pauli, ...]
    aliases: tuple[str, ...] = field(default=(), compare=False)

    @property
    def t(self) -> int:
        return (self.d - 1) // 2

    @property
    def m(self) -> int:
        """Number of syndrome bits."""
        return self.n - self.k

    def __str__(self) -> str:
        return f"{self.name} [[{self.n},{self.k},{self.d}]]"


def make_code(name, generators, logical_x, logical_z, d, aliases=()) -> CodeSpec:
    gens = tuple(from_label(g) if isinstance(g, str) else g for g in generators)
    lx = tuple(from_label(g) if isinstance(g, str) else g for g in logical_x)
    lz = tuple(from_label(g) if isinstance(g, str) else g for g in logical_z)
    n = gens[0].n
    return CodeSpec(name, n, len(lx), d, gens, lx, lz, tuple(aliases))


# -- syndromes and labels ---------------------------------------------------

def syndrome_index(spec: CodeSpec, e: Pauli) -> int:
    return bits_to_int(syndrome_of(e, spec.generators))


def logical_label(spec: CodeSpec, e: Pauli) -> int:
    """Absolute 2k-bit anticommutation pattern against the logical operators."""
    if e.n != spec.n:
        raise DimensionError(f"error on {e.n} qubits, code has {spec.n}")
    a = [symplectic_product(e, lz) for lz in spec.logical_z]
    b = [symplectic_product(e, lx) for lx in spec.logical_x]
    return bits_to_int(a + b)


def logical_operator(spec: CodeSpec, label: int) -> Pauli:
    """``X_L^a Z_L^b`` for the 2k-bit label ``(a | b)``."""
    bits = int_to_bits(label, 2 * spec.k)
    parts = [lx for lx, bit in zip(spec.logical_x, bits[: spec.k]) if bit]
    parts += [lz for lz, bit in zip(spec.logical_z, bits[spec.k:]) if bit]
    return product(parts, spec.n)


def stabilizer_element(spec: CodeSpec, index: int) -> Pauli:
    bits = int_to_bits(index, spec.m)
    return product([g for g, b in zip(spec.generators, bits) if b], spec.n)


def in_stabilizer_group(spec: CodeSpec, e: Pauli) -> bool:
    """Membership up to phase (requires a complete set of logicals)."""
    return syndrome_index(spec, e) == 0 and logical_label(spec, e) == 0


# -- vectorised helpers for exhaustive work --------------------------------

def _all_paulis(n: int):
    xs, zs = np.meshgrid(np.arange(1 << n, dtype=np.uint64),
                         np.arange(1 << n, dtype=np.uint64), indexing="ij")
    return xs.ravel(), zs.ravel()


def _parity(xs, zs, p: Pauli):
    """Vectorised symplectic product of (xs, zs) against ``p``."""
    c = np.bitwise_count(xs & np.uint64(p.z)) + np.bitwise_count(zs & np.uint64(p.x))
    return (c & 1).astype(np.int64)


def _pack(xs, zs, paulis):
    out = np.zeros(xs.shape, dtype=np.int64)
    for p in paulis:
        out = (out << 1) | _parity(xs, zs, p)
    return out


def vector_syndromes(spec: CodeSpec, xs, zs):
    return _pack(xs, zs, spec.generators)


def vector_labels(spec: CodeSpec, xs, zs):
    return _pack(xs, zs, list(spec.logical_z) + list(spec.logical_x))


# -- validation -------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    name: str
    commuting: bool
    independent: bool
    logicals_ok: bool
    distance: int
    non_degenerate: bool
    correctable_syndromes: int

    @property
    def ok(self) -> bool:
        return self.commuting and self.independent and self.logicals_ok and self.non_degenerate


def _low_weight_errors(n: int, t: int):
    for w in range(t + 1):
        for qubits in itertools.combinations(range(n), w):
            for letters in itertools.product("XYZ", repeat=w):
                yield pauli_of_weight(n, qubits, letters)


def validate_code(spec: CodeSpec, max_n: int = EXHAUSTIVE_MAX_N) -> ValidationReport:
    """Check the algebra, recompute the distance and non-degeneracy.

    Raises CodeValidationError naming the first offending pair.
    """
    gens = spec.generators
    if any(g.n != spec.n for g in gens + spec.logical_x + spec.logical_z):
        raise CodeValidationError(f"{spec.name}: operator length differs from n={spec.n}")
    if len(gens) != spec.n - spec.k or len(spec.logical_x) != spec.k or len(spec.logical_z) != spec.k:
        raise CodeValidationError(f"{spec.name}: expected {spec.n - spec.k} generators and {spec.k} logical pairs")
    for (i, a), (j, b) in itertools.combinations(enumerate(gens), 2):
        if not commutes(a, b):
            raise CodeValidationError(f"{spec.name}: generators {i} ({a}) and {j} ({b}) anticommute")
    if gf2_rank(gens) != len(gens):
        raise CodeValidationError(f"{spec.name}: generators are not independent")
    for i, lx in enumerate(spec.logical_x):
        for j, lz in enumerate(spec.logical_z):
            if commutes(lx, lz) == (i == j):
                raise CodeValidationError(f"{spec.name}: logical_x[{i}] / logical_z[{j}] have wrong commutation")
        for j, lx2 in enumerate(spec.logical_x[i + 1:], i + 1):
            if not commutes(lx, lx2):
                raise CodeValidationError(f"{spec.name}: logical_x[{i}] / logical_x[{j}] anticommute")
    for i, lz in enumerate(spec.logical_z):
        for j, lz2 in enumerate(spec.logical_z[i + 1:], i + 1):
            if not commutes(lz, lz2):
                raise CodeValidationError(f"{spec.name}: logical_z[{i}] / logical_z[{j}] anticommute")
    for name, ops in (("logical_x", spec.logical_x), ("logical_z", spec.logical_z)):
        for i, op in enumerate(ops):
            if not op.is_hermitian():
                raise CodeValidationError(f"{spec.name}: {name}[{i}] is not Hermitian")
            for j, g in enumerate(gens):
                if not commutes(op, g):
                    raise CodeValidationError(f"{spec.name}: {name}[{i}] anticommutes with generator {j}")

    if spec.n > max_n:
        raise CodeValidationError(f"{spec.name}: n={spec.n} above exhaustive cap {max_n}")
    distance = exhaustive_distance(spec)
    if distance != spec.d:
        raise CodeValidationError(f"{spec.name}: declared d={spec.d}, computed d={distance}")

    seen: dict[int, Pauli] = {}
    for e in _low_weight_errors(spec.n, spec.t):
        s = syndrome_index(spec, e)
        if s in seen:
            raise CodeValidationError(
                f"{spec.name}: degenerate, {seen[s]} and {e} share syndrome {s:0{spec.m}b}")
        seen[s] = e
    return ValidationReport(spec.name, True, True, True, distance, True, len(seen))


def exhaustive_distance(spec: CodeSpec) -> int:
    """Minimum weight over the normalizer minus the stabilizer group."""
    if spec.n > EXHAUSTIVE_MAX_N:
        raise CensusSizeError(f"n={spec.n} too large for exhaustive search")
    xs, zs = _all_paulis(spec.n)
    mask = (vector_syndromes(spec, xs, zs) == 0) & (vector_labels(spec, xs, zs) != 0)
    weights = np.bitwise_count(xs[mask] | zs[mask])
    return int(weights.min())


# -- decoding ---------------------------------------------------------------

@dataclass(frozen=True)
class DecoderTable:
    code: str
    m: int
    t: int
    representatives: tuple[Pauli, ...]
    beyond_t: frozenset[int]

    def lookup(self, syndrome) -> Pauli:
        idx = syndrome if isinstance(syndrome, (int, np.integer)) else bits_to_int(syndrome)
        return self.representatives[int(idx)]

    def __len__(self) -> int:
        return len(self.representatives)


@lru_cache(maxsize=None)
def build_decoder_table(spec: CodeSpec) -> DecoderTable:
    """First error seen per syndrome, by weight then lexicographic label."""
    size = 1 << spec.m
    reps: list[Pauli | None] = [None] * size
    filled = 0
    for w in range(spec.n + 1):
        batch = [pauli_of_weight(spec.n, q, letters)
                 for q in itertools.combinations(range(spec.n), w)
                 for letters in itertools.product("XYZ", repeat=w)]
        batch.sort(key=to_label)
        for e in batch:
            s = syndrome_index(spec, e)
            if reps[s] is None:
                reps[s] = e
                filled += 1
        if filled == size:
            break
    beyond = frozenset(i for i, r in enumerate(reps) if r.weight > spec.t)
    return DecoderTable(spec.name, spec.m, spec.t, tuple(reps), beyond)


@dataclass(frozen=True)
class ErrorClass:
    syndrome: tuple[int, ...]
    logical_class: int
    is_correctable: bool


def classify_error(spec: CodeSpec, e: Pauli) -> ErrorClass:
    if e.n != spec.n:
        raise DimensionError(f"error on {e.n} qubits, code has {spec.n}")
    syn = syndrome_of(e, spec.generators)
    rep = build_decoder_table(spec).lookup(syn)
    label = logical_label(spec, multiply(e, rep))
    return ErrorClass(syn, label, label == 0)


def residual_after_correction(spec: CodeSpec, e: Pauli) -> int:
    """Logical label left once the lookup decoder has corrected ``e``."""
    return classify_error(spec, e).logical_class


# -- census -----------------------------------------------------------------

@dataclass(frozen=True)
class SyndromeClasses:
    syndrome: int
    classes: int
    correctable_label: int
    uncorrectable: int
    low_weight_representative: bool


@dataclass(frozen=True)
class CosetCensus:
    code: str
    per_syndrome: tuple[SyndromeClasses, ...]

    @property
    def total_classes(self) -> int:
        return sum(s.classes for s in self.per_syndrome)

    @property
    def nu_exact(self) -> float:
        return sum(s.uncorrectable for s in self.per_syndrome) / len(self.per_syndrome)

    @property
    def correctable_syndromes(self) -> int:
        return sum(s.low_weight_representative for s in self.per_syndrome)


def census_uncorrectable(spec: CodeSpec, max_n: int = EXHAUSTIVE_MAX_N) -> CosetCensus:
    """Count logical classes per syndrome by exhausting all 4**n Paulis."""
    if spec.n > max_n:
        raise CensusSizeError(
            f"{spec.name}: n={spec.n} exceeds census cap {max_n}; use analysis.nu_estimate")
    xs, zs = _all_paulis(spec.n)
    syn = vector_syndromes(spec, xs, zs)
    lab = vector_labels(spec, xs, zs)
    pairs = np.unique(syn * (1 << (2 * spec.k)) + lab)
    counts = np.bincount(pairs >> (2 * spec.k), minlength=1 << spec.m)
    table = build_decoder_table(spec)
    rows = []
    for s in range(1 << spec.m):
        rep = table.representatives[s]
        rows.append(SyndromeClasses(s, int(counts[s]), logical_label(spec, rep),
                                    int(counts[s]) - 1, rep.weight <= spec.t))
    return CosetCensus(spec.name, tuple(rows))


# -- sampling ---------------------------------------------------------------

def sample_uncorrectable(spec: CodeSpec, rng: np.random.Generator,
                         exclude_zero_syndrome: bool = False) -> Pauli:
    """Random Pauli the lookup decoder cannot correct: rep(s) * L * S."""
    table = build_decoder_table(spec)
    lo = 1 if exclude_zero_syndrome else 0
    s = int(rng.integers(lo, 1 << spec.m))
    label = int(rng.integers(1, 1 << (2 * spec.k)))
    stab = int(rng.integers(0, 1 << spec.m))
    e = product([table.representatives[s], logical_operator(spec, label),
                 stabilizer_element(spec, stab)])
    return e.stripped()


def random_syndrome_consistent(spec: CodeSpec, syndrome, rng: np.random.Generator) -> Pauli:
    """Uniform over all Paulis (any logical class) sharing ``syndrome``."""
    table = build_decoder_table(spec)
    label = int(rng.integers(0, 1 << (2 * spec.k)))
    stab = int(rng.integers(0, 1 << spec.m))
    return product([table.lookup(syndrome), logical_operator(spec, label),
                    stabilizer_element(spec, stab)]).stripped()


# -- catalog ----------------------------------------------------------------

def parse_catalog(text: str) -> list[CodeSpec]:
    records: list[dict] = []
    current: dict | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "[code]":
            current = {"stabilizer": [], "logical_x": [], "logical_z": []}
            records.append(current)
            continue
        if current is None or ":" not in line:
            raise ValueError(f"catalog line {lineno}: expected '[code]' or 'key: value'")
        key, value = (s.strip() for s in line.split(":", 1))
        if key in ("stabilizer", "logical_x", "logical_z"):
            current[key].append(value)
        else:
            current[key] = value
    codes = []
    for r in records:
        try:
            spec = make_code(r["name"], r["stabilizer"], r["logical_x"], r["logical_z"],
                             int(r["d"]),
                             [a.strip() for a in r.get("aliases", "").split(",") if a.strip()])
        except KeyError as exc:
            raise ValueError(f"catalog record missing field {exc}") from None
        if spec.n != int(r["n"]) or spec.k != int(r["k"]):
            raise CodeValidationError(f"{spec.name}: declared n/k disagree with operators")
        codes.append(spec)
    return codes


@lru_cache(maxsize=None)
def _load(path: str | None) -> dict[str, CodeSpec]:
    if path is None:
        text = resources.files("ueiqc").joinpath("data/codes.txt").read_text()
    else:
        text = Path(path).read_text()
    out = {}
    for spec in parse_catalog(text):
        validate_code(spec)
        out[spec.name] = spec
    return out


def load_catalog(path: str | Path | None = None) -> dict[str, CodeSpec]:
    """Name -> validated CodeSpec."""
    return dict(_load(None if path is None else str(path)))


def get_code(name: str, path: str | Path | None = None) -> CodeSpec:
    catalog = load_catalog(path)
    for spec in catalog.values():
        if name == spec.name or name in spec.aliases:
            return spec
    raise KeyError(f"unknown code {name!r}; known: {', '.join(catalog)}")
