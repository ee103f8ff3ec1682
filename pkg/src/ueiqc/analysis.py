"""Closed-form overhead, logical-error and uncorrectable-error calculators,
plus twirled eavesdropper states and the Holevo quantity."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from scipy.optimize import bisect

# Reported reference figures that depend on models outside this package.
# They are printed next to computed values for comparison only.
TELEPORT_INFIDELITY_REFERENCE = 4.1215e-6
PL_56_63_REFERENCE = 4.7857e-6

DENSITY_MAX_QUBITS = 8


# -- big probabilities ------------------------------------------------------

@dataclass(frozen=True)
class BigProbability:
    """A probability carried as its natural log, optionally with an exact value."""
    log: float
    exact: Fraction | None = None

    @classmethod
    def zero(cls) -> "BigProbability":
        return cls(-math.inf, Fraction(0))

    @classmethod
    def from_fraction(cls, f: Fraction) -> "BigProbability":
        if f == 0:
            return cls.zero()
        return cls(math.log(f.numerator) - math.log(f.denominator), f)

    @classmethod
    def from_float(cls, x: float) -> "BigProbability":
        return cls(math.log(x) if x > 0 else -math.inf)

    @property
    def log10(self) -> float:
        return self.log / math.log(10)

    def __float__(self) -> float:
        return math.exp(self.log) if self.log > -math.inf else 0.0

    def mantissa_exponent(self) -> tuple[float, int]:
        if self.log == -math.inf:
            return 0.0, 0
        e = math.floor(self.log10)
        return 10 ** (self.log10 - e), e

    def sci(self, digits: int = 5) -> str:
        if self.log == -math.inf:
            return "0"
        m, e = self.mantissa_exponent()
        text = f"{m:.{digits - 1}f}"
        if float(text) >= 10:
            m, e = m / 10, e + 1
            text = f"{m:.{digits - 1}f}"
        return f"{text}e{e:+03d}"

    def __repr__(self) -> str:
        return f"BigProbability({self.sci(6)})"


def _as_fraction(p) -> Fraction:
    if isinstance(p, Fraction):
        return p
    if isinstance(p, float):
        return Fraction(repr(p))
    return Fraction(p)


def _logsumexp(terms) -> float:
    terms = list(terms)
    top = max(terms)
    if top == -math.inf:
        return -math.inf
    return top + math.log(math.fsum(math.exp(t - top) for t in terms))


def logical_error_rate(n: int, t: int, p, exact: bool = True) -> BigProbability:
    """Binomial upper tail ``1 - sum_{i<=t} C(n,i) p^i (1-p)^(n-i)``.

    Summed directly over ``i > t`` in log space, so tiny values keep full
    relative precision.  With ``exact`` the rational value is attached.
    """
    if not 0 <= t <= n:
        raise ValueError(f"need 0 <= t <= n, got t={t}, n={n}")
    pf = _as_fraction(p)
    if not 0 <= pf <= 1:
        raise ValueError(f"probability {p} outside [0, 1]")
    if t == n or pf == 0:
        return BigProbability.zero()
    if pf == 1:
        return BigProbability.from_fraction(Fraction(1))
    pv = float(pf)
    lp, lq = math.log(pv), math.log1p(-pv)
    log = _logsumexp(math.log(math.comb(n, i)) + i * lp + (n - i) * lq
                     for i in range(t + 1, n + 1))
    value = None
    if exact:
        q = 1 - pf
        value = sum(math.comb(n, i) * pf ** i * q ** (n - i) for i in range(t + 1, n + 1))
    return BigProbability(log, value)


def singleton_t(n: int, k: int) -> int:
    """Correction capability allowed by ``(n - k) / 4 >= t``."""
    if not n > k >= 0:
        raise ValueError("need n > k >= 0")
    return (n - k) // 4


def p_L_bound(n: int, p) -> BigProbability:
    """Logical error rate at rate 1/2, where t = floor(n/8)."""
    return logical_error_rate(n, n // 8, p)


@dataclass(frozen=True)
class PLCandidate:
    n: int
    convention: str
    t: int
    p_L: BigProbability


def p_L_candidates(p=0.01, n_range=range(56, 64)) -> list[PLCandidate]:
    """Rate-1/2 logical error rates under each plausible (n, k, t) convention."""
    out = []
    for n in n_range:
        conventions = {
            "t=floor(n/8)": n // 8,
            "t=floor((n-floor(n/2))/4)": singleton_t(n, n // 2),
            "t=floor((n-ceil(n/2))/4)": singleton_t(n, -(-n // 2)),
        }
        for name, t in conventions.items():
            out.append(PLCandidate(n, name, t, logical_error_rate(n, t, p, exact=False)))
    return out


def match_logical_error_rate(target: float, p=0.01, n_max: int = 160,
                             rel_tol: float = 5e-5) -> list[tuple[int, int, float]]:
    """All (n, t) whose logical error rate rounds to ``target``."""
    hits = []
    for n in range(1, n_max + 1):
        for t in range(n):
            v = float(logical_error_rate(n, t, p, exact=False))
            if abs(v / target - 1) <= rel_tol:
                hits.append((n, t, v))
    return hits


# -- teleportation overhead -------------------------------------------------

@dataclass(frozen=True)
class TeleportOverheadResult:
    N: int
    N_A: int
    n_bsm: int
    N_EP: int
    O_ES: int
    P_succ: Fraction
    repetitions: int
    N_T: int

    @property
    def nodes(self) -> int:
        return 2 ** self.N + 1

    @property
    def bsm_ancillas(self) -> int:
        return 2 * self.O_ES * (self.n_bsm - 1)


def teleport_overhead(N: int, N_A: int, n_bsm: int) -> TeleportOverheadResult:
    """Qubit cost of one successful distribution over 2^N + 1 nodes."""
    if N < 1 or N_A < 0 or n_bsm < 1:
        raise ValueError("need N >= 1, N_A >= 0, n_bsm >= 1")
    n_ep = sum(N_A * 2 ** (N - i) * 2 for i in range(N + 1))
    o_es = sum(2 ** (N - i) for i in range(1, N + 1))
    p_bsm = 1 - Fraction(1, 2 ** n_bsm)
    p_succ = p_bsm ** o_es
    reps = math.ceil(1 / p_succ)
    n_t = (n_ep + 2 * o_es * (n_bsm - 1)) * reps
    return TeleportOverheadResult(N, N_A, n_bsm, n_ep, o_es, p_succ, reps, n_t)


# -- uncorrectable error counts ---------------------------------------------

def correctable_count(n: int, t: int) -> int:
    return sum(3 ** i * math.comb(n, i) for i in range(t + 1))


def nu_estimate(n: int, k: int, t: int) -> Fraction:
    """Estimated uncorrectable classes per syndrome (exact rational)."""
    n_c = correctable_count(n, t)
    stabs = 2 ** (n - k)
    return Fraction(4 ** n - n_c * (stabs + 2 ** (2 * k)), stabs * stabs)


def _nu_terms(n, R):
    a = mpmath.power(2, 2 * mpmath.mpf(R) * n)
    b = mpmath.power(mpmath.e / 2, (1 - mpmath.mpf(R)) * n)
    return a, b


def nu_bound(n: int, R: float) -> int:
    """``floor(2^(2Rn) - (e/2)^((1-R)n))``, clipped at zero."""
    if not 0 < R < 1:
        raise ValueError("code rate must lie in (0, 1)")
    digits = max(50, int(2 * R * n * math.log10(2)) + 20)
    with mpmath.workdps(digits):
        a, b = _nu_terms(n, R)
        if a <= b:
            return 0
        return int(mpmath.floor(a - b))


def log10_nu(value: int) -> float:
    if value <= 0:
        return -math.inf
    return math.log10(value)


def nu_crossover(n: int | None = None, tol: float = 1e-12) -> float:
    """Code rate at which the uncorrectable count switches on.

    With ``n=None`` this is the large-n root of
    ``2 R ln 2 = (1 - R) ln(e/2)``; for finite n it is the smallest rate
    giving at least one uncorrectable class.
    """
    ln_e2 = 1 - math.log(2)
    if n is None:
        return bisect(lambda R: 2 * R * math.log(2) - (1 - R) * ln_e2, 0.0, 1.0, xtol=tol)

    def g(R):
        # log of 2^(2Rn) minus log of (1 + (e/2)^((1-R)n)); root where N_u = 1
        return 2 * R * n * math.log(2) - math.log1p(math.exp((1 - R) * n * ln_e2))

    return bisect(g, 1e-12, 1 - 1e-12, xtol=tol)


def nu_curve(ns, rates) -> list[dict]:
    rows = []
    for n in ns:
        for R in rates:
            v = nu_bound(n, R)
            rows.append({"n": n, "R": R, "nu_bound": v, "log10_nu": log10_nu(v)})
    return rows


NU_CSV_HEADER = ("n", "R", "nu_bound", "log10_nu")


def write_nu_csv(rows, fh) -> None:
    fh.write(",".join(NU_CSV_HEADER) + "\n")
    for r in rows:
        fh.write(f"{r['n']},{r['R']:.15g},{r['nu_bound']},{r['log10_nu']:.15g}\n")


def read_nu_csv(fh) -> list[dict]:
    lines = [ln for ln in fh.read().splitlines() if ln]
    if tuple(lines[0].split(",")) != NU_CSV_HEADER:
        raise ValueError("unexpected CSV header")
    rows = []
    for ln in lines[1:]:
        n, R, v, lg = ln.split(",")
        rows.append({"n": int(n), "R": float(R), "nu_bound": int(v), "log10_nu": float(lg)})
    return rows


# -- eavesdropper view ------------------------------------------------------

@dataclass(frozen=True)
class EavesdropperState:
    n: int
    rho: np.ndarray
    provenance: str = "full-twirl"

    def __post_init__(self):
        r = self.rho
        if r.shape != (1 << self.n, 1 << self.n):
            raise ValueError("density operator has wrong shape")
        if np.max(np.abs(r - r.conj().T)) > 1e-12:
            raise ValueError("density operator is not Hermitian")
        if abs(np.trace(r).real - 1) > 1e-12:
            raise ValueError("density operator trace is not 1")
        if np.linalg.eigvalsh(r).min() < -1e-10:
            raise ValueError("density operator is not positive semidefinite")


_SINGLE = (np.eye(2, dtype=complex), np.array([[0, 1], [1, 0]], dtype=complex),
           np.array([[0, -1j], [1j, 0]]), np.diag([1, -1]).astype(complex))


def _conjugate(rho, p) -> np.ndarray:
    m = p.to_matrix()
    return m @ rho @ m.conj().T


def pauli_twirl(rho: np.ndarray, n: int, paulis=None) -> np.ndarray:
    """Average ``P rho P^dagger`` over ``paulis`` (all 4**n when None).

    The full twirl factorises into independent single-qubit twirls, which
    is how it is evaluated.
    """
    if n > DENSITY_MAX_QUBITS:
        raise ValueError(f"density operators limited to {DENSITY_MAX_QUBITS} qubits")
    if paulis is not None:
        paulis = list(paulis)
        return sum(_conjugate(rho, p) for p in paulis) / len(paulis)
    t = rho.reshape((2,) * (2 * n))
    for q in range(n):
        acc = np.zeros_like(t)
        for s in _SINGLE:
            u = np.moveaxis(np.tensordot(s, t, axes=([1], [q])), 0, q)
            u = np.moveaxis(np.tensordot(s.conj(), u, axes=([1], [n + q])), 0, n + q)
            acc += u
        t = acc / 4
    return t.reshape(1 << n, 1 << n)


def eavesdropper_state(spec, logical_state) -> EavesdropperState:
    """Full Pauli twirl of the encoded k-qubit ``logical_state``."""
    from .statevector import encode

    if spec.n > DENSITY_MAX_QUBITS:
        raise ValueError(f"density operators limited to {DENSITY_MAX_QUBITS} qubits")
    psi = encode(spec, logical_state).amps
    rho = np.outer(psi, psi.conj())
    return EavesdropperState(spec.n, pauli_twirl(rho, spec.n))


def von_neumann_entropy(rho: np.ndarray) -> float:
    ev = np.clip(np.linalg.eigvalsh(rho), 0, None)
    ev = ev[ev > 1e-15]
    return float(-(ev * np.log2(ev)).sum())


def holevo_bound(states, priors=None) -> float:
    """``S(sum p_m rho_m) - sum p_m S(rho_m)`` in bits."""
    rhos = [s.rho if isinstance(s, EavesdropperState) else np.asarray(s) for s in states]
    if priors is None:
        priors = np.full(len(rhos), 1 / len(rhos))
    priors = np.asarray(priors, dtype=float)
    if len(priors) != len(rhos) or abs(priors.sum() - 1) > 1e-12 or (priors < 0).any():
        raise ValueError("priors must be a probability vector matching the states")
    mean = sum(p * r for p, r in zip(priors, rhos))
    return von_neumann_entropy(mean) - float(sum(p * von_neumann_entropy(r)
                                                 for p, r in zip(priors, rhos)))


def acc_info_bound(epsilon: float, n: int) -> float:
    """Accessible-information bound ``2 epsilon n`` in bits."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return 2 * epsilon * n
