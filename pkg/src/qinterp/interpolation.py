"""Quantum multivariate interpolation with k parallel phase queries.

The k queries (x_i, y_i) are put in uniform superposition over a transversal
S of the image R of the Z map, one preimage per image point.  After the phase
oracles the state is sum_{z in R} e(z . c) |z> / sqrt|R|, and a Fourier
transform on the D coefficient cells returns c with probability |R| / q^D.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, TextIO

import numpy as np
from scipy.stats import binomtest

from .finite_field import FieldElement, FieldParams
from .polynomial import (MonomialBasis, Polynomial, check_distinct_monomials, monomial_basis,
                         query_count, random_polynomial)
from .qudit_sim import (RegisterLayout, StateVector, measure, oracle_phase, qft, relabel,
                        superposition)

DEFAULT_MAX_DOMAIN = 2**26
_CHUNK = 2**18

CSV_COLUMNS = ("p", "r", "n", "d", "k", "D", "image_size", "q_pow_D", "p_exact", "p_float",
               "trials", "successes", "wilson_lo", "wilson_hi", "seed")


class InfeasibleError(ValueError):
    """Enumeration or simulation would exceed the configured size bound."""


@dataclass(frozen=True)
class ProtocolParams:
    field: FieldParams
    basis: MonomialBasis
    k: int

    def __post_init__(self):
        check_distinct_monomials(self.basis, self.field)
        if self.k < 1:
            raise ValueError("need at least one query")

    @classmethod
    def create(cls, field: FieldParams, n: int, d: int, k: int | None = None,
               include_constant: bool = True) -> ProtocolParams:
        return cls(field, monomial_basis(n, d, include_constant),
                   query_count(n, d) if k is None else k)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def D(self) -> int:
        return self.basis.D

    @property
    def domain_length(self) -> int:
        """Number of F_q digits in one query tuple (x_1..x_k, y_1..y_k)."""
        return self.k * (self.basis.n + 1)

    def to_dict(self) -> dict:
        return {"field": self.field.to_dict(), "n": self.basis.n, "d": self.basis.d,
                "include_constant": self.basis.include_constant, "k": self.k}

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def _domain_digits(params: ProtocolParams, t: np.ndarray) -> np.ndarray:
    """Digits of domain indices, first component most significant; shape (N, L)."""
    L, q = params.domain_length, params.q
    return np.stack([(t // q ** (L - 1 - pos)) % q for pos in range(L)], axis=1)


def z_codes(params: ProtocolParams, digits: np.ndarray) -> np.ndarray:
    """Little-endian code of Z(x, y) for each row of query digits."""
    prm, basis, k, n, q = params.field, params.basis, params.k, params.n, params.q
    pw = prm.pow_table(basis.d)
    ys = digits[:, k * n:]
    out = np.zeros(len(digits), dtype=np.int64)
    for j, alpha in enumerate(basis.exponents):
        acc = np.zeros(len(digits), dtype=np.int64)
        for i in range(k):
            term = ys[:, i]
            for v, e in enumerate(alpha):
                if e:
                    term = prm.mul_table[term, pw[digits[:, i * n + v], e]]
            acc = prm.add_table[acc, term]
        out += acc * q**j
    return out


@dataclass
class TransversalTable:
    """Image R of the Z map and one preimage (domain index) per image point."""

    params: ProtocolParams
    image: np.ndarray
    preimage: np.ndarray

    @property
    def size(self) -> int:
        return len(self.image)

    @property
    def q_pow_D(self) -> int:
        return self.params.q**self.params.D

    def image_vector(self, code: int) -> tuple[FieldElement, ...]:
        q, F = self.params.q, self.params.field
        return tuple(F.element((int(code) // q**j) % q) for j in range(self.params.D))

    def query(self, code: int) -> tuple[list[tuple[FieldElement, ...]], list[FieldElement]]:
        """The chosen preimage (x_1..x_k, y_1..y_k) of an image point."""
        pos = int(np.searchsorted(self.image, code))
        if pos >= self.size or self.image[pos] != code:
            raise KeyError(f"{code} is not in the image")
        digits = _domain_digits(self.params, np.array([self.preimage[pos]]))[0]
        F, n, k = self.params.field, self.params.n, self.params.k
        xs = [tuple(F.element(int(v)) for v in digits[i * n:(i + 1) * n]) for i in range(k)]
        ys = [F.element(int(v)) for v in digits[k * n:]]
        return xs, ys

    def save(self, out: TextIO):
        json.dump({
            "params_hash": self.params.digest(),
            "params": self.params.to_dict(),
            "entries": [[int(z), int(s)] for z, s in zip(self.image, self.preimage)],
        }, out)

    @classmethod
    def load(cls, params: ProtocolParams, src: TextIO) -> TransversalTable:
        data = json.load(src)
        if data["params_hash"] != params.digest():
            raise ValueError("cached table was built for different parameters")
        entries = np.array(data["entries"], dtype=np.int64).reshape(-1, 2)
        return cls(params, entries[:, 0], entries[:, 1])


def build_image(params: ProtocolParams, max_domain: int = DEFAULT_MAX_DOMAIN) -> TransversalTable:
    """Enumerate the full query domain; keep the first preimage of each image point."""
    q, L = params.q, params.domain_length
    domain = q**L
    if domain > max_domain:
        raise InfeasibleError(f"query domain q^{L} = {domain} exceeds bound {max_domain}")
    q_pow_D = q**params.D
    if q_pow_D > max_domain:
        raise InfeasibleError(f"coefficient space q^{params.D} = {q_pow_D} exceeds bound {max_domain}")
    first = np.full(q_pow_D, -1, dtype=np.int64)
    for start in range(0, domain, _CHUNK):
        t = np.arange(start, min(start + _CHUNK, domain), dtype=np.int64)
        codes = z_codes(params, _domain_digits(params, t))
        uniq, pos = np.unique(codes, return_index=True)
        fresh = first[uniq] < 0
        first[uniq[fresh]] = t[pos[fresh]]
    image = np.flatnonzero(first >= 0)
    return TransversalTable(params, image, first[image])


def success_probability(params: ProtocolParams, table: TransversalTable | None = None) -> Fraction:
    """Exact |R| / q^D."""
    if table is None:
        table = build_image(params)
    return Fraction(table.size, table.q_pow_D)


@dataclass(frozen=True)
class ProtocolResult:
    c_true: tuple[int, ...]
    c_hat: tuple[int, ...]
    p_success: Fraction
    queries: int

    @property
    def success(self) -> bool:
        return self.c_true == self.c_hat

    @property
    def p_float(self) -> float:
        return float(self.p_success)


def _coeff_layout(params: ProtocolParams) -> RegisterLayout:
    return RegisterLayout(params.field, (("c", params.D),))


def _check_poly(f: Polynomial, params: ProtocolParams):
    if f.basis != params.basis or f.params != params.field:
        raise ValueError("polynomial does not match the protocol's basis and field")


def phase_state_analytic(f: Polynomial, params: ProtocolParams,
                         table: TransversalTable) -> StateVector:
    """sum_{z in R} e(z . c) |z> / sqrt|R| on the D coefficient cells."""
    _check_poly(f, params)
    prm, q = params.field, params.q
    dots = np.zeros(table.size, dtype=np.int64)
    for j, cj in enumerate(f.codes):
        zj = (table.image // q**j) % q
        dots = prm.add_table[dots, prm.mul_table[zj, cj]]
    return superposition(_coeff_layout(params), table.image, prm.character_table[dots])


def query_layout(params: ProtocolParams) -> RegisterLayout:
    regs = [(f"x{i + 1}", params.n) for i in range(params.k)]
    regs += [(f"y{i + 1}", 1) for i in range(params.k)]
    return RegisterLayout(params.field, tuple(regs))


def phase_state_circuit(f: Polynomial, params: ProtocolParams,
                        table: TransversalTable) -> StateVector:
    """Full register simulation: superposed queries, k phase oracles, then |x,y> -> |Z(x,y)>."""
    _check_poly(f, params)
    q, L = params.q, params.domain_length
    layout = query_layout(params)
    # domain components and cells share one order; only digit significance flips
    digits = _domain_digits(params, table.preimage)
    state_idx = digits @ (q ** np.arange(L))
    state = superposition(layout, state_idx)
    for i in range(1, params.k + 1):
        state = oracle_phase(state, f, f"x{i}", f"y{i}")
    return relabel(state, _coeff_layout(params), state_idx, table.image)


def decode(state: StateVector) -> StateVector:
    return qft(state, "c")


def output_distribution(f: Polynomial, params: ProtocolParams, table: TransversalTable,
                        mode: str = "analytic") -> np.ndarray:
    state = _phase_state(f, params, table, mode)
    return decode(state).probabilities()


def _phase_state(f, params, table, mode) -> StateVector:
    if mode == "analytic":
        return phase_state_analytic(f, params, table)
    if mode == "circuit":
        return phase_state_circuit(f, params, table)
    raise ValueError(f"unknown mode {mode!r}")


def run_protocol(f: Polynomial, params: ProtocolParams, table: TransversalTable,
                 rng: np.random.Generator, mode: str = "analytic") -> ProtocolResult:
    state = decode(_phase_state(f, params, table, mode))
    digits, _ = measure(state, rng)
    return ProtocolResult(tuple(int(c) for c in f.codes), digits,
                          Fraction(table.size, table.q_pow_D), state.oracle_calls)


def run_protocol_analytic(f, params, table, rng) -> ProtocolResult:
    return run_protocol(f, params, table, rng, "analytic")


def run_protocol_circuit(f, params, table, rng) -> ProtocolResult:
    return run_protocol(f, params, table, rng, "circuit")


@dataclass(frozen=True)
class TrialSummary:
    params: ProtocolParams
    image_size: int
    trials: int
    successes: int
    seed: int | None
    mode: str = field(default="analytic", compare=False)

    @property
    def q_pow_D(self) -> int:
        return self.params.q**self.params.D

    @property
    def exact_rate(self) -> Fraction:
        return Fraction(self.image_size, self.q_pow_D)

    @property
    def empirical_rate(self) -> float:
        return self.successes / self.trials if self.trials else float("nan")

    @property
    def wilson(self) -> tuple[float, float]:
        if not self.trials:
            return float("nan"), float("nan")
        ci = binomtest(self.successes, self.trials).proportion_ci(0.95, method="wilson")
        return float(ci.low), float(ci.high)

    def to_row(self) -> dict:
        prm = self.params
        lo, hi = self.wilson
        exact = self.exact_rate
        return {
            "p": prm.field.p, "r": prm.field.r, "n": prm.n, "d": prm.basis.d, "k": prm.k,
            "D": prm.D, "image_size": self.image_size, "q_pow_D": self.q_pow_D,
            "p_exact": f"{exact.numerator}/{exact.denominator}",
            "p_float": repr(float(exact)), "trials": self.trials,
            "successes": self.successes,
            "wilson_lo": repr(lo) if self.trials else "",
            "wilson_hi": repr(hi) if self.trials else "",
            "seed": "" if self.seed is None else self.seed,
        }


def trial_seeds(seed: int, T: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(T)


def trials(params: ProtocolParams, T: int, seed: int, mode: str = "analytic",
           table: TransversalTable | None = None) -> TrialSummary:
    """T sessions, each with a fresh random polynomial and measurement stream."""
    if T < 1:
        raise ValueError("need at least one trial")
    if table is None:
        table = build_image(params)
    successes = 0
    for child in trial_seeds(seed, T):
        poly_seed, run_seed = child.generate_state(2, np.uint64)
        f = random_polynomial(params.basis, params.field, int(poly_seed))
        res = run_protocol(f, params, table, np.random.default_rng(int(run_seed)), mode)
        successes += res.success
    return TrialSummary(params, table.size, T, successes, seed, mode)


def write_csv(rows: Iterable[TrialSummary], out: TextIO):
    w = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for s in rows:
        w.writerow(s.to_row())


def write_json(rows: Iterable[TrialSummary], out: TextIO):
    json.dump([s.to_row() for s in rows], out, indent=2)
    out.write("\n")
