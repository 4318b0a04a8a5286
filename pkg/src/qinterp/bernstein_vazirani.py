"""Bernstein-Vazirani over qubits: one query recovers a hidden linear form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .finite_field import FieldParams, field_new
from .polynomial import Polynomial, monomial_basis
from .qudit_sim import RegisterLayout, StateVector, basis_state, measure, oracle_shift, qft

MAX_QUBITS = 12


class OversizeError(ValueError):
    pass


@dataclass(frozen=True)
class BvInstance:
    a: tuple[int, ...]

    def __post_init__(self):
        if len(self.a) < 1:
            raise ValueError("need at least one input qubit")
        if any(bit not in (0, 1) for bit in self.a):
            raise ValueError(f"hidden vector must be binary, got {self.a}")

    @property
    def N(self) -> int:
        return len(self.a)

    @classmethod
    def from_bits(cls, bits: str) -> BvInstance:
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"malformed bit string {bits!r}")
        return cls(tuple(int(b) for b in bits))

    @classmethod
    def random(cls, N: int, rng: np.random.Generator) -> BvInstance:
        return cls(tuple(int(b) for b in rng.integers(0, 2, size=N)))


@dataclass
class BvTrace:
    psi0: StateVector
    psi1: StateVector
    psi2: StateVector
    psi3: StateVector


@dataclass(frozen=True)
class BvResult:
    a: tuple[int, ...]
    a_hat: tuple[int, ...]
    queries: int

    @property
    def N(self) -> int:
        return len(self.a)

    @property
    def success(self) -> bool:
        return self.a == self.a_hat

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "a": "".join(map(str, self.a)),
            "a_hat": "".join(map(str, self.a_hat)),
            "success": self.success,
            "queries": self.queries,
        }


def _qubits() -> FieldParams:
    return field_new(2, 1)


def linear_form(a: Sequence[int]) -> Polynomial:
    """f(x) = a . x over GF(2), with no constant term."""
    F = _qubits()
    return Polynomial.from_codes(monomial_basis(len(a), 1, include_constant=False), F, a)


def bv_circuit(instance: BvInstance) -> BvTrace:
    N = instance.N
    if N > MAX_QUBITS:
        raise OversizeError(f"N={N} exceeds the simulator bound of {MAX_QUBITS} input qubits")
    layout = RegisterLayout.of(_qubits(), x=N, anc=1)
    psi0 = basis_state(layout, [0] * N + [1])
    psi1 = qft(qft(psi0, "x"), "anc")
    psi2 = oracle_shift(psi1, linear_form(instance.a), "x", "anc")
    # H is its own inverse, so decoding applies the same transform
    psi3 = qft(psi2, "x")
    return BvTrace(psi0, psi1, psi2, psi3)


def bv_run(instance: BvInstance, rng: np.random.Generator) -> BvResult:
    """Run the circuit and read a_1..a_N from the x register; the ancilla is discarded."""
    psi3 = bv_circuit(instance).psi3
    digits, _ = measure(psi3, rng)
    return BvResult(instance.a, tuple(digits[:instance.N]), psi3.oracle_calls)
