"""Dense state-vector simulation of base-q qudit registers.

Basis index convention is little-endian: cell j contributes ``digit_j * q**j``,
so cell 0 is the least significant digit.  Registers are named groups of
consecutive cells, laid out in the order given.

Gates return fresh ``StateVector`` objects; the input state is never mutated.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

from .finite_field import FieldParams
from .polynomial import Polynomial

DEFAULT_MAX_AMPLITUDES = 2**24
NORM_TOL = 1e-9
MEASURE_NORM_TOL = 1e-6
DUMP_MAX_AMPLITUDES = 2**16


class SimulationError(RuntimeError):
    """A state left the unit sphere or a layout/register was misused."""


def max_amplitudes() -> int:
    return int(os.environ.get("QINTERP_MAX_AMPLITUDES", DEFAULT_MAX_AMPLITUDES))


@dataclass(frozen=True)
class RegisterLayout:
    params: FieldParams
    registers: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.registers]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate register names in {names}")
        if any(size < 1 for _, size in self.registers):
            raise ValueError("registers need at least one cell")
        if self.dimension > max_amplitudes():
            raise SimulationError(
                f"{self.params.q}^{self.total_cells} amplitudes exceed the bound {max_amplitudes()}")

    @classmethod
    def of(cls, params: FieldParams, **registers: int) -> RegisterLayout:
        return cls(params, tuple(registers.items()))

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def total_cells(self) -> int:
        return sum(size for _, size in self.registers)

    @property
    def dimension(self) -> int:
        return self.params.q**self.total_cells

    def cells(self, register: str) -> list[int]:
        start = 0
        for name, size in self.registers:
            if name == register:
                return list(range(start, start + size))
            start += size
        raise KeyError(f"unknown register {register!r}")

    def index(self, digits: Sequence[int]) -> int:
        if len(digits) != self.total_cells:
            raise ValueError(f"expected {self.total_cells} digits, got {len(digits)}")
        idx = 0
        for j, dgt in enumerate(digits):
            if not 0 <= dgt < self.q:
                raise ValueError(f"digit {dgt} out of range for q={self.q}")
            idx += int(dgt) * self.q**j
        return idx

    def digits(self, index: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.total_cells):
            index, dgt = divmod(index, self.q)
            out.append(dgt)
        return tuple(out)

    def register_code(self, indices: np.ndarray, register: str) -> np.ndarray:
        """Little-endian code of a register's digits, for each basis index."""
        code = np.zeros_like(indices)
        for i, cell in enumerate(self.cells(register)):
            code += self.cell_digit(indices, cell) * self.q**i
        return code

    def cell_digit(self, indices: np.ndarray, cell: int) -> np.ndarray:
        return (indices // self.q**cell) % self.q


@dataclass
class StateVector:
    layout: RegisterLayout
    amplitudes: np.ndarray
    oracle_calls: int = field(default=0)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (self.layout.dimension,):
            raise ValueError(f"expected {self.layout.dimension} amplitudes, "
                             f"got shape {self.amplitudes.shape}")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def marginal(self, register: str) -> np.ndarray:
        """Outcome distribution of one register, indexed by its little-endian code."""
        size = len(self.layout.cells(register))
        codes = self.layout.register_code(np.arange(self.layout.dimension), register)
        return np.bincount(codes, weights=self.probabilities(), minlength=self.layout.q**size)

    def inner(self, other: StateVector) -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def _evolve(self, amplitudes: np.ndarray, calls: int = 0) -> StateVector:
        out = StateVector(self.layout, amplitudes, self.oracle_calls + calls)
        if abs(out.norm - 1.0) > NORM_TOL:
            raise SimulationError(f"norm drifted to {out.norm!r}")
        return out


def basis_state(layout: RegisterLayout, assignment: Sequence[int]) -> StateVector:
    amps = np.zeros(layout.dimension, dtype=np.complex128)
    amps[layout.index(assignment)] = 1.0
    return StateVector(layout, amps)


def superposition(layout: RegisterLayout, indices: Iterable[int],
                  amplitudes: np.ndarray | None = None) -> StateVector:
    """Normalised state supported on ``indices`` (uniform unless amplitudes given)."""
    idx = np.fromiter(indices, dtype=np.int64)
    amps = np.zeros(layout.dimension, dtype=np.complex128)
    amps[idx] = 1.0 if amplitudes is None else amplitudes
    amps /= np.linalg.norm(amps)
    return StateVector(layout, amps)


def fourier_matrix(params: FieldParams, inverse: bool = False) -> np.ndarray:
    """F[y, x] = e(-x*y)/sqrt(q); the inverse uses e(+x*y)."""
    arg = params.mul_table
    if not inverse:
        arg = params.neg_table[arg]
    return params.character_table[arg] / np.sqrt(params.q)


def apply_cell_gate(state: StateVector, matrix: np.ndarray, cell: int) -> StateVector:
    q = state.layout.q
    m = state.layout.total_cells
    view = state.amplitudes.reshape(q ** (m - 1 - cell), q, q**cell)
    out = np.einsum("ij,ajb->aib", matrix, view).reshape(-1)
    return state._evolve(out)


def _fourier(state: StateVector, register: str, inverse: bool) -> StateVector:
    mat = fourier_matrix(state.layout.params, inverse)
    for cell in state.layout.cells(register):
        state = apply_cell_gate(state, mat, cell)
    return state


def qft(state: StateVector, register: str) -> StateVector:
    """|x> -> q^(-1/2) sum_y e(-x*y) |y>, on every cell of the register."""
    return _fourier(state, register, inverse=False)


def iqft(state: StateVector, register: str) -> StateVector:
    return _fourier(state, register, inverse=True)


def _oracle_values(state: StateVector, f: Polynomial, source: str, target: str):
    layout = state.layout
    if f.params != layout.params:
        raise ValueError("polynomial and layout use different fields")
    src_cells = layout.cells(source)
    if len(src_cells) != f.basis.n:
        raise ValueError(f"source register {source!r} has {len(src_cells)} cells, "
                         f"polynomial has {f.basis.n} variables")
    tgt_cells = layout.cells(target)
    if len(tgt_cells) != 1:
        raise ValueError(f"target register {target!r} must be a single cell")
    q, n = layout.q, f.basis.n
    codes = np.arange(q**n)
    points = np.stack([(codes // q**v) % q for v in range(n)], axis=1)
    f_table = f.evaluate_codes(points)
    idx = np.arange(layout.dimension)
    fx = f_table[layout.register_code(idx, source)]
    return idx, fx, tgt_cells[0]


def oracle_shift(state: StateVector, f: Polynomial, source: str, target: str) -> StateVector:
    """|x, t> -> |x, t + f(x)>."""
    idx, fx, cell = _oracle_values(state, f, source, target)
    prm, q = state.layout.params, state.layout.q
    t = state.layout.cell_digit(idx, cell)
    new_idx = idx + (prm.add_table[t, fx] - t) * q**cell
    out = np.empty_like(state.amplitudes)
    out[new_idx] = state.amplitudes
    return state._evolve(out, calls=1)


def oracle_phase(state: StateVector, f: Polynomial, source: str, coeff: str) -> StateVector:
    """|x, y> -> e(y * f(x)) |x, y>."""
    idx, fx, cell = _oracle_values(state, f, source, coeff)
    prm = state.layout.params
    y = state.layout.cell_digit(idx, cell)
    phase = prm.character_table[prm.mul_table[y, fx]]
    return state._evolve(state.amplitudes * phase, calls=1)


def relabel(state: StateVector, layout: RegisterLayout, src: np.ndarray,
            dst: np.ndarray) -> StateVector:
    """Isometry sending basis vector src[i] to dst[i] in another layout.

    Amplitude outside ``src`` is dropped, which shows up as a norm error.
    """
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if len(np.unique(dst)) != len(dst):
        raise ValueError("destination indices must be distinct")
    amps = np.zeros(layout.dimension, dtype=np.complex128)
    amps[dst] = state.amplitudes[src]
    out = StateVector(layout, amps, state.oracle_calls)
    if abs(out.norm - 1.0) > NORM_TOL:
        raise SimulationError(f"relabel lost amplitude: norm {out.norm!r}")
    return out


def sample_index(probs: np.ndarray, rng: np.random.Generator) -> int:
    """Inverse-CDF draw over the probability vector in index order."""
    cdf = np.cumsum(probs)
    u = rng.random() * cdf[-1]
    return int(min(np.searchsorted(cdf, u, side="right"), len(probs) - 1))


def measure(state: StateVector, rng: np.random.Generator) -> tuple[tuple[int, ...], StateVector]:
    """Measure every cell; returns (digits, collapsed basis state)."""
    if abs(state.norm - 1.0) > MEASURE_NORM_TOL:
        raise SimulationError(f"cannot measure a state of norm {state.norm!r}")
    idx = sample_index(state.probabilities(), rng)
    digits = state.layout.digits(idx)
    collapsed = basis_state(state.layout, digits)
    collapsed.oracle_calls = state.oracle_calls
    return digits, collapsed


def dump_csv(state: StateVector, out: TextIO):
    """Rows of (cell digits..., real, imag); cell 0 first."""
    if state.layout.dimension > DUMP_MAX_AMPLITUDES:
        raise ValueError(f"dumps are limited to {DUMP_MAX_AMPLITUDES} amplitudes")
    w = csv.writer(out, lineterminator="\n")
    m = state.layout.total_cells
    w.writerow([f"c{j}" for j in range(m)] + ["real", "imag"])
    for i, a in enumerate(state.amplitudes):
        w.writerow(list(state.layout.digits(i)) + [repr(float(a.real)), repr(float(a.imag))])


def load_csv(layout: RegisterLayout, src: TextIO) -> StateVector:
    rows = list(csv.reader(src))
    amps = np.zeros(layout.dimension, dtype=np.complex128)
    for row in rows[1:]:
        digits = [int(v) for v in row[:-2]]
        amps[layout.index(digits)] = complex(float(row[-2]), float(row[-1]))
    return StateVector(layout, amps)
