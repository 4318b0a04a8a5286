import io
import itertools
import math

import numpy as np
import pytest

from conftest import operator_matrix, random_state
from qinterp.finite_field import character, field_new
from qinterp.polynomial import Polynomial, monomial_basis, random_polynomial
from qinterp.qudit_sim import (RegisterLayout, SimulationError, StateVector, basis_state,
                               dump_csv, iqft, load_csv, measure, oracle_phase, oracle_shift,
                               qft, relabel)

FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1)]

HADAMARD = np.array([[1, 1], [1, -1]]) / math.sqrt(2)


def test_basis_state_little_endian():
    layout = RegisterLayout.of(field_new(2), a=3)
    s = basis_state(layout, [0, 0, 1])
    assert s.amplitudes[4] == 1
    assert s.norm == pytest.approx(1)
    other = basis_state(layout, [1, 0, 0])
    assert other.inner(s) == 0


def test_basis_state_digit_range():
    layout = RegisterLayout.of(field_new(3), a=2)
    with pytest.raises(ValueError):
        basis_state(layout, [0, 3])


def test_layout_bound(monkeypatch):
    monkeypatch.setenv("QINTERP_MAX_AMPLITUDES", "64")
    RegisterLayout.of(field_new(2), a=6)
    with pytest.raises(SimulationError):
        RegisterLayout.of(field_new(2), a=7)


def test_unknown_register():
    layout = RegisterLayout.of(field_new(2), a=1)
    with pytest.raises(KeyError):
        qft(basis_state(layout, [0]), "b")


def test_qft_qubit_is_hadamard():
    layout = RegisterLayout.of(field_new(2), a=1)
    U = operator_matrix(lambda s: qft(s, "a"), layout)
    assert np.max(np.abs(U - HADAMARD)) <= 1e-12


@pytest.mark.parametrize("p,r", FIELDS + [(3, 2)])
def test_qft_matches_definition(p, r):
    F = field_new(p, r)
    layout = RegisterLayout.of(F, a=1)
    U = operator_matrix(lambda s: qft(s, "a"), layout)
    for x, y in itertools.product(F.elements(), repeat=2):
        assert abs(U[y.code, x.code] - character(-(x * y)) / math.sqrt(F.q)) < 1e-12


def test_qft_of_zero_is_uniform():
    layout = RegisterLayout.of(field_new(3), a=1)
    s = qft(basis_state(layout, [0]), "a")
    assert np.allclose(s.amplitudes, 1 / math.sqrt(3), atol=1e-12)


@pytest.mark.parametrize("p,r", FIELDS)
def test_iqft_inverts_qft(p, r):
    F = field_new(p, r)
    layout = RegisterLayout.of(F, a=2, b=1)
    rng = np.random.default_rng(p * 10 + r)
    for _ in range(100):
        s = random_state(layout, rng)
        back = iqft(qft(s, "a"), "a")
        assert np.max(np.abs(back.amplitudes - s.amplitudes)) < 1e-12


@pytest.mark.parametrize("p,r", FIELDS)
def test_norm_preserved_by_every_gate(p, r):
    F = field_new(p, r)
    cells = max(1, int(math.log(4096, F.q)) - 1)
    layout = RegisterLayout.of(F, x=min(cells, 5), y=1)
    n = min(cells, 5)
    rng = np.random.default_rng(0)
    f = random_polynomial(monomial_basis(n, 1), F, 1)
    s = random_state(layout, rng)
    for gate in (lambda s: qft(s, "x"), lambda s: iqft(s, "y"),
                 lambda s: oracle_shift(s, f, "x", "y"), lambda s: oracle_phase(s, f, "x", "y")):
        s = gate(s)
        assert abs(s.norm - 1) < 1e-9


def _const(F, value):
    return Polynomial.from_codes(monomial_basis(1, 1), F, [value, 0])


def _identity(F):
    return Polynomial.from_codes(monomial_basis(1, 1), F, [0, 1])


def test_oracle_shift_zero_is_identity():
    F = field_new(3)
    layout = RegisterLayout.of(F, x=1, y=1)
    U = operator_matrix(lambda s: oracle_shift(s, _const(F, 0), "x", "y"), layout)
    assert np.array_equal(U, np.eye(layout.dimension))


def test_oracle_shift_qubit_is_cnot():
    F = field_new(2)
    layout = RegisterLayout.of(F, x=1, y=1)
    f = _identity(F)
    for x, y in itertools.product(range(2), repeat=2):
        out = oracle_shift(basis_state(layout, [x, y]), f, "x", "y")
        assert out.amplitudes[layout.index([x, y ^ x])] == 1
    twice = lambda s: oracle_shift(oracle_shift(s, f, "x", "y"), f, "x", "y")
    assert np.array_equal(operator_matrix(twice, layout), np.eye(4))


def test_oracle_counter():
    F = field_new(2)
    layout = RegisterLayout.of(F, x=1, y=1)
    s = oracle_shift(basis_state(layout, [0, 0]), _identity(F), "x", "y")
    s = qft(s, "x")
    s = oracle_phase(s, _identity(F), "x", "y")
    assert s.oracle_calls == 2


def test_oracle_phase_examples():
    F = field_new(2)
    layout = RegisterLayout.of(F, x=1, y=1)
    assert np.array_equal(
        operator_matrix(lambda s: oracle_phase(s, _const(F, 0), "x", "y"), layout), np.eye(4))
    out = oracle_phase(basis_state(layout, [1, 1]), _identity(F), "x", "y")
    assert out.amplitudes[3] == pytest.approx(-1, abs=1e-12)


def test_oracle_dimension_mismatch():
    F = field_new(3)
    layout = RegisterLayout.of(F, x=1, y=1)
    f = Polynomial.zero(monomial_basis(2, 1), F)
    with pytest.raises(ValueError):
        oracle_shift(basis_state(layout, [0, 0]), f, "x", "y")
    layout2 = RegisterLayout.of(F, x=1, y=2)
    with pytest.raises(ValueError):
        oracle_phase(basis_state(layout2, [0, 0, 0]), _const(F, 0), "x", "y")


@pytest.mark.parametrize("p,r", FIELDS)
@pytest.mark.parametrize("n,d", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_phase_kickback(p, r, n, d):
    F = field_new(p, r)
    layout = RegisterLayout.of(F, x=n, y=1)
    for seed in range(5):
        f = random_polynomial(monomial_basis(n, d), F, seed)
        chain = operator_matrix(
            lambda s: iqft(oracle_shift(qft(s, "y"), f, "x", "y"), "y"), layout)
        # independent diagonal oracle: e(y f(x)) from scalar arithmetic
        diag = np.zeros(layout.dimension, dtype=complex)
        for idx in range(layout.dimension):
            digits = layout.digits(idx)
            x = [F.element(v) for v in digits[:n]]
            y = F.element(digits[n])
            diag[idx] = character(y * f(x))
        assert np.max(np.abs(chain - np.diag(diag))) <= 1e-10


def test_measure_basis_state():
    layout = RegisterLayout.of(field_new(3), a=2)
    s = basis_state(layout, [2, 1])
    rng = np.random.default_rng(0)
    for _ in range(20):
        digits, collapsed = measure(s, rng)
        assert digits == (2, 1)
        assert collapsed.amplitudes[layout.index(digits)] == 1


def test_measure_uniform_qubit_statistics():
    layout = RegisterLayout.of(field_new(2), a=1)
    s = qft(basis_state(layout, [0]), "a")
    rng = np.random.default_rng(2024)
    ones = sum(measure(s, rng)[0][0] for _ in range(10_000))
    assert abs(ones - 5000) <= 3 * math.sqrt(10_000 * 0.25)


def test_measure_reproducible():
    layout = RegisterLayout.of(field_new(5), a=2)
    s = qft(basis_state(layout, [1, 3]), "a")
    seq = lambda: [measure(s, np.random.default_rng(9))[0] for _ in range(5)]
    a, b = np.random.default_rng(9), np.random.default_rng(9)
    assert [measure(s, a)[0] for _ in range(20)] == [measure(s, b)[0] for _ in range(20)]
    assert seq() == seq()


def test_measure_rejects_unnormalised():
    layout = RegisterLayout.of(field_new(2), a=1)
    bad = StateVector(layout, np.array([1.0, 1.0]))
    with pytest.raises(SimulationError):
        measure(bad, np.random.default_rng(0))


def test_marginal():
    F = field_new(3)
    layout = RegisterLayout.of(F, a=1, b=1)
    s = qft(basis_state(layout, [2, 1]), "a")
    assert np.allclose(s.marginal("a"), 1 / 3)
    assert np.allclose(s.marginal("b"), [0, 1, 0])


def test_relabel_isometry_and_loss():
    F = field_new(2)
    src_layout = RegisterLayout.of(F, a=2)
    dst_layout = RegisterLayout.of(F, b=3)
    s = qft(basis_state(src_layout, [0, 0]), "a")
    out = relabel(s, dst_layout, np.arange(4), np.array([7, 5, 3, 1]))
    assert np.allclose(out.probabilities()[[7, 5, 3, 1]], 0.25)
    with pytest.raises(SimulationError):
        relabel(s, dst_layout, np.arange(3), np.array([0, 1, 2]))


def test_csv_dump_roundtrip():
    F = field_new(3)
    layout = RegisterLayout.of(F, a=1, b=1)
    s = qft(basis_state(layout, [1, 2]), "a")
    buf = io.StringIO()
    dump_csv(s, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "c0,c1,real,imag"
    assert len(lines) == 10
    buf.seek(0)
    assert np.array_equal(load_csv(layout, buf).amplitudes, s.amplitudes)
