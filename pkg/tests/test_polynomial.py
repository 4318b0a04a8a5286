import itertools
import math

import numpy as np
import pytest

from qinterp.finite_field import FieldError, field_new
from qinterp.polynomial import (Polynomial, check_distinct_monomials, dot, evaluate,
                                monomial_basis, query_count, random_polynomial, z_map)


def test_basis_univariate():
    B = monomial_basis(1, 2, True)
    assert B.exponents == ((0,), (1,), (2,))
    assert B.labels() == ["1", "x", "x^2"]


def test_basis_bivariate_graded_lex():
    B = monomial_basis(2, 2, True)
    assert B.exponents == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
    assert B.D == math.comb(4, 2)


def test_basis_linear_forms():
    B = monomial_basis(3, 1, include_constant=False)
    assert B.exponents == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert B.labels() == ["x1", "x2", "x3"]


@pytest.mark.parametrize("n,d", list(itertools.product(range(1, 9), repeat=2)))
def test_basis_size_closed_form(n, d):
    assert monomial_basis(n, d, True).D == math.comb(n + d, d)
    assert monomial_basis(n, d, False).D == math.comb(n + d, d) - 1


def test_evaluate_examples():
    F = field_new(3)
    B = monomial_basis(1, 2)
    assert evaluate(Polynomial.zero(B, F), [F.element(1)]) == F.zero
    f = Polynomial.from_codes(B, F, [1, 0, 2])
    assert evaluate(f, [F.element(2)]) == F.zero


def test_evaluate_dimension_mismatch():
    F = field_new(3)
    f = Polynomial.zero(monomial_basis(2, 1), F)
    with pytest.raises(ValueError):
        evaluate(f, [F.one])


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_linear_form_matches_dot_product(N):
    F = field_new(2)
    B = monomial_basis(N, 1, include_constant=False)
    for a in itertools.product(range(2), repeat=N):
        f = Polynomial.from_codes(B, F, a)
        for x in itertools.product(range(2), repeat=N):
            expected = sum(ai * xi for ai, xi in zip(a, x)) % 2
            assert evaluate(f, [F.element(v) for v in x]).code == expected


@pytest.mark.parametrize("p,r,n,d", [(3, 1, 2, 2), (2, 2, 2, 1), (5, 1, 1, 3), (3, 2, 2, 2)])
def test_vectorised_evaluation_agrees(p, r, n, d):
    F = field_new(p, r)
    B = monomial_basis(n, d)
    f = random_polynomial(B, F, seed=11)
    pts = np.array(list(itertools.product(range(F.q), repeat=n)))
    fast = f.evaluate_codes(pts)
    for row, v in zip(pts, fast):
        assert evaluate(f, [F.element(int(c)) for c in row]).code == v


def test_query_count_examples():
    assert query_count(2, 2) == 3
    for n in range(1, 11):
        assert query_count(n, 1) == 1
    for d in range(1, 11):
        assert query_count(1, d) == d


@pytest.mark.parametrize("n,d", list(itertools.product(range(1, 13), repeat=2)))
def test_query_count_integral(n, d):
    assert query_count(n, d) == math.comb(n + d - 1, n)


def test_query_count_bound():
    with pytest.raises(OverflowError):
        query_count(30, 30, bound=1000)


def test_z_map_examples():
    F = field_new(3)
    B = monomial_basis(1, 2)
    x = [(F.element(1),), (F.element(2),)]
    y = [F.one, F.one]
    assert [z.code for z in z_map(x, y, B, F)] == [2, 0, 2]
    assert all(not z for z in z_map(x, [F.zero, F.zero], B, F))

    B1 = monomial_basis(1, 1)
    xv, yv = F.element(2), F.element(2)
    assert z_map([(xv,)], [yv], B1, F) == (yv, yv * xv)


def test_z_map_length_mismatch():
    F = field_new(3)
    with pytest.raises(ValueError):
        z_map([(F.one,)], [F.one, F.one], monomial_basis(1, 1), F)


@pytest.mark.parametrize("p,n,d,k", [(2, 1, 1, 2), (3, 1, 2, 2), (3, 2, 1, 1), (5, 1, 2, 3),
                                     (3, 2, 2, 3), (5, 2, 2, 2)])
def test_fundamental_identity(p, n, d, k):
    """sum_i y_i f(x_i) equals Z(x, y) . c."""
    F = field_new(p)
    B = monomial_basis(n, d)
    rng = np.random.default_rng(p * 100 + n * 10 + d)
    for trial in range(200):
        f = random_polynomial(B, F, seed=trial)
        x = [tuple(F.element(int(v)) for v in rng.integers(0, p, n)) for _ in range(k)]
        y = [F.element(int(v)) for v in rng.integers(0, p, k)]
        lhs = dot(y, [evaluate(f, xi) for xi in x])
        assert lhs == dot(z_map(x, y, B, F), f.coeffs)


def test_random_polynomial_determinism():
    F, B = field_new(5), monomial_basis(2, 2)
    assert random_polynomial(B, F, 42) == random_polynomial(B, F, 42)
    differ = sum(random_polynomial(B, F, s) != random_polynomial(B, F, s + 1000)
                 for s in range(100))
    assert differ >= 99


def test_random_polynomial_uniform():
    F, B = field_new(7), monomial_basis(1, 2)
    draws = 10 * F.q * B.D * 20
    codes = np.concatenate([random_polynomial(B, F, s).codes for s in range(draws // B.D)])
    counts = np.bincount(codes, minlength=F.q)
    expect = len(codes) / F.q
    sigma = math.sqrt(len(codes) * (1 / F.q) * (1 - 1 / F.q))
    assert np.all(np.abs(counts - expect) < 5 * sigma)


def test_q_must_exceed_degree():
    with pytest.raises(FieldError):
        check_distinct_monomials(monomial_basis(1, 3), field_new(3))
    check_distinct_monomials(monomial_basis(1, 3), field_new(2, 2))


def test_polynomial_serialization_roundtrip():
    F = field_new(2, 2)
    f = random_polynomial(monomial_basis(2, 2), F, 3)
    data = f.to_dict()
    assert set(data) == {"field", "n", "d", "include_constant", "coeffs"}
    assert Polynomial.from_dict(data) == f


def test_coefficient_length_checked():
    F = field_new(3)
    with pytest.raises(ValueError):
        Polynomial(monomial_basis(1, 2), (F.one,), F)


@pytest.mark.parametrize("n,d", [(1, 3), (2, 3), (3, 2), (4, 2)])
def test_basis_order_matches_sorted_enumeration(n, d):
    brute = sorted((a for a in itertools.product(range(d + 1), repeat=n) if sum(a) <= d),
                   key=lambda a: (sum(a), [-e for e in a]))
    assert list(monomial_basis(n, d).exponents) == brute
