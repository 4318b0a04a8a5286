"""Multivariate polynomials over GF(q) in a graded-lex monomial basis."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .finite_field import FieldElement, FieldError, FieldParams

QUERY_COUNT_BOUND = 2**63 - 1

Point = Sequence[FieldElement]


@dataclass(frozen=True)
class MonomialBasis:
    """Exponent tuples of total degree <= d in n variables.

    Ordered by total degree, then lexicographically with larger leading
    exponents first: 1, x1, x2, x1^2, x1*x2, x2^2, ...
    """

    n: int
    d: int
    include_constant: bool
    exponents: tuple[tuple[int, ...], ...]

    @property
    def D(self) -> int:
        return len(self.exponents)

    def __len__(self):
        return len(self.exponents)

    def index(self, alpha: Sequence[int]) -> int:
        return self.exponents.index(tuple(alpha))

    def labels(self) -> list[str]:
        out = []
        for alpha in self.exponents:
            parts = []
            for v, e in enumerate(alpha, start=1):
                name = "x" if self.n == 1 else f"x{v}"
                if e == 1:
                    parts.append(name)
                elif e > 1:
                    parts.append(f"{name}^{e}")
            out.append("*".join(parts) or "1")
        return out


def _compositions(total: int, parts: int):
    """Exponent tuples with the given sum, larger leading exponents first."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def monomial_basis(n: int, d: int, include_constant: bool = True) -> MonomialBasis:
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    exps = [a for total in range(d + 1) for a in _compositions(total, n)]
    if not include_constant:
        exps = exps[1:]
    return MonomialBasis(n, d, include_constant, tuple(exps))


@dataclass(frozen=True)
class Polynomial:
    basis: MonomialBasis
    coeffs: tuple[FieldElement, ...]
    params: FieldParams

    def __post_init__(self):
        if len(self.coeffs) != self.basis.D:
            raise ValueError(f"expected {self.basis.D} coefficients, got {len(self.coeffs)}")
        for c in self.coeffs:
            self.params._check(c)

    @classmethod
    def from_codes(cls, basis: MonomialBasis, params: FieldParams,
                   codes: Sequence[int]) -> Polynomial:
        return cls(basis, tuple(params.element(int(c)) for c in codes), params)

    @classmethod
    def zero(cls, basis: MonomialBasis, params: FieldParams) -> Polynomial:
        return cls(basis, (params.zero,) * basis.D, params)

    @property
    def codes(self) -> np.ndarray:
        return np.array([c.code for c in self.coeffs], dtype=np.int64)

    def __call__(self, x: Point) -> FieldElement:
        return evaluate(self, x)

    def evaluate_codes(self, points: np.ndarray) -> np.ndarray:
        """Vectorised evaluation; ``points`` has shape (N, n) of element codes."""
        points = np.asarray(points, dtype=np.int64)
        if points.ndim != 2 or points.shape[1] != self.basis.n:
            raise ValueError(f"points must have shape (N, {self.basis.n})")
        prm = self.params
        pw = prm.pow_table(self.basis.d)
        total = np.zeros(points.shape[0], dtype=np.int64)
        for c, alpha in zip(self.codes, self.basis.exponents):
            if c == 0:
                continue
            mono = np.full(points.shape[0], c, dtype=np.int64)
            for v, e in enumerate(alpha):
                if e:
                    mono = prm.mul_table[mono, pw[points[:, v], e]]
            total = prm.add_table[total, mono]
        return total

    def to_dict(self) -> dict:
        return {
            "field": self.params.to_dict(),
            "n": self.basis.n,
            "d": self.basis.d,
            "include_constant": self.basis.include_constant,
            "coeffs": [c.to_list() for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data: dict) -> Polynomial:
        params = FieldParams.from_dict(data["field"])
        basis = monomial_basis(data["n"], data["d"], data["include_constant"])
        return cls(basis, tuple(params.element(c) for c in data["coeffs"]), params)


def _monomial(x: Point, alpha: Sequence[int], params: FieldParams) -> FieldElement:
    out = params.one
    for xv, e in zip(x, alpha):
        if e:
            out = out * xv**e
    return out


def evaluate(f: Polynomial, x: Point) -> FieldElement:
    if len(x) != f.basis.n:
        raise ValueError(f"point has {len(x)} coordinates, polynomial has {f.basis.n} variables")
    total = f.params.zero
    for c, alpha in zip(f.coeffs, f.basis.exponents):
        if c:
            total = total + c * _monomial(x, alpha, f.params)
    return total


def query_count(n: int, d: int, bound: int = QUERY_COUNT_BOUND) -> int:
    """Optimal number of quantum queries, d/(n+d) * C(n+d, d)."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    k = Fraction(d, n + d) * math.comb(n + d, d)
    if k.denominator != 1:
        raise ArithmeticError(f"query count for n={n}, d={d} is not an integer: {k}")
    if k.numerator > bound:
        raise OverflowError(f"query count {k.numerator} exceeds bound {bound}")
    return k.numerator


def z_map(x: Sequence[Point], y: Sequence[FieldElement], basis: MonomialBasis,
          params: FieldParams) -> tuple[FieldElement, ...]:
    """Component alpha is sum_i y_i * x_i^alpha."""
    if len(x) != len(y):
        raise ValueError(f"{len(x)} query points but {len(y)} coefficients")
    for xi in x:
        if len(xi) != basis.n:
            raise ValueError(f"query point has {len(xi)} coordinates, expected {basis.n}")
    out = []
    for alpha in basis.exponents:
        acc = params.zero
        for xi, yi in zip(x, y):
            if yi:
                acc = acc + yi * _monomial(xi, alpha, params)
        out.append(acc)
    return tuple(out)


def dot(u: Sequence[FieldElement], v: Sequence[FieldElement]) -> FieldElement:
    if len(u) != len(v):
        raise ValueError("length mismatch")
    if not u:
        raise ValueError("empty vectors")
    total = u[0].params.zero
    for a, b in zip(u, v):
        total = total + a * b
    return total


def random_polynomial(basis: MonomialBasis, params: FieldParams, seed: int) -> Polynomial:
    """Uniform i.i.d. coefficients drawn from ``numpy.random.default_rng(seed)``."""
    rng = np.random.default_rng(seed)
    return Polynomial.from_codes(basis, params, rng.integers(0, params.q, size=basis.D))


def check_distinct_monomials(basis: MonomialBasis, params: FieldParams):
    """Monomial functions are only distinct when q > d."""
    if params.q <= basis.d:
        raise FieldError(f"need q > d, got q={params.q}, d={basis.d}")
