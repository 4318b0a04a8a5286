"""Arithmetic in GF(p^r) with the absolute trace and the additive character.

Elements are stored in the polynomial basis over a fixed monic irreducible
modulus.  ``coeffs`` is little-endian: ``coeffs[0]`` is the constant term.

Every element also has an integer *code* ``sum(c_i * p**i)``; the vectorised
tables (``add_table``, ``mul_table``, ...) are indexed by codes and are what
the state-vector simulator uses.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

DEFAULT_MAX_ORDER = 2**20
# q x q lookup tables are only built up to this order
TABLE_MAX_ORDER = 1024


class FieldError(ValueError):
    """Invalid field description or mixed-field arithmetic."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for f in range(3, math.isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


# -- polynomials over Z_p as little-endian int tuples -----------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m over Z_p."""
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * mc) % p
        _trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _monic_polys(degree: int, p: int) -> Iterator[tuple[int, ...]]:
    """Monic polynomials of a given degree, in increasing code order."""
    for low in itertools.product(range(p), repeat=degree):
        yield tuple(reversed(low)) + (1,)


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Exhaustive factor search: no monic factor of degree 1..deg//2 divides it."""
    deg = len(modulus) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if modulus[0] % p == 0:
        return False
    for fd in range(1, deg // 2 + 1):
        for g in _monic_polys(fd, p):
            if not _poly_mod(modulus, g, p):
                return False
    return True


def smallest_irreducible(p: int, r: int) -> tuple[int, ...]:
    """Monic irreducible of degree r over Z_p with the smallest code.

    Codes compare from the leading coefficient down, so for p=2, r=3 this is
    x^3 + x + 1 rather than x^3 + x^2 + 1.
    """
    if r == 1:
        return (0, 1)
    for m in _monic_polys(r, p):
        if is_irreducible(m, p):
            return m
    raise FieldError(f"no irreducible polynomial of degree {r} over Z_{p}")  # unreachable


@dataclass(frozen=True)
class FieldParams:
    """GF(p^r) described by its prime, degree and modulus (little-endian, monic)."""

    p: int
    r: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if self.r < 1:
            raise FieldError("extension degree must be >= 1")
        if len(self.modulus) != self.r + 1:
            raise FieldError(
                f"modulus has degree {len(self.modulus) - 1}, expected {self.r}")
        if any(not 0 <= c < self.p for c in self.modulus) or self.modulus[-1] != 1:
            raise FieldError("modulus must be monic with coefficients in [0, p)")
        if not is_irreducible(self.modulus, self.p):
            raise FieldError(f"modulus {self.modulus} is reducible over Z_{self.p}")

    @property
    def q(self) -> int:
        return self.p**self.r

    def __repr__(self):
        return f"GF({self.p}^{self.r}, modulus={format_poly(self.modulus)})"

    # -- element construction ------------------------------------------------

    def element(self, value: int | Sequence[int] | FieldElement) -> FieldElement:
        """Element from a code, a coefficient list, or another element."""
        if isinstance(value, FieldElement):
            self._check(value)
            return value
        if isinstance(value, (int, np.integer)):
            v = int(value)
            if not 0 <= v < self.q:
                raise FieldError(f"code {v} out of range for q={self.q}")
            digits = []
            for _ in range(self.r):
                v, c = divmod(v, self.p)
                digits.append(c)
            return FieldElement(tuple(digits), self)
        coeffs = [int(c) for c in value]
        if len(coeffs) > self.r or any(not 0 <= c < self.p for c in coeffs):
            raise FieldError(f"invalid coefficient list {coeffs} for {self!r}")
        return FieldElement(tuple(coeffs + [0] * (self.r - len(coeffs))), self)

    @property
    def zero(self) -> FieldElement:
        return FieldElement((0,) * self.r, self)

    @property
    def one(self) -> FieldElement:
        return FieldElement((1,) + (0,) * (self.r - 1), self)

    def generator(self) -> FieldElement:
        """The class of x in the polynomial basis (x itself when r > 1)."""
        return self.element([0, 1]) if self.r > 1 else self.one

    def elements(self) -> Iterator[FieldElement]:
        for code in range(self.q):
            yield self.element(code)

    def _check(self, a: FieldElement):
        if a.params != self:
            raise FieldError(f"element of {a.params!r} used with {self!r}")

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {"p": self.p, "r": self.r, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, data: dict) -> FieldParams:
        return field_new(data["p"], data["r"], data.get("modulus"))

    # -- lookup tables over codes ---------------------------------------------

    def _require_tables(self):
        if self.q > TABLE_MAX_ORDER:
            raise FieldError(
                f"lookup tables need q <= {TABLE_MAX_ORDER}, field has q={self.q}")

    @cached_property
    def _coeff_matrix(self) -> np.ndarray:
        """Row c holds the coefficient vector of the element with code c."""
        codes = np.arange(self.q)
        return np.stack([(codes // self.p**i) % self.p for i in range(self.r)], axis=1)

    @cached_property
    def _weights(self) -> np.ndarray:
        return self.p ** np.arange(self.r)

    @cached_property
    def add_table(self) -> np.ndarray:
        self._require_tables()
        c = self._coeff_matrix
        s = (c[:, None, :] + c[None, :, :]) % self.p
        return s @ self._weights

    @cached_property
    def neg_table(self) -> np.ndarray:
        self._require_tables()
        return ((-self._coeff_matrix) % self.p) @ self._weights

    @cached_property
    def mul_table(self) -> np.ndarray:
        self._require_tables()
        # multiplication by a is Z_p-linear: a*b = sum_i b_i * (a * x^i)
        shifted = np.empty((self.q, self.r, self.r), dtype=np.int64)
        for code in range(self.q):
            a = self.element(code)
            xi = self.one
            for i in range(self.r):
                shifted[code, i] = (a * xi).coeffs
                xi = xi * self.generator()
        c = self._coeff_matrix
        prod = np.einsum("bi,aij->abj", c, shifted) % self.p
        return prod @ self._weights

    @cached_property
    def inv_table(self) -> np.ndarray:
        """inv_table[0] is 0 by convention."""
        self._require_tables()
        inv = np.zeros(self.q, dtype=np.int64)
        rows, cols = np.nonzero(self.mul_table == 1)
        inv[rows] = cols
        return inv

    @cached_property
    def trace_table(self) -> np.ndarray:
        self._require_tables()
        return np.array([trace(a) for a in self.elements()], dtype=np.int64)

    @cached_property
    def character_table(self) -> np.ndarray:
        return np.exp(2j * np.pi * self.trace_table / self.p)

    def pow_table(self, max_exp: int) -> np.ndarray:
        """pow_table[a, e] = a**e for 0 <= e <= max_exp, with 0**0 = 1."""
        self._require_tables()
        out = np.empty((self.q, max_exp + 1), dtype=np.int64)
        out[:, 0] = 1
        codes = np.arange(self.q)
        for e in range(1, max_exp + 1):
            out[:, e] = self.mul_table[out[:, e - 1], codes]
        return out


def format_poly(coeffs: Sequence[int], var: str = "x") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        if not mono:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return " + ".join(terms) or "0"


@dataclass(frozen=True)
class FieldElement:
    coeffs: tuple[int, ...]
    params: FieldParams = field(repr=False)

    @property
    def code(self) -> int:
        return sum(c * self.params.p**i for i, c in enumerate(self.coeffs))

    def __int__(self):
        return self.code

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"FieldElement({format_poly(self.coeffs, 'w')})"

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            self.params._check(other)
            return other
        if isinstance(other, (int, np.integer)):
            # integers embed into the prime subfield
            return FieldElement((int(other) % self.params.p,) + (0,) * (self.params.r - 1),
                                self.params)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.params.p
        return FieldElement(tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)),
                            self.params)

    __radd__ = __add__

    def __neg__(self):
        p = self.params.p
        return FieldElement(tuple((-a) % p for a in self.coeffs), self.params)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prm = self.params
        prod = _poly_mod(_poly_mul(self.coeffs, other.coeffs, prm.p), prm.modulus, prm.p)
        return FieldElement(tuple(prod + [0] * (prm.r - len(prod))), prm)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = self.params.one, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self) -> FieldElement:
        if not self:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self ** (self.params.q - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def to_list(self) -> list[int]:
        return list(self.coeffs)


def field_new(p: int, r: int = 1, modulus: Sequence[int] | None = None,
              max_order: int = DEFAULT_MAX_ORDER) -> FieldParams:
    """Build GF(p^r).

    Without a modulus the monic irreducible with the smallest code is chosen,
    so repeated calls always give the same representation.
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if r < 1:
        raise FieldError("extension degree must be >= 1")
    if p**r > max_order:
        raise FieldError(f"q = {p}^{r} exceeds the bound {max_order}")
    if modulus is None:
        modulus = smallest_irreducible(p, r)
    return FieldParams(p, r, tuple(int(c) for c in modulus))


# the operation-style API, mirroring the operators

def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def neg(a: FieldElement) -> FieldElement:
    return -a


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def power(a: FieldElement, e: int) -> FieldElement:
    return a**e


def trace(z: FieldElement) -> int:
    """Absolute trace z + z^p + ... + z^(p^(r-1)), returned as an int in [0, p)."""
    total, conj = z.params.zero, z
    for _ in range(z.params.r):
        total = total + conj
        conj = conj**z.params.p
    if any(total.coeffs[1:]):
        raise ArithmeticError(f"trace of {z!r} left the prime subfield")  # modulus not irreducible
    return total.coeffs[0]


def character(z: FieldElement) -> complex:
    """The additive character exp(2 pi i Tr(z) / p)."""
    t = trace(z)
    if t == 0:
        return 1 + 0j
    return cmath.exp(2j * cmath.pi * t / z.params.p)
