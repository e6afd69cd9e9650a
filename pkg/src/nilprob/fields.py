"""Finite fields of order q <= 13, with pinned reduction polynomials.

Elements are integer codes 0..q-1.  For GF(p^k) the code's base-p digits
are the polynomial coefficients, little-endian: code = sum(c_i * p^i).

Reduction polynomials (fixed so point labelings never drift):

    GF(4):  x^2 + x + 1
    GF(8):  x^3 + x + 1
    GF(9):  x^2 + 1
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

__all__ = ["SmallField", "SmallFieldElement", "small_field"]

_PRIMES = (2, 3, 5, 7, 11, 13)

# low-order coefficients (c_0 .. c_{k-1}) of the monic reduction polynomial,
# i.e. x^k = -(c_0 + c_1 x + ... + c_{k-1} x^{k-1})
_REDUCTION = {4: (1, 1), 8: (1, 1, 0), 9: (1, 0)}


def _factor_prime_power(q: int) -> tuple[int, int]:
    for p in _PRIMES:
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power over primes <= 13")
            return p, k
    raise ValueError(f"unsupported field order {q}")


class SmallField:
    """Arithmetic tables for GF(q).  Obtain instances via small_field(q)."""

    def __init__(self, q: int):
        p, k = _factor_prime_power(q)
        if q > 13:
            raise ValueError(f"field order {q} exceeds the supported bound 13")
        if k > 1 and q not in _REDUCTION:
            raise ValueError(f"no pinned reduction polynomial for GF({q})")
        self.q = q
        self.p = p
        self.k = k
        self._mul = [[self._mul_slow(a, b) for b in range(q)] for a in range(q)]
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break

    # -- code-level arithmetic ----------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        shift = 1
        for _ in range(self.k):
            out += ((a + b) % p) * shift
            a //= p
            b //= p
            shift *= p
        return out

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        p = self.p
        out = 0
        shift = 1
        for _ in range(self.k):
            out += ((-a) % p) * shift
            a //= p
            shift *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _mul_slow(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        if k == 1:
            return (a * b) % p
        da = [(a // p**i) % p for i in range(k)]
        db = [(b // p**i) % p for i in range(k)]
        prod = [0] * (2 * k - 1)
        for i, ca in enumerate(da):
            for j, cb in enumerate(db):
                prod[i + j] = (prod[i + j] + ca * cb) % p
        red = _REDUCTION[self.q]
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                prod[deg] = 0
                for i, ri in enumerate(red):
                    prod[deg - k + i] = (prod[deg - k + i] - c * ri) % p
        return sum(c * p**i for i, c in enumerate(prod[:k]))

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._inv[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out = 1
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def primitive_element(self) -> int:
        if self.q == 2:
            return 1
        for g in range(2, self.q):
            seen = set()
            x = 1
            for _ in range(self.q - 1):
                x = self.mul(x, g)
                seen.add(x)
            if len(seen) == self.q - 1:
                return g
        raise AssertionError("no primitive element found")  # q=2 handled below

    def element(self, code: int) -> "SmallFieldElement":
        return SmallFieldElement(self, code % self.q)

    def __repr__(self) -> str:
        return f"SmallField(q={self.q})"


@lru_cache(maxsize=None)
def small_field(q: int) -> SmallField:
    return SmallField(q)


@dataclass(frozen=True)
class SmallFieldElement:
    """A field element: value code plus its field."""

    field: SmallField
    code: int

    def __add__(self, other: "SmallFieldElement") -> "SmallFieldElement":
        self._check(other)
        return SmallFieldElement(self.field, self.field.add(self.code, other.code))

    def __sub__(self, other: "SmallFieldElement") -> "SmallFieldElement":
        self._check(other)
        return SmallFieldElement(self.field, self.field.sub(self.code, other.code))

    def __neg__(self) -> "SmallFieldElement":
        return SmallFieldElement(self.field, self.field.neg(self.code))

    def __mul__(self, other: "SmallFieldElement") -> "SmallFieldElement":
        self._check(other)
        return SmallFieldElement(self.field, self.field.mul(self.code, other.code))

    def inverse(self) -> "SmallFieldElement":
        return SmallFieldElement(self.field, self.field.inv(self.code))

    def __pow__(self, e: int) -> "SmallFieldElement":
        return SmallFieldElement(self.field, self.field.pow(self.code, e))

    def frobenius(self) -> "SmallFieldElement":
        return SmallFieldElement(self.field, self.field.frobenius(self.code))

    def _check(self, other: "SmallFieldElement") -> None:
        if self.field.q != other.field.q:
            raise ValueError("elements from different fields")
