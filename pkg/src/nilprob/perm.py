"""Permutations of {1..n} with exact order/part arithmetic.

Conventions, pinned by the test suite:

* composition is left-to-right: ``compose(p, q)`` means "apply p, then q";
* points are 1-indexed in all text renderings and parsed input, and
  0-indexed in the internal image tuple;
* a permutation is immutable and hashable; degree is fixed at creation.
"""

from __future__ import annotations

import math
import re
from typing import Iterable, Sequence

__all__ = [
    "Permutation",
    "compose",
    "inverse",
    "identity",
    "commutator",
    "conjugate",
    "element_order",
    "prime_power_part",
    "cycle_decomposition",
]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """Immutable permutation, stored as the tuple img with img[i] = image of i."""

    __slots__ = ("_img",)

    def __init__(self, images: Iterable[int]):
        img = tuple(images)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a permutation of 0..{len(img) - 1}: {img!r}")
        object.__setattr__(self, "_img", img)

    # -- construction -------------------------------------------------

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 1:
            raise ValueError("degree must be >= 1")
        return cls(range(degree))

    @classmethod
    def from_one_indexed(cls, images: Sequence[int]) -> "Permutation":
        """Build from a 1-indexed image list, e.g. [2, 3, 1, 5, 4]."""
        return cls(i - 1 for i in images)

    @classmethod
    def from_image_text(cls, text: str) -> "Permutation":
        """Parse the 1-indexed comma form, e.g. "2,3,1,5,4"."""
        try:
            images = [int(part) for part in text.split(",")]
        except ValueError as exc:
            raise ValueError(f"bad image list {text!r}") from exc
        return cls.from_one_indexed(images)

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> "Permutation":
        """Parse cycle notation, e.g. "(1 2 3)(4 5)"; "()" is the identity.

        Cycle entries may be separated by spaces or commas.  Points not
        mentioned are fixed.  degree must cover every mentioned point.
        """
        stripped = text.replace(" ", "").replace(",", "")
        if not _CYCLE_RE.fullmatch(stripped) and not re.fullmatch(
            r"(\([^()]*\))+", stripped
        ):
            raise ValueError(f"bad cycle notation {text!r}")
        img = list(range(degree))
        seen: set[int] = set()
        for body in _CYCLE_RE.findall(text):
            points = [int(tok) for tok in re.split(r"[,\s]+", body.strip()) if tok]
            if not points:
                continue
            if len(set(points)) != len(points):
                raise ValueError(f"repeated point inside a cycle: {text!r}")
            for pt in points:
                if not 1 <= pt <= degree:
                    raise ValueError(f"point {pt} outside 1..{degree}")
                if pt in seen:
                    raise ValueError(f"point {pt} appears in two cycles")
                seen.add(pt)
            for a, b in zip(points, points[1:] + points[:1]):
                img[a - 1] = b - 1
        return cls(img)

    # -- basic protocol -----------------------------------------------

    @property
    def images(self) -> tuple[int, ...]:
        return self._img

    @property
    def degree(self) -> int:
        return len(self._img)

    def apply(self, point: int) -> int:
        """Image of a 1-indexed point."""
        if not 1 <= point <= self.degree:
            raise ValueError(f"point {point} outside 1..{self.degree}")
        return self._img[point - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __invert__(self) -> "Permutation":
        return inverse(self)

    def __pow__(self, exponent: int) -> "Permutation":
        if exponent < 0:
            return inverse(self) ** (-exponent)
        result = Permutation.identity(self.degree)
        base = self
        while exponent:
            if exponent & 1:
                result = compose(result, base)
            base = compose(base, base)
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self._img == other._img

    def __hash__(self) -> int:
        return hash(self._img)

    def __lt__(self, other: "Permutation") -> bool:
        return self._img < other._img

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()!r}, degree={self.degree})"

    def is_identity(self) -> bool:
        return all(img == i for i, img in enumerate(self._img))

    # -- rendering ----------------------------------------------------

    def cycle_string(self) -> str:
        """Render as "(1 2 3)(4 5)"; the identity renders "()"."""
        parts = [
            "(" + " ".join(str(pt) for pt in cyc) + ")"
            for cyc in cycle_decomposition(self)
        ]
        return "".join(parts) if parts else "()"

    def image_string(self) -> str:
        """Render as the 1-indexed comma form "2,3,1,5,4"."""
        return ",".join(str(img + 1) for img in self._img)


def identity(degree: int) -> Permutation:
    return Permutation.identity(degree)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply p first, then q."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    qi = q.images
    return Permutation(qi[i] for i in p.images)


def inverse(p: Permutation) -> Permutation:
    img = [0] * p.degree
    for i, j in enumerate(p.images):
        img[j] = i
    return Permutation(img)


def conjugate(p: Permutation, by: Permutation) -> Permutation:
    """by^-1 * p * by, in left-to-right composition."""
    return compose(compose(inverse(by), p), by)


def commutator(x: Permutation, y: Permutation) -> Permutation:
    """x^-1 y^-1 x y."""
    return compose(compose(compose(inverse(x), inverse(y)), x), y)


def cycle_decomposition(p: Permutation) -> tuple[tuple[int, ...], ...]:
    """Nontrivial cycles as 1-indexed tuples, each starting at its least point,
    ordered by least point.  Fixed points are omitted."""
    img = p.images
    seen = [False] * p.degree
    cycles: list[tuple[int, ...]] = []
    for start in range(p.degree):
        if seen[start] or img[start] == start:
            seen[start] = True
            continue
        cyc = []
        pt = start
        while not seen[pt]:
            seen[pt] = True
            cyc.append(pt + 1)
            pt = img[pt]
        cycles.append(tuple(cyc))
    return tuple(cycles)


def element_order(p: Permutation) -> int:
    order = 1
    for cyc in cycle_decomposition(p):
        order = math.lcm(order, len(cyc))
    return order


def prime_power_part(p: Permutation, prime: int) -> Permutation:
    """The prime-part of p: the power of p of order prime^a where
    prime^a exactly divides the order of p.

    For order o = prime^a * m with gcd(m, prime) = 1, this is p^e where
    e = 0 mod m and e = 1 mod prime^a; the complementary part is p * part^-1.
    """
    if prime < 2 or any(prime % d == 0 for d in range(2, int(prime**0.5) + 1)):
        raise ValueError(f"{prime} is not prime")
    o = element_order(p)
    a = 0
    m = o
    while m % prime == 0:
        m //= prime
        a += 1
    if a == 0:
        return Permutation.identity(p.degree)
    pa = prime**a
    e = m * pow(m, -1, pa)
    return p**e
