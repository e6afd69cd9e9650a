"""Finite permutation groups and structural predicates.

FiniteGroup wraps a generating set of Permutations and lazily builds the
full element table (with a hard element cap).  Module-level functions give
object-level structure tests that do not depend on the vectorized table
machinery; the slow ones exist as independent cross-checks for the fast
counting paths.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceededError, GroupFormatError
from .perm import (
    Permutation,
    compose,
    conjugate,
    element_order,
    prime_power_part,
)
from .rows import as_rows
from .tables import GroupTables, factorize

__all__ = [
    "FiniteGroup",
    "closure",
    "is_nilpotent_pair",
    "is_nilpotent_subgroup",
    "generating_pairs_count",
    "quotient_group",
    "subgroups_of_small_group",
]

DEFAULT_ELEMENT_CAP = 4_000_000


class FiniteGroup:
    """A finite permutation group given by generators.

    The element table is built on first use and shared by every structural
    query.  Groups whose closure would exceed element_cap raise
    BudgetExceededError instead of filling memory.
    """

    def __init__(
        self,
        generators: Sequence[Permutation],
        *,
        name: str | None = None,
        element_cap: int = DEFAULT_ELEMENT_CAP,
    ):
        gens = tuple(generators)
        if not gens:
            raise GroupFormatError("a group needs at least one generator")
        degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise GroupFormatError("generators act on different point sets")
        self._generators = gens
        self._degree = degree
        self._cap = element_cap
        self._name = name
        self._tables: GroupTables | None = None

    @property
    def generators(self) -> tuple[Permutation, ...]:
        return self._generators

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def name(self) -> str | None:
        return self._name

    @property
    def tables(self) -> GroupTables:
        if self._tables is None:
            rows = as_rows(self._generators, self._degree)
            self._tables = GroupTables(rows, cap=self._cap)
        return self._tables

    @property
    def order(self) -> int:
        return self.tables.size

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        label = self._name or f"degree-{self._degree} group"
        if self._tables is not None:
            return f"<{label} of order {self._tables.size}>"
        return f"<{label}, {len(self._generators)} generators>"

    def describe(self) -> str:
        return self._name or f"group<deg {self._degree}, order {self.order}>"

    # -- elements -----------------------------------------------------------

    def element(self, i: int) -> Permutation:
        return Permutation(tuple(int(v) for v in self.tables.table[i]))

    def index(self, p: Permutation) -> int:
        if p.degree != self._degree:
            raise ValueError("degree mismatch")
        pos = int(self.tables.index.lookup(np.array(p.images, dtype=np.uint8))[0])
        if pos < 0:
            raise ValueError("element does not belong to the group")
        return pos

    def __contains__(self, p: Permutation) -> bool:
        if not isinstance(p, Permutation) or p.degree != self._degree:
            return False
        return (
            int(self.tables.index.lookup(np.array(p.images, dtype=np.uint8))[0]) >= 0
        )

    def elements(self) -> Iterator[Permutation]:
        for i in range(self.order):
            yield self.element(i)

    def random_element(self, rng: np.random.Generator) -> Permutation:
        return self.element(int(rng.integers(self.order)))

    def identity(self) -> Permutation:
        return Permutation(tuple(range(self._degree)))

    # -- structure ----------------------------------------------------------

    def conjugacy_classes(self) -> list[tuple[Permutation, int]]:
        tb = self.tables
        return [
            (self.element(int(r)), int(s))
            for r, s in zip(tb.class_reps, tb.class_sizes)
        ]

    def is_abelian(self) -> bool:
        gens = self._generators
        return all(
            compose(a, b) == compose(b, a)
            for i, a in enumerate(gens)
            for b in gens[i + 1 :]
        )

    def is_nilpotent(self) -> bool:
        """Unique-Sylow test: for every prime the p-elements must be exactly
        one Sylow subgroup's worth, which forces that Sylow to be normal."""
        tb = self.tables
        return all(
            int(tb.p_element_mask(p).sum()) == p**a
            for p, a in factorize(tb.size).items()
        )

    def is_solvable(self) -> bool:
        return self.tables.derived_series_solvable()

    def is_simple(self) -> bool:
        return self.tables.is_simple_certificate()

    def subgroup_indices(self, gens: Iterable[Permutation]) -> np.ndarray:
        """Sorted table indices of the subgroup the given elements generate."""
        idx = [self.index(g) for g in gens]
        return self.tables.subgroup_closure(idx)


# -- object-level operations ------------------------------------------------


def closure(
    generators: Iterable[Permutation], cap: int = DEFAULT_ELEMENT_CAP
) -> frozenset[Permutation]:
    """All products of the given permutations, by breadth-first multiplication."""
    gens = list(generators)
    if not gens:
        raise GroupFormatError("closure of an empty generating set is undefined")
    degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise GroupFormatError("generators act on different point sets")
    ident = Permutation(tuple(range(degree)))
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        if len(seen) > cap:
            raise BudgetExceededError(
                f"closure exceeded the element cap of {cap}"
            )
        frontier = new
    return frozenset(seen)


@lru_cache(maxsize=100_000)
def _prime_parts(x: Permutation) -> tuple[tuple[int, Permutation], ...]:
    o = element_order(x)
    return tuple((p, prime_power_part(x, p)) for p in sorted(factorize(o)))


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


@lru_cache(maxsize=100_000)
def _p_group_closure(a: Permutation, b: Permutation, p: int, cap: int) -> bool:
    """Whether <a, b> is a p-group, by closure with early exit on any
    element of non-p-power order."""
    ident = Permutation(tuple(range(a.degree)))
    seen = {ident, a, b}
    for z in (a, b):
        if not _is_p_power(element_order(z), p):
            return False
    frontier = [a, b]
    while frontier:
        new = []
        for x in frontier:
            for g in (a, b):
                y = compose(x, g)
                if y in seen:
                    continue
                if not _is_p_power(element_order(y), p):
                    return False
                seen.add(y)
                new.append(y)
        if len(seen) > cap:
            raise BudgetExceededError(f"p-group closure exceeded {cap} elements")
        frontier = new
    return True


def is_nilpotent_pair(
    x: Permutation, y: Permutation, cap: int = DEFAULT_ELEMENT_CAP
) -> bool:
    """Whether <x, y> is nilpotent, without building <x, y> in full.

    Uses the prime-part splitting of both elements: the pair group is
    nilpotent exactly when parts at distinct primes commute and the two
    parts at each shared prime generate a p-group.
    """
    if x.degree != y.degree:
        raise ValueError("degree mismatch")
    parts_x = _prime_parts(x)
    parts_y = _prime_parts(y)
    for p, xp in parts_x:
        for q, yq in parts_y:
            if p != q and compose(xp, yq) != compose(yq, xp):
                return False
    primes_y = dict(parts_y)
    for p, xp in parts_x:
        if p in primes_y and not _p_group_closure(xp, primes_y[p], p, cap):
            return False
    return True


def is_nilpotent_subgroup(
    elements: Iterable[Permutation], cap: int = 100_000
) -> bool:
    """Slow oracle: grow a Sylow subgroup greedily for each prime and check
    its normality.  The input must be the full element set of a subgroup."""
    elems = sorted(set(elements))
    if not elems:
        raise GroupFormatError("empty element set")
    n = len(elems)
    if n > cap:
        raise BudgetExceededError(f"subgroup of size {n} exceeds oracle cap {cap}")
    degree = elems[0].degree
    ident = Permutation(tuple(range(degree)))
    if ident not in set(elems):
        raise GroupFormatError("element set lacks the identity")
    elem_set = frozenset(elems)
    for p, a in factorize(n).items():
        target = p**a
        p_elems = [z for z in elems if z != ident and _is_p_power(element_order(z), p)]
        sylow_gens = [p_elems[0]]
        sylow = _subgroup_closure_set(sylow_gens, elem_set)
        while len(sylow) < target:
            grown = False
            for u in p_elems:
                if u in sylow:
                    continue
                if all(conjugate(s, u) in sylow for s in sylow_gens):
                    sylow_gens.append(u)
                    sylow = _subgroup_closure_set(sylow_gens, elem_set)
                    grown = True
                    break
            if not grown:
                raise AssertionError("Sylow growth stalled below target size")
        for h in elems:
            for s in sylow_gens:
                if conjugate(s, h) not in sylow:
                    return False
    return True


def _subgroup_closure_set(
    gens: list[Permutation], universe: frozenset[Permutation]
) -> set[Permutation]:
    degree = gens[0].degree
    ident = Permutation(tuple(range(degree)))
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    if y not in universe:
                        raise GroupFormatError(
                            "element set is not closed under multiplication"
                        )
                    seen.add(y)
                    new.append(y)
        frontier = new
    return seen


def generating_pairs_count(G: FiniteGroup, cap: int = 2000) -> int:
    """Number of ordered pairs (a, b) with <a, b> = G, by exhaustive closure."""
    n = G.order
    if n > cap:
        raise BudgetExceededError(f"group of order {n} exceeds pair-count cap {cap}")
    elems = [G.element(i) for i in range(n)]
    count = 0
    for i, a in enumerate(elems):
        if len(closure([a], cap=n)) == n:
            count += 1
        for b in elems[i + 1 :]:
            if len(closure([a, b], cap=n)) == n:
                count += 2
    return count


def quotient_group(
    G: FiniteGroup, normal: FiniteGroup | Iterable[Permutation]
) -> FiniteGroup:
    """The action of G on the right cosets of a normal subgroup."""
    if isinstance(normal, FiniteGroup):
        n_gens = list(normal.generators)
    else:
        n_gens = list(normal)
    tb = G.tables
    sub_idx = G.subgroup_indices(n_gens)
    in_sub = np.zeros(tb.size, dtype=bool)
    in_sub[sub_idx] = True
    for s in n_gens:
        si = G.index(s)
        for g in tb.gen_idx:
            c = int(tb.conj_many(np.array([si], dtype=np.int64), int(g))[0])
            if not in_sub[c]:
                raise GroupFormatError("subgroup is not normal")
    _, _, gen_rows = tb.coset_action(sub_idx)
    qgens = [Permutation(tuple(int(v) for v in row)) for row in gen_rows]
    qname = f"{G.describe()} / subgroup of order {sub_idx.size}"
    return FiniteGroup(qgens, name=qname)


def subgroups_of_small_group(
    G: FiniteGroup, cap: int = 200
) -> list[frozenset[Permutation]]:
    """Every subgroup of a small group, by closure-saturation from below."""
    n = G.order
    if n > cap:
        raise BudgetExceededError(f"group of order {n} exceeds subgroup-scan cap {cap}")
    elems = [G.element(i) for i in range(n)]
    trivial = frozenset({G.identity()})
    subs = {trivial}
    frontier = [trivial]
    while frontier:
        new = []
        for sub in frontier:
            for e in elems:
                if e in sub:
                    continue
                grown = frozenset(closure(list(sub) + [e], cap=n))
                if grown not in subs:
                    subs.add(grown)
                    new.append(grown)
        frontier = new
    return sorted(subs, key=lambda s: (len(s), sorted(s)))
