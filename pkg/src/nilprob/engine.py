"""Exact and sampled nilpotency-probability computations.

The central quantity is the coset-relative probability for a context
(T, N, g1, g2) with N normal in T and g1, g2 in T:

    value = #{(n1, n2) in N x N : <n1 g1, n2 g2> nilpotent} / |N|^2 .

nu of a group G is the context (G, G, 1, 1).  When the images of g1, g2
generate a nilpotent T/N, the value does not depend on the chosen pair;
tau computes it and cross-checks that constancy on several pairs.  The
extension maximum nu_tilde scans every conjugacy class of nilpotent
two-generated subgroups of T/N and maximizes tau over the corresponding
preimage extensions.

Exact counts reduce the first coset to orbits under conjugation by N
(nilpotency of <x, y> is conjugation-invariant and N-conjugation fixes
both cosets setwise), then evaluate vectorized admissibility masks over
the second coset.  Everything exact is integer arithmetic; probabilities
are fractions.Fraction throughout.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceededError, VerificationError
from .group import FiniteGroup, closure, is_nilpotent_pair
from .perm import Permutation

__all__ = [
    "CosetContext",
    "NuReport",
    "ExtensionRow",
    "NuTildeResult",
    "SolvabilityReport",
    "PlannedExtension",
    "plan_extensions",
    "build_extension",
    "extension_context",
    "nu_exact",
    "nu_coset",
    "pi_coset",
    "tau",
    "nu_tilde",
    "monte_carlo_nu",
    "alt_bound",
    "solvability_threshold_check",
]

DEFAULT_PAIR_BUDGET = 100_000_000
WILSON_Z_95 = 1.959963984540054


@dataclass(frozen=True)
class CosetContext:
    """(T, N, g1, g2) with N normal in T and both representatives in T."""

    ambient: FiniteGroup
    normal: FiniteGroup
    rep1: Permutation
    rep2: Permutation

    @classmethod
    def for_group(cls, G: FiniteGroup) -> "CosetContext":
        ident = G.identity()
        return cls(G, G, ident, ident)

    def describe(self) -> str:
        t, n = self.ambient.describe(), self.normal.describe()
        if (
            self.ambient is self.normal
            and self.rep1 == self.ambient.identity()
            and self.rep2 == self.rep1
        ):
            return t
        return f"{n} cosets in {t}"


@dataclass
class NuReport:
    description: str
    order: int
    method: str
    value: Fraction
    favorable: int
    total: int
    samples: int | None = None
    ci: tuple[float, float] | None = None
    elapsed_s: float = 0.0
    witness: str | None = None
    notes: tuple[str, ...] = ()

    @property
    def decimal(self) -> float:
        return self.favorable / self.total


def _validate_context(ctx: CosetContext) -> None:
    T, N = ctx.ambient, ctx.normal
    if T.degree != N.degree:
        raise VerificationError("context: ambient and normal degrees differ")
    tb = T.tables
    for g in (ctx.rep1, ctx.rep2):
        T.index(g)  # raises when outside the ambient group
    if N is T:
        return
    sub_idx = T.subgroup_indices(N.generators)
    if sub_idx.size != N.order:
        raise VerificationError("context: normal subgroup closure mismatch")
    in_sub = np.zeros(tb.size, dtype=bool)
    in_sub[sub_idx] = True
    for s in N.generators:
        si = T.index(s)
        for g in tb.gen_idx:
            c = int(tb.conj_many(np.array([si], dtype=np.int64), int(g))[0])
            if not in_sub[c]:
                raise VerificationError("context: subgroup is not normal")


def _context_indices(ctx: CosetContext):
    tb = ctx.ambient.tables
    if ctx.normal is ctx.ambient:
        sub_idx = np.arange(tb.size, dtype=np.int64)
        n_gens = tb.gen_idx
    else:
        sub_idx = ctx.ambient.subgroup_indices(ctx.normal.generators)
        n_gens = np.array(
            sorted(ctx.ambient.index(g) for g in ctx.normal.generators),
            dtype=np.int64,
        )
    g1 = ctx.ambient.index(ctx.rep1)
    g2 = ctx.ambient.index(ctx.rep2)
    return tb, sub_idx, n_gens, g1, g2


def _count_context(
    ctx: CosetContext, reduced: bool, budget: int
) -> tuple[int, int, int]:
    """(favorable, total, orbit_count) for the context, by exact counting."""
    tb, sub_idx, n_gens, g1, g2 = _context_indices(ctx)
    coset1 = tb.coset(sub_idx, g1)
    coset2 = tb.coset(sub_idx, g2)
    n = sub_idx.size
    if reduced:
        orbits = tb.orbit_partition(coset1, n_gens)
        if sum(s for _, s in orbits) != n:
            raise VerificationError("orbit partition does not cover the coset")
    else:
        orbits = [(int(i), 1) for i in coset1]
    evaluations = len(orbits) * n
    if evaluations > budget:
        raise BudgetExceededError(
            f"{evaluations} pair evaluations exceed the budget of {budget}"
        )
    favorable = 0
    for rep, size in orbits:
        favorable += size * tb.count_admissible(rep, coset2)
    return favorable, n * n, len(orbits)


def nu_exact(
    G: FiniteGroup,
    method: str = "classes",
    budget: int = DEFAULT_PAIR_BUDGET,
) -> NuReport:
    """Probability that two uniform elements generate a nilpotent subgroup."""
    return nu_coset(CosetContext.for_group(G), method=method, budget=budget)


def nu_coset(
    ctx: CosetContext,
    method: str = "classes",
    budget: int = DEFAULT_PAIR_BUDGET,
) -> NuReport:
    """Exact coset-relative nilpotency probability for a context."""
    if method not in ("classes", "full"):
        raise ValueError(f"unknown exact method {method!r}")
    started = time.perf_counter()
    _validate_context(ctx)
    favorable, total, orbit_count = _count_context(
        ctx, reduced=(method == "classes"), budget=budget
    )
    return NuReport(
        description=ctx.describe(),
        order=ctx.ambient.order,
        method=f"exact-{method}",
        value=Fraction(favorable, total),
        favorable=favorable,
        total=total,
        elapsed_s=time.perf_counter() - started,
        notes=(f"{orbit_count} orbits on the first coset",),
    )


def pi_coset(ctx: CosetContext, budget: int = 10_000_000) -> NuReport:
    """Probability that a pair from the cosets generates a group containing N."""
    started = time.perf_counter()
    _validate_context(ctx)
    tb, sub_idx, n_gens, g1, g2 = _context_indices(ctx)
    coset1 = tb.coset(sub_idx, g1)
    coset2 = tb.coset(sub_idx, g2)
    n = sub_idx.size
    orbits = tb.orbit_partition(coset1, n_gens)
    if sum(s for _, s in orbits) != n:
        raise VerificationError("orbit partition does not cover the coset")
    if len(orbits) * n > budget:
        raise BudgetExceededError(
            f"{len(orbits) * n} pair evaluations exceed the budget of {budget}"
        )
    targets = n_gens
    visited = np.zeros(tb.size, dtype=bool)
    favorable = 0
    for rep, size in orbits:
        for y in coset2:
            if _generates_over(tb, rep, int(y), targets, visited):
                favorable += size
    total = n * n
    return NuReport(
        description=ctx.describe(),
        order=ctx.ambient.order,
        method="exact-classes",
        value=Fraction(favorable, total),
        favorable=favorable,
        total=total,
        elapsed_s=time.perf_counter() - started,
        notes=(f"{len(orbits)} orbits on the first coset",),
    )


def _generates_over(tb, a, b, targets, visited) -> bool:
    """Whether <a, b> contains every target index (early-exit closure)."""
    visited[:] = False
    visited[tb.identity_idx] = True
    visited[a] = True
    visited[b] = True
    if visited[targets].all():
        return True
    frontier = np.unique(np.array([tb.identity_idx, a, b], dtype=np.int64))
    while frontier.size:
        new = []
        for g in (a, b):
            cand = tb.mult_many(frontier, g)
            fresh = np.unique(cand[~visited[cand]])
            if fresh.size:
                visited[fresh] = True
                new.append(fresh)
        if visited[targets].all():
            return True
        frontier = np.concatenate(new) if new else np.empty(0, np.int64)
    return False


# -- tau and the extension maximum ----------------------------------------------


def _generating_pairs_of(Q: FiniteGroup) -> list[tuple[int, int]]:
    """Ordered index pairs generating Q, in table order."""
    n = Q.order
    if n == 1:
        return [(0, 0)]
    tb = Q.tables
    pairs = []
    for i in range(n):
        for j in range(n):
            if tb.subgroup_closure([i, j]).size == n:
                pairs.append((i, j))
    return pairs


def _spread(items: list, k: int) -> list:
    """Up to k entries spread across the list, always including the first."""
    if len(items) <= k:
        return list(items)
    step = len(items) / k
    return [items[int(i * step)] for i in range(k)]


def tau(
    T: FiniteGroup,
    S: FiniteGroup,
    check_pairs: int = 3,
    budget: int = DEFAULT_PAIR_BUDGET,
) -> NuReport:
    """The common coset value over generating pairs of a nilpotent quotient.

    Requires T/S nilpotent and two-generated; the value is computed for up
    to check_pairs generating pairs of the quotient (lifted to lex-least
    coset representatives) and verified to agree.
    """
    started = time.perf_counter()
    if T.degree != S.degree:
        raise VerificationError("tau: degree mismatch")
    tb = T.tables
    if T.order == S.order:
        # trivial quotient: any representatives work and shift to (1, 1)
        rep = nu_coset(CosetContext.for_group(S), budget=budget)
        rep.description = f"coset value of {S.describe()} in itself"
        rep.elapsed_s = time.perf_counter() - started
        return rep
    sub_idx = T.subgroup_indices(S.generators)
    if sub_idx.size != S.order:
        raise VerificationError("tau: socle closure mismatch inside the ambient")
    cid, reps, gen_rows = tb.coset_action(sub_idx)
    Q = FiniteGroup([Permutation(tuple(int(v) for v in r)) for r in gen_rows])
    if not Q.is_nilpotent():
        raise VerificationError("tau: quotient is not nilpotent")
    qids = tb.quotient_element_ids(sub_idx, Q.tables.index)
    qpairs = _generating_pairs_of(Q)
    if not qpairs:
        raise VerificationError("tau: quotient is not two-generated")
    values: list[tuple[Fraction, str]] = []
    for q1, q2 in _spread(qpairs, max(1, check_pairs)):
        g1 = int(np.where(qids == q1)[0][0])
        g2 = int(np.where(qids == q2)[0][0])
        ctx = CosetContext(T, S, T.element(g1), T.element(g2))
        favorable, total, _ = _count_context(ctx, reduced=True, budget=budget)
        values.append(
            (Fraction(favorable, total),
             f"({T.element(g1).cycle_string()}, {T.element(g2).cycle_string()})")
        )
    first = values[0][0]
    for v, w in values[1:]:
        if v != first:
            raise VerificationError(
                f"tau: value differs between generating pairs: {first} vs {v}"
            )
    favorable = first.numerator * (S.order**2 // first.denominator)
    return NuReport(
        description=f"coset value of {S.describe()} in {T.describe()}",
        order=T.order,
        method="exact-classes",
        value=first,
        favorable=favorable,
        total=S.order**2,
        elapsed_s=time.perf_counter() - started,
        witness=values[0][1],
        notes=(f"agreement verified on {len(values)} generating pairs",),
    )


@dataclass
class ExtensionRow:
    label: str
    quotient_desc: str
    extension_order: int
    value: Fraction
    invariants: dict
    witness: str


@dataclass
class NuTildeResult:
    best: NuReport
    rows: list[ExtensionRow] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)


def _canonical_subgroup(sub: frozenset, Q: FiniteGroup) -> tuple:
    return tuple(sorted(p.images for p in sub))


def _subgroup_classes(Q: FiniteGroup) -> list[frozenset]:
    """One representative per conjugacy class of subgroups, deterministic."""
    from .group import subgroups_of_small_group

    subs = subgroups_of_small_group(Q)
    elements = [Q.element(i) for i in range(Q.order)]
    seen: set[tuple] = set()
    out = []
    for sub in subs:
        canon = min(
            _canonical_subgroup(frozenset(~g * s * g for s in sub), Q)
            for g in elements
        )
        if canon not in seen:
            seen.add(canon)
            out.append(sub)
    return out


def _structure_name(H: frozenset) -> str:
    """Small-group structure label: cyclic orders, elementary squares, or size."""
    n = len(H)
    from .perm import element_order

    orders = sorted(element_order(p) for p in H)
    if orders[-1] == n:
        return str(n)  # cyclic
    if n == 4:
        return "2^2"
    if all(o in (1, 2) for o in orders):
        k = (n - 1).bit_length()
        return f"2^{k}"
    return f"ord{n}"


@dataclass
class PlannedExtension:
    """A nilpotent two-generated subgroup of the outer quotient, with the
    lifted generator pair that defines the corresponding extension."""

    label: str
    quotient_desc: str
    quotient_order: int
    lift1: Permutation
    lift2: Permutation
    invariants: dict
    extension_name: str


def plan_extensions(
    ambient: FiniteGroup, socle: FiniteGroup
) -> tuple[list[PlannedExtension], list[str]]:
    """Enumerate extension rows without building any extension table.

    Returns (planned rows, skip notes).  Rows are labelled by quotient
    structure, with letter suffixes only when several surviving rows share
    a description.  The plan for the trivial quotient uses identity lifts.
    """
    from .group import is_nilpotent_subgroup

    if ambient.order == socle.order:
        ident = socle.identity()
        return (
            [PlannedExtension("1", "1", 1, ident, ident, {"quotient_order": 1},
                              socle.describe())],
            [],
        )
    tb = ambient.tables
    sub_idx = ambient.subgroup_indices(socle.generators)
    _, _, gen_rows = tb.coset_action(sub_idx)
    Q = FiniteGroup([Permutation(tuple(int(v) for v in r)) for r in gen_rows])
    qids = tb.quotient_element_ids(sub_idx, Q.tables.index)
    q_elements = {Q.element(i): i for i in range(Q.order)}
    ident = ambient.identity()

    planned: list[PlannedExtension] = []
    skipped: list[str] = []
    for class_no, sub in enumerate(_subgroup_classes(Q)):
        n_sub = len(sub)
        desc = _structure_name(sub)
        if not is_nilpotent_subgroup(sub):
            skipped.append(
                f"order-{n_sub} subgroup class {class_no}: not nilpotent"
            )
            continue
        if n_sub == 1:
            planned.append(
                PlannedExtension("1", "1", 1, ident, ident,
                                 {"quotient_order": 1}, socle.describe())
            )
            continue
        sub_sorted = sorted(sub)
        pair = None
        for a in sub_sorted:
            for b in sub_sorted:
                if len(closure([a, b], cap=n_sub)) == n_sub:
                    pair = (a, b)
                    break
            if pair:
                break
        if pair is None:
            skipped.append(
                f"order-{n_sub} subgroup class {class_no}: not two-generated"
            )
            continue
        lifts = [
            ambient.element(int(np.where(qids == q_elements[q])[0][0]))
            for q in pair
        ]
        invariants = _outer_invariants(ambient, socle, Q, sub, q_elements, qids)
        planned.append(
            PlannedExtension(
                desc, desc, n_sub, lifts[0], lifts[1], invariants,
                f"{socle.describe()}.{desc}",
            )
        )

    # letter suffixes only where several surviving rows share a description
    by_desc: dict[str, int] = {}
    for row in planned:
        by_desc[row.quotient_desc] = by_desc.get(row.quotient_desc, 0) + 1
    counters: dict[str, int] = {}
    for row in planned:
        if by_desc[row.quotient_desc] > 1:
            i = counters.get(row.quotient_desc, 0)
            counters[row.quotient_desc] = i + 1
            row.label = f"{row.quotient_desc}{'abcdefgh'[i]}"
            row.extension_name = f"{row.extension_name}{'abcdefgh'[i]}"
    return planned, skipped


def build_extension(socle: FiniteGroup, plan: PlannedExtension) -> FiniteGroup:
    """Materialize the extension group for a planned row."""
    if plan.quotient_order == 1:
        return socle
    T = FiniteGroup(
        list(socle.generators) + [plan.lift1, plan.lift2],
        name=plan.extension_name,
    )
    if T.order != socle.order * plan.quotient_order:
        raise VerificationError(
            f"extension order {T.order}, expected "
            f"{socle.order * plan.quotient_order}"
        )
    return T


def extension_context(
    ambient: FiniteGroup, socle: FiniteGroup, label: str
) -> tuple[CosetContext, PlannedExtension]:
    """Coset context for one labelled extension row, without exact counting."""
    planned, _ = plan_extensions(ambient, socle)
    for plan in planned:
        if plan.label == label:
            T = build_extension(socle, plan)
            return CosetContext(T, socle, plan.lift1, plan.lift2), plan
    labels = ", ".join(p.label for p in planned)
    raise KeyError(f"no extension row {label!r}; available: {labels}")


def nu_tilde(
    ambient: FiniteGroup,
    socle: FiniteGroup,
    check_pairs: int = 3,
    budget: int = DEFAULT_PAIR_BUDGET,
) -> NuTildeResult:
    """Maximum tau over extensions of the socle inside the ambient group
    with nilpotent two-generated quotient.

    Scans conjugacy classes of subgroups of ambient/socle; classes that are
    not nilpotent or not two-generated are recorded as skipped.
    """
    started = time.perf_counter()
    planned, skipped = plan_extensions(ambient, socle)
    rows: list[ExtensionRow] = []
    for plan in planned:
        T = build_extension(socle, plan)
        report = tau(T, socle, check_pairs=check_pairs, budget=budget)
        rows.append(
            ExtensionRow(
                label=plan.label,
                quotient_desc=plan.quotient_desc,
                extension_order=T.order,
                value=report.value,
                invariants=plan.invariants,
                witness=report.witness or "",
            )
        )

    best_row: ExtensionRow | None = None
    for row in rows:
        if (
            best_row is None
            or row.value > best_row.value
            or (row.value == best_row.value
                and row.extension_order < best_row.extension_order)
        ):
            best_row = row

    assert best_row is not None
    best = NuReport(
        description=f"extension maximum of {socle.describe()}",
        order=ambient.order,
        method="exact-classes",
        value=best_row.value,
        favorable=best_row.value.numerator
        * (socle.order**2 // best_row.value.denominator),
        total=socle.order**2,
        elapsed_s=time.perf_counter() - started,
        witness=f"attained by extension {best_row.label} "
        f"(order {best_row.extension_order}), pair {best_row.witness}",
        notes=tuple(skipped),
    )
    return NuTildeResult(best=best, rows=rows, skipped=skipped)


def _outer_invariants(
    ambient: FiniteGroup,
    socle: FiniteGroup,
    Q: FiniteGroup,
    sub: frozenset,
    q_elements: dict,
    qids: np.ndarray,
) -> dict:
    """Representation-level data used to identify extension rows."""
    inv: dict = {"quotient_order": len(sub)}
    if len(sub) != 2:
        return inv
    q = next(p for p in sub if p != Q.identity())
    # centrality of the involution inside the whole outer quotient
    center = all(q * h == h * q for h in (Q.element(i) for i in range(Q.order)))
    inv["outer_central"] = center
    # whether the lift preserves the first half of the points (meaningful
    # for the packaged point/line and doubled-copy actions)
    lift_idx = int(np.where(qids == q_elements[q])[0][0])
    lift = ambient.element(lift_idx)
    half = ambient.degree // 2
    inv["lift_preserves_halves"] = all(
        (lift.images[i] < half) == (i < half) for i in range(ambient.degree)
    )
    return inv


# -- sampling --------------------------------------------------------------------


def wilson_interval(favorable: int, samples: int, z: float) -> tuple[float, float]:
    if samples == 0:
        return (0.0, 1.0)
    phat = favorable / samples
    denom = 1.0 + z * z / samples
    center = (phat + z * z / (2 * samples)) / denom
    half = (
        z
        * ((phat * (1.0 - phat) / samples + z * z / (4 * samples * samples)) ** 0.5)
        / denom
    )
    return (max(0.0, center - half), min(1.0, center + half))


def monte_carlo_nu(
    target: FiniteGroup | CosetContext,
    samples: int,
    seed: int,
    workers: int = 1,
    z: float = WILSON_Z_95,
) -> NuReport:
    """Sampled estimate of the context value with a Wilson score interval.

    Worker substreams are fixed jumps of the seeded bit generator, and the
    sample split across workers is deterministic, so results depend only on
    (samples, seed, workers).
    """
    started = time.perf_counter()
    ctx = (
        target
        if isinstance(target, CosetContext)
        else CosetContext.for_group(target)
    )
    if samples < 1:
        raise ValueError("samples must be positive")
    if workers < 1:
        raise ValueError("workers must be positive")
    _validate_context(ctx)
    tb, sub_idx, _, g1, g2 = _context_indices(ctx)
    n = sub_idx.size
    base, rem = divmod(samples, workers)
    favorable = 0
    root = np.random.PCG64(seed)
    for w in range(workers):
        k = base + (1 if w < rem else 0)
        if k == 0:
            continue
        rng = np.random.Generator(root.jumped(w))
        picks = rng.integers(0, n, size=(k, 2))
        x_idx = tb.mult_many(sub_idx[picks[:, 0]], g1)
        y_idx = tb.mult_many(sub_idx[picks[:, 1]], g2)
        for xi, yi in zip(x_idx, y_idx):
            x = Permutation(tuple(int(v) for v in tb.table[xi]))
            y = Permutation(tuple(int(v) for v in tb.table[yi]))
            if is_nilpotent_pair(x, y):
                favorable += 1
    return NuReport(
        description=ctx.describe(),
        order=ctx.ambient.order,
        method="monte-carlo",
        value=Fraction(favorable, samples),
        favorable=favorable,
        total=samples,
        samples=samples,
        ci=wilson_interval(favorable, samples, z),
        elapsed_s=time.perf_counter() - started,
        notes=(f"seed {seed}, {workers} worker substreams",),
    )


# -- derived quantities ------------------------------------------------------------


def alt_bound(pi_n: Fraction, pi_n_minus_1: Fraction, n: int) -> Fraction:
    """Upper bound 1 - pi_n - pi_(n-1)/n on the nilpotency probability of
    the alternating group of degree n, from generation probabilities."""
    if n < 10:
        raise ValueError("the bound needs degree at least 10")
    for v in (pi_n, pi_n_minus_1):
        if not 0 <= v <= 1:
            raise ValueError("generation probabilities must lie in [0, 1]")
    return 1 - pi_n - Fraction(pi_n_minus_1, n)


@dataclass
class SolvabilityReport:
    description: str
    order: int
    nu: Fraction
    threshold: Fraction
    exceeds: bool
    solvable: bool
    consistent: bool


def solvability_threshold_check(
    G: FiniteGroup, budget: int = DEFAULT_PAIR_BUDGET
) -> SolvabilityReport:
    """nu against the 1/12 solvability threshold, with the actual
    solvability of the group for consistency."""
    threshold = Fraction(1, 12)
    report = nu_exact(G, budget=budget)
    exceeds = report.value > threshold
    solvable = G.is_solvable()
    return SolvabilityReport(
        description=G.describe(),
        order=G.order,
        nu=report.value,
        threshold=threshold,
        exceeds=exceeds,
        solvable=solvable,
        consistent=(not exceeds) or solvable,
    )
