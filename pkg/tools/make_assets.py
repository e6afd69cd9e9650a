"""Regenerate the packaged .grp generator files.

Every asset is constructed from first principles here (projective planes
with a polarity, symplectic transvection groups, the Mathieu groups from
their standard generators, and a degree-24 extension of the larger Mathieu
group by a computed involutory outer automorphism).  Each construction is
verified by closure order before anything is written, so a bad edit fails
loudly instead of producing a wrong asset.

Run from the repository root:  python3 tools/make_assets.py [name ...]
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from nilprob.fields import SmallField, small_field
from nilprob.group import FiniteGroup
from nilprob.perm import Permutation
from nilprob.rows import compose_rows

ASSETS = Path(__file__).resolve().parent.parent / "src" / "nilprob" / "assets"

Vec = tuple[int, ...]
Mat = tuple[Vec, ...]


# -- small matrix algebra over SmallField --------------------------------------


def _dot(fld: SmallField, u: Vec, v: Vec) -> int:
    acc = 0
    for a, b in zip(u, v):
        acc = fld.add(acc, fld.mul(a, b))
    return acc


def mat_mul(fld: SmallField, A: Mat, B: Mat) -> Mat:
    n = len(A)
    Bt = mat_transpose(B)
    return tuple(tuple(_dot(fld, A[i], Bt[j]) for j in range(n)) for i in range(n))


def mat_vec(fld: SmallField, A: Mat, v: Vec) -> Vec:
    return tuple(_dot(fld, row, v) for row in A)


def vec_mat(fld: SmallField, v: Vec, A: Mat) -> Vec:
    return tuple(_dot(fld, v, col) for col in mat_transpose(A))


def mat_transpose(A: Mat) -> Mat:
    n = len(A)
    return tuple(tuple(A[j][i] for j in range(n)) for i in range(n))


def mat_inverse(fld: SmallField, A: Mat) -> Mat:
    """Gauss-Jordan over the field."""
    n = len(A)
    aug = [list(A[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_p = fld.inv(aug[col][col])
        aug[col] = [fld.mul(inv_p, x) for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [fld.sub(x, fld.mul(f, y)) for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


# -- projective geometry --------------------------------------------------------


def normalize_projective(fld: SmallField, v: Vec) -> Vec:
    lead = next(x for x in v if x != 0)
    if lead == 1:
        return v
    s = fld.inv(lead)
    return tuple(fld.mul(s, x) for x in v)


def projective_points(fld: SmallField, dim: int) -> list[Vec]:
    """Normalized representatives, lexicographic order."""
    pts = set()
    for code in range(1, fld.q**dim):
        v = []
        c = code
        for _ in range(dim):
            v.append(c % fld.q)
            c //= fld.q
        pts.add(normalize_projective(fld, tuple(v)))
    return sorted(pts)


def plane_permutation(fld: SmallField, A: Mat, points: list[Vec]) -> Permutation:
    """Degree-2m action of a matrix on the points and lines of PG(2,q).

    Points transform by A; lines (functionals with the same normalized
    coordinate set) by the inverse on the other side, so that incidence
    w . v = 0 is preserved.
    """
    pos = {v: i for i, v in enumerate(points)}
    m = len(points)
    Ainv = mat_inverse(fld, A)
    img = [0] * (2 * m)
    for i, v in enumerate(points):
        img[i] = pos[normalize_projective(fld, mat_vec(fld, A, v))]
        img[m + i] = m + pos[normalize_projective(fld, vec_mat(fld, v, Ainv))]
    return Permutation(img)


def duality_permutation(m: int) -> Permutation:
    """The polarity swapping each point with the line of the same coordinates."""
    return Permutation([m + i for i in range(m)] + list(range(m)))


def frobenius_plane_permutation(fld: SmallField, points: list[Vec]) -> Permutation:
    pos = {v: i for i, v in enumerate(points)}
    m = len(points)
    img = [0] * (2 * m)
    for i, v in enumerate(points):
        j = pos[normalize_projective(fld, tuple(fld.frobenius(x) for x in v))]
        img[i] = j
        img[m + i] = m + j
    return Permutation(img)


# -- symplectic groups -----------------------------------------------------------


def symplectic_form(fld: SmallField, n: int) -> Mat:
    """Block form ((0, I), (-I, 0)) on F^n, n even."""
    h = n // 2
    J = [[0] * n for _ in range(n)]
    for i in range(h):
        J[i][h + i] = 1
        J[h + i][i] = fld.neg(1)
    return tuple(tuple(row) for row in J)


def symplectic_transvection(fld: SmallField, J: Mat, v: Vec) -> Mat:
    """Columns of the map x -> x + <x, v> v with <x, v> = x^T J v."""
    n = len(v)
    cols = []
    for j in range(n):
        e = tuple(1 if i == j else 0 for i in range(n))
        pairing = _dot(fld, vec_mat(fld, e, J), v)
        cols.append(tuple(fld.add(e[i], fld.mul(pairing, v[i])) for i in range(n)))
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def check_symplectic(fld: SmallField, J: Mat, A: Mat, factor: int = 1) -> bool:
    """A^T J A == factor * J."""
    lhs = mat_mul(fld, mat_transpose(A), mat_mul(fld, J, A))
    rhs = tuple(tuple(fld.mul(factor, x) for x in row) for row in J)
    return lhs == rhs


def point_action(fld: SmallField, A: Mat, points: list[Vec]) -> Permutation:
    pos = {v: i for i, v in enumerate(points)}
    return Permutation(
        [pos[normalize_projective(fld, mat_vec(fld, A, v))] for v in points]
    )


# -- generating-set reduction ----------------------------------------------------


def reduce_to_pair(G: FiniteGroup, label: str) -> list[Permutation]:
    """A two-element generating set: the first element of maximal order plus
    the first class representative (smallest classes first) that completes it."""
    tb = G.tables
    a = int(np.argmax(tb.orders))
    by_size = sorted(range(tb.class_reps.size), key=lambda c: int(tb.class_sizes[c]))
    for c in by_size:
        b = int(tb.class_reps[c])
        if b == tb.identity_idx:
            continue
        if tb.subgroup_closure([a, b]).size == tb.size:
            print(f"  {label}: generating pair of orders "
                  f"{int(tb.orders[a])}, {int(tb.orders[b])}")
            return [G.element(a), G.element(b)]
    raise AssertionError(f"{label}: no generating pair found")


# -- writing ---------------------------------------------------------------------


def write_group_file(
    path: Path,
    name: str,
    degree: int,
    ambient: FiniteGroup,
    ambient_gens: list[Permutation],
    socle: FiniteGroup | None = None,
    socle_gens: list[Permutation] | None = None,
    comment: str = "",
) -> None:
    lines = []
    for c in comment.splitlines():
        lines.append(f"# {c}")
    lines.append(f"name {name}")
    lines.append(f"degree {degree}")
    lines.append(f"order {ambient.order}")
    for g in ambient_gens:
        lines.append(f"gen {g.cycle_string()}")
    if socle is not None:
        lines.append(f"socle-order {socle.order}")
        for g in socle_gens or []:
            lines.append(f"socle-gen {g.cycle_string()}")
    path.write_text("\n".join(lines) + "\n")
    tail = f", socle {socle.order}" if socle else ""
    print(f"  wrote {path.name} (order {ambient.order}{tail})")


# -- individual assets -------------------------------------------------------------


def build_psl33() -> None:
    fld = small_field(3)
    points = projective_points(fld, 3)
    assert len(points) == 13
    E12 = ((1, 1, 0), (0, 1, 0), (0, 0, 1))
    C = ((0, 0, 1), (1, 0, 0), (0, 1, 0))  # 3-cycle permutation matrix, det 1
    socle_gens = [
        plane_permutation(fld, E12, points),
        plane_permutation(fld, C, points),
    ]
    socle = FiniteGroup(socle_gens, name="psl33")
    assert socle.order == 5616, socle.order
    delta = duality_permutation(13)
    ambient_gens = socle_gens + [delta]
    ambient = FiniteGroup(ambient_gens, name="psl33.2")
    assert ambient.order == 11232, ambient.order
    write_group_file(
        ASSETS / "psl33.grp", "psl33", 26, ambient, ambient_gens, socle, socle_gens,
        comment=(
            "Projective special linear group of dimension 3 over GF(3), with\n"
            "its extension by the point-line polarity of PG(2,3).\n"
            "Points 1..13 are the projective points in lexicographic order of\n"
            "normalized coordinates; points 14..26 are the lines, same order.\n"
            "Regenerate with tools/make_assets.py."
        ),
    )


def build_psl34() -> None:
    fld = small_field(4)
    omega = fld.primitive_element()
    points = projective_points(fld, 3)
    assert len(points) == 21
    E12 = ((1, 1, 0), (0, 1, 0), (0, 0, 1))
    E12w = ((1, omega, 0), (0, 1, 0), (0, 0, 1))
    C = ((0, 0, 1), (1, 0, 0), (0, 1, 0))
    socle_gens = [
        plane_permutation(fld, E12, points),
        plane_permutation(fld, E12w, points),
        plane_permutation(fld, C, points),
    ]
    socle = FiniteGroup(socle_gens, name="psl34")
    assert socle.order == 20160, socle.order
    delta = duality_permutation(21)
    phi = frobenius_plane_permutation(fld, points)
    D = ((1, 0, 0), (0, 1, 0), (0, 0, omega))
    dperm = plane_permutation(fld, D, points)
    ambient_gens = socle_gens + [delta, phi, dperm]
    ambient = FiniteGroup(ambient_gens, name="psl34.aut")
    assert ambient.order == 241920, ambient.order
    write_group_file(
        ASSETS / "psl34.grp", "psl34", 42, ambient, ambient_gens, socle, socle_gens,
        comment=(
            "Projective special linear group of dimension 3 over GF(4), with\n"
            "its full automorphism group (outer 2 x Sym(3), order 12),\n"
            "generated over the socle by the polarity of PG(2,4), the field\n"
            "automorphism, and a diagonal coset representative.\n"
            "Points 1..21 are the projective points in lexicographic order of\n"
            "normalized coordinates (GF(4) codes 0,1,2,3; 2 is a generator of\n"
            "the multiplicative group); points 22..42 are the lines, same\n"
            "order.  Regenerate with tools/make_assets.py."
        ),
    )


def build_psu42() -> None:
    # realized as the projective symplectic group of dimension 4 over GF(3),
    # isomorphic to the projective special unitary group of dimension 4 over
    # GF(2); the degree-2 extension comes from a similitude with factor -1
    fld = small_field(3)
    J = symplectic_form(fld, 4)
    points = projective_points(fld, 4)
    assert len(points) == 40
    basis = [tuple(1 if i == j else 0 for i in range(4)) for j in range(4)]
    extra = [
        (1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0),
        (0, 1, 0, 1), (0, 0, 1, 1), (1, 1, 1, 0), (1, 1, 0, 1),
    ]
    gens: list[Permutation] = []
    sp = None
    for v in basis + extra:
        T = symplectic_transvection(fld, J, v)
        assert check_symplectic(fld, J, T)
        gens.append(point_action(fld, T, points))
        sp = FiniteGroup(gens, name="psu42 raw")
        if sp.order == 25920:
            break
    assert sp is not None and sp.order == 25920, sp and sp.order
    socle_gens = reduce_to_pair(sp, "psu42 socle")
    socle = FiniteGroup(socle_gens, name="psu42")
    assert socle.order == 25920
    M = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, fld.neg(1), 0), (0, 0, 0, fld.neg(1)))
    assert check_symplectic(fld, J, M, factor=fld.neg(1))
    mperm = point_action(fld, M, points)
    ambient_gens = socle_gens + [mperm]
    ambient = FiniteGroup(ambient_gens, name="psu42.2")
    assert ambient.order == 51840, ambient.order
    write_group_file(
        ASSETS / "psu42.grp", "psu42", 40, ambient, ambient_gens, socle, socle_gens,
        comment=(
            "Projective symplectic group of dimension 4 over GF(3),\n"
            "isomorphic to the projective special unitary group of dimension\n"
            "4 over GF(2), acting on the 40 points of PG(3,3); extended by a\n"
            "symplectic similitude with multiplier -1 (degree-2 outer).\n"
            "Socle generators were reduced from symplectic transvections for\n"
            "the block form ((0,I),(-I,0)).  Points are in lexicographic\n"
            "order of normalized coordinates (low coordinate first).\n"
            "Regenerate with tools/make_assets.py."
        ),
    )


def build_psp62() -> None:
    fld = small_field(2)
    J = symplectic_form(fld, 6)
    vectors = projective_points(fld, 6)
    assert len(vectors) == 63
    basis = [tuple(1 if i == j else 0 for i in range(6)) for j in range(6)]
    extra = [
        (1, 1, 0, 0, 0, 0), (0, 0, 0, 1, 1, 0), (1, 0, 0, 0, 1, 0),
        (0, 1, 0, 1, 0, 0), (1, 1, 1, 0, 0, 0), (0, 0, 0, 1, 1, 1),
        (1, 0, 1, 0, 1, 0), (0, 1, 0, 1, 0, 1), (1, 1, 0, 1, 1, 0),
    ]
    gens: list[Permutation] = []
    raw = None
    for v in basis + extra:
        T = symplectic_transvection(fld, J, v)
        assert check_symplectic(fld, J, T)
        gens.append(point_action(fld, T, vectors))
        raw = FiniteGroup(gens, name="psp62 raw")
        if raw.order == 1451520:
            break
    assert raw is not None and raw.order == 1451520, raw and raw.order
    pair = reduce_to_pair(raw, "psp62")
    G = FiniteGroup(pair, name="psp62")
    assert G.order == 1451520
    write_group_file(
        ASSETS / "psp62.grp", "psp62", 63, G, pair,
        comment=(
            "Symplectic group of dimension 6 over GF(2) acting on the 63\n"
            "nonzero vectors; generators were reduced from symplectic\n"
            "transvections x -> x + <x,v> v for the block form ((0,I),(I,0)).\n"
            "Its outer automorphism group is trivial, so no extension is\n"
            "packaged.  Vectors are in lexicographic order (low coordinate\n"
            "first).  Regenerate with tools/make_assets.py."
        ),
    )


def build_m11() -> None:
    a = Permutation.from_cycles("(1 2 3 4 5 6 7 8 9 10 11)", 11)
    b = Permutation.from_cycles("(3 7 11 8)(4 10 5 6)", 11)
    G = FiniteGroup([a, b], name="m11")
    assert G.order == 7920, G.order
    write_group_file(
        ASSETS / "m11.grp", "m11", 11, G, [a, b],
        comment=(
            "Smaller of the two packaged Mathieu groups, degree 11, from its\n"
            "standard generating pair.  Its automorphism group is itself, so\n"
            "no extension is packaged.  Regenerate with tools/make_assets.py."
        ),
    )


# -- the degree-24 extension of the larger Mathieu group -------------------------


def _word_fingerprint(tb, x: int, y_arr: np.ndarray) -> np.ndarray:
    """Orders of a few fixed words in (x, y) for every y in y_arr."""
    xr = tb.table[x]
    y_rows = tb.table[y_arr]
    xy = tb.index.lookup(compose_rows(xr, y_rows))  # x then y
    xy2 = tb.index.lookup(compose_rows(tb.table[xy], y_rows))
    xy3 = tb.index.lookup(compose_rows(tb.table[xy2], y_rows))
    yx = tb.index.lookup(compose_rows(y_rows, xr))
    xyxy2 = tb.index.lookup(compose_rows(tb.table[xy], tb.table[xy2]))
    cols = [tb.orders[w] for w in (y_arr, xy, xy2, xy3, yx, xyxy2)]
    return np.stack(cols, axis=1)


def _extend_to_automorphism(tb, x, y, ximg, yimg) -> np.ndarray | None:
    """phi with phi[g] = image of g under the homomorphism sending
    x -> ximg and y -> yimg, or None when no such automorphism exists."""
    phi = np.full(tb.size, -1, dtype=np.int64)
    phi[tb.identity_idx] = tb.identity_idx
    frontier = np.array([tb.identity_idx], dtype=np.int64)
    pairs = [(x, ximg), (y, yimg)]
    while frontier.size:
        new = []
        for g, gimg in pairs:
            h = tb.mult_many(frontier, g)
            himg = tb.mult_many(phi[frontier], gimg)
            known = phi[h] >= 0
            if np.any(phi[h[known]] != himg[known]):
                return None
            hf, hif = h[~known], himg[~known]
            if hf.size:
                first = np.unique(hf, return_index=True)[1]
                phi[hf[first]] = hif[first]
                # duplicates inside one batch must agree with the assignment
                if np.any(phi[hf] != hif):
                    return None
                new.append(hf[first])
        frontier = np.concatenate(new) if new else np.empty(0, np.int64)
    if np.any(phi < 0):
        return None
    if np.any(np.sort(phi) != np.arange(tb.size)):
        return None  # not bijective
    return phi


def _conjugators(tb, a: int, b: int) -> np.ndarray:
    """All g with g^-1 a g = b."""
    return np.where(tb.conj_fixed_by_all(a) == b)[0]


def _conj_elem(tb, a: int, g: int) -> int:
    part = compose_rows(tb.inv_rows[g], tb.table[a])
    return int(tb.index.lookup(compose_rows(part, tb.table[g])[None, :])[0])


def _is_outer(tb, x: int, y: int, ximg: int, yimg: int) -> bool:
    """True when no single element conjugates (x, y) to (ximg, yimg)."""
    for g in _conjugators(tb, x, ximg):
        if _conj_elem(tb, y, int(g)) == yimg:
            return False
    return True


def _make_involutory(tb, phi: np.ndarray, x: int, y: int) -> np.ndarray:
    """Compose with an inner automorphism so the result squares to identity."""
    ident = np.arange(tb.size)
    if np.array_equal(phi[phi], ident):
        return phi
    # the square is conjugation by some w; find w from its effect on x and y
    xx, yy = int(phi[phi[x]]), int(phi[phi[y]])
    w = next(
        (int(g) for g in _conjugators(tb, x, xx) if _conj_elem(tb, y, int(g)) == yy),
        None,
    )
    assert w is not None, "square of the automorphism is not inner"
    winv = int(tb.inv_idx[w])
    # need u with phi(u) * u = w^-1; then g -> u^-1 phi(g) u squares to identity
    prod = tb.index.lookup(compose_rows(tb.table[phi], tb.table))
    us = np.where(prod == winv)[0]
    assert us.size > 0, "no involutory representative in the outer coset"
    u = int(us[0])
    uinv_row = tb.inv_rows[u]
    urow = tb.table[u]
    part = compose_rows(uinv_row, tb.table[phi])  # u^-1 then phi(g)
    return tb.index.lookup(compose_rows(part, urow))


def build_m12() -> None:
    a12 = Permutation.from_cycles("(1 2 3 4 5 6 7 8 9 10 11)", 12)
    b12 = Permutation.from_cycles("(3 7 11 8)(4 10 5 6)", 12)
    t12 = Permutation.from_cycles("(1 12)(2 11)(3 6)(4 8)(5 9)(7 10)", 12)
    G = FiniteGroup([a12, b12, t12], name="m12")
    assert G.order == 95040, G.order
    tb = G.tables

    # a two-generator pair: first element of order 11 plus the first class
    # representative (smallest classes first) completing the group
    x = int(np.where(tb.orders == 11)[0][0])
    y = None
    for c in sorted(range(tb.class_reps.size), key=lambda c: int(tb.class_sizes[c])):
        rep = int(tb.class_reps[c])
        if rep == tb.identity_idx:
            continue
        if tb.subgroup_closure([x, rep]).size == tb.size:
            y = rep
            break
    assert y is not None
    print(f"  generator pair orders: {int(tb.orders[x])}, {int(tb.orders[y])}")

    fp_ref = _word_fingerprint(tb, x, np.array([y], dtype=np.int64))[0]
    oy = int(tb.orders[y])
    phi = None
    for cx in range(tb.class_reps.size):
        ximg = int(tb.class_reps[cx])
        if int(tb.orders[ximg]) != 11:
            continue
        y_cands = np.where(tb.orders == oy)[0]
        fps = _word_fingerprint(tb, ximg, y_cands)
        y_cands = y_cands[np.all(fps == fp_ref, axis=1)]
        print(f"  11-class rep {ximg}: {y_cands.size} candidates after fingerprints")
        for yimg in y_cands:
            cand = _extend_to_automorphism(tb, x, y, ximg, int(yimg))
            if cand is not None and _is_outer(tb, x, y, ximg, int(yimg)):
                phi = cand
                break
        if phi is not None:
            break
    assert phi is not None, "no outer automorphism found"
    print("  outer automorphism found")

    phi = _make_involutory(tb, phi, x, y)
    assert np.array_equal(phi[phi], np.arange(tb.size)), "twist is not involutory"

    def widen(i: int, j: int) -> Permutation:
        return Permutation(
            tuple(int(v) for v in tb.table[i])
            + tuple(int(v) + 12 for v in tb.table[j])
        )

    socle_gens = [widen(x, int(phi[x])), widen(y, int(phi[y]))]
    socle = FiniteGroup(socle_gens, name="m12 socle")
    assert socle.order == 95040, socle.order
    swap = Permutation(tuple(range(12, 24)) + tuple(range(12)))
    ambient_gens = socle_gens + [swap]
    ambient = FiniteGroup(ambient_gens, name="m12.2")
    assert ambient.order == 190080, ambient.order
    write_group_file(
        ASSETS / "m12.grp", "m12", 24, ambient, ambient_gens, socle, socle_gens,
        comment=(
            "Larger of the two packaged Mathieu groups (degree 12, order\n"
            "95040), embedded diagonally on 12+12 points through a computed\n"
            "involutory outer automorphism and extended by the block swap to\n"
            "its full automorphism group of order 190080.  Points 13..24\n"
            "carry the image of the natural action under that automorphism.\n"
            "Regenerate with tools/make_assets.py."
        ),
    )


def main() -> None:
    ASSETS.mkdir(parents=True, exist_ok=True)
    builders = {
        "psl33": build_psl33,
        "psl34": build_psl34,
        "psu42": build_psu42,
        "psp62": build_psp62,
        "m11": build_m11,
        "m12": build_m12,
    }
    names = sys.argv[1:] or list(builders)
    for name in names:
        print(f"building {name} ...")
        builders[name]()


if __name__ == "__main__":
    main()
