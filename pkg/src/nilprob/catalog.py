"""Named group constructions and generator-file loading.

Catalog specs are strings like "sym:5", "psl2:8", or "file:PATH".  The
linear groups act on the projective line over a small field: point i is
the field element with code i-1 and point q+2... the last point is the
point at infinity.  File specs load a .grp text file; bare file names are
also looked up in the packaged assets directory (override the directory
with the NILPROB_ASSETS environment variable).

Almost-simple pairs (ambient group together with its simple socle) come
from almost_simple_pair: symmetric over alternating, the projective
semilinear group over its projective special subgroup, or a file that
carries socle generator lines.  Loaded pairs are verified eagerly: orders
must match the declared values, the socle must be normal, nonabelian,
simple, and have trivial centralizer in the ambient group.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import GroupFormatError, VerificationError
from .fields import small_field
from .group import FiniteGroup
from .perm import Permutation

__all__ = [
    "group_from_spec",
    "almost_simple_pair",
    "AlmostSimplePair",
    "load_group_file",
    "assets_dir",
    "sym_group",
    "alt_group",
    "cyclic_group",
    "dihedral_group",
    "projective_group",
]

_SPEC_RE = re.compile(r"^([a-z0-9]+):(.+)$")

_FIELD_SIZES = (2, 3, 4, 5, 7, 8, 9, 11, 13)


def assets_dir() -> Path:
    env = os.environ.get("NILPROB_ASSETS")
    if env:
        return Path(env)
    return Path(__file__).parent / "assets"


def sym_group(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupFormatError("sym:n needs n >= 1")
    if n == 1:
        return FiniteGroup([Permutation.identity(1)], name="sym:1")
    gens = [Permutation.from_cycles("(1 2)", n)]
    if n > 2:
        gens.append(Permutation.from_cycles(_long_cycle(1, n), n))
    return FiniteGroup(gens, name=f"sym:{n}")


def alt_group(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupFormatError("alt:n needs n >= 1")
    if n <= 2:
        return FiniteGroup([Permutation.identity(max(n, 1))], name=f"alt:{n}")
    gens = [Permutation.from_cycles("(1 2 3)", n)]
    if n > 3:
        start = 1 if n % 2 else 2
        gens.append(Permutation.from_cycles(_long_cycle(start, n), n))
    return FiniteGroup(gens, name=f"alt:{n}")


def _long_cycle(start: int, n: int) -> str:
    return "(" + " ".join(str(i) for i in range(start, n + 1)) + ")"


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupFormatError("cyc:n needs n >= 1")
    if n == 1:
        return FiniteGroup([Permutation.identity(1)], name="cyc:1")
    return FiniteGroup(
        [Permutation.from_cycles(_long_cycle(1, n), n)], name=f"cyc:{n}"
    )


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n."""
    if n < 3:
        raise GroupFormatError("dih:n needs n >= 3")
    rot = Permutation.from_cycles(_long_cycle(1, n), n)
    refl = Permutation(tuple((n - i) % n for i in range(n)))
    return FiniteGroup([rot, refl], name=f"dih:{n}")


def projective_group(q: int, kind: str) -> FiniteGroup:
    """Action on the q+1 points of the projective line over GF(q).

    kind "psl2": generated by the basis translations and the negated
    inversion; "pgl2": adds scaling by a primitive element; "pgammal2":
    adds the field automorphism.
    """
    if q not in _FIELD_SIZES:
        raise GroupFormatError(f"unsupported field size {q}")
    fld = small_field(q)
    degree = q + 1
    inf = q  # 0-indexed point for the point at infinity

    def as_perm(fn) -> Permutation:
        return Permutation(tuple(fn(i) for i in range(degree)))

    def translation(b: int):
        def fn(i: int) -> int:
            if i == inf:
                return inf
            return fld.add(i, b)

        return fn

    def neg_inversion(i: int) -> int:
        # z -> -1/z
        if i == inf:
            return 0
        if i == 0:
            return inf
        return fld.neg(fld.inv(i))

    def scaling(lam: int):
        def fn(i: int) -> int:
            if i == inf:
                return inf
            return fld.mul(lam, i)

        return fn

    def frobenius(i: int) -> int:
        if i == inf:
            return inf
        return fld.frobenius(i)

    # basis of GF(p^k) over GF(p): codes 1, p, p^2, ... (digit positions)
    basis = [fld.p**j for j in range(fld.k)]
    gens = [as_perm(translation(b)) for b in basis]
    gens.append(as_perm(neg_inversion))
    if kind in ("pgl2", "pgammal2"):
        gens.append(as_perm(scaling(fld.primitive_element())))
    if kind == "pgammal2":
        gens.append(as_perm(frobenius))
    name = f"{kind}:{q}"
    G = FiniteGroup(gens, name=name)
    base = q * (q * q - 1)
    expected = {
        "psl2": base // (2 if q % 2 else 1),
        "pgl2": base,
        "pgammal2": base * fld.k,
    }[kind]
    if G.order != expected:
        raise VerificationError(
            f"{name}: built order {G.order}, expected {expected}"
        )
    return G


def group_from_spec(spec: str) -> FiniteGroup:
    """Build a group from a catalog spec like "sym:5" or "file:PATH"."""
    m = _SPEC_RE.match(spec.strip().lower()) or _SPEC_RE.match(spec.strip())
    if not m:
        raise GroupFormatError(f"bad group spec {spec!r} (expected kind:arg)")
    kind, arg = m.group(1), m.group(2)
    if kind == "file":
        # preserve the original case of the path
        raw = spec.strip()[5:]
        return load_group_file(_resolve_path(raw)).ambient
    try:
        n = int(arg)
    except ValueError:
        raise GroupFormatError(f"bad numeric argument in {spec!r}") from None
    if kind == "sym":
        return sym_group(n)
    if kind == "alt":
        return alt_group(n)
    if kind == "cyc":
        return cyclic_group(n)
    if kind == "dih":
        return dihedral_group(n)
    if kind in ("psl2", "pgl2", "pgammal2"):
        return projective_group(n, kind)
    raise GroupFormatError(f"unknown group kind {kind!r}")


# -- generator files ----------------------------------------------------------


@dataclass(frozen=True)
class AlmostSimplePair:
    """An ambient group with a distinguished simple socle of the same degree."""

    ambient: FiniteGroup
    socle: FiniteGroup
    name: str


@dataclass(frozen=True)
class LoadedGroup:
    ambient: FiniteGroup
    socle: FiniteGroup | None
    name: str


def _resolve_path(raw: str) -> Path:
    p = Path(raw)
    if p.exists():
        return p
    if not raw.endswith(".grp"):
        candidate = assets_dir() / f"{raw}.grp"
        if candidate.exists():
            return candidate
    candidate = assets_dir() / raw
    if candidate.exists():
        return candidate
    raise GroupFormatError(f"group file not found: {raw}")


def _parse_perm(token: str, degree: int) -> Permutation:
    token = token.strip()
    if token.startswith("("):
        return Permutation.from_cycles(token, degree)
    return Permutation.from_image_text(token)


def load_group_file(path: Path | str) -> LoadedGroup:
    """Parse and eagerly verify a .grp file.

    Lines: "name LABEL", "degree N", "order N", "gen PERM",
    and optionally "socle-order N" with "socle-gen PERM" lines.
    Permutations are cycle strings or 1-indexed image lists.
    """
    path = Path(path)
    name = path.stem
    degree: int | None = None
    order: int | None = None
    socle_order: int | None = None
    gens: list[Permutation] = []
    socle_gens: list[Permutation] = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if key == "name":
                name = rest
            elif key == "degree":
                degree = int(rest)
            elif key == "order":
                order = int(rest)
            elif key == "socle-order":
                socle_order = int(rest)
            elif key == "gen":
                if degree is None:
                    raise GroupFormatError("gen line before degree line")
                gens.append(_parse_perm(rest, degree))
            elif key == "socle-gen":
                if degree is None:
                    raise GroupFormatError("socle-gen line before degree line")
                socle_gens.append(_parse_perm(rest, degree))
            else:
                raise GroupFormatError(f"unknown key {key!r}")
        except (ValueError, GroupFormatError) as exc:
            raise GroupFormatError(f"{path}:{lineno}: {exc}") from None
    if degree is None or order is None or not gens:
        raise GroupFormatError(f"{path}: needs degree, order, and gen lines")
    if (socle_order is None) != (not socle_gens):
        raise GroupFormatError(
            f"{path}: socle-order and socle-gen lines must come together"
        )

    ambient = FiniteGroup(gens, name=name)
    if ambient.order != order:
        raise VerificationError(
            f"{path}: generated order {ambient.order}, declared {order}"
        )
    socle: FiniteGroup | None = None
    if socle_gens:
        socle = FiniteGroup(socle_gens, name=f"{name} socle")
        if socle.order != socle_order:
            raise VerificationError(
                f"{path}: socle order {socle.order}, declared {socle_order}"
            )
        _verify_socle(ambient, socle, str(path))
    return LoadedGroup(ambient=ambient, socle=socle, name=name)


def _verify_socle(ambient: FiniteGroup, socle: FiniteGroup, label: str) -> None:
    tb = ambient.tables
    sub_idx = ambient.subgroup_indices(socle.generators)
    if sub_idx.size != socle.order:
        raise VerificationError(f"{label}: socle closure disagrees inside ambient")
    in_sub = np.zeros(tb.size, dtype=bool)
    in_sub[sub_idx] = True
    for s in socle.generators:
        si = ambient.index(s)
        for g in tb.gen_idx:
            c = int(tb.conj_many(np.array([si], dtype=np.int64), int(g))[0])
            if not in_sub[c]:
                raise VerificationError(f"{label}: socle is not normal")
    if socle.is_abelian():
        raise VerificationError(f"{label}: socle is abelian")
    if not socle.is_simple():
        raise VerificationError(f"{label}: socle is not simple")
    cent = np.ones(tb.size, dtype=bool)
    for s in socle.generators:
        cent &= tb.centralizer_mask(ambient.index(s))
    if int(cent.sum()) != 1:
        raise VerificationError(
            f"{label}: socle centralizer in the ambient group is nontrivial"
        )


def almost_simple_pair(spec: str) -> AlmostSimplePair:
    """Ambient-with-socle pair for a spec naming the socle.

    "alt:n" (n >= 5): the symmetric group over the alternating group,
    except n = 6 where the full automorphism group is the semilinear
    group over GF(9) acting on 10 points.  "psl2:q": the semilinear
    group over the projective special linear group.  "file:PATH": a
    generator file with socle lines (socle = ambient when absent).
    """
    spec = spec.strip()
    m = _SPEC_RE.match(spec.lower()) or _SPEC_RE.match(spec)
    if not m:
        raise GroupFormatError(f"bad pair spec {spec!r}")
    kind, arg = m.group(1), m.group(2)
    if kind == "file":
        loaded = load_group_file(_resolve_path(spec[5:]))
        socle = loaded.socle if loaded.socle is not None else loaded.ambient
        return AlmostSimplePair(loaded.ambient, socle, loaded.name)
    n = int(arg)
    if kind == "alt":
        if n < 5:
            raise GroupFormatError("almost-simple pairs need alt:n with n >= 5")
        if n == 6:
            return AlmostSimplePair(
                projective_group(9, "pgammal2"),
                projective_group(9, "psl2"),
                "alt:6",
            )
        return AlmostSimplePair(sym_group(n), alt_group(n), f"alt:{n}")
    if kind == "psl2":
        if n not in (4, 5, 7, 8, 9, 11, 13):
            raise GroupFormatError(f"no almost-simple pair for psl2:{n}")
        return AlmostSimplePair(
            projective_group(n, "pgammal2"),
            projective_group(n, "psl2"),
            f"psl2:{n}",
        )
    raise GroupFormatError(f"no almost-simple pair for spec {spec!r}")
