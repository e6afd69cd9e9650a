"""Low-level helpers for permutation tables stored as (N, degree) uint8 arrays.

Row r encodes the permutation i -> r[i] (0-indexed).  Composition is
left-to-right throughout: compose(a, b) applies a, then b.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "as_rows",
    "compose_rows",
    "inverse_rows",
    "row_hashes",
    "hash_multipliers",
    "RowIndex",
    "lex_sort_rows",
    "unique_rows",
]

DTYPE = np.uint8
MAX_DEGREE = 255

_HASH_SEED = 0x5EEDED


def hash_multipliers(degree: int) -> np.ndarray:
    """Deterministic odd 64-bit multipliers, one per column."""
    rng = np.random.Generator(np.random.PCG64(_HASH_SEED))
    mult = rng.integers(1, 2**63, size=degree, dtype=np.uint64)
    return (mult << np.uint64(1)) | np.uint64(1)


def as_rows(perms, degree: int) -> np.ndarray:
    """Stack permutations (objects with .images) into a table."""
    if degree > MAX_DEGREE:
        raise ValueError(f"degree {degree} exceeds table limit {MAX_DEGREE}")
    out = np.empty((len(perms), degree), dtype=DTYPE)
    for i, p in enumerate(perms):
        out[i] = p.images
    return out


def compose_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise left-to-right composition; either side may be a single row."""
    if a.ndim == 1 and b.ndim == 1:
        return b[a]
    if a.ndim == 1:  # fixed a, many b: result[j] = b[a[j]] per row
        return b[:, a]
    if b.ndim == 1:  # many a, fixed b
        return b[a]
    return np.take_along_axis(b, a.astype(np.intp, copy=False), axis=1)


def inverse_rows(a: np.ndarray) -> np.ndarray:
    if a.ndim == 1:
        out = np.empty_like(a)
        out[a] = np.arange(a.shape[0], dtype=DTYPE)
        return out
    n = a.shape[1]
    out = np.empty_like(a)
    rows = np.arange(a.shape[0])[:, None]
    out[rows, a] = np.arange(n, dtype=DTYPE)[None, :]
    return out


def row_hashes(rows: np.ndarray, mult: np.ndarray) -> np.ndarray:
    """64-bit mixing hash per row (exact lookups verify bytes afterwards)."""
    if rows.ndim == 1:
        rows = rows[None, :]
    acc = np.zeros(rows.shape[0], dtype=np.uint64)
    for j in range(rows.shape[1]):
        acc += rows[:, j].astype(np.uint64) * mult[j]
    acc ^= acc >> np.uint64(33)
    acc *= np.uint64(0xFF51AFD7ED558CCD)
    acc ^= acc >> np.uint64(33)
    return acc


def lex_sort_rows(rows: np.ndarray) -> np.ndarray:
    """Indices that sort rows lexicographically (leftmost column major)."""
    return np.lexsort(rows.T[::-1])


class RowIndex:
    """Exact membership/position lookup over a fixed table of rows."""

    def __init__(self, table: np.ndarray):
        self.table = table
        self.mult = hash_multipliers(table.shape[1])
        self.hashes = row_hashes(table, self.mult)
        self.order = np.argsort(self.hashes, kind="stable")
        self.sorted_hashes = self.hashes[self.order]

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Positions of rows in the table; -1 where absent."""
        if rows.ndim == 1:
            rows = rows[None, :]
        h = row_hashes(rows, self.mult)
        lo = np.searchsorted(self.sorted_hashes, h, side="left")
        hi = np.searchsorted(self.sorted_hashes, h, side="right")
        out = np.full(rows.shape[0], -1, dtype=np.int64)
        width = hi - lo
        # almost every hash bucket has width 1: verify those in bulk
        one = width == 1
        if np.any(one):
            cand = self.order[lo[one]]
            ok = np.all(self.table[cand] == rows[one], axis=1)
            pos = np.where(one)[0][ok]
            out[pos] = cand[ok]
        multi = np.where(width > 1)[0]
        for i in multi:
            for k in range(lo[i], hi[i]):
                j = self.order[k]
                if np.array_equal(self.table[j], rows[i]):
                    out[i] = j
                    break
        return out

    def position(self, row: np.ndarray) -> int:
        pos = int(self.lookup(row[None, :])[0])
        if pos < 0:
            raise KeyError("row not in table")
        return pos

    def contains(self, rows: np.ndarray) -> np.ndarray:
        return self.lookup(rows) >= 0


def unique_rows(rows: np.ndarray, mult: np.ndarray) -> np.ndarray:
    """Exact row dedupe (hash-sort, then byte-verify within equal-hash runs)."""
    if rows.shape[0] <= 1:
        return rows
    h = row_hashes(rows, mult)
    order = np.argsort(h, kind="stable")
    h = h[order]
    rows = rows[order]
    boundary = np.empty(rows.shape[0], dtype=bool)
    boundary[0] = True
    boundary[1:] = h[1:] != h[:-1]
    if np.all(boundary):
        return rows
    keep = boundary.copy()
    run_starts = np.where(boundary)[0]
    run_ends = np.append(run_starts[1:], rows.shape[0])
    for s, e in zip(run_starts, run_ends):
        if e - s == 1:
            continue
        kept: list[int] = [s]
        for i in range(s + 1, e):
            if not any(np.array_equal(rows[i], rows[j]) for j in kept):
                kept.append(i)
                keep[i] = True
    return rows[keep]
