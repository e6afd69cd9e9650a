"""Numpy implementations of the hot kernels (fallback backend).

The compiled backend in _kernels.pyx exposes the same two functions with
identical semantics; nilprob.kernels picks whichever is importable.
"""

from __future__ import annotations

import numpy as np

from .errors import BudgetExceededError
from .rows import compose_rows, hash_multipliers, row_hashes, unique_rows

BACKEND = "python"


def closure_rows(gens: np.ndarray, cap: int) -> np.ndarray:
    """All elements of the group generated by the given rows.

    Breadth-first over right-multiplication by generators.  Output order is
    unspecified; callers sort.  Raises BudgetExceededError past cap elements.
    """
    gens = np.ascontiguousarray(gens, dtype=np.uint8)
    n = gens.shape[1]
    mult = hash_multipliers(n)
    ident = np.arange(n, dtype=np.uint8)[None, :]
    table = unique_rows(np.concatenate([ident, gens]), mult)
    if table.shape[0] > cap:
        raise BudgetExceededError(f"closure exceeded cap {cap}")
    hashes = row_hashes(table, mult)
    order = np.argsort(hashes, kind="stable")
    frontier = table
    while frontier.shape[0]:
        cand = np.concatenate([compose_rows(frontier, g) for g in gens])
        cand = unique_rows(cand, mult)
        h = row_hashes(cand, mult)
        sorted_hashes = hashes[order]
        lo = np.searchsorted(sorted_hashes, h, side="left")
        hi = np.searchsorted(sorted_hashes, h, side="right")
        fresh = np.ones(cand.shape[0], dtype=bool)
        width = hi - lo
        one = width == 1
        if np.any(one):
            known = np.all(table[order[lo[one]]] == cand[one], axis=1)
            fresh[np.where(one)[0][known]] = False
        for i in np.where(width > 1)[0]:
            for k in range(lo[i], hi[i]):
                if np.array_equal(table[order[k]], cand[i]):
                    fresh[i] = False
                    break
        frontier = cand[fresh]
        if frontier.shape[0] == 0:
            break
        if table.shape[0] + frontier.shape[0] > cap:
            raise BudgetExceededError(f"closure exceeded cap {cap}")
        table = np.concatenate([table, frontier])
        hashes = np.concatenate([hashes, row_hashes(frontier, mult)])
        order = np.argsort(hashes, kind="stable")
    return table


def element_orders_rows(table: np.ndarray) -> np.ndarray:
    """Order of each row's permutation (lcm of its cycle lengths)."""
    table = np.ascontiguousarray(table, dtype=np.uint8)
    n_rows, degree = table.shape
    if n_rows == 0:
        return np.zeros(0, dtype=np.int64)
    start = np.arange(degree, dtype=np.uint8)[None, :]
    pos = table
    cycle_len = np.zeros((n_rows, degree), dtype=np.int64)
    done = pos == start
    cycle_len[done] = 1
    k = 1
    while not done.all():
        pos = np.take_along_axis(table, pos.astype(np.intp, copy=False), axis=1)
        k += 1
        hit = (pos == start) & ~done
        cycle_len[hit] = k
        done |= hit
        if k > degree:
            raise AssertionError("cycle scan ran past the degree")
    return np.lcm.reduce(cycle_len, axis=1)
