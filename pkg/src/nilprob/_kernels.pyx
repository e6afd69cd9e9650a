# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled hot kernels: group closure over a row table, element orders.

Same contracts as nilprob._kernels_py; selected by nilprob.kernels.
"""

import numpy as np

from .errors import BudgetExceededError

BACKEND = "compiled"


cdef inline unsigned long long _hash_at(unsigned char[:, ::1] rows, Py_ssize_t i, Py_ssize_t n) nogil:
    cdef unsigned long long h = 0xCBF29CE484222325ULL
    cdef Py_ssize_t j
    for j in range(n):
        h ^= rows[i, j]
        h *= 0x100000001B3ULL
    h ^= h >> 33
    h *= 0xFF51AFD7ED558CCDULL
    h ^= h >> 33
    return h


cdef inline bint _equal_at(unsigned char[:, ::1] a, Py_ssize_t ia,
                           unsigned char[:, ::1] b, Py_ssize_t ib,
                           Py_ssize_t n) nogil:
    cdef Py_ssize_t j
    for j in range(n):
        if a[ia, j] != b[ib, j]:
            return False
    return True


def closure_rows(gens, long long cap):
    """All elements of <gens>; BFS insertion order; errors past cap elements."""
    g_arr = np.ascontiguousarray(gens, dtype=np.uint8)
    cdef unsigned char[:, ::1] g = g_arr
    cdef Py_ssize_t n = g.shape[1]
    cdef Py_ssize_t n_gens = g.shape[0]
    if n_gens == 0:
        raise ValueError("need at least one generator")

    cdef Py_ssize_t capacity = 1024
    table_arr = np.empty((capacity, n), dtype=np.uint8)
    cdef unsigned char[:, ::1] tbl = table_arr
    cdef Py_ssize_t slots = 4096
    ht_arr = np.full(slots, -1, dtype=np.int64)
    cdef long long[::1] slot = ht_arr

    cdef Py_ssize_t count = 0
    cdef Py_ssize_t head = 0
    cdef unsigned long long h, mask
    cdef Py_ssize_t pos, i, j
    cdef Py_ssize_t gi
    cdef bint found

    scratch_arr = np.empty((1, n), dtype=np.uint8)
    cdef unsigned char[:, ::1] buf = scratch_arr

    mask = slots - 1
    for j in range(n):
        tbl[0, j] = <unsigned char> j
    h = _hash_at(tbl, 0, n)
    slot[h & mask] = 0
    count = 1

    while head < count:
        for gi in range(n_gens):
            for j in range(n):
                buf[0, j] = g[gi, tbl[head, j]]
            h = _hash_at(buf, 0, n)
            pos = h & mask
            found = False
            while slot[pos] != -1:
                if _equal_at(tbl, slot[pos], buf, 0, n):
                    found = True
                    break
                pos = (pos + 1) & mask
            if found:
                continue
            if count >= cap:
                raise BudgetExceededError(f"closure exceeded cap {cap}")
            if count == capacity:
                capacity *= 2
                table_arr = np.concatenate(
                    [table_arr, np.empty((capacity - count, n), dtype=np.uint8)]
                )
                tbl = table_arr
            for j in range(n):
                tbl[count, j] = buf[0, j]
            slot[pos] = count
            count += 1
            if count * 2 >= slots:
                slots *= 2
                mask = slots - 1
                ht_arr = np.full(slots, -1, dtype=np.int64)
                slot = ht_arr
                for i in range(count):
                    h = _hash_at(tbl, i, n)
                    pos = h & mask
                    while slot[pos] != -1:
                        pos = (pos + 1) & mask
                    slot[pos] = i
        head += 1
    return table_arr[:count].copy()


def element_orders_rows(table):
    """Order of each row (lcm of cycle lengths)."""
    t_arr = np.ascontiguousarray(table, dtype=np.uint8)
    cdef unsigned char[:, ::1] t = t_arr
    cdef Py_ssize_t n_rows = t.shape[0]
    cdef Py_ssize_t n = t.shape[1]
    out_arr = np.empty(n_rows, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef Py_ssize_t i, j, p
    cdef long long order, a, b, length
    cdef unsigned char seen[256]

    for i in range(n_rows):
        for j in range(n):
            seen[j] = 0
        order = 1
        for j in range(n):
            if seen[j]:
                continue
            length = 0
            p = j
            while not seen[p]:
                seen[p] = 1
                length += 1
                p = t[i, p]
            a = order
            b = length
            while b:
                a, b = b, a % b
            order = order // a * length
        out[i] = order
    return out_arr
