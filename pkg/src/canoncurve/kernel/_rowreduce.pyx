# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of kernel._pure.

Entries are arbitrary-precision Python ints; Cython removes the
interpreter overhead of the elimination loops.  Must produce output
identical to the pure version.
"""

from math import gcd

BACKEND = "compiled"


cdef object _row_content(list row):
    cdef Py_ssize_t i, n = len(row)
    g = 0
    for i in range(n):
        x = row[i]
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


def rref_int(list rows):
    """Same contract as canoncurve.kernel._pure.rref_int."""
    cdef Py_ssize_t ncols, nrows, r, col, i, c, pr
    if not rows:
        return []
    ncols = len(<list>rows[0])
    nrows = len(rows)
    pivots = []
    r = 0
    for col in range(ncols):
        pr = -1
        for i in range(r, nrows):
            if (<list>rows[i])[col]:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            tmp = rows[pr]
            rows[pr] = rows[r]
            rows[r] = tmp
        prow = <list>rows[r]
        g = _row_content(prow)
        if g > 1 or prow[col] < 0:
            if prow[col] < 0:
                g = -g
            for c in range(col, ncols):
                prow[c] = prow[c] // g
        p = prow[col]
        for i in range(nrows):
            if i == r:
                continue
            row = <list>rows[i]
            f = row[col]
            if not f:
                continue
            # rows above the pivot may hold entries in earlier free
            # columns, so the whole row must be scaled
            for c in range(ncols):
                row[c] = row[c] * p - prow[c] * f
            g = _row_content(row)
            if g > 1:
                for c in range(ncols):
                    row[c] = row[c] // g
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    del rows[r:]
    return pivots
