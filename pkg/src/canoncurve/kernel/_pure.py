"""Pure-Python integer row reduction.

The hot loop of the whole package: every cohomology dimension, colon
module and Hilbert value reduces to computing the reduced row echelon
form of a matrix over Q.  Rows arrive here already scaled to integers
(row scaling does not change the row space).  The elimination is
fraction-free Gauss-Jordan with per-row content stripping, which keeps
entries small without any rational arithmetic in the inner loop.

`_rowreduce.pyx` is the compiled twin of this file; both must produce
identical output.
"""

from math import gcd

BACKEND = "pure"


def _row_content(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


def rref_int(rows):
    """Reduce integer rows in place to echelon form; return pivot columns.

    Output rows are primitive (content 1) with positive pivot entries,
    every entry above and below a pivot is zero, and zero rows are
    removed.  Dividing each row by its pivot therefore gives the unique
    reduced row echelon form of the row space over Q.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = []
    r = 0
    nrows = len(rows)
    for col in range(ncols):
        pr = -1
        for i in range(r, nrows):
            if rows[i][col]:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            rows[pr], rows[r] = rows[r], rows[pr]
        prow = rows[r]
        g = _row_content(prow)
        if g > 1 or prow[col] < 0:
            if prow[col] < 0:
                g = -g
            for c in range(col, ncols):
                prow[c] //= g
        p = prow[col]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
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
                    row[c] //= g
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    del rows[r:]
    return pivots
