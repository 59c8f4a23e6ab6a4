"""Exact linear algebra over Q on top of the integer kernel.

All spaces of the package (section spaces, local modules, Hilbert
pieces) are stored as `Subspace` values: reduced-row-echelon bases in a
fixed ambient coordinatization.  RREF is canonical for a given row
space, so value equality is basis equality and every downstream choice
is reproducible.
"""

from fractions import Fraction
from math import lcm

from . import kernel

__all__ = ["rref", "Subspace", "reduce_basis", "nullspace", "transpose"]


def _scale_to_int(row):
    den = 1
    for x in row:
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    if den == 1:
        return [x.numerator if isinstance(x, Fraction) else x for x in row]
    return [
        (x.numerator * (den // x.denominator)) if isinstance(x, Fraction) else x * den
        for x in row
    ]


def rref(rows):
    """Reduced row echelon form over Q.

    Returns (rows, pivots) with rows a tuple of Fraction tuples whose
    pivot entries are 1; zero rows are dropped.
    """
    irows = [_scale_to_int(list(r)) for r in rows]
    irows = [r for r in irows if any(r)]
    pivots = kernel.rref_int(irows)
    out = []
    for row, p in zip(irows, pivots):
        piv = row[p]
        out.append(tuple(Fraction(x, piv) for x in row))
    return tuple(out), tuple(pivots)


class Subspace:
    """A linear subspace of Q^n held in reduced row echelon form."""

    __slots__ = ("vectors", "pivots", "ambient_dim")

    def __init__(self, vectors, pivots, ambient_dim):
        self.vectors = vectors
        self.pivots = pivots
        self.ambient_dim = ambient_dim

    @property
    def dim(self):
        return len(self.vectors)

    def reduce(self, vec):
        """Residual of vec after elimination against the basis."""
        vec = list(vec)
        for row, p in zip(self.vectors, self.pivots):
            f = vec[p]
            if f:
                for c in range(p, self.ambient_dim):
                    if row[c]:
                        vec[c] -= f * row[c]
        return tuple(vec)

    def contains(self, vec):
        return not any(self.reduce(vec))

    def __contains__(self, vec):
        return self.contains(vec)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.vectors == other.vectors
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.vectors))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def reduce_basis(vectors, ambient_dim=None):
    """Span of the given vectors as a canonical Subspace."""
    vectors = [tuple(v) for v in vectors]
    if ambient_dim is None:
        if not vectors:
            raise ValueError("ambient dimension required for an empty family")
        ambient_dim = len(vectors[0])
    for v in vectors:
        if len(v) != ambient_dim:
            raise ValueError("vectors share one ambient coordinatization")
    rows, pivots = rref(vectors)
    return Subspace(rows, pivots, ambient_dim)


def transpose(rows, ncols):
    if not rows:
        return []
    return [[row[c] for row in rows] for c in range(ncols)]


def nullspace(rows, ncols):
    """Canonical basis of {x in Q^ncols : A x = 0} for A given by rows."""
    red, pivots = rref(rows)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row, p in zip(red, pivots):
            vec[p] = -row[fc]
        basis.append(vec)
    if not basis:
        return ()
    out, _ = rref(basis)
    return out
