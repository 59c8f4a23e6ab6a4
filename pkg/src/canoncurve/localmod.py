"""Fractional modules over the local ring of a singular cluster.

A cluster with r branches lives inside the product of Laurent series
rings in the branch coordinates u_1..u_r.  Every module handled here
(local ring, conductor, maximal ideal, dualizing stalk, fractional
ideal, blowup ring) contains a full tail block

    T(d) = prod_i  u_i^{d_i} k[[u_i]]

for a known exponent vector d, and is determined by finitely many
coefficients below it.  A LocalModule stores exactly that: a canonical
reduced-echelon family of Laurent-polynomial rows supported below the
tail vector, plus the tail vector itself.  All operations (sums,
products, colon quotients, generated modules) compute sound tails for
their results, so every dimension and membership answer is exact; no
result ever depends on a truncation guess.

Raising a tail vector is always legal (it forgets information but the
formulas compensate), which is what the truncation-scale double runs
exercise.
"""

from fractions import Fraction

from .errors import TruncationInsufficient
from .linalg import Subspace, nullspace, reduce_basis

__all__ = [
    "LocalElt", "LocalModule", "canonicalize", "product", "power", "colon",
    "colon_quotient", "module_generated", "algebra_closure", "monomial",
    "unit", "dim_quotient",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class LocalElt:
    """Element of the local Laurent fraction space: one finite Laurent
    polynomial per branch."""

    __slots__ = ("parts",)

    def __init__(self, parts):
        cleaned = []
        for part in parts:
            if isinstance(part, dict):
                items = part.items()
            else:
                items = part
            cleaned.append(tuple(sorted((e, c) for e, c in items if c)))
        self.parts = tuple(cleaned)

    @property
    def nbranches(self):
        return len(self.parts)

    def is_zero(self):
        return all(not p for p in self.parts)

    def val(self, i):
        """Valuation at branch i; None when the branch part is zero."""
        part = self.parts[i]
        return part[0][0] if part else None

    def coefficient(self, i, e):
        for ee, c in self.parts[i]:
            if ee == e:
                return c
        return _ZERO

    def __add__(self, other):
        out = []
        for p, q in zip(self.parts, other.parts):
            d = dict(p)
            for e, c in q:
                d[e] = d.get(e, _ZERO) + c
            out.append(d)
        return LocalElt(out)

    def __neg__(self):
        return LocalElt([[(e, -c) for e, c in p] for p in self.parts])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        if not f:
            return LocalElt([()] * self.nbranches)
        return LocalElt([[(e, c * f) for e, c in p] for p in self.parts])

    def __mul__(self, other):
        out = []
        for p, q in zip(self.parts, other.parts):
            d = {}
            for e1, c1 in p:
                for e2, c2 in q:
                    e = e1 + e2
                    d[e] = d.get(e, _ZERO) + c1 * c2
            out.append(d)
        return LocalElt(out)

    def truncate(self, tails):
        return LocalElt(
            [[(e, c) for e, c in p if e < t] for p, t in zip(self.parts, tails)]
        )

    def restrict(self, branches):
        return LocalElt([self.parts[i] for i in branches])

    def __eq__(self, other):
        return isinstance(other, LocalElt) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        body = " ; ".join(
            " + ".join(f"{c}*u^{e}" for e, c in part) if part else "0"
            for part in self.parts
        )
        return f"LocalElt({body})"


def monomial(nbranches, i, e, c=1):
    parts = [()] * nbranches
    parts[i] = ((e, Fraction(c)),)
    return LocalElt(parts)


def unit(nbranches):
    return LocalElt([((0, _ONE),)] * nbranches)


def _coords(los, his):
    coords = []
    for i, (lo, hi) in enumerate(zip(los, his)):
        for e in range(lo, hi):
            coords.append((i, e))
    return coords


def _vectorize(elt, coords, index):
    vec = [_ZERO] * len(coords)
    for i, part in enumerate(elt.parts):
        for e, c in part:
            k = index.get((i, e))
            if k is None:
                if c:
                    raise ValueError("element support escapes the window")
            else:
                vec[k] = c
    return vec


def _sparsify(vec, coords, nbranches):
    parts = [[] for _ in range(nbranches)]
    for (i, e), c in zip(coords, vec):
        if c:
            parts[i].append((e, c))
    return LocalElt(parts)


class LocalModule:
    """Canonical fractional module: echelon rows below a tail vector."""

    __slots__ = ("nbranches", "rows", "tails")

    def __init__(self, nbranches, rows, tails):
        self.nbranches = nbranches
        self.rows = tuple(rows)
        self.tails = tuple(tails)

    # -- basic data ---------------------------------------------------------

    def vmin(self, i):
        """Least valuation at branch i attained by the module."""
        v = self.tails[i]
        for row in self.rows:
            rv = row.val(i)
            if rv is not None and rv < v:
                v = rv
        return v

    def vmins(self):
        return tuple(self.vmin(i) for i in range(self.nbranches))

    def finite_dim(self):
        return len(self.rows)

    # -- membership ---------------------------------------------------------

    def _window(self, extra_elts=()):
        los = list(self.vmins())
        for elt in extra_elts:
            for i in range(self.nbranches):
                v = elt.val(i)
                if v is not None and v < los[i]:
                    los[i] = v
        coords = _coords(los, self.tails)
        index = {c: k for k, c in enumerate(coords)}
        return coords, index

    def _subspace(self, coords, index):
        vecs = [_vectorize(row, coords, index) for row in self.rows]
        if not vecs:
            return Subspace((), (), len(coords))
        return reduce_basis(vecs, len(coords))

    def contains(self, elt):
        cut = elt.truncate(self.tails)
        if cut.is_zero():
            return True
        coords, index = self._window((cut,))
        space = self._subspace(coords, index)
        return space.contains(_vectorize(cut, coords, index))

    def contains_module(self, other):
        for i in range(self.nbranches):
            for e in range(other.tails[i], self.tails[i]):
                if not self.contains(monomial(self.nbranches, i, e)):
                    return False
        return all(self.contains(row) for row in other.rows)

    # -- canonical form manipulation -----------------------------------------

    def raise_tails(self, new_tails):
        """Weaken the tail bound; legal whenever new_tails >= tails."""
        if any(n < t for n, t in zip(new_tails, self.tails)):
            raise ValueError("tails may only be raised")
        if tuple(new_tails) == self.tails:
            return self
        gens = list(self.rows)
        for i in range(self.nbranches):
            for e in range(self.tails[i], new_tails[i]):
                gens.append(monomial(self.nbranches, i, e))
        return canonicalize(self.nbranches, gens, new_tails)

    def equals(self, other):
        if self.nbranches != other.nbranches:
            return False
        t = tuple(max(a, b) for a, b in zip(self.tails, other.tails))
        a = self.raise_tails(t)
        b = other.raise_tails(t)
        return a.rows == b.rows

    def restrict(self, branches):
        rows = [row.restrict(branches) for row in self.rows]
        tails = tuple(self.tails[i] for i in branches)
        return canonicalize(len(branches), rows, tails)

    def __repr__(self):
        return (
            f"LocalModule(branches={self.nbranches}, "
            f"finite_rows={len(self.rows)}, tails={self.tails})"
        )


def canonicalize(nbranches, gens, tails):
    """Canonical LocalModule spanned by gens together with T(tails).

    T(tails) must be contained in the intended module; generator
    coefficients at or above the tails are discarded (they are absorbed
    by the tail block).
    """
    tails = tuple(tails)
    cut = [g.truncate(tails) for g in gens]
    cut = [g for g in cut if not g.is_zero()]
    if not cut:
        return LocalModule(nbranches, (), tails)
    los = list(tails)
    for g in cut:
        for i in range(nbranches):
            v = g.val(i)
            if v is not None and v < los[i]:
                los[i] = v
    coords = _coords(los, tails)
    index = {c: k for k, c in enumerate(coords)}
    vecs = [_vectorize(g, coords, index) for g in cut]
    space = reduce_basis(vecs, len(coords))
    rows = [_sparsify(v, coords, nbranches) for v in space.vectors]
    return LocalModule(nbranches, rows, tails)


def dim_quotient(big, small, check=True):
    """dim(big/small) for nested modules, computed from canonical data."""
    if check and not big.contains_module(small):
        raise ValueError("quotient of non-nested modules")
    d = len(big.rows) - len(small.rows)
    for a, b in zip(big.tails, small.tails):
        d += b - a
    return d


def product(m, w):
    """Module product m*w inside the Laurent fraction space."""
    vm, vw = m.vmins(), w.vmins()
    tails = tuple(
        min(m.tails[i] + vw[i], w.tails[i] + vm[i]) for i in range(m.nbranches)
    )
    gens = [a * b for a in m.rows for b in w.rows]
    return canonicalize(m.nbranches, gens, tails)


def power(m, n):
    if n < 1:
        raise ValueError("positive power required")
    out = m
    for _ in range(n - 1):
        out = product(out, m)
    return out


def colon(numerator, denominator):
    """The colon module (numerator : denominator).

    Returns {x : x * denominator is contained in numerator}, exactly.
    """
    nb = numerator.nbranches
    vn = numerator.vmins()
    vd = denominator.vmins()
    lo_x = tuple(vn[i] - vd[i] for i in range(nb))
    hi_x = tuple(numerator.tails[i] - vd[i] for i in range(nb))

    xcoords = _coords(lo_x, hi_x)
    if not xcoords:
        return LocalModule(nb, (), hi_x)
    gens = list(denominator.rows)
    for i in range(nb):
        # tail monomials of the denominator that still constrain x
        for e in range(denominator.tails[i], numerator.tails[i] - lo_x[i]):
            gens.append(monomial(nb, i, e))

    # window for reduction inside the numerator
    prods = {}
    for k, (i, e) in enumerate(xcoords):
        xk = monomial(nb, i, e)
        prods[k] = [xk * g for g in gens]
    flat = [p for plist in prods.values() for p in plist]
    coords, index = numerator._window(flat)
    space = numerator._subspace(coords, index)

    cond_rows = []  # one row per unknown: concatenated residuals
    for k in range(len(xcoords)):
        res = []
        for p in prods[k]:
            res.extend(space.reduce(_vectorize(p.truncate(numerator.tails), coords, index)))
        cond_rows.append(res)
    ncond = len(cond_rows[0]) if cond_rows else 0
    matrix = [[cond_rows[k][j] for k in range(len(xcoords))] for j in range(ncond)]
    sols = nullspace(matrix, len(xcoords))
    rows = [_sparsify(v, xcoords, nb) for v in sols]
    return canonicalize(nb, rows, hi_x)


def colon_quotient(numerator, denominator, certify=True):
    """Colon module with a stability certificate.

    The quotient is recomputed after raising all tail data one full
    window higher; a canonical-form disagreement raises
    TruncationInsufficient.
    """
    first = colon(numerator, denominator)
    if certify:
        spread = [
            numerator.tails[i] - min(numerator.vmin(i), denominator.vmin(i), 0) + 1
            for i in range(numerator.nbranches)
        ]
        big_n = numerator.raise_tails(
            tuple(numerator.tails[i] + spread[i] for i in range(numerator.nbranches))
        )
        big_d = denominator.raise_tails(
            tuple(denominator.tails[i] + spread[i] for i in range(denominator.nbranches))
        )
        second = colon(big_n, big_d)
        if not first.equals(second):
            raise TruncationInsufficient(
                "colon quotient unstable under doubled truncation order"
            )
    return first


def module_generated(ring, elts):
    """The ring-module generated by the given elements.

    Every generator must have finite valuation on each branch (global
    rational functions restrict to such elements).
    """
    elts = [e for e in elts if not e.is_zero()]
    if not elts:
        raise ValueError("no nonzero generators")
    nb = ring.nbranches
    tails = []
    for i in range(nb):
        best = None
        for z in elts:
            v = z.val(i)
            if v is not None:
                cand = ring.tails[i] + v
                best = cand if best is None else min(best, cand)
        if best is None:
            raise ValueError("generators all vanish on a branch")
        tails.append(best)
    gens = [r * z for r in ring.rows for z in elts]
    gens.extend(elts)  # 1 is in every ring handled here
    return canonicalize(nb, gens, tuple(tails))


def algebra_closure(ring, elts):
    """Smallest ring containing `ring` and the given integral elements.

    Iterates products until the span stabilizes; terminates because
    everything lives between the ring and its normalization.
    """
    nb = ring.nbranches
    current = canonicalize(nb, list(ring.rows) + list(elts), ring.tails)
    while True:
        gens = list(current.rows)
        gens.extend(a * b for a in current.rows for b in current.rows)
        bigger = canonicalize(nb, gens, current.tails)
        if bigger.rows == current.rows:
            return current
        current = bigger
