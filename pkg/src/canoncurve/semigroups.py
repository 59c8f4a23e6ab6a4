"""Numerical semigroup arithmetic.

Monomial one-branch singularities are described by their value
semigroups; gaps count the delta invariant and pseudo-Frobenius numbers
count the Cohen-Macaulay type, which gives the tests an oracle that is
independent of the module-theoretic computations.
"""

from math import gcd

from .errors import NotASemigroup

__all__ = [
    "semigroup_elements", "gaps", "frobenius", "conductor_exponent",
    "pseudo_frobenius", "semigroup_type",
]


def _reachable(generators, bound):
    reach = [False] * (bound + 1)
    reach[0] = True
    for g in sorted(generators):
        for n in range(g, bound + 1):
            if reach[n - g]:
                reach[n] = True
    return reach


def semigroup_elements(generators, bound=None):
    """Sorted elements of <generators> up to (and including) the conductor,
    or up to `bound` when given."""
    generators = sorted({int(g) for g in generators if int(g) > 0})
    if not generators:
        raise NotASemigroup("no positive generators")
    g = 0
    for x in generators:
        g = gcd(g, x)
    if g != 1:
        raise NotASemigroup(f"generators share the common divisor {g}")
    if bound is None:
        bound = generators[0] * generators[-1] + 1
    reach = _reachable(generators, bound)
    return [n for n, ok in enumerate(reach) if ok]


def gaps(generators):
    """The finite complement of the semigroup in the nonnegative integers."""
    elems = semigroup_elements(generators)
    present = set(elems)
    return [n for n in range(max(elems) + 1) if n not in present]


def frobenius(generators):
    """Largest integer not in the semigroup (-1 for the full semigroup)."""
    gp = gaps(generators)
    return gp[-1] if gp else -1


def conductor_exponent(generators):
    return frobenius(generators) + 1


def pseudo_frobenius(generators):
    """Gaps x with x + s in S for every nonzero s in S."""
    c = conductor_exponent(generators)
    elems = set(semigroup_elements(generators, bound=c + max(generators) + 1))

    def member(n):
        return n >= c or n in elems

    return [x for x in gaps(generators) if all(member(x + g) for g in generators)]


def semigroup_type(generators):
    return len(pseudo_frobenius(generators))
