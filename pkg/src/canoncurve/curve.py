"""Curves as gluing data on the projective line.

A curve is a finite set of singular clusters.  Each cluster glues a few
branch points of the line into one singular point, described by its
conductor exponents and a basis of the local ring modulo the conductor.
The point at infinity stays smooth and unused, which keeps one global
affine chart for every section-space computation.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import localmod, semigroups
from .errors import (
    ConductorNotExact, DegreeTooSmall, GenusTooSmall, NotARing, NotASemigroup,
    NotLocal, TruncationInsufficient,
)
from .localmod import LocalElt, LocalModule, canonicalize, monomial, unit
from .rational import Poly, RatFunc, expand_at

__all__ = [
    "Cluster", "CurveModel", "ClusterInvariants", "make_cluster",
    "validate_curve", "cluster_invariants", "genus", "serre_contract",
    "cone_curve",
]


@dataclass(frozen=True)
class Cluster:
    """One singular point: branch points, conductor exponents and the
    local ring modulo the conductor."""

    name: str
    points: tuple          # branch points a_1..a_r, distinct Fractions
    conductor: tuple       # exponents c_1..c_r >= 1
    ring: LocalModule      # canonical, tails == conductor
    kind: str = "explicit"
    semigroup: tuple = ()  # generators, when the cluster came from one

    @property
    def nbranches(self):
        return len(self.points)

    def obar(self):
        """Direct image of the structure sheaf upstairs: the full tail block."""
        return LocalModule(self.nbranches, (), (0,) * self.nbranches)

    def conductor_module(self):
        return LocalModule(self.nbranches, (), self.conductor)

    def maximal_ideal(self):
        """Elements of the local ring with vanishing constant part."""
        rows = []
        for row in self.ring.rows:
            c0 = row.coefficient(0, 0)
            if c0:
                one = unit(self.nbranches)
                rows.append(row - one.scale(c0))
            else:
                rows.append(row)
        return canonicalize(self.nbranches, rows, self.conductor)

    def d_dim(self):
        """dim of the local ring modulo the conductor."""
        return len(self.ring.rows)

    def delta(self):
        return sum(self.conductor) - self.d_dim()

    def series_elt(self, f, extra=0):
        """Expansions of a rational function along the branches, exact
        through the conductor window (plus `extra`)."""
        parts = []
        for a, c in zip(self.points, self.conductor):
            s = expand_at(f, a, c + extra)
            parts.append([(e, co) for e, co in zip(range(s.lo, s.order), s.coeffs)])
        return LocalElt(parts)

    def monomial_value_sets(self):
        """Exponent supports of the ring rows, when every row is a monomial;
        None otherwise."""
        vals = []
        for row in self.ring.rows:
            support = [(i, e) for i, part in enumerate(row.parts) for e, _ in part]
            vals.append(support)
        return vals


@dataclass(frozen=True)
class ClusterInvariants:
    delta: int
    ring_dim: int        # dim of local ring mod conductor
    multiplicity: int
    embdim: int
    eta: int


@dataclass(frozen=True)
class CurveModel:
    """A complete integral curve with rational normalization."""

    clusters: tuple
    min_genus: int = 2
    scale: int = 1       # truncation scale for the windowed double checks

    @property
    def nclusters(self):
        return len(self.clusters)

    def branch_points(self):
        return [a for cl in self.clusters for a in cl.points]

    def conductor_poly(self):
        """Global conductor polynomial: product of (t - a_i)^{c_i}."""
        p = Poly.const(1)
        for cl in self.clusters:
            for a, c in zip(cl.points, cl.conductor):
                p = p * (Poly((-a, 1)) ** c)
        return p

    def max_conductor(self):
        return max((max(cl.conductor) for cl in self.clusters), default=0)

    def base_order(self):
        """Window used for the validation double runs."""
        return self.scale * (4 * self.max_conductor() + 2)

    def with_scale(self, scale):
        return CurveModel(self.clusters, self.min_genus, scale)


def genus(curve):
    """Arithmetic genus: the sum of the cluster delta invariants."""
    return sum(cl.delta() for cl in curve.clusters)


def _is_constant_vector(vec):
    ref = None
    for x in vec:
        if ref is None:
            ref = x
        elif x != ref:
            return False
    return True


def _cluster_dimensions(cluster, floor):
    """Integer invariants recomputed with all tails raised to `floor`."""
    nb = cluster.nbranches
    tails = (floor,) * nb
    ring = cluster.ring.raise_tails(tails)
    cond = cluster.conductor_module().raise_tails(tails)
    obar = LocalModule(nb, (), (0,) * nb).raise_tails(tails)
    m = cluster.maximal_ideal().raise_tails(tails)
    d_dim = localmod.dim_quotient(ring, cond, check=False)
    delta = localmod.dim_quotient(obar, ring, check=False)
    m_obar = localmod.product(m, obar)
    mult = localmod.dim_quotient(obar, m_obar, check=False)
    m2 = localmod.product(m, m)
    embdim = localmod.dim_quotient(m, m2, check=False)
    return {"d": d_dim, "delta": delta, "mult": mult, "embdim": embdim}


def validate_cluster(cluster, scale=1):
    """Check the cluster axioms; raise the first violated one."""
    nb = cluster.nbranches
    ring = cluster.ring
    if len(set(cluster.points)) != nb:
        raise NotARing(f"{cluster.name}: branch points must be distinct")
    if any(c < 1 for c in cluster.conductor):
        raise NotARing(f"{cluster.name}: conductor exponents must be >= 1")
    if ring.tails != cluster.conductor:
        raise NotARing(f"{cluster.name}: ring data must be given modulo the conductor")
    if not ring.contains(unit(nb)):
        raise NotARing(f"{cluster.name}: local basis does not contain 1")
    closed = localmod.product(ring, ring)
    if not closed.equals(ring):
        raise NotARing(f"{cluster.name}: local basis is not closed under multiplication")
    for row in ring.rows:
        consts = [row.coefficient(i, 0) for i in range(nb)]
        if not _is_constant_vector(consts):
            raise NotLocal(
                f"{cluster.name}: constant terms {consts} are not a multiple of (1,..,1)"
            )
    true_cond = localmod.colon_quotient(ring, cluster.obar())
    if not true_cond.equals(cluster.conductor_module()):
        raise ConductorNotExact(
            f"{cluster.name}: declared conductor {cluster.conductor} is not exact "
            f"(true conductor has tails {true_cond.tails})"
        )
    # windowed double run of the dimension computations
    floor = scale * (4 * max(cluster.conductor) + 2)
    first = _cluster_dimensions(cluster, floor)
    second = _cluster_dimensions(cluster, 2 * floor)
    if first != second:
        raise TruncationInsufficient(
            f"{cluster.name}: invariants changed between orders {floor} and {2 * floor}"
        )
    return first


def validate_curve(curve):
    """Validate every cluster and the global axioms.

    Returns a diagnostics dict; raises the first violated axiom as a
    typed error (NotARing, NotLocal, ConductorNotExact, GenusTooSmall).
    """
    seen = {}
    for cl in curve.clusters:
        for a in cl.points:
            if a in seen:
                raise NotARing(
                    f"branch point {a} shared by clusters {seen[a]} and {cl.name}"
                )
            seen[a] = cl.name
    per_cluster = {}
    for cl in curve.clusters:
        dims = validate_cluster(cl, curve.scale)
        if dims["delta"] < 1:
            raise ConductorNotExact(f"{cl.name}: cluster is not singular")
        if dims["embdim"] > dims["mult"]:
            raise NotARing(
                f"{cl.name}: embedding dimension exceeds multiplicity"
            )
        per_cluster[cl.name] = dims
    g = genus(curve)
    if g < curve.min_genus:
        raise GenusTooSmall(f"arithmetic genus {g} < {curve.min_genus}")
    return {"genus": g, "clusters": per_cluster}


def cluster_invariants(cluster, scale=1):
    """Delta, ring dimension, multiplicity and embedding dimension."""
    dims = validate_cluster(cluster, scale)
    return ClusterInvariants(
        delta=dims["delta"],
        ring_dim=dims["d"],
        multiplicity=dims["mult"],
        embdim=dims["embdim"],
        eta=dims["delta"] - dims["d"],
    )


# -- constructors -------------------------------------------------------------


def _monomial_ring(points, conductor, exponent_sets):
    nb = len(points)
    rows = []
    for supp in exponent_sets:
        rows.append(
            LocalElt([[(e, 1) for (i, e) in supp if i == b] for b in range(nb)])
        )
    return canonicalize(nb, rows, conductor)


def make_cluster(kind, points, name="P", semigroup_gens=(), conductor=(), basis=()):
    """Build a cluster of one of the standard kinds.

    node         two branches glued transversally
    cusp         one branch, an ordinary cusp (value semigroup <2,3>)
    semigroup    one branch, the monomial ring of a numerical semigroup
    explicit     arbitrary conductor exponents and basis rows
    """
    points = tuple(Fraction(a) for a in points)
    nb = len(points)
    if kind == "node":
        if nb != 2:
            raise NotARing("a node has exactly two branches")
        ring = canonicalize(2, [unit(2)], (1, 1))
        return Cluster(name, points, (1, 1), ring, kind="node")
    if kind == "cusp":
        if nb != 1:
            raise NotARing("a cusp has exactly one branch")
        ring = canonicalize(1, [unit(1)], (2,))
        return Cluster(name, points, (2,), ring, kind="cusp", semigroup=(2, 3))
    if kind == "semigroup":
        if nb != 1:
            raise NotARing("a semigroup cluster has one branch")
        gens = tuple(sorted({int(s) for s in semigroup_gens}))
        if any(s <= 0 for s in gens):
            raise NotASemigroup("generators must be positive")
        c = semigroups.conductor_exponent(gens)
        elems = semigroups.semigroup_elements(gens, bound=c)
        rows = [monomial(1, 0, s) for s in elems if s < c]
        ring = canonicalize(1, rows, (c,))
        return Cluster(name, points, (c,), ring, kind="semigroup", semigroup=gens)
    if kind == "explicit":
        conductor = tuple(int(c) for c in conductor)
        if len(conductor) != nb:
            raise NotARing("one conductor exponent per branch")
        ring = canonicalize(nb, list(basis), conductor)
        return Cluster(name, points, conductor, ring, kind="explicit")
    raise ValueError(f"unknown cluster kind {kind!r}")


def serre_contract(divisor, name="P", min_genus=2):
    """Contract an effective divisor on the line to a single point.

    divisor: iterable of (point, multiplicity).  The resulting curve has
    one cluster whose local ring is k plus the conductor, hence a unique
    multiple point with maximal ideal equal to the conductor.
    """
    divisor = [(Fraction(a), int(m)) for a, m in divisor]
    if any(m < 1 for _, m in divisor):
        raise DegreeTooSmall("multiplicities must be positive")
    deg = sum(m for _, m in divisor)
    if deg < 3:
        raise DegreeTooSmall(f"divisor degree {deg} < 3 gives genus < 2")
    points = tuple(a for a, _ in divisor)
    conductor = tuple(m for _, m in divisor)
    ring = canonicalize(len(points), [unit(len(points))], conductor)
    cl = Cluster(name, points, conductor, ring, kind="contracted")
    return CurveModel((cl,), min_genus=min_genus)


def cone_curve(n):
    """The degree 2n+1 curve on the cone over the rational normal curve.

    Returns the curve (one cluster with local ring k + t^{n+1} k[[t]])
    together with the embedding components (t^{n+1}, .., t^{2n+1}, 1).
    """
    if n < 2:
        raise DegreeTooSmall("cone curves need n >= 2")
    curve = serre_contract([(Fraction(0), n + 1)], name="V")
    components = tuple(Poly.monomial(n + 1 + j) for j in range(n + 1)) + (Poly.const(1),)
    return curve, components
