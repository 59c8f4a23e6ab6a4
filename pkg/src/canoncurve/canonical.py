"""The canonical map, its image, and the blowup of the curve along the
dualizing module.

The canonical map sends a parameter t to the tuple of numerators of a
basis of regular differentials, with their common gcd removed.  Its
image is studied through exact Hilbert data (no root finding): the
dimension of the degree-l part of the coordinate ring determines the
image degree and genus once its increments stabilize.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import localmod
from .curve import Cluster, CurveModel, genus, validate_curve
from .dualizing import (
    attaining_element, blowup_ring, omega_sections, omega_stalk,
)
from .errors import (
    BadRange, DegreeMismatch, DimensionMismatch, FactorizationFailed,
    NoStabilization, ProbeExhausted, RMTViolation,
)
from .linalg import reduce_basis
from .localmod import LocalModule, canonicalize, monomial
from .rational import Poly, RatFunc
from .sheaves import rational_to_elt

__all__ = [
    "ParamMap", "canonical_map", "map_degree", "hyperelliptic_structure",
    "BlowupModel", "blowup", "ImageProfile", "image_profile",
    "ModelComparison", "verify_rosenlicht", "cone_presentation",
]


@dataclass(frozen=True)
class ParamMap:
    """Map from the line to projective space by coprime polynomials."""

    components: tuple

    @property
    def common_degree(self):
        return max(p.degree for p in self.components)

    @property
    def target_dim(self):
        return len(self.components) - 1

    def value_at(self, t0):
        return tuple(p(t0) for p in self.components)


def _remove_gcd(polys):
    g = Poly()
    for p in polys:
        g = g.gcd(p) if g else p.monic()
        if g.degree == 0:
            break
    if g.degree > 0:
        polys = [p // g for p in polys]
    return [p for p in polys]


def canonical_map(curve, sections=None, eta=None):
    """Components of the canonical map; the common degree must come out
    as 2g - 2 - eta."""
    if sections is None:
        sections = omega_sections(curve)
    if eta is None:
        eta = sum(cl.delta() - cl.d_dim() for cl in curve.clusters)
    comps = _remove_gcd(list(sections.numerators))
    pm = ParamMap(tuple(comps))
    g = genus(curve)
    expected = 2 * g - 2 - eta
    if pm.common_degree != expected:
        raise DegreeMismatch(
            f"canonical components have degree {pm.common_degree}, expected {expected}"
        )
    return pm


def _fiber_gcd_degree(pm, t0):
    vals = pm.value_at(t0)
    i0 = next(i for i, v in enumerate(vals) if v)
    g = Poly()
    for j, pj in enumerate(pm.components):
        if j == i0:
            continue
        minor = pj * vals[i0] - pm.components[i0] * vals[j]
        g = g.gcd(minor) if g else minor.monic()
        if g.degree == 0:
            break
    return g.degree if g else 0


def map_degree(pm, avoid=(), probes=100):
    """Generic fiber cardinality via deterministic probes.

    Probe parameters walk 0, 1, 2, ... skipping branch points and
    component roots; the answer is the minimal fiber degree once it has
    been seen three times.
    """
    avoid = {Fraction(a) for a in avoid}
    seen = {}
    t0 = Fraction(0)
    tried = 0
    while tried < probes:
        skip = t0 in avoid or any(
            p.degree >= 0 and p(t0) == 0 for p in pm.components
        )
        if not skip:
            tried += 1
            d = _fiber_gcd_degree(pm, t0)
            seen[d] = seen.get(d, 0) + 1
            if seen[d] >= 3 and d == min(seen):
                return d
        t0 += 1
    raise ProbeExhausted("no stable fiber degree within the probe budget")


def hyperelliptic_structure(curve, pm, degree=None):
    """The degree-2 function lambda with components polynomial in it.

    Picks the first coordinate pair giving a degree-2 ratio such that
    every component lies in the span of the products lambda-numerator^a
    * lambda-denominator^(k-a); this exhibits the map as a Veronese
    composed with lambda.
    """
    if degree is None:
        degree = map_degree(pm)
    if degree != 2:
        raise BadRange("the curve is not hyperelliptic")
    comps = pm.components
    m = pm.common_degree
    if m % 2:
        raise FactorizationFailed("odd common degree under a degree-2 map")
    k = m // 2
    n = len(comps)
    for i in range(n):
        for j in range(n):
            if i == j or comps[i].is_zero():
                continue
            lam = RatFunc(comps[j], comps[i])
            if max(lam.num.degree, lam.den.degree) != 2:
                continue
            a_pol, b_pol = lam.num, lam.den
            basis = []
            width = 2 * k + 1
            for a in range(k + 1):
                prod = (a_pol ** a) * (b_pol ** (k - a))
                basis.append(
                    tuple(prod.coeffs) + (Fraction(0),) * (width - len(prod.coeffs))
                )
            space = reduce_basis(basis, width)
            ok = all(
                space.contains(
                    tuple(p.coeffs) + (Fraction(0),) * (width - len(p.coeffs))
                )
                for p in comps
            )
            if ok:
                return lam
    raise FactorizationFailed(
        "no coordinate ratio of degree 2 factors the canonical map"
    )


@dataclass(frozen=True)
class BlowupModel:
    curve: CurveModel            # the blown-up curve (may have genus 0)
    partitions: tuple            # per original cluster: ((branches, name or None), ...)
    xi: tuple                    # per original cluster
    mu: tuple                    # per original cluster
    ohat_rings: tuple            # per original cluster: LocalModule

    @property
    def smooth(self):
        return not self.curve.clusters

    def total_xi(self):
        return sum(self.xi)

    def block_names(self, idx):
        return tuple(name for _, name in self.partitions[idx] if name is not None)


def _const_partition(ring):
    """Group branches by the constant-term subalgebra of the ring."""
    nb = ring.nbranches
    vectors = []
    for row in ring.rows:
        vectors.append([row.coefficient(i, 0) for i in range(nb)])
    for i in range(nb):
        if ring.tails[i] <= 0:
            vec = [Fraction(0)] * nb
            vec[i] = Fraction(1)
            vectors.append(vec)
    space = reduce_basis(vectors, nb) if vectors else None
    cols = list(range(nb))
    blocks = []
    assigned = [False] * nb
    for i in cols:
        if assigned[i]:
            continue
        block = [i]
        assigned[i] = True
        for j in cols:
            if assigned[j]:
                continue
            same = all(v[i] == v[j] for v in (space.vectors if space else []))
            if same:
                block.append(j)
                assigned[j] = True
        blocks.append(tuple(block))
    return tuple(blocks)


def _block_cluster(cluster, ring, block, idx, nblocks):
    sub = ring.restrict(block)
    nb = len(block)
    tails = sub.tails
    cond = []
    for i in range(nb):
        e = tails[i]
        while e > 0 and sub.contains(monomial(nb, i, e - 1)):
            e -= 1
        cond.append(e)
    if nb == 1 and cond[0] == 0:
        return None  # smooth point, not part of the singular data
    if any(c == 0 for c in cond):
        raise DimensionMismatch("a multi-branch blowup block exposed an idempotent")
    points = tuple(cluster.points[i] for i in block)
    name = cluster.name if nblocks == 1 else f"{cluster.name}.{idx}"
    new_ring = canonicalize(nb, sub.rows, tuple(cond))
    return Cluster(name, points, tuple(cond), new_ring, kind="blowup")


def blowup(curve, stalks=None, ohat_rings=None):
    """Blow up along the dualizing module.

    Local rings are stabilized endomorphism rings of powers of the
    dualizing stalks; branches regroup into the clusters of the new
    curve according to the idempotents those rings contain.
    """
    if stalks is None:
        stalks = {cl.name: omega_stalk(curve, cl) for cl in curve.clusters}
    if ohat_rings is None:
        ohat_rings = {
            cl.name: blowup_ring(cl, stalks[cl.name]) for cl in curve.clusters
        }
    new_clusters = []
    parts_out = []
    xi_out = []
    mu_out = []
    ring_out = []
    for cl in curve.clusters:
        ohat = ohat_rings[cl.name]
        stalk = stalks[cl.name]
        xi = localmod.dim_quotient(ohat, cl.ring)
        ohat_omega = localmod.product(ohat, stalk)
        mu = localmod.dim_quotient(ohat_omega, stalk)
        eta = cl.delta() - cl.d_dim()
        if xi != eta + mu:
            raise DimensionMismatch(
                f"{cl.name}: xi = {xi} differs from eta + mu = {eta + mu}"
            )
        x = attaining_element(ohat_omega)
        if not localmod.module_generated(ohat, [x]).equals(ohat_omega):
            raise DimensionMismatch(
                f"{cl.name}: blown-up dualizing stalk is not principal"
            )
        parts = _const_partition(ohat)
        entry = []
        for idx, block in enumerate(parts):
            sub = _block_cluster(cl, ohat, block, idx, len(parts))
            if sub is not None:
                new_clusters.append(sub)
                entry.append((block, sub.name))
            else:
                entry.append((block, None))
        parts_out.append(tuple(entry))
        xi_out.append(xi)
        mu_out.append(mu)
        ring_out.append(ohat)
    hat = CurveModel(tuple(new_clusters), min_genus=0, scale=curve.scale)
    validate_curve(hat)
    if genus(hat) != genus(curve) - sum(xi_out):
        raise DimensionMismatch(
            f"blowup genus {genus(hat)} != g - sum(xi) = {genus(curve) - sum(xi_out)}"
        )
    return BlowupModel(
        curve=hat,
        partitions=tuple(parts_out),
        xi=tuple(xi_out),
        mu=tuple(mu_out),
        ohat_rings=tuple(ring_out),
    )


@dataclass(frozen=True)
class ImageProfile:
    d_prime: int
    g_prime: int
    hilbert: tuple        # dim V_l for l = 1..levels
    levels: int


def image_profile(pm, degree, cap=None):
    """Degree and genus of the image curve from Hilbert data.

    dim V_l is the dimension of the span of the l-fold products of the
    components; once its increment equals the image degree three times
    running, the genus reads off as l*d' + 1 - dim V_l.
    """
    m = pm.common_degree
    if m % degree:
        raise DegreeMismatch(f"map degree {degree} does not divide {m}")
    d_prime = m // degree
    cap = cap if cap is not None else 2 * m + 4
    comps = pm.components

    def pad(p, width):
        return tuple(p.coeffs) + (Fraction(0),) * (width - len(p.coeffs))

    dims = []
    basis = [Poly.const(1)]
    streak = 0
    prev = 1
    for l in range(1, cap + 1):
        products = [b * p for b in basis for p in comps]
        width = l * m + 1
        space = reduce_basis([pad(p, width) for p in products], width)
        basis = [Poly(v) for v in space.vectors]
        dims.append(space.dim)
        if space.dim - prev == d_prime:
            streak += 1
            if streak == 3:
                g_prime = l * d_prime + 1 - space.dim
                return ImageProfile(d_prime, g_prime, tuple(dims), l)
        else:
            streak = 0
        prev = space.dim
    raise NoStabilization(
        f"Hilbert increments never stabilized at {d_prime} within {cap} levels"
    )


@dataclass(frozen=True)
class ModelComparison:
    d_prime: int
    g_prime: int
    map_degree: int
    hyperelliptic: bool
    rmt_verified: bool
    chart_rings_equal: tuple
    separation_checked: bool


def _section_with_valuations(curve, sections, cluster):
    """Global differential whose numerator has the minimal valuation at
    every branch of the cluster (so it generates the pulled-back module).
    """
    ratios = sections.ratios()
    want = tuple(-c for c in cluster.conductor)

    def valvec(f):
        return tuple(f.valuation_at(a) for a in cluster.points)

    ordered = sorted(range(len(ratios)), key=lambda j: valvec(ratios[j]))
    for j in ordered:
        if valvec(ratios[j]) == want:
            return ratios[j]
    lam = 1
    for _ in range(100):
        acc = ratios[ordered[0]]
        w = 1
        for j in ordered[1:]:
            w *= lam
            acc = acc + ratios[j] * Fraction(w)
        if valvec(acc) == want:
            return acc
        lam += 1
    raise ProbeExhausted("no section attains the minimal valuations")


def _chart_ring_matches(curve, cluster, sections, ohat):
    """Chart-ring test: the algebra generated by the section ratios over
    the cluster ring must be the blowup ring."""
    x = _section_with_valuations(curve, sections, cluster)
    # x is p_x / c dt, so the ratios y_j / x are the quotients p_j / p_x
    px = (x * RatFunc(sections.denominator)).num
    ratios = [RatFunc(p, px) for p in sections.numerators]
    elts = [rational_to_elt(cluster, r, cluster.conductor) for r in ratios]
    closure = localmod.algebra_closure(cluster.ring, elts)
    return closure.equals(ohat)


def _projective_equal(v, w):
    n = len(v)
    for i in range(n):
        for j in range(i + 1, n):
            if v[i] * w[j] != v[j] * w[i]:
                return False
    return True


def _separation_probes(curve, pm, model, nprobes=20):
    """kappa separates parameters exactly when they lie over different
    clusters of the blowup."""
    same_fiber = {}
    for cl_hat in model.curve.clusters:
        for a in cl_hat.points:
            same_fiber[a] = cl_hat.name
    params = [a for cl in curve.clusters for a in cl.points]
    t0 = Fraction(0)
    extra = []
    branch = set(params)
    while len(extra) < nprobes:
        if t0 not in branch:
            extra.append(t0)
        t0 += 1
    everyone = params + extra
    values = {s: pm.value_at(s) for s in everyone}
    for i, s in enumerate(everyone):
        for s2 in everyone[i + 1:]:
            expect_equal = (
                s in same_fiber and s2 in same_fiber
                and same_fiber[s] == same_fiber[s2]
            )
            got_equal = _projective_equal(values[s], values[s2])
            if got_equal != expect_equal:
                raise RMTViolation(
                    f"canonical map {'glues' if got_equal else 'separates'} "
                    f"parameters {s}, {s2} unexpectedly"
                )
    return True


def verify_rosenlicht(curve, sections=None, stalks=None, model=None,
                      pm=None, degree=None, ip=None, profile_cap=None):
    """Compare the blowup with the canonical image.

    Nonhyperelliptic case: the image genus from Hilbert data must equal
    the blowup genus, the chart rings must localize to the blowup rings,
    and the map must separate parameters across blowup clusters.
    Hyperelliptic case: the image must be the rational normal curve.
    """
    if sections is None:
        sections = omega_sections(curve)
    if pm is None:
        pm = canonical_map(curve, sections)
    if degree is None:
        degree = map_degree(pm, avoid=curve.branch_points())
    if ip is None:
        ip = image_profile(pm, degree, cap=profile_cap)
    g = genus(curve)
    eta = sum(cl.delta() - cl.d_dim() for cl in curve.clusters)
    if degree == 2:
        if ip.d_prime != g - 1 or ip.g_prime != 0:
            raise RMTViolation(
                f"hyperelliptic image is not the rational normal curve: {ip}"
            )
        return ModelComparison(ip.d_prime, ip.g_prime, 2, True, True, (), False)
    if degree != 1:
        raise RMTViolation(f"canonical map degree {degree} is neither 1 nor 2")
    if ip.d_prime != 2 * g - 2 - eta:
        raise DegreeMismatch(
            f"birational image degree {ip.d_prime} != 2g - 2 - eta = {2 * g - 2 - eta}"
        )
    if stalks is None:
        stalks = {cl.name: omega_stalk(curve, cl) for cl in curve.clusters}
    if model is None:
        model = blowup(curve, stalks)
    ok_genus = ip.g_prime == genus(model.curve)
    if not ok_genus:
        raise RMTViolation(
            f"image genus {ip.g_prime} != blowup genus {genus(model.curve)}"
        )
    charts = []
    for cl, ohat in zip(curve.clusters, model.ohat_rings):
        charts.append(_chart_ring_matches(curve, cl, sections, ohat))
    if not all(charts):
        raise RMTViolation("a chart ring does not localize to the blowup ring")
    separation = _separation_probes(curve, pm, model)
    return ModelComparison(
        d_prime=ip.d_prime,
        g_prime=ip.g_prime,
        map_degree=1,
        hyperelliptic=False,
        rmt_verified=ok_genus and all(charts) and separation,
        chart_rings_equal=tuple(charts),
        separation_checked=True,
    )


def cone_presentation(curve, nearly_normal, lam=None):
    """Verify the degree 2g+1 presentation on the cone over the rational
    normal curve, when one exists.

    Nearly normal curves get the explicit construction from the
    conductor polynomial; hyperelliptic curves get the embedding by the
    degree 2g+1 linear system pulled back along lambda plus a point.
    Returns the verified embedding components or None.
    """
    from . import sheaves as sh

    g = genus(curve)
    if nearly_normal and len(curve.clusters) == 1:
        cl = curve.clusters[0]
        f = curve.conductor_poly()
        if f.degree != g + 1:
            return None
        comps = [f * Poly.monomial(j) for j in range(g + 1)] + [Poly.const(1)]
        for j in range(g + 1):
            elt = rational_to_elt(cl, RatFunc(comps[j]), cl.conductor)
            if not cl.ring.contains(elt):
                return None
        pm = ParamMap(tuple(comps))
        if pm.common_degree != 2 * g + 1:
            return None
        if map_degree(pm, avoid=curve.branch_points()) != 1:
            return None
        return pm
    if lam is not None:
        sheaf = sh.fiber_pullback(curve, lam, g)
        branch = set(curve.branch_points())
        extra = {a for a, _ in sheaf.divisor.finite}
        s = Fraction(0)
        while s in branch or s in extra:
            s += 1
        sheaf = sh.RankOneSheaf(
            sheaf.stalks,
            sheaf.divisor + sh.Divisor.make([(s, 1)]),
            label="cone-embedding",
        )
        secs = sh.global_sections(curve, sheaf)
        if len(secs) != g + 2:
            raise DimensionMismatch(
                f"degree 2g+1 system has {len(secs)} sections, expected {g + 2}"
            )
        den = secs[0].den
        comps = []
        for f in secs:
            if f.den == den:
                comps.append(f.num)
            else:
                comps.append((f * RatFunc(den)).num)
        comps = _remove_gcd(comps)
        pm = ParamMap(tuple(comps))
        if pm.common_degree != 2 * g + 1:
            return None
        if map_degree(pm, avoid=curve.branch_points()) != 1:
            return None
        return pm
    return None
