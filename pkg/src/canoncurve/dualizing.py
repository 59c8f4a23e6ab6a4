"""The dualizing module: global regular differentials, their stalks,
and the singularity invariants built from them.

A differential p(t)/c(t) dt (c the global conductor polynomial) is
regular when, at every cluster, the sum over the branches of the
residues against every local ring element vanishes.  Stalks are cut out
of the polar window by the same residue pairing.  Everything downstream
(eta invariants, Cohen-Macaulay type, blowup rings) is linear algebra
on these modules.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import localmod
from .curve import CurveModel, genus
from .errors import DimensionMismatch, ProbeExhausted, StabilizationFailed
from .linalg import nullspace
from .localmod import LocalElt, LocalModule, canonicalize, monomial
from .rational import Poly, RatFunc, expand_at

__all__ = [
    "GlobalDifferentialBasis", "omega_sections", "omega_stalk",
    "blowup_ring", "SingularityProfile", "ClusterProfile",
    "singularity_profile", "attaining_element",
]


@dataclass(frozen=True)
class GlobalDifferentialBasis:
    """Basis of the regular differentials p_i(t)/c(t) dt."""

    denominator: Poly
    numerators: tuple

    @property
    def dim(self):
        return len(self.numerators)

    def ratios(self):
        return [RatFunc(p, self.denominator) for p in self.numerators]


def _polar_coords(cluster):
    coords = []
    for i, c in enumerate(cluster.conductor):
        for e in range(-c, 0):
            coords.append((i, e))
    return coords


def _residue_rows(cluster, coords):
    """One condition row per local ring basis element.

    Entry at polar coordinate (i, e) is the coefficient with which the
    differential coefficient at u_i^e enters sum_i res(b * eta).
    """
    rows = []
    for b in cluster.ring.rows:
        # res(b_i * u^e) pairs the coefficient at u^e with b's at u^{-e-1}
        rows.append([b.coefficient(i, -e - 1) for (i, e) in coords])
    return rows


def omega_stalk(curve, cluster):
    """Stalk of the dualizing module at a cluster.

    The result has tails 0 (all regular differentials belong) and its
    finite rows are the polar parts allowed by the residue conditions.
    """
    coords = _polar_coords(cluster)
    cond = _residue_rows(cluster, coords)
    sols = nullspace(cond, len(coords))
    nb = cluster.nbranches
    rows = []
    for vec in sols:
        parts = [[] for _ in range(nb)]
        for (i, e), c in zip(coords, vec):
            if c:
                parts[i].append((e, c))
        rows.append(LocalElt(parts))
    stalk = canonicalize(nb, rows, (0,) * nb)
    _verify_stalk(curve, cluster, stalk)
    return stalk


def _verify_stalk(curve, cluster, stalk):
    delta = cluster.delta()
    if len(stalk.rows) != delta:
        raise DimensionMismatch(
            f"{cluster.name}: dim(omega/regular part) = {len(stalk.rows)} != delta = {delta}"
        )
    # least valuations must reach the full conductor depth on every branch
    for i, c in enumerate(cluster.conductor):
        if stalk.vmin(i) != -c:
            raise DimensionMismatch(
                f"{cluster.name}: dualizing stalk does not reach depth {-c} on branch {i}"
            )
    # the stalk is a module over the local ring
    if not localmod.product(cluster.ring, stalk).equals(stalk):
        raise DimensionMismatch(f"{cluster.name}: dualizing stalk is not a ring module")


def omega_sections(curve):
    """Global regular differentials; their number must equal the genus."""
    c = curve.conductor_poly()
    degc = c.degree
    g = genus(curve)
    ncand = degc - 1  # monomials t^0 .. t^{degc-2}
    cond_rows = []
    inv_c = RatFunc(Poly.const(1), c)
    for cl in curve.clusters:
        pol = [expand_at(inv_c, a, 0) for a in cl.points]
        shifted = [
            [Poly.monomial(j).shift(a).coeffs for j in range(ncand)]
            for a in cl.points
        ]
        for b in cl.ring.rows:
            row = []
            for j in range(ncand):
                val = Fraction(0)
                for i in range(cl.nbranches):
                    part = b.parts[i]
                    if not part:
                        continue
                    # coefficient of u^{-1} in b * t^j * (1/c)
                    for e, bc in part:
                        for k, tc in enumerate(shifted[i][j]):
                            co = pol[i].coefficient(-1 - e - k)
                            if co and tc:
                                val += bc * tc * co
                row.append(val)
            cond_rows.append(row)
    sols = nullspace(cond_rows, ncand)
    numerators = tuple(Poly(vec) for vec in sols)
    if len(numerators) != g:
        raise DimensionMismatch(
            f"h0(omega) = {len(numerators)} != g = {g}; invalid curve data"
        )
    return GlobalDifferentialBasis(denominator=c, numerators=numerators)


def attaining_element(module, limit=100):
    """Deterministic element whose valuation vector equals the module minimum.

    Rows are tried in order of lexicographically smallest valuation
    vector; if no single row attains every branch minimum, small integer
    combinations are scanned.
    """
    nb = module.nbranches
    vmins = module.vmins()
    pool = list(module.rows)
    for i in range(nb):
        if module.vmin(i) == module.tails[i]:
            pool.append(monomial(nb, i, module.tails[i]))

    def valvec(elt):
        return tuple(
            elt.val(i) if elt.val(i) is not None else module.tails[i] + 1
            for i in range(nb)
        )

    pool.sort(key=valvec)
    for elt in pool:
        if valvec(elt) == vmins:
            return elt
    lam = 1
    for _ in range(limit):
        acc = pool[0]
        w = 1
        for elt in pool[1:]:
            w *= lam
            acc = acc + elt.scale(w)
        if valvec(acc) == vmins:
            return acc
        lam += 1
    raise ProbeExhausted("no element attains the minimal valuation vector")


def blowup_ring(cluster, stalk):
    """Stalk of the blowup: stabilized endomorphism ring of the powers
    of the dualizing stalk."""
    delta = cluster.delta()
    power = stalk
    prev = None
    for n in range(1, delta + 2):
        current = localmod.colon_quotient(power, power)
        if prev is not None and current.equals(prev):
            return prev
        prev = current
        power = localmod.product(power, stalk)
    raise StabilizationFailed(
        f"{cluster.name}: endomorphism rings kept growing past n = {delta + 1}"
    )


@dataclass(frozen=True)
class ClusterProfile:
    name: str
    delta: int
    eta: int
    cm_type: int
    gorenstein: bool
    almost_gorenstein: bool
    mu: int
    xi: int
    omega_principal: bool


@dataclass(frozen=True)
class SingularityProfile:
    clusters: tuple
    eta: int
    nearly_normal: bool
    nearly_gorenstein: bool
    gorenstein: bool


def cluster_profile(curve, cluster, stalk=None):
    if stalk is None:
        stalk = omega_stalk(curve, cluster)
    nb = cluster.nbranches
    delta = cluster.delta()
    d_dim = cluster.d_dim()
    eta = delta - d_dim
    # second computation of eta: via the quotient of the full polar block
    obar_omega = LocalModule(nb, (), tuple(-c for c in cluster.conductor))
    eta2 = delta - localmod.dim_quotient(obar_omega, stalk)
    if eta != eta2:
        raise DimensionMismatch(
            f"{cluster.name}: eta = {eta} but polar computation gives {eta2}"
        )
    m = cluster.maximal_ideal()
    m_omega = localmod.product(m, stalk)
    cm_type = localmod.dim_quotient(stalk, m_omega)
    x = attaining_element(stalk)
    principal = localmod.module_generated(cluster.ring, [x]).equals(stalk)
    if principal != (eta == 0):
        raise DimensionMismatch(
            f"{cluster.name}: omega principal = {principal} but eta = {eta}"
        )
    ohat = blowup_ring(cluster, stalk)
    xi = localmod.dim_quotient(ohat, cluster.ring)
    ohat_omega = localmod.product(ohat, stalk)
    mu = localmod.dim_quotient(ohat_omega, stalk)
    if xi != eta + mu:
        raise DimensionMismatch(
            f"{cluster.name}: xi = {xi} != eta + mu = {eta} + {mu}"
        )
    almost = (cm_type - 1) == eta
    if (mu == 1) != (almost and eta > 0):
        raise DimensionMismatch(
            f"{cluster.name}: mu = {mu} inconsistent with almost-Gorenstein test"
        )
    return ClusterProfile(
        name=cluster.name,
        delta=delta,
        eta=eta,
        cm_type=cm_type,
        gorenstein=(eta == 0),
        almost_gorenstein=almost,
        mu=mu,
        xi=xi,
        omega_principal=principal,
    )


def singularity_profile(curve, stalks=None):
    """Per-cluster and global Gorenstein-type classification."""
    if stalks is None:
        stalks = {cl.name: omega_stalk(curve, cl) for cl in curve.clusters}
    profiles = tuple(
        cluster_profile(curve, cl, stalks[cl.name]) for cl in curve.clusters
    )
    eta = sum(p.eta for p in profiles)
    total_d = sum(cl.d_dim() for cl in curve.clusters)
    nearly_normal = total_d == 1
    bad = [p for p in profiles if not p.gorenstein]
    nearly_gorenstein = len(bad) == 1 and bad[0].almost_gorenstein
    return SingularityProfile(
        clusters=profiles,
        eta=eta,
        nearly_normal=nearly_normal,
        nearly_gorenstein=nearly_gorenstein,
        gorenstein=not bad,
    )
