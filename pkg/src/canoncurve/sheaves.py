"""Torsion-free rank-1 sheaves as fractional-module data.

A sheaf is a fractional module at every cluster plus a divisor twist on
the smooth locus (the point at infinity has its own slot, which keeps
the global-section ansatz polynomial).  Cohomology is computed from one
global linear system: h0 directly, h1 through the duality pairing into
the dualizing sheaf.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import localmod
from .curve import genus
from .dualizing import omega_sections, omega_stalk
from .errors import (
    BadRange, CounterexampleFound, InconsistentEuler, NotNearlyNormal,
    SupportOnSingular,
)
from .linalg import nullspace
from .localmod import LocalElt, LocalModule, canonicalize, monomial, unit
from .rational import Poly, RatFunc, expand_at

__all__ = [
    "Divisor", "RankOneSheaf", "structure_sheaf", "omega_sheaf",
    "global_sections", "h0", "dual_into_omega", "h1", "sheaf_degree",
    "line_bundle", "fiber_pullback", "eks_sheaf", "monomial_slice",
    "generated_by_sections", "sheaf_isomorphic", "CliffordReport",
    "clifford_audit", "audit_sheaves",
]


@dataclass(frozen=True)
class Divisor:
    """Divisor on the smooth locus: finite points plus an infinity slot."""

    finite: tuple = ()   # sorted ((point, mult), ...) with nonzero mult
    inf: int = 0

    @staticmethod
    def make(points=(), inf=0):
        acc = {}
        for a, m in points:
            a = Fraction(a)
            acc[a] = acc.get(a, 0) + int(m)
        finite = tuple(sorted((a, m) for a, m in acc.items() if m))
        return Divisor(finite, int(inf))

    def degree(self):
        return sum(m for _, m in self.finite) + self.inf

    def mult(self, a):
        for x, m in self.finite:
            if x == a:
                return m
        return 0

    def __neg__(self):
        return Divisor(tuple((a, -m) for a, m in self.finite), -self.inf)

    def __add__(self, other):
        return Divisor.make(self.finite + other.finite, self.inf + other.inf)


@dataclass(frozen=True)
class RankOneSheaf:
    stalks: tuple          # one LocalModule per cluster, curve order
    divisor: Divisor
    label: str = ""

    def relabel(self, label):
        return RankOneSheaf(self.stalks, self.divisor, label)


def structure_sheaf(curve):
    return RankOneSheaf(tuple(cl.ring for cl in curve.clusters), Divisor(), "O")


def omega_sheaf(curve, stalks=None):
    """The dualizing sheaf in the dt-trivialization.

    Stalks are the residue-condition modules; the twist at infinity is
    -2 because dt has a double pole there.
    """
    if stalks is None:
        stalks = tuple(omega_stalk(curve, cl) for cl in curve.clusters)
    return RankOneSheaf(tuple(stalks), Divisor.make(inf=-2), "omega")


def rational_to_elt(cluster, f, tails):
    """Branch expansions of a rational function, exact through `tails`."""
    parts = []
    for a, T in zip(cluster.points, tails):
        s = expand_at(f, a, T)
        parts.append(list(zip(range(s.lo, s.order), s.coeffs)))
    return LocalElt(parts)


def _pole_allowance(stalk):
    return [max(0, -stalk.vmin(i)) for i in range(stalk.nbranches)]


def _candidate_series(a, inv, ncand, order):
    """Expansions of t^j * inv at t = a for j = 0..ncand-1, computed
    incrementally (one series product per step, no gcd work)."""
    from .rational import TruncSeries

    width = order - inv.lo
    if width <= 0:
        empty = TruncSeries(a, 0, order, ())
        return [empty] * ncand
    tj = TruncSeries(a, 0, width, (Fraction(1),))
    step = TruncSeries(a, 0, width + 1, (a, Fraction(1)))
    out = []
    for j in range(ncand):
        out.append(tj * inv)
        if j + 1 < ncand:
            tj = tj * step
    return out


def global_sections(curve, sheaf):
    """Canonical basis of H0: rational functions lying in every stalk
    with the divisor-bounded pole orders."""
    q = Poly.const(1)
    for cl, stalk in zip(curve.clusters, sheaf.stalks):
        for a, allow in zip(cl.points, _pole_allowance(stalk)):
            if allow:
                q = q * (Poly((-a, 1)) ** allow)
    for a, m in sheaf.divisor.finite:
        if m > 0:
            q = q * (Poly((-a, 1)) ** m)
    ncand = q.degree + sheaf.divisor.inf + 1
    if ncand <= 0:
        return []
    cond_rows = []
    inv_q = RatFunc(Poly.const(1), q)
    for cl, stalk in zip(curve.clusters, sheaf.stalks):
        nb = cl.nbranches
        per_branch = []
        for i, a in enumerate(cl.points):
            inv = expand_at(inv_q, a, stalk.tails[i])
            per_branch.append(_candidate_series(a, inv, ncand, stalk.tails[i]))
        elts = []
        for j in range(ncand):
            parts = []
            for i in range(nb):
                s = per_branch[i][j]
                parts.append(list(zip(range(s.lo, s.order), s.coeffs)))
            elts.append(LocalElt(parts).truncate(stalk.tails))
        coords, index = stalk._window(elts)
        space = stalk._subspace(coords, index)
        rows_here = [[] for _ in coords]
        for j in range(ncand):
            res = space.reduce(_vectorize_safe(elts[j], coords, index))
            for k, val in enumerate(res):
                rows_here[k].append(val)
        cond_rows.extend(rows_here)
    for a, m in sheaf.divisor.finite:
        if m < 0:
            # required vanishing at a smooth point
            inv = expand_at(inv_q, a, -m)
            cands = _candidate_series(a, inv, ncand, -m)
            for order in range(-m):
                cond_rows.append([s.coefficient(order) for s in cands])
    sols = nullspace(cond_rows, ncand)
    return [RatFunc(Poly(vec), q) for vec in sols]


def _vectorize_safe(elt, coords, index):
    vec = [Fraction(0)] * len(coords)
    for i, part in enumerate(elt.parts):
        for e, c in part:
            k = index.get((i, e))
            if k is not None:
                vec[k] = c
    return vec


def h0(curve, sheaf):
    return len(global_sections(curve, sheaf))


def dual_into_omega(curve, sheaf, omega_stalks=None):
    """Sheaf of maps into the dualizing sheaf: stalkwise colon modules,
    divisor negated against the omega twist."""
    if omega_stalks is None:
        omega_stalks = [omega_stalk(curve, cl) for cl in curve.clusters]
    stalks = tuple(
        localmod.colon(w, m) for w, m in zip(omega_stalks, sheaf.stalks)
    )
    divisor = Divisor.make(
        tuple((a, -m) for a, m in sheaf.divisor.finite),
        inf=-2 - sheaf.divisor.inf,
    )
    return RankOneSheaf(stalks, divisor, f"Hom({sheaf.label or '?'},omega)")


def h1(curve, sheaf, omega_stalks=None):
    return h0(curve, dual_into_omega(curve, sheaf, omega_stalks))


def sheaf_degree(curve, sheaf, h0h1=None, omega_stalks=None):
    """Degree via local colengths; cross-checked against the Euler
    characteristic when cohomology is supplied or computable."""
    deg = sheaf.divisor.degree()
    for cl, stalk in zip(curve.clusters, sheaf.stalks):
        tails = tuple(
            max(t, c) for t, c in zip(stalk.tails, cl.conductor)
        )
        ref = LocalModule(cl.nbranches, (), tails)
        deg += localmod.dim_quotient(stalk.raise_tails(tails), ref, check=False)
        deg -= localmod.dim_quotient(cl.ring.raise_tails(tails), ref, check=False)
    g = genus(curve)
    if h0h1 is None:
        a = h0(curve, sheaf)
        b = h1(curve, sheaf, omega_stalks)
    else:
        a, b = h0h1
    if a - b != deg + 1 - g:
        raise InconsistentEuler(
            f"h0 - h1 = {a - b} but deg + 1 - g = {deg + 1 - g} for {sheaf.label}"
        )
    return deg


def line_bundle(curve, points=(), inf=0, label=""):
    """Invertible sheaf attached to a divisor on the smooth locus."""
    branch = set(pt for cl in curve.clusters for pt in cl.points)
    for a, _ in points:
        if Fraction(a) in branch:
            raise SupportOnSingular(f"divisor point {a} is a branch point")
    return RankOneSheaf(
        tuple(cl.ring for cl in curve.clusters),
        Divisor.make(points, inf),
        label or "O(D)",
    )


def fiber_pullback(curve, lam, n, label=""):
    """Pullback of O(n) along a degree-2 map given as a rational function.

    The fiber used is the one through the first probe parameter that
    avoids all branch points, so its points are rational by construction.
    """
    branch = set(pt for cl in curve.clusters for pt in cl.points)
    s0 = Fraction(0)
    while s0 in branch or lam.valuation_at(s0) is None or lam.valuation_at(s0) < 0:
        s0 += 1
    v = RatFunc(lam.num - lam.den * lam(s0), lam.den)
    num = v.num
    pts = []
    inf_part = 2 - num.degree
    # factor the fiber polynomial using the known rational root s0
    rem = num
    roots = []
    while rem.degree > 0:
        if rem(s0) == 0:
            roots.append(s0)
            rem = rem // Poly((-s0, 1))
            continue
        # remaining linear factor
        if rem.degree == 1:
            roots.append(-rem.coeffs[0] / rem.coeffs[1])
            rem = Poly.const(rem.coeffs[1])
            continue
        raise SupportOnSingular("fiber does not split over Q")
    for r in roots:
        if r in branch:
            raise SupportOnSingular("fiber through a branch point")
        pts.append((r, n))
    return line_bundle(curve, pts, inf=n * inf_part, label=label or f"lambda*O({n})")


def eks_sheaf(curve, n, profile_nearly_normal=None):
    """Submodule of the pushforward of O(n) generated by 1, t, .., t^n."""
    g = genus(curve)
    if profile_nearly_normal is None:
        profile_nearly_normal = sum(cl.d_dim() for cl in curve.clusters) == 1
    if not profile_nearly_normal:
        raise NotNearlyNormal("the generated-submodule sheaf needs a nearly normal curve")
    if not 1 <= n <= g - 1:
        raise BadRange(f"n = {n} outside 1..{g - 1}")
    stalks = []
    for cl in curve.clusters:
        gens = [
            rational_to_elt(cl, RatFunc(Poly.monomial(j)), cl.conductor)
            for j in range(n + 1)
        ]
        stalks.append(localmod.module_generated(cl.ring, gens))
    return RankOneSheaf(tuple(stalks), Divisor.make(inf=n), f"EKS({n})")


def monomial_slice(curve, cap=4096):
    """All monomial stalk combinations between the conductor and the
    normalization, one fractional module per cluster, divisor zero."""
    percluster = []
    for cl in curve.clusters:
        nb = cl.nbranches
        coords = [(i, e) for i in range(nb) for e in range(cl.conductor[i])]
        mods = []
        for mask in range(1 << len(coords)):
            supp = [coords[k] for k in range(len(coords)) if mask >> k & 1]
            rows = [monomial(nb, i, e) for (i, e) in supp]
            cand = canonicalize(nb, rows, cl.conductor)
            if len(cand.rows) != len(rows):
                continue  # support not independent mod conductor (cannot happen)
            if localmod.product(cl.ring, cand).equals(cand):
                mods.append((tuple(supp), cand))
        percluster.append(mods)
    combos = [((), ())]
    for mods in percluster:
        combos = [
            (names + (supp,), stalks + (mod,))
            for names, stalks in combos
            for supp, mod in mods
        ]
        if len(combos) > cap:
            combos = combos[:cap]
    out = []
    for names, stalks in combos:
        label = "M" + "".join(
            "[" + ",".join(f"{i}:{e}" for i, e in supp) + "]" for supp in names
        )
        out.append(RankOneSheaf(tuple(stalks), Divisor(), label))
    return out


def generated_by_sections(curve, sheaf, sections):
    """Do the global sections generate the sheaf everywhere?

    Checks stalkwise generation over each local ring and pole-order
    attainment at the divisor points and at infinity.
    """
    if not sections:
        return False
    for cl, stalk in zip(curve.clusters, sheaf.stalks):
        elts = [rational_to_elt(cl, f, stalk.tails) for f in sections]
        gen = localmod.module_generated(cl.ring, elts)
        if not gen.equals(stalk):
            return False
    for a, m in sheaf.divisor.finite:
        if min(f.valuation_at(a) for f in sections if not f.is_zero()) != -m:
            return False
    if sheaf.divisor.inf and min(
        f.valuation_at_infinity() for f in sections
    ) != -sheaf.divisor.inf:
        return False
    return True


def _scale_stalk(cluster, stalk, phi):
    """The module phi * stalk for a rational multiplier phi."""
    vals = [phi.valuation_at(a) for a in cluster.points]
    new_tails = tuple(t + v for t, v in zip(stalk.tails, vals))
    need = [
        nt - min(stalk.vmin(i), stalk.tails[i]) + 1
        for i, nt in enumerate(new_tails)
    ]
    phi_elt = rational_to_elt(cluster, phi, [t + n for t, n in zip(new_tails, need)])
    rows = [phi_elt * row for row in stalk.rows]
    return canonicalize(stalk.nbranches, rows, new_tails)


def sheaf_isomorphic(curve, first, second):
    """Isomorphism test through a single rational multiplier.

    Torsion-free rank-1 sheaves on a rational curve are isomorphic
    exactly when one equals a global rational multiple of the other;
    the candidate multiplier is pinned down by the valuation data.
    """
    phi = RatFunc(Poly.const(1))
    total = 0
    for cl, mf, mg in zip(curve.clusters, first.stalks, second.stalks):
        for i, a in enumerate(cl.points):
            k = mf.vmin(i) - mg.vmin(i)
            total += k
            if k:
                phi = phi * RatFunc(Poly((-a, 1)) ** abs(k)) if k > 0 else phi * RatFunc(
                    Poly.const(1), Poly((-a, 1)) ** (-k)
                )
    seen = {a for a, _ in first.divisor.finite} | {a for a, _ in second.divisor.finite}
    for a in sorted(seen):
        k = second.divisor.mult(a) - first.divisor.mult(a)
        total += k
        if k > 0:
            phi = phi * RatFunc(Poly((-a, 1)) ** k)
        elif k < 0:
            phi = phi * RatFunc(Poly.const(1), Poly((-a, 1)) ** (-k))
    if first.divisor.inf != second.divisor.inf + total:
        return False
    for cl, mf, mg in zip(curve.clusters, first.stalks, second.stalks):
        if not _scale_stalk(cl, mg, phi).equals(mf):
            return False
    return True


@dataclass(frozen=True)
class CliffordReport:
    label: str
    h0: int
    h1: int
    total: int
    bound_holds: bool
    equality: bool
    case: str
    generated: bool


def clifford_audit(curve, sheaves, omega_stalks=None, lam=None, nearly_normal=None):
    """Check h0 + h1 <= g + 1 on every supplied sheaf.

    At equality the sheaf must be generated by its sections and must
    fall into one of the classified cases: the structure sheaf, the
    dualizing sheaf, a pullback from the line under a degree-2 map, or
    a generated submodule of a twisted pushforward.
    """
    g = genus(curve)
    if omega_stalks is None:
        omega_stalks = [omega_stalk(curve, cl) for cl in curve.clusters]
    omega = omega_sheaf(curve, tuple(omega_stalks))
    reports = []
    for sheaf in sheaves:
        secs = global_sections(curve, sheaf)
        a = len(secs)
        if a == 0:
            reports.append(CliffordReport(sheaf.label, 0, 0, 0, True, False, "skipped", False))
            continue
        b = h0(curve, dual_into_omega(curve, sheaf, omega_stalks))
        if b == 0:
            reports.append(CliffordReport(sheaf.label, a, 0, a, True, False, "skipped", False))
            continue
        total = a + b
        if total > g + 1:
            raise CounterexampleFound(
                f"h0 + h1 = {total} > g + 1 = {g + 1} on {sheaf.label}"
            )
        equality = total == g + 1
        case = "none"
        generated = False
        if equality:
            generated = generated_by_sections(curve, sheaf, secs)
            if not generated:
                raise CounterexampleFound(
                    f"sections fail to generate {sheaf.label} at the Clifford bound"
                )
            if sheaf_isomorphic(curve, sheaf, structure_sheaf(curve)):
                case = "trivial"
            elif sheaf_isomorphic(curve, sheaf, omega):
                case = "canonical"
            else:
                case = "other"
                if lam is not None:
                    pull = fiber_pullback(curve, lam, a - 1)
                    if sheaf_isomorphic(curve, sheaf, pull):
                        case = "hyperelliptic-pullback"
                if case == "other" and nearly_normal and 1 <= a - 1 <= g - 1:
                    if sheaf_isomorphic(curve, sheaf, eks_sheaf(curve, a - 1)):
                        case = "eks"
                if case == "other":
                    raise CounterexampleFound(
                        f"unclassified Clifford equality case on {sheaf.label}"
                    )
            if a == 1 and case != "trivial":
                raise CounterexampleFound(
                    f"h0 = 1 at the bound but {sheaf.label} is not the structure sheaf"
                )
            if b == 1 and case != "canonical" and not sheaf_isomorphic(curve, sheaf, omega):
                raise CounterexampleFound(
                    f"h1 = 1 at the bound but {sheaf.label} is not dualizing"
                )
        reports.append(
            CliffordReport(sheaf.label, a, b, total, True, equality, case, generated)
        )
    return reports


def audit_sheaves(curve, nearly_normal, lam=None, cap=4096):
    """The finite audit slice: monomial stalk combinations, line bundles
    of each degree up to 2g, pullbacks when hyperelliptic, generated
    submodule sheaves when nearly normal, plus the two distinguished
    sheaves themselves."""
    g = genus(curve)
    out = [structure_sheaf(curve), omega_sheaf(curve)]
    out.extend(monomial_slice(curve, cap))
    branch = set(pt for cl in curve.clusters for pt in cl.points)
    s0 = Fraction(0)
    while s0 in branch:
        s0 += 1
    s1 = s0 + 1
    while s1 in branch:
        s1 += 1
    for d in range(0, 2 * g + 1):
        out.append(line_bundle(curve, [(s0, d)], label=f"O({d}p)"))
        if d >= 2:
            out.append(line_bundle(curve, [(s0, d - 1), (s1, 1)], label=f"O({d - 1}p+q)"))
    if lam is not None:
        for n in range(1, g):
            out.append(fiber_pullback(curve, lam, n))
    if nearly_normal:
        for n in range(1, g):
            out.append(eks_sheaf(curve, n))
    return out
