"""Normality of the canonical image and the consolidated theorem checks.

Hyperplane-section spaces of the image are computed on the blowup,
where the pulled-back polarization is invertible; Hilbert data of the
image comes from the coordinate-ring spans.  All statements are exact
integer identities, so every check is equality, never tolerance.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import localmod, sheaves
from .curve import cluster_invariants
from .errors import (
    EquivalenceViolation, GenerationFails, ModelNotVerified,
    UnsupportedDegreeRegime,
)
from .linalg import nullspace, reduce_basis
from .rational import Poly

__all__ = [
    "NormalityProfile", "section_space", "normality_profile",
    "IdealGenerationReport", "ideal_generation_check",
    "TheoremVerdict", "theorem_suite",
]


@dataclass(frozen=True)
class NormalityProfile:
    levels: int
    h0: tuple                 # h0 of the image polarization, l = 1..levels
    h1: tuple
    hilbert: tuple            # dim of the degree-l coordinate ring piece
    linearly_normal: bool
    projectively_normal: bool
    arithmetically_normal: bool
    extremal: bool
    smooth_model: bool


def hat_polarization(analysis, l):
    """The l-th power of the pulled-back canonical polarization, as a
    sheaf on the blowup.

    Smooth blowup branches carry their pole orders in the divisor part;
    singular blocks keep fractional stalks.
    """
    model = analysis.model
    stalk_by_name = {}
    divisor_pts = []
    for idx, cl in enumerate(analysis.curve.clusters):
        ohat = model.ohat_rings[idx]
        base = localmod.product(ohat, analysis.stalks[cl.name])
        pw = localmod.power(base, l)
        for block, name in model.partitions[idx]:
            if name is None:
                for b in block:
                    divisor_pts.append((cl.points[b], -pw.vmin(b)))
            else:
                stalk_by_name[name] = pw.restrict(block)
    stalks = tuple(stalk_by_name[cl.name] for cl in model.curve.clusters)
    return sheaves.RankOneSheaf(
        stalks, sheaves.Divisor.make(divisor_pts, inf=-2 * l), f"image-O({l})"
    )


def omega_power_sheaf(analysis, l):
    """The l-th power of the dualizing sheaf on the curve itself."""
    stalks = tuple(
        localmod.power(analysis.stalks[cl.name], l)
        for cl in analysis.curve.clusters
    )
    return sheaves.RankOneSheaf(
        stalks, sheaves.Divisor.make(inf=-2 * l), f"omega^{l}"
    )


def section_space(analysis, l):
    """(h0, h1) of the degree-l hypersurface sections of the image."""
    if l < 1:
        raise ValueError("positive level required")
    mc = analysis.mc
    if mc is None or not mc.rmt_verified:
        raise ModelNotVerified("canonical model comparison must pass first")
    g = analysis.g
    if mc.hyperelliptic:
        return (l * (g - 1) + 1, 0)
    sheaf = hat_polarization(analysis, l)
    hat = analysis.model.curve
    secs = sheaves.global_sections(hat, sheaf)
    dual = sheaves.dual_into_omega(hat, sheaf, analysis.hat_omega_stalks)
    h1 = len(sheaves.global_sections(hat, dual))
    return (len(secs), h1)


def normality_profile(analysis):
    """Linear/projective/arithmetic normality and extremality flags."""
    g = analysis.g
    ip = analysis.ip
    levels = ip.levels
    h0s, h1s = [], []
    for l in range(1, levels + 1):
        a, b = section_space(analysis, l)
        h0s.append(a)
        h1s.append(b)
    linearly = h0s[0] == g
    projectively = all(v == h for v, h in zip(ip.hilbert, h0s))
    smooth_model = analysis.mc.hyperelliptic or analysis.model.smooth
    d_prime, g_prime = ip.d_prime, ip.g_prime
    if d_prime > 2 * (g - 1):
        raise UnsupportedDegreeRegime(
            f"image degree {d_prime} exceeds 2g-2 = {2 * (g - 1)}"
        )
    if d_prime < 2 * (g - 1):
        extremal = g_prime == d_prime - (g - 1)
    else:
        extremal = g_prime == g
    return NormalityProfile(
        levels=levels,
        h0=tuple(h0s),
        h1=tuple(h1s),
        hilbert=ip.hilbert,
        linearly_normal=linearly,
        projectively_normal=projectively,
        arithmetically_normal=projectively and smooth_model,
        extremal=extremal,
        smooth_model=smooth_model,
    )


@dataclass(frozen=True)
class IdealGenerationReport:
    dims: tuple               # dim I_l for l = 2..levels
    levels: int
    checked_through: int      # last level actually verified (ambient cap)
    generated: bool
    quadrics_only: bool       # quadric multiples alone span (when checked)
    applicable: bool          # the generation claim applies to this curve
    note: str = ""


def _ideal_basis(pm, l, monomials, index):
    m = pm.common_degree
    width = l * m + 1
    rows = [[Fraction(0)] * len(monomials) for _ in range(width)]
    for col, mono in enumerate(monomials):
        prod = Poly.const(1)
        for v in mono:
            prod = prod * pm.components[v]
        for c, coeff in enumerate(prod.coeffs):
            rows[c][col] = coeff
    return nullspace(rows, len(monomials))


def ideal_generation_check(pm, eta, applicable, cap, ambient_limit=4000):
    """Do quadrics (and cubics) generate the image ideal through degree cap?

    The claim is asserted (GenerationFails) only when `applicable`;
    otherwise the dimension table is informational.  Levels whose
    monomial ambient exceeds `ambient_limit` are skipped and reported.
    """
    nvars = len(pm.components)
    levels = []
    note = ""

    def monos(l):
        return list(itertools.combinations_with_replacement(range(nvars), l))

    bases = {}
    dims = []
    top = 2
    for l in range(2, cap + 1):
        if comb(nvars + l - 1, l) > ambient_limit:
            note = f"levels above {l - 1} skipped: monomial ambient exceeds {ambient_limit}"
            break
        ml = monos(l)
        index = {mono: k for k, mono in enumerate(ml)}
        bases[l] = (_ideal_basis(pm, l, ml, index), ml, index)
        dims.append(len(bases[l][0]))
        top = l
    generated = True
    quadrics_only = True
    for l in range(4, top + 1):
        target_dim = len(bases[l][0])
        _, ml, index = bases[l]

        def multiples(src_l):
            vecs = []
            src_basis, src_m, _ = bases[src_l]
            for q in src_basis:
                terms = [(mono, c) for mono, c in zip(src_m, q) if c]
                for beta in itertools.combinations_with_replacement(
                    range(nvars), l - src_l
                ):
                    vec = [Fraction(0)] * len(ml)
                    for mono, c in terms:
                        merged = tuple(sorted(mono + beta))
                        vec[index[merged]] += c
                    vecs.append(vec)
            return vecs

        from_quadrics = multiples(2)
        dim_q = reduce_basis(from_quadrics, len(ml)).dim if from_quadrics else 0
        if dim_q != target_dim:
            quadrics_only = False
            both = from_quadrics + multiples(3)
            dim_qc = reduce_basis(both, len(ml)).dim if both else 0
            if dim_qc != target_dim:
                generated = False
    if applicable and not generated:
        raise GenerationFails(
            "quadrics and cubics fail to span the image ideal in the checked range"
        )
    if applicable and eta >= 2 and not quadrics_only:
        raise GenerationFails("quadrics alone must suffice when eta >= 2")
    return IdealGenerationReport(
        dims=tuple(dims),
        levels=cap,
        checked_through=top,
        generated=generated,
        quadrics_only=quadrics_only,
        applicable=applicable,
        note=note,
    )


@dataclass(frozen=True)
class TheoremVerdict:
    id: str
    conditions: tuple         # ((name, bool), ...)
    equivalent: bool
    applicable: bool
    riders: tuple = ()        # ((name, bool), ...), asserted when applicable
    notes: str = ""

    def as_dict(self):
        return {
            "id": self.id,
            "conditions": {k: v for k, v in self.conditions},
            "equivalent": self.equivalent,
            "applicable": self.applicable,
            "riders": {k: v for k, v in self.riders},
            "notes": self.notes,
        }


def _verdict(vid, pairs, applicable=True, riders=(), notes=""):
    vals = [v for _, v in pairs]
    equivalent = all(vals) or not any(vals)
    return TheoremVerdict(vid, tuple(pairs), equivalent, applicable, tuple(riders), notes)


def _maximal_embdim(curve, cluster):
    inv = cluster_invariants(cluster, curve.scale)
    return inv.embdim == inv.multiplicity, inv


def theorem_suite(analysis):
    """Evaluate every theorem's conditions independently and demand
    internal consistency; raises EquivalenceViolation on any failure."""
    curve = analysis.curve
    g = analysis.g
    prof = analysis.profile
    mc = analysis.mc
    ip = analysis.ip
    np = analysis.normality
    gorenstein = prof.gorenstein
    hyper = mc.hyperelliptic
    d_prime, g_prime = ip.d_prime, ip.g_prime
    blow = analysis.model
    verdicts = []

    # -- nonhyperelliptic Gorenstein curves and their extremal models --------
    cond = [
        ("nonhyperelliptic_and_gorenstein", (not hyper) and gorenstein),
        ("model_degree_is_2g_minus_2", d_prime == 2 * g - 2),
        ("model_genus_equals_genus", g_prime == g),
        ("degree_is_model_genus_plus_g_minus_2", d_prime == g_prime + g - 2),
        (
            "canonical_map_is_isomorphism",
            (not hyper) and blow.total_xi() == 0 and mc.rmt_verified,
        ),
        (
            "extremal_of_degree_2r",
            d_prime == 2 * (g - 1) and g - 1 >= 2 and g_prime == g,
        ),
    ]
    verdicts.append(_verdict("gorenstein_canonical_embedding", cond))

    # -- rational normal canonical image --------------------------------------
    cone = analysis.cone_presentation
    cond = [
        ("hyperelliptic_or_nearly_normal", hyper or prof.nearly_normal),
        ("cone_presentation_exists", cone is not None),
        ("image_is_rational_normal_curve", d_prime == g - 1 and g_prime == 0),
    ]
    verdicts.append(_verdict("rational_normal_model", cond))

    # -- arithmetically normal models (non-Gorenstein hypothesis) -------------
    smooth = np.smooth_model
    cond = [
        ("arithmetically_normal", np.arithmetically_normal),
        ("smooth_and_projectively_normal", smooth and np.projectively_normal),
        ("smooth_and_linearly_normal", smooth and np.linearly_normal),
        ("smooth_and_extremal", smooth and np.extremal),
        ("degree_is_g_minus_1", d_prime == g - 1),
        ("nearly_normal", prof.nearly_normal),
        (
            "nearly_gorenstein_with_smooth_blowup",
            prof.nearly_gorenstein and blow.smooth,
        ),
    ]
    riders = []
    if not gorenstein and all(v for _, v in cond):
        ok_mult, inv = _maximal_embdim(curve, curve.clusters[0])
        riders.append(("multiplicity_is_g_plus_1", inv.multiplicity == g + 1))
        riders.append(("maximal_embedding_dimension", ok_mult))
    verdicts.append(
        _verdict(
            "arithmetically_normal_model",
            cond,
            applicable=not gorenstein,
            riders=riders,
            notes="normalization genus 0 substituted in the degree condition",
        )
    )

    # -- projectively normal models (non-Gorenstein hypothesis) ----------------
    endo_matches = False
    endo_cluster = None
    for idx, cl in enumerate(curve.clusters):
        p = prof.clusters[idx]
        if p.gorenstein:
            continue
        others_gorenstein = all(
            q.gorenstein for j, q in enumerate(prof.clusters) if j != idx
        )
        endo = localmod.colon(cl.maximal_ideal(), cl.maximal_ideal())
        if others_gorenstein and endo.equals(blow.ohat_rings[idx]):
            endo_matches = True
            endo_cluster = idx
    cond = [
        ("projectively_normal", np.projectively_normal),
        ("linearly_normal", np.linearly_normal),
        ("extremal", np.extremal),
        ("degree_is_model_genus_plus_g_minus_1", d_prime == g_prime + g - 1),
        ("nearly_gorenstein", prof.nearly_gorenstein),
        ("model_is_endomorphism_spec_of_maximal_ideal", endo_matches),
    ]
    riders = []
    if not gorenstein and all(v for _, v in cond):
        cl = curve.clusters[endo_cluster]
        ok_mult, inv = _maximal_embdim(curve, cl)
        hat_gor = all(
            all(
                q.eta == 0
                for q in _hat_profiles(analysis, name)
            )
            for _, name in analysis.model.partitions[endo_cluster]
            if name is not None
        )
        riders.append(("maximal_embdim_iff_model_gorenstein", ok_mult == hat_gor))
        igr = analysis.ideal_generation
        if igr is not None and igr.applicable:
            riders.append(("cut_out_by_quadrics_and_cubics", igr.generated))
            if prof.eta >= 2:
                riders.append(("quadrics_suffice", igr.quadrics_only))
    verdicts.append(
        _verdict(
            "projectively_normal_model",
            cond,
            applicable=not gorenstein,
            riders=riders,
        )
    )

    # -- genus two -------------------------------------------------------------
    if g == 2:
        cond = [
            ("hyperelliptic", hyper),
            ("gorenstein", gorenstein),
        ]
        verdicts.append(_verdict("genus_two_hyperelliptic", cond))

    # -- sections of the blown-up polarization ----------------------------------
    if not gorenstein:
        if hyper:
            raise EquivalenceViolation("a hyperelliptic curve must be Gorenstein")
        h0_hat = np.h0[0]
        inclusion = _omega_sections_inside_hat(analysis)
        cond = [
            ("blown_up_polarization_has_g_sections", h0_hat == g),
            ("section_spaces_coincide", h0_hat == g and inclusion),
            ("nearly_gorenstein", prof.nearly_gorenstein),
        ]
        riders = []
        if all(v for _, v in cond):
            riders.append(("linearly_normal", np.linearly_normal))
        verdicts.append(
            _verdict("nearly_gorenstein_sections", cond, riders=riders)
        )

    # -- growth bounds and the Gorenstein difference identity --------------------
    growth_ok = True
    for l in range(1, np.levels + 1):
        lower = min(d_prime, l * (g - 2) + 1)
        if np.h0[l - 1] - (np.h0[l - 2] if l >= 2 else 1) < lower:
            growth_ok = False
    if hyper:
        h1_ok = all(v == 0 for v in np.h1)
    elif gorenstein:
        h1_ok = np.h1[0] == 1 and all(v == 0 for v in np.h1[1:])
    else:
        h1_ok = all(v == 0 for v in np.h1)
    diff_ok = True
    if gorenstein and not hyper:
        h0w = [analysis.omega_power_h0h1(l) for l in range(1, np.levels + 1)]
        for l in range(2, np.levels + 1):
            lhs = h0w[l - 1][0] - h0w[l - 2][0]
            rhs = np.h0[l - 1] - np.h0[l - 2]
            if lhs != rhs:
                diff_ok = False
            if h0w[l - 1][1] != 0:
                diff_ok = False
    cond = [("castelnuovo_growth", growth_ok), ("h1_vanishing_pattern", h1_ok)]
    if gorenstein and not hyper:
        cond.append(("difference_identity", diff_ok))
    verdicts.append(
        _verdict("hilbert_growth_bounds", cond, notes="all conditions must hold")
    )

    for v in verdicts:
        if v.applicable and not v.equivalent:
            raise EquivalenceViolation(
                f"{v.id}: conditions disagree: {dict(v.conditions)}"
            )
        if v.applicable and any(not ok for _, ok in v.riders):
            raise EquivalenceViolation(
                f"{v.id}: rider failed: {dict(v.riders)}"
            )
    return verdicts


def _hat_profiles(analysis, name):
    for idx, cl in enumerate(analysis.model.curve.clusters):
        if cl.name == name:
            yield analysis.hat_profile.clusters[idx]


def _omega_sections_inside_hat(analysis):
    """H0(omega) sits inside the sections of the blown-up polarization."""
    sheaf = hat_polarization(analysis, 1)
    hat = analysis.model.curve
    for f in analysis.sections.ratios():
        if not _function_in_sheaf(hat, sheaf, f):
            return False
    return True


def _function_in_sheaf(curve, sheaf, f):
    for cl, stalk in zip(curve.clusters, sheaf.stalks):
        elt = sheaves.rational_to_elt(cl, f, stalk.tails)
        if not stalk.contains(elt):
            return False
    for a, mlt in sheaf.divisor.finite:
        if f.valuation_at(a) < -mlt:
            return False
    if f.valuation_at_infinity() < -sheaf.divisor.inf:
        return False
    return True
