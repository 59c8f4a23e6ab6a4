"""One-stop analysis driver.

Validates a curve, then computes each derived object once and caches it:
dualizing data, canonical map, blowup, model comparison, Hilbert data,
normality flags, theorem verdicts and the Clifford audit.  Everything
downstream (CLI, reports, tests) reads from here.
"""

from functools import cached_property

from . import canonical, dualizing, normality, sheaves
from .curve import genus, validate_curve
from .errors import CanonCurveError

__all__ = ["CurveAnalysis"]


class CurveAnalysis:
    def __init__(self, curve, name="C", clifford_cap=4096, hilbert_cap=None,
                 ideal_ambient_limit=4000):
        self.curve = curve
        self.name = name
        self.clifford_cap = clifford_cap
        self.hilbert_cap = hilbert_cap
        self.ideal_ambient_limit = ideal_ambient_limit
        self.validation = validate_curve(curve)

    # -- section 2 data --------------------------------------------------------

    @cached_property
    def g(self):
        return genus(self.curve)

    @cached_property
    def stalks(self):
        return {
            cl.name: dualizing.omega_stalk(self.curve, cl)
            for cl in self.curve.clusters
        }

    @cached_property
    def sections(self):
        return dualizing.omega_sections(self.curve)

    @cached_property
    def profile(self):
        return dualizing.singularity_profile(self.curve, self.stalks)

    # -- canonical map and model ------------------------------------------------

    @cached_property
    def pm(self):
        return canonical.canonical_map(self.curve, self.sections, self.profile.eta)

    @cached_property
    def map_degree(self):
        return canonical.map_degree(self.pm, avoid=self.curve.branch_points())

    @cached_property
    def hyperelliptic(self):
        return self.map_degree == 2

    @cached_property
    def lam(self):
        if not self.hyperelliptic:
            return None
        return canonical.hyperelliptic_structure(self.curve, self.pm, self.map_degree)

    @cached_property
    def model(self):
        return canonical.blowup(self.curve, self.stalks)

    @cached_property
    def ip(self):
        return canonical.image_profile(self.pm, self.map_degree, cap=self.hilbert_cap)

    @cached_property
    def mc(self):
        return canonical.verify_rosenlicht(
            self.curve,
            sections=self.sections,
            stalks=self.stalks,
            model=None if self.hyperelliptic else self.model,
            pm=self.pm,
            degree=self.map_degree,
            ip=self.ip,
        )

    @cached_property
    def hat_omega_stalks(self):
        return [
            dualizing.omega_stalk(self.model.curve, cl)
            for cl in self.model.curve.clusters
        ]

    @cached_property
    def hat_profile(self):
        return dualizing.singularity_profile(
            self.model.curve,
            {
                cl.name: st
                for cl, st in zip(self.model.curve.clusters, self.hat_omega_stalks)
            },
        )

    @cached_property
    def cone_presentation(self):
        return canonical.cone_presentation(
            self.curve, self.profile.nearly_normal, self.lam
        )

    # -- normality and theorem data ----------------------------------------------

    @cached_property
    def normality(self):
        return normality.normality_profile(self)

    def omega_power_h0h1(self, l):
        cache = self.__dict__.setdefault("_omega_powers", {})
        if l not in cache:
            sheaf = normality.omega_power_sheaf(self, l)
            secs = sheaves.global_sections(self.curve, sheaf)
            dual = sheaves.dual_into_omega(
                self.curve, sheaf, list(self.stalks.values())
            )
            h1 = len(sheaves.global_sections(self.curve, dual))
            cache[l] = (len(secs), h1)
        return cache[l]

    @cached_property
    def ideal_generation(self):
        if self.map_degree != 1:
            return None
        applicable = (not self.profile.gorenstein) and self.profile.nearly_gorenstein
        return normality.ideal_generation_check(
            self.pm,
            self.profile.eta,
            applicable,
            cap=self.ip.levels,
            ambient_limit=self.ideal_ambient_limit,
        )

    @cached_property
    def verdicts(self):
        return normality.theorem_suite(self)

    @cached_property
    def clifford(self):
        pool = sheaves.audit_sheaves(
            self.curve,
            nearly_normal=self.profile.nearly_normal,
            lam=self.lam,
            cap=self.clifford_cap,
        )
        return sheaves.clifford_audit(
            self.curve,
            pool,
            omega_stalks=list(self.stalks.values()),
            lam=self.lam,
            nearly_normal=self.profile.nearly_normal,
        )

    def run_all(self):
        """Force every computation; raises the first violation if any."""
        self.profile
        self.mc
        self.normality
        self.ideal_generation
        self.verdicts
        self.clifford
        return self
