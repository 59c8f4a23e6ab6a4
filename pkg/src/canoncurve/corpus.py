"""Bundled example curves and the randomized test corpus.

E1..E6 are the six reference curves used across the test suite:

  E1  one cusp with value semigroup <3,4,5>          g=2, not Gorenstein
  E2  one cusp with value semigroup <2,5>            g=2, Gorenstein, hyperelliptic
  E3  three nodes in general position                g=3, plane-quartic type
  E4  contraction of 4*[0] (semigroup <4,5,6,7>)     g=3, eta=2
  E5  two cusps with value semigroup <3,4,5>         g=4, two bad points
  E6  two nodes                                      g=2, hyperelliptic

E3 deliberately avoids gluings {a,-a},{b,-b},{c,-c}: those all lie on
the involution t -> -t, which makes the curve hyperelliptic.
"""

import random
from fractions import Fraction

from .curve import CurveModel, make_cluster, serre_contract
from .semigroups import gaps, semigroup_elements

__all__ = ["bundled", "bundled_names", "random_corpus"]


def _mk(*clusters):
    return CurveModel(tuple(clusters))


def bundled():
    return {
        "E1": _mk(make_cluster("semigroup", [0], semigroup_gens=(3, 4, 5), name="P")),
        "E2": _mk(make_cluster("semigroup", [0], semigroup_gens=(2, 5), name="P")),
        "E3": _mk(
            make_cluster("node", [1, -1], name="N1"),
            make_cluster("node", [2, -2], name="N2"),
            make_cluster("node", [0, 3], name="N3"),
        ),
        "E4": serre_contract([(0, 4)], name="P"),
        "E5": _mk(
            make_cluster("semigroup", [0], semigroup_gens=(3, 4, 5), name="P0"),
            make_cluster("semigroup", [1], semigroup_gens=(3, 4, 5), name="P1"),
        ),
        "E6": _mk(
            make_cluster("node", [1, -1], name="N1"),
            make_cluster("node", [2, -2], name="N2"),
        ),
    }


def bundled_names():
    return list(bundled())


def _random_semigroup(rng, max_frobenius=12, max_delta=8):
    for _ in range(50):
        m = rng.randint(2, 5)
        gens = {m}
        for _ in range(rng.randint(1, 3)):
            gens.add(rng.randint(m + 1, m + max_frobenius))
        try:
            elems = semigroup_elements(sorted(gens))
        except Exception:
            continue
        gp = gaps(sorted(gens))
        if not gp:
            continue
        if gp[-1] <= max_frobenius and 1 <= len(gp) <= max_delta:
            return tuple(sorted(gens))
    return (2, 3)


def _fresh_points(rng, used, count):
    pts = []
    while len(pts) < count:
        a = Fraction(rng.randint(-12, 12), rng.choice((1, 1, 1, 2)))
        if a not in used:
            used.add(a)
            pts.append(a)
    return pts


def random_corpus(count=50, seed=20240811, min_genus=2, max_genus=8):
    """Deterministic random curves: semigroup clusters with Frobenius
    at most 12 plus node/cusp gluings, total genus between 2 and 8."""
    rng = random.Random(seed)
    out = []
    attempt = 0
    while len(out) < count:
        attempt += 1
        used = set()
        clusters = []
        g = 0
        for k in range(rng.randint(1, 3)):
            kind = rng.choice(["node", "cusp", "semigroup", "semigroup", "contracted"])
            name = f"P{k}"
            if kind == "node":
                pts = _fresh_points(rng, used, 2)
                cl = make_cluster("node", pts, name=name)
                g += 1
            elif kind == "cusp":
                pts = _fresh_points(rng, used, 1)
                cl = make_cluster("cusp", pts, name=name)
                g += 1
            elif kind == "semigroup":
                gens = _random_semigroup(rng)
                pts = _fresh_points(rng, used, 1)
                cl = make_cluster("semigroup", pts, semigroup_gens=gens, name=name)
                g += len(gaps(gens))
            else:
                r = rng.randint(1, 3)
                pts = _fresh_points(rng, used, r)
                mults = [rng.randint(1, 3) for _ in range(r)]
                if sum(mults) < 2:
                    mults[0] += 1
                conductor = tuple(mults)
                from .localmod import canonicalize, unit
                ring = canonicalize(r, [unit(r)], conductor)
                from .curve import Cluster
                cl = Cluster(name, tuple(pts), conductor, ring, kind="contracted")
                g += sum(mults) - 1
            if g > max_genus:
                break
            clusters.append(cl)
        total = sum(cl.delta() for cl in clusters)
        if not (min_genus <= total <= max_genus) or not clusters:
            continue
        curve = CurveModel(tuple(clusters))
        try:
            from .curve import validate_curve
            validate_curve(curve)
        except Exception:
            continue
        out.append((f"R{len(out):02d}", curve))
    return out
