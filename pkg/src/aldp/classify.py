"""Positivity classification, conic-bundle structure, and the built-in
catalog of strongly asymptotically log del Pezzo families.

The four mutually exclusive positivity classes of the adjoint
anticanonical divisor M = -K - sum C_i are:

    Aleph:  the boundary is anticanonical (M = 0),
    Beth:   M^2 = 0 but M is nonzero,
    Gimel:  M is big and nef but not ample,
    Daleth: M is ample.

Classes are always computed from the lattice; the catalog additionally
stores the expected class from the classification lists so tests can
diff the two.  Automorphism-group descriptions, reductivity, and the existence
status of Kaehler-Einstein edge metrics at small angles are carried as
static metadata.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import DivisorClass, canonical_class, exceptional
from .surface import IncidencePoint, SurfacePair, blow_up, make_fn, make_p2, test_curves

ALEPH = "Aleph"
BETH = "Beth"
GIMEL = "Gimel"
DALETH = "Daleth"

KEE_EXISTS = "ExistsSmallBeta"
KEE_NOT_EXISTS = "NotExistsSmallBeta"
KEE_OPEN = "Open"


def positivity_class(pair: SurfacePair) -> str:
    """Compute the class of M = -K - sum C_i from the lattice data."""
    m = -canonical_class(pair.basis) - pair.boundary_sum()
    if m.is_zero():
        return ALEPH
    if m.square() == 0:
        return BETH
    curves = test_curves(pair)
    zeros = (Fraction(0),) * pair.r
    strict_ok = m.square() > 0
    nef_ok = m.square() > 0
    for t in curves.explicit:
        v = m.dot(t.divisor)
        strict_ok = strict_ok and v > 0
        nef_ok = nef_ok and v >= 0
    for cert in curves.certificates:
        for _, poly, strict in cert.inequalities:
            v = poly.evaluate(zeros)
            strict_ok = strict_ok and (v > 0 if strict else v >= 0)
            nef_ok = nef_ok and v >= 0
    if strict_ok:
        return DALETH
    if nef_ok:
        return GIMEL
    raise RuntimeError(
        "adjoint anticanonical class is not nef at angle zero; "
        "the pair cannot be strongly asymptotically log del Pezzo"
    )


# ---------------------------------------------------------------------------
# conic bundles (class Beth)


@dataclass(frozen=True)
class ConicBundle:
    """Fibration to the line attached to a Beth pair: M = l * fiber."""

    l: int
    fiber_class: DivisorClass
    reducible_fibers: tuple  # of (DivisorClass, DivisorClass)

    def to_json(self):
        return {
            "components": self.l,
            "fiber": self.fiber_class.to_json(),
            "fiber_pretty": self.fiber_class.pretty(),
            "reducible_fibers": [
                [a.to_json(), b.to_json()] for a, b in self.reducible_fibers
            ],
        }


def _boundary_graph_components(pair: SurfacePair) -> int:
    adj = pair.adjacency()
    r = pair.r
    seen, comps = set(), 0
    for start in range(r):
        if start in seen:
            continue
        comps += 1
        stack = [start]
        while stack:
            i = stack.pop()
            if i in seen:
                continue
            seen.add(i)
            stack.extend(j for j in range(r) if j != i and adj[i][j] > 0)
    return comps


def conic_bundle(pair: SurfacePair) -> ConicBundle:
    """Fiber class and reducible fibers of |M| for a Beth pair; the fiber
    class is M divided by the number of boundary chains and each blown-up
    point splits the fiber through it into E_P plus its residual."""
    if positivity_class(pair) != BETH:
        raise ValueError("conic bundle structure exists only in class Beth")
    m = -canonical_class(pair.basis) - pair.boundary_sum()
    l = _boundary_graph_components(pair)
    fiber = Fraction(1, l) * m
    if any(c.denominator != 1 for c in fiber.coords):
        raise RuntimeError("fiber class is not integral; inconsistent Beth pair")
    reducible = []
    for k in range(pair.num_points):
        e = exceptional(pair.basis, k + 1)
        reducible.append((e, fiber - e))
    return ConicBundle(l, fiber, tuple(reducible))


# ---------------------------------------------------------------------------
# catalog


def _pts(assignment):
    return [IncidencePoint((c,)) for c in assignment]


def _round_robin(components, m):
    return _pts([components[i % len(components)] for i in range(m)])


@dataclass(frozen=True)
class CatalogEntry:
    """One family of the classification with its parameter domain and its
    recorded metadata.  aut_rules and kee_rules are (n_lo, n_hi, m_lo,
    m_hi, payload) tuples matched in order; None bounds are open."""

    family_id: str
    r: int
    has_n: bool
    m_domain: tuple  # (lo, hi or None), or None when the family has no m
    summary: str
    positivity: str
    builder: object = field(repr=False, compare=False)
    aut_rules: tuple = ()
    kee_rules: tuple = ()
    alpha_notes: str = None

    def n_values(self, cap: int = 3):
        return range(0, cap + 1) if self.has_n else (None,)

    def m_values(self, cap: int = 12):
        if self.m_domain is None:
            return (None,)
        lo, hi = self.m_domain
        hi = min(hi, cap) if hi is not None else cap
        return range(lo, hi + 1)

    def instantiate(self, n=None, m=None) -> SurfacePair:
        if self.has_n:
            if n is None or n < 0:
                raise ValueError("%s needs a ruling parameter n >= 0" % self.family_id)
        elif n not in (None, 0):
            raise ValueError("%s takes no ruling parameter" % self.family_id)
        if self.m_domain is not None:
            lo, hi = self.m_domain
            if m is None or m < lo or (hi is not None and m > hi):
                dom = "%d..%s" % (lo, hi if hi is not None else "inf")
                raise ValueError("%s needs m in %s" % (self.family_id, dom))
        elif m not in (None, 0):
            raise ValueError("%s takes no blow-up parameter" % self.family_id)
        pair = self.builder(n, m)
        params = {}
        if self.has_n:
            params["n"] = n
        if self.m_domain is not None:
            params["m"] = m
        return pair.with_provenance(self.family_id, params)

    def _match(self, rules, n, m):
        n = n if n is not None else 0
        m = m if m is not None else 0
        for n_lo, n_hi, m_lo, m_hi, payload in rules:
            if n_lo is not None and n < n_lo:
                continue
            if n_hi is not None and n > n_hi:
                continue
            if m_lo is not None and m < m_lo:
                continue
            if m_hi is not None and m > m_hi:
                continue
            return payload
        return None

    def aut(self, n=None, m=None):
        """(group description, reductive flag); (None, None) if unrecorded."""
        payload = self._match(self.aut_rules, n, m)
        return payload if payload else (None, None)

    def kee(self, n=None, m=None) -> str:
        payload = self._match(self.kee_rules, n, m)
        return payload if payload else KEE_OPEN

    def to_json(self):
        return {
            "family": self.family_id,
            "components": self.r,
            "has_n": self.has_n,
            "m_domain": list(self.m_domain) if self.m_domain else None,
            "summary": self.summary,
            "positivity": self.positivity,
            "alpha_notes": self.alpha_notes,
        }


ANY = (None, None, None, None)


def _entry(family_id, r, has_n, m_domain, summary, positivity, builder, aut=(), kee=(), notes=None):
    return CatalogEntry(
        family_id, r, has_n, m_domain, summary, positivity, builder, tuple(aut), tuple(kee), notes
    )


def _catalog_entries():
    e = []

    # -- single smooth boundary component
    e.append(_entry(
        "I.1A", 1, False, None, "plane with a smooth cubic", ALEPH,
        lambda n, m: make_p2([3]),
        aut=[ANY + (("finite", True),)],
        kee=[ANY + (KEE_EXISTS,)],
        notes="edge metrics exist for every angle",
    ))
    e.append(_entry(
        "I.1B", 1, False, None, "plane with a smooth conic", DALETH,
        lambda n, m: make_p2([2]),
        aut=[ANY + (("PGL2(C)", True),)],
        notes="no edge metrics at small angles (log slope stability)",
    ))
    e.append(_entry(
        "I.1C", 1, False, None, "plane with a line", DALETH,
        lambda n, m: make_p2([1]),
        aut=[ANY + (("Ga^2 x| GL2(C)", False),)],
        kee=[ANY + (KEE_NOT_EXISTS,)],
    ))
    e.append(_entry(
        "I.2.n", 1, True, None, "ruled surface with its negative section", DALETH,
        lambda n, m: make_fn(n, [(1, 0)]),
        aut=[
            (0, 0, None, None, ("PGL2(C) x (Ga x| Gm)", False)),
            (1, None, None, None, ("Ga^(n+1) x| (GL2(C)/mu_n)", False)),
        ],
        kee=[ANY + (KEE_NOT_EXISTS,)],
    ))
    e.append(_entry(
        "I.3A", 1, False, None, "F1 with a smooth member of |2Z+2F|", BETH,
        lambda n, m: make_fn(1, [(2, 2)]),
        aut=[ANY + (("Gm (identity component)", True),)],
        kee=[ANY + (KEE_EXISTS,)],
        notes="alpha_G = 1 for every angle for a dihedral-symmetric member",
    ))
    e.append(_entry(
        "I.3B", 1, False, None, "F1 with a smooth member of |Z+F|", DALETH,
        lambda n, m: make_fn(1, [(1, 1)]),
        aut=[ANY + (("GL2(C)", True),)],
        notes="no edge metrics at small angles (log slope stability)",
    ))
    e.append(_entry(
        "I.4A", 1, False, None, "quadric with a smooth (2,2) curve", ALEPH,
        lambda n, m: make_fn(0, [(2, 2)]),
        aut=[ANY + (("finite", True),)],
        kee=[ANY + (KEE_EXISTS,)],
    ))
    e.append(_entry(
        "I.4B", 1, False, None, "quadric with a smooth (2,1) curve", BETH,
        lambda n, m: make_fn(0, [(2, 1)]),
        aut=[ANY + (("trivial or Gm (identity component)", True),)],
        kee=[ANY + (KEE_EXISTS,)],
        notes="alpha_G = 1 for every angle for a D10-symmetric member",
    ))
    e.append(_entry(
        "I.4C", 1, False, None, "quadric with a smooth (1,1) curve", DALETH,
        lambda n, m: make_fn(0, [(1, 1)]),
        aut=[ANY + (("PGL2(C) (identity component)", True),)],
    ))
    e.append(_entry(
        "I.5.m", 1, False, (1, 8),
        "del Pezzo blow-up of the plane cubic pair at points on the cubic", ALEPH,
        lambda n, m: blow_up(make_p2([3]), _pts([0] * m)),
        aut=[ANY + (("finite", True),)],
        kee=[ANY + (KEE_EXISTS,)],
    ))
    e.append(_entry(
        "I.6B.m", 1, False, (1, None), "blow-up of the conic pair at points on the conic", GIMEL,
        lambda n, m: blow_up(make_p2([2]), _pts([0] * m)),
        aut=[
            (None, None, 1, 1, ("Ga x| Gm^2", False)),
            (None, None, 2, 2, ("Gm (identity component)", True)),
            (None, None, 3, None, ("finite", True)),
        ],
        kee=[(None, None, 1, 1, KEE_NOT_EXISTS)],
    ))
    e.append(_entry(
        "I.6C.m", 1, False, (1, None), "blow-up of the line pair at points on the line", GIMEL,
        lambda n, m: blow_up(make_p2([1]), _pts([0] * m)),
        aut=[
            (None, None, 1, 1, ("Ga^2 x| (Ga x| Gm^2)", False)),
            (None, None, 2, 2, ("Ga^2 x| Gm^2 (identity component)", False)),
            (None, None, 3, None, ("Ga^2 x| Gm (identity component)", False)),
        ],
        kee=[ANY + (KEE_NOT_EXISTS,)],
    ))
    e.append(_entry(
        "I.7.n.m", 1, True, (1, None),
        "blow-up of the negative-section pair at points on the section", GIMEL,
        lambda n, m: blow_up(make_fn(n, [(1, 0)]), _pts([0] * m)),
        aut=[
            (0, 0, 1, 1, ("(Ga x| Gm) x (Ga x| Gm)", False)),
            (0, 0, 2, 2, ("Gm x (Ga x| Gm) (identity component)", False)),
            (0, 0, 3, None, ("Ga x| Gm (identity component)", False)),
            (1, 1, 1, 1, ("Ga^2 x| (Ga x| Gm^2)", False)),
            (1, 1, 2, 2, ("Ga^2 x| Gm^2 (identity component)", False)),
            (1, 1, 3, None, ("Ga^2 x| Gm (identity component)", False)),
            (2, None, 1, 1, ("Ga^(n+1) x| ((Ga x| Gm^2)/mu_n)", False)),
            (2, None, 2, 2, ("Ga^(n+1) x| (Gm^2/mu_n) (identity component)", False)),
            (2, None, 3, None, ("Ga^(n+1) x| (Gm/mu_n) (identity component)", False)),
        ],
        kee=[ANY + (KEE_NOT_EXISTS,)],
    ))
    e.append(_entry(
        "I.8B.m", 1, False, (1, None),
        "blow-up of the F1 section pair at points on the boundary", GIMEL,
        lambda n, m: blow_up(make_fn(1, [(1, 1)]), _pts([0] * m)),
        aut=[
            (None, None, 1, 1, ("Ga x| Gm^2", False)),
            (None, None, 2, 2, ("Gm^2 (identity component)", True)),
            (None, None, 3, None, ("Gm (identity component)", True)),
        ],
        kee=[(None, None, 1, 1, KEE_NOT_EXISTS)],
    ))
    e.append(_entry(
        "I.9B.m", 1, False, (1, None),
        "blow-up of the quadric (2,1) pair; no two points share a (0,1) curve", BETH,
        lambda n, m: blow_up(make_fn(0, [(2, 1)]), _pts([0] * m)),
        aut=[ANY + (("subgroup of Gm (identity component)", True),)],
        kee=[(None, None, 5, 5, KEE_EXISTS)],
        notes=(
            "m=5: alpha_G = 1 for the Clebsch member; members with an Eckardt "
            "point on the boundary line have alpha = (1+b)/(2+b)"
        ),
    ))
    e.append(_entry(
        "I.9C.m", 1, False, (1, None),
        "blow-up of the quadric (1,1) pair at points on the boundary", GIMEL,
        lambda n, m: blow_up(make_fn(0, [(1, 1)]), _pts([0] * m)),
        aut=[
            (None, None, 1, 1, ("Ga x| Gm (identity component)", False)),
            (None, None, 2, 2, ("Gm (identity component)", True)),
            (None, None, 3, None, ("finite", True)),
        ],
        kee=[(None, None, 1, 1, KEE_NOT_EXISTS)],
    ))

    # -- two boundary components
    e.append(_entry(
        "II.1A", 2, False, None, "plane with a conic and a line", ALEPH,
        lambda n, m: make_p2([2, 1]),
    ))
    e.append(_entry(
        "II.1B", 2, False, None, "plane with two lines", DALETH,
        lambda n, m: make_p2([1, 1]),
    ))
    e.append(_entry(
        "II.2A.n", 2, True, None, "ruled surface with its section and a disjoint zero section", BETH,
        lambda n, m: make_fn(n, [(1, 0), (1, n)]),
    ))
    e.append(_entry(
        "II.2B.n", 2, True, None, "ruled surface with its section and a crossing section", BETH,
        lambda n, m: make_fn(n, [(1, 0), (1, n + 1)]),
    ))
    e.append(_entry(
        "II.2C.n", 2, True, None, "ruled surface with its section and a fiber", DALETH,
        lambda n, m: make_fn(n, [(1, 0), (0, 1)]),
    ))
    e.append(_entry(
        "II.3", 2, False, None, "F1 with two members of |Z+F|", BETH,
        lambda n, m: make_fn(1, [(1, 1), (1, 1)]),
    ))
    e.append(_entry(
        "II.4A", 2, False, None, "quadric with two (1,1) curves", ALEPH,
        lambda n, m: make_fn(0, [(1, 1), (1, 1)]),
    ))
    e.append(_entry(
        "II.4B", 2, False, None, "quadric with a (2,1) and a (0,1) curve", ALEPH,
        lambda n, m: make_fn(0, [(2, 1), (0, 1)]),
    ))
    e.append(_entry(
        "II.5A.m", 2, False, (1, 5),
        "del Pezzo blow-up of the conic-line pair away from the crossings", ALEPH,
        lambda n, m: blow_up(make_p2([2, 1]), _pts([0] * min(m, 4) + [1] * (m - min(m, 4)))),
    ))
    e.append(_entry(
        "II.5B.m", 2, False, (1, None),
        "blow-up of the two-line pair away from the crossing", GIMEL,
        lambda n, m: blow_up(make_p2([1, 1]), _round_robin([0, 1], m)),
    ))
    e.append(_entry(
        "II.6A.n.m", 2, True, (1, None),
        "blow-up of the disjoint-sections pair; at most one point per fiber", BETH,
        lambda n, m: blow_up(make_fn(n, [(1, 0), (1, n)]), _round_robin([0, 1], m)),
    ))
    e.append(_entry(
        "II.6B.n.m", 2, True, (1, None),
        "blow-up of the crossing-sections pair away from the crossing", BETH,
        lambda n, m: blow_up(make_fn(n, [(1, 0), (1, n + 1)]), _round_robin([0, 1], m)),
    ))
    e.append(_entry(
        "II.6C.n.m", 2, True, (1, None),
        "blow-up of the section-fiber pair away from the crossing", GIMEL,
        lambda n, m: blow_up(make_fn(n, [(1, 0), (0, 1)]), _round_robin([0, 1], m)),
    ))
    e.append(_entry(
        "II.7.m", 2, False, (1, None),
        "blow-up of the F1 double-section pair; at most one point per fiber", BETH,
        lambda n, m: blow_up(make_fn(1, [(1, 1), (1, 1)]), _round_robin([0, 1], m)),
    ))
    e.append(_entry(
        "II.8.m", 2, False, (1, 4),
        "del Pezzo blow-up of the quadric (2,1)+(0,1) pair along the (2,1) curve", ALEPH,
        lambda n, m: blow_up(make_fn(0, [(2, 1), (0, 1)]), _pts([0] * m)),
    ))

    # -- three and four boundary components
    e.append(_entry(
        "III.1", 3, False, None, "plane with three general lines", ALEPH,
        lambda n, m: make_p2([1, 1, 1]),
        notes="alpha = max(b)/sum(b) for the triangle of lines",
    ))
    e.append(_entry(
        "III.2", 3, False, None, "quadric with a (1,1), a (0,1) and a (1,0) curve", ALEPH,
        lambda n, m: make_fn(0, [(1, 1), (0, 1), (1, 0)]),
    ))
    e.append(_entry(
        "III.3.n", 3, True, None, "ruled surface with section, fiber and zero section", BETH,
        lambda n, m: make_fn(n, [(1, 0), (0, 1), (1, n)]),
    ))
    e.append(_entry(
        "III.4.m", 3, False, (1, 3),
        "del Pezzo blow-up of the line triangle, one point per line", ALEPH,
        lambda n, m: blow_up(make_p2([1, 1, 1]), _pts(list(range(m)))),
    ))
    e.append(_entry(
        "III.5.n.m", 3, True, (1, None),
        "blow-up of the section-fiber-zero-section pair away from the fiber", BETH,
        lambda n, m: blow_up(make_fn(n, [(1, 0), (0, 1), (1, n)]), _round_robin([0, 2], m)),
    ))
    e.append(_entry(
        "IV", 4, False, None, "quadric with two (1,0) and two (0,1) curves", ALEPH,
        lambda n, m: make_fn(0, [(1, 0), (1, 0), (0, 1), (0, 1)]),
    ))
    return e


_CATALOG = None


def catalog():
    """All families, in catalog order."""
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = tuple(_catalog_entries())
    return _CATALOG


def catalog_entry(family_id: str) -> CatalogEntry:
    for entry in catalog():
        if entry.family_id == family_id:
            return entry
    raise KeyError("unknown family %r" % (family_id,))


def parse_family_id(text: str):
    """Resolve a concrete id like 'I.7.2.3' or 'I.9B.5' against the
    catalog, returning (entry, n, m)."""
    for entry in catalog():
        if text == entry.family_id:
            return entry, None, None
    parts = text.split(".")
    for entry in catalog():
        pattern = entry.family_id.split(".")
        if len(parts) != len(pattern):
            continue
        n = m = None
        ok = True
        for got, want in zip(parts, pattern):
            if want == "n" or want == "m":
                if not got.isdigit():
                    ok = False
                    break
                if want == "n":
                    n = int(got)
                else:
                    m = int(got)
            elif got != want:
                ok = False
                break
        if ok:
            return entry, n, m
    raise KeyError("unknown family %r" % (text,))


def instantiate(family_id: str, n=None, m=None) -> SurfacePair:
    """Build a concrete member of a family, accepting either a pattern id
    plus keyword parameters ('I.7.n.m', n=1, m=2) or a concrete id
    ('I.7.1.2')."""
    entry, n_inline, m_inline = parse_family_id(family_id)
    n = n if n is not None else n_inline
    m = m if m is not None else m_inline
    return entry.instantiate(n=n, m=m)


def boundary_component_bound() -> int:
    """A boundary of a strongly asymptotically log del Pezzo surface has
    at most this many components."""
    return 4


# ---------------------------------------------------------------------------
# recognizing minimal models


def match_minimal_family(pair: SurfacePair):
    """Identify a rank <= 2 pair with its catalog family; returns
    (family_id, params)."""
    if pair.basis.is_blow_up:
        raise ValueError("only unblown pairs can be matched")
    if pair.basis.model == "P2":
        degrees = tuple(sorted((int(c.coords[0]) for c in pair.base_boundary), reverse=True))
        table = {
            (3,): "I.1A",
            (2,): "I.1B",
            (1,): "I.1C",
            (2, 1): "II.1A",
            (1, 1): "II.1B",
            (1, 1, 1): "III.1",
        }
        if degrees in table:
            return table[degrees], {}
        raise KeyError("no catalog family with plane boundary degrees %r" % (degrees,))

    n = pair.basis.n

    def classes_with(swap):
        out = []
        for c in pair.base_boundary:
            a, b = int(c.coords[0]), int(c.coords[1])
            out.append((b, a) if swap else (a, b))
        return tuple(sorted(out, reverse=True))

    def patterns(n):
        table = {
            ((1, 0),): ("I.2.n", {"n": n}),
            ((1, n), (1, 0)): ("II.2A.n", {"n": n}),
            ((1, n + 1), (1, 0)): ("II.2B.n", {"n": n}),
            ((1, 0), (0, 1)): ("II.2C.n", {"n": n}),
            ((1, n), (1, 0), (0, 1)): ("III.3.n", {"n": n}),
        }
        if n == 1:
            table[((2, 2),)] = ("I.3A", {})
            table[((1, 1),)] = ("I.3B", {})
            table[((1, 1), (1, 1))] = ("II.3", {})
        if n == 0:
            table[((2, 2),)] = ("I.4A", {})
            table[((2, 1),)] = ("I.4B", {})
            table[((1, 1),)] = ("I.4C", {})
            table[((0, 1),)] = ("I.2.n", {"n": 0})
            table[((1, 1), (1, 1))] = ("II.4A", {})
            table[((2, 1), (0, 1))] = ("II.4B", {})
            table[((1, 1), (1, 0), (0, 1))] = ("III.2", {})
            table[((1, 0), (1, 0), (0, 1), (0, 1))] = ("IV", {})
        return table

    table = patterns(n)
    swaps = (False, True) if n == 0 else (False,)
    for swap in swaps:
        key = classes_with(swap)
        if key in table:
            return table[key]
    raise KeyError("no catalog family matches the boundary on F%d" % n)
