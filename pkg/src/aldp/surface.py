"""Surface pair models: the plane, Hirzebruch surfaces, and one level of
blow-ups with combinatorial point incidence.

Points are tracked by incidence alone (which boundary components they lie
on, and which points share a ruling curve or a line), never by
coordinates.  General position is the default; degenerations are opt-in
declarations.  test_curves assembles the finite curve inventory plus the
family-level certificates that make the small-angle ampleness check of
the verifier complete for catalog-shaped pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .lattice import (
    BetaDivisor,
    BetaPolynomial,
    DivisorClass,
    PicardBasis,
    canonical_class,
    exceptional,
    pullback,
)


@dataclass(frozen=True)
class IncidencePoint:
    """One blown-up point, as pure incidence data.

    on_components lists the boundary components through the point (one
    for a smooth-locus point, two for a crossing).  fiber_group marks
    points that share a single curve of the ruling |F| (on a Hirzebruch
    base) or a single line (on the plane); points with distinct or None
    group ids are in general position.
    """

    on_components: tuple
    fiber_group: int = None

    def __post_init__(self):
        comps = tuple(sorted(set(int(c) for c in self.on_components)))
        object.__setattr__(self, "on_components", comps)
        if not 1 <= len(comps) <= 2:
            raise ValueError("a point lies on one or two boundary components")

    @property
    def at_crossing(self) -> bool:
        return len(self.on_components) == 2


class SurfacePair:
    """A surface model with boundary components and blow-up incidence.

    base_boundary holds the component classes on the unblown base model;
    boundary holds their proper transforms on the full basis (one E_i
    subtracted per incident point)."""

    __slots__ = ("basis", "base_boundary", "incidence", "provenance", "boundary")

    def __init__(self, base_basis: PicardBasis, base_boundary, incidence=(), provenance=None):
        if base_basis.points:
            raise ValueError("base model must be unblown")
        incidence = tuple(incidence)
        basis = base_basis.blown_up(len(incidence)) if incidence else base_basis
        base_boundary = tuple(base_boundary)
        if not base_boundary:
            raise ValueError("need at least one boundary component")
        for c in base_boundary:
            if c.basis != base_basis:
                raise ValueError("boundary classes must live on the base model")
        for p in incidence:
            if any(c >= len(base_boundary) for c in p.on_components):
                raise ValueError("point lies on an unknown boundary component")
        boundary = []
        for idx, c in enumerate(base_boundary):
            t = pullback(c, basis)
            for k, p in enumerate(incidence):
                if idx in p.on_components:
                    t = t - exceptional(basis, k + 1)
            boundary.append(t)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "base_boundary", base_boundary)
        object.__setattr__(self, "incidence", incidence)
        object.__setattr__(self, "provenance", provenance)
        object.__setattr__(self, "boundary", tuple(boundary))

    def __setattr__(self, *a):
        raise AttributeError("SurfacePair is immutable")

    @property
    def r(self) -> int:
        return len(self.boundary)

    @property
    def num_points(self) -> int:
        return len(self.incidence)

    def base_basis(self) -> PicardBasis:
        return self.basis.base()

    def boundary_sum(self) -> DivisorClass:
        total = self.boundary[0]
        for c in self.boundary[1:]:
            total = total + c
        return total

    def points_on(self, component: int):
        return [k for k, p in enumerate(self.incidence) if component in p.on_components]

    def fiber_groups(self) -> dict:
        groups = {}
        for k, p in enumerate(self.incidence):
            if p.fiber_group is not None:
                groups.setdefault(p.fiber_group, []).append(k)
        return groups

    def adjacency(self):
        """Pairwise intersection numbers of the boundary transforms."""
        r = self.r
        return [
            [self.boundary[i].dot(self.boundary[j]) if i != j else Fraction(0) for j in range(r)]
            for i in range(r)
        ]

    def with_provenance(self, family_id, params) -> "SurfacePair":
        return SurfacePair(
            self.base_basis(), self.base_boundary, self.incidence, (family_id, dict(params))
        )

    def to_json(self):
        model = "P2" if self.basis.model == "P2" else {"Fn": self.basis.n}
        if self.basis.model == "P2":
            boundary = [int(c.coords[0]) for c in self.base_boundary]
        else:
            boundary = [[int(c.coords[0]), int(c.coords[1])] for c in self.base_boundary]
        blowups = []
        for p in self.incidence:
            item = {"on": list(p.on_components)}
            if p.fiber_group is not None:
                item["fiber_group"] = p.fiber_group
            blowups.append(item)
        out = {"model": model, "boundary": boundary, "blowups": blowups}
        if self.provenance:
            out["family"] = {"id": self.provenance[0], "params": self.provenance[1]}
        return out

    def __repr__(self):
        tag = " %s" % (self.provenance[0],) if self.provenance else ""
        return "SurfacePair(%s,%s r=%d, m=%d)" % (
            self.basis.model if self.basis.model == "P2" else "F%d" % self.basis.n,
            tag,
            self.r,
            self.num_points,
        )


def pair_from_json(data) -> SurfacePair:
    model = data["model"]
    if model == "P2":
        pair = make_p2([int(d) for d in data["boundary"]])
    elif isinstance(model, dict) and "Fn" in model:
        pair = make_fn(int(model["Fn"]), [tuple(ab) for ab in data["boundary"]])
    else:
        raise ValueError("unknown model %r" % (model,))
    points = [
        IncidencePoint(tuple(b["on"]), b.get("fiber_group")) for b in data.get("blowups", [])
    ]
    if points:
        pair = blow_up(pair, points)
    return pair


# ---------------------------------------------------------------------------
# constructors


def make_p2(boundary_degrees) -> SurfacePair:
    """Plane pair with boundary components of the given degrees."""
    basis = PicardBasis("P2")
    boundary = []
    for d in boundary_degrees:
        d = int(d)
        if d < 1:
            raise ValueError("plane boundary degrees must be >= 1")
        boundary.append(DivisorClass(basis, [d]))
    return SurfacePair(basis, boundary)


def make_fn(n: int, boundary) -> SurfacePair:
    """Hirzebruch pair with boundary components a*Z + b*F.

    Rejects classes with no irreducible member: allowed are Z itself
    (1, 0), the fiber (0, 1), and (a, b) with a >= 1, b >= max(n*a, 1)."""
    basis = PicardBasis("Fn", int(n))
    classes = []
    for a, b in boundary:
        a, b = int(a), int(b)
        ok = (a, b) in ((1, 0), (0, 1)) or (a >= 1 and b >= max(basis.n * a, 1))
        if not ok:
            raise ValueError("no irreducible curve of class %dZ+%dF on F%d" % (a, b, basis.n))
        classes.append(DivisorClass(basis, [a, b]))
    return SurfacePair(basis, classes)


def blow_up(pair: SurfacePair, points) -> SurfacePair:
    """Append blown-up points; boundary components are replaced by their
    proper transforms.  Points sitting on more than two components, or on
    components that do not meet, are rejected outright."""
    points = tuple(points)
    if not points:
        raise ValueError("no points to blow up")
    adjacency = [[ci.dot(cj) for cj in pair.base_boundary] for ci in pair.base_boundary]
    for p in points:
        if any(c >= pair.r for c in p.on_components):
            raise ValueError("point lies on an unknown boundary component")
        if p.at_crossing:
            i, j = p.on_components
            if adjacency[i][j] < 1:
                raise ValueError(
                    "components %d and %d do not meet; no crossing to blow up" % (i, j)
                )
    return SurfacePair(
        pair.base_basis(), pair.base_boundary, pair.incidence + points, None
    )


# ---------------------------------------------------------------------------
# test-curve inventory and certificates


@dataclass(frozen=True)
class TestCurve:
    label: str
    divisor: DivisorClass


@dataclass(frozen=True)
class CertificateRecord:
    """Family-level positivity certificate for all curves not in the
    explicit inventory, derived from a per-point multiplicity bound of
    the shape mult_P(z) <= (very ample class) . z."""

    family: str
    multiplicity_bound: str
    inequalities: tuple  # of (label, BetaPolynomial, strict: bool)


@dataclass(frozen=True)
class TestCurveSet:
    explicit: tuple
    certificates: tuple

    def divisors(self):
        return [t.divisor for t in self.explicit]


def _component_angle(pair, nvars, point) -> BetaPolynomial:
    """Coefficient of -E_P in the pulled-back log anticanonical class:
    b_i for a point on component i, b_i + b_j - 1 at a crossing."""
    total = BetaPolynomial.zero(nvars)
    for c in point.on_components:
        total = total + BetaPolynomial.variable(nvars, c)
    if point.at_crossing:
        total = total - 1
    return total


def ambient_data(pair: SurfacePair):
    """The pushed-forward angle-dependent ample part A on the base model
    and the per-point exceptional coefficients lam_P, so that the log
    anticanonical class equals pullback(A) - sum lam_P E_P."""
    nvars = pair.r
    base = pair.base_basis()
    acoords = [BetaPolynomial.constant(nvars, c) for c in (-canonical_class(base)).coords]
    for i, c in enumerate(pair.base_boundary):
        scale = BetaPolynomial.variable(nvars, i) - 1  # -(1 - b_i)
        for k in range(base.rank):
            acoords[k] = acoords[k] + scale * c.coords[k]
    a = BetaDivisor(base, tuple(acoords))
    lams = tuple(_component_angle(pair, nvars, p) for p in pair.incidence)
    return a, lams


def _aleph_shaped(pair: SurfacePair) -> bool:
    total = pair.base_boundary[0]
    for c in pair.base_boundary[1:]:
        total = total + c
    return total == -canonical_class(pair.base_basis())


def test_curves(pair: SurfacePair) -> TestCurveSet:
    """Explicit curves: exceptional classes, boundary transforms, the
    negative section, ruling members and lines through the blown-up
    points (grouped when a degeneration is declared).  Certificates cover
    every remaining irreducible class via a multiplicity bound."""
    basis = pair.basis
    base = pair.base_basis()
    explicit = []
    seen = set()

    def add(label, div):
        if div not in seen:
            seen.add(div)
            explicit.append(TestCurve(label, div))

    for i, c in enumerate(pair.boundary):
        add("C%d (boundary)" % (i + 1), c)
    for k in range(pair.num_points):
        add("E%d" % (k + 1), exceptional(basis, k + 1))

    groups = pair.fiber_groups()
    grouped = {k for members in groups.values() for k in members}

    if base.model == "P2":
        h = pullback(DivisorClass(base, [1]), basis)
        line_components = [i for i, c in enumerate(pair.base_boundary) if c.coords[0] == 1]
        add("general line", h)
        for gid, members in sorted(groups.items()):
            div = h
            for k in members:
                div = div - exceptional(basis, k + 1)
            add("line through group %s" % gid, div)
        for k in range(pair.num_points):
            add("line through P%d" % (k + 1), h - exceptional(basis, k + 1))
        for k, l in itertools.combinations(range(pair.num_points), 2):
            if k in grouped and l in grouped:
                continue  # covered by a group line or in general position
            shared = set(pair.incidence[k].on_components) & set(pair.incidence[l].on_components)
            if any(c in line_components for c in shared):
                continue  # the line through both points is that boundary component
            add(
                "line through P%d,P%d" % (k + 1, l + 1),
                h - exceptional(basis, k + 1) - exceptional(basis, l + 1),
            )
    else:
        fiber = pullback(DivisorClass(base, [0, 1]), basis)
        add("general fiber", fiber)
        section_components = [
            i for i, c in enumerate(pair.base_boundary) if c.coords == (Fraction(1), Fraction(0))
        ]
        z = pullback(DivisorClass(base, [1, 0]), basis)
        if base.n >= 1:
            # the negative section is unique; it carries exactly the points
            # declared on a boundary component equal to it
            zt = z
            for k, p in enumerate(pair.incidence):
                if any(c in section_components for c in p.on_components):
                    zt = zt - exceptional(basis, k + 1)
            add("section Z", zt)
        else:
            add("general ruling Z", z)
            for k in range(pair.num_points):
                add("ruling through P%d" % (k + 1), z - exceptional(basis, k + 1))
        for gid, members in sorted(groups.items()):
            div = fiber
            for k in members:
                div = div - exceptional(basis, k + 1)
            add("fiber through group %s" % gid, div)
        for k in range(pair.num_points):
            if k not in grouped:
                add("fiber through P%d" % (k + 1), fiber - exceptional(basis, k + 1))

    certificates = tuple(_certificates(pair))
    return TestCurveSet(tuple(explicit), certificates)


test_curves.__test__ = False  # not a pytest case despite the name


def _certificates(pair: SurfacePair):
    a, lams = ambient_data(pair)
    nvars = pair.r
    lam_total = BetaPolynomial.zero(nvars)
    for lam in lams:
        # crossing coefficients are negative for small angles and only help
        # the lower bound, so they are dropped from the certificate mass
        if lam.constant_term() == 0:
            lam_total = lam_total + lam

    if _aleph_shaped(pair):
        # Boundary sums to the anticanonical class: the log anticanonical
        # divisor is sum b_i C_i with every component nef, so the inventory
        # checks (component squares sit on the diagonal of the square
        # polynomial) already decide the verdict.  No residual family.
        return []

    if pair.basis.model == "P2":
        alpha = a.coords[0]
        yield CertificateRecord(
            family="plane curves of degree d >= 1",
            multiplicity_bound="mult_P(z) <= H.z = d (line through P)",
            inequalities=(("degree slope", alpha - lam_total, True),),
        )
    else:
        u, v = a.coords[0], a.coords[1]
        yield CertificateRecord(
            family="classes a*Z + b*F with a >= 1, b >= n*a",
            multiplicity_bound="mult_P(z) <= F.z = a (fiber through P)",
            inequalities=(
                ("section slope", v - lam_total, True),
                ("fiber slope", u, False),
            ),
        )


# ---------------------------------------------------------------------------
# configuration diagnostics


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" | "warning"
    message: str


def _graph_components(adjacency):
    r = len(adjacency)
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
            stack.extend(j for j in range(r) if j != i and adjacency[i][j] > 0 and j not in seen)
    return comps


def _has_cycle(adjacency):
    # multigraph cycle test: edges counted with multiplicity
    r = len(adjacency)
    edges = sum(adjacency[i][j] for i in range(r) for j in range(i + 1, r))
    return edges > r - _graph_components(adjacency)


def validate_configuration(pair: SurfacePair):
    """Consistency and genericity diagnostics; never raises."""
    out = []
    base = pair.base_basis()
    base_adj = [[ci.dot(cj) for cj in pair.base_boundary] for ci in pair.base_boundary]
    k_base = canonical_class(base)
    aleph = _aleph_shaped(pair)

    for i, j in itertools.combinations(range(pair.r), 2):
        meet = base_adj[i][j]
        if meet < 0:
            out.append(
                Diagnostic(
                    "error",
                    "components %d and %d share a negative curve; they cannot be distinct"
                    % (i + 1, j + 1),
                )
            )
        elif meet >= 3:
            out.append(
                Diagnostic(
                    "warning",
                    "components %d and %d meet %d times; at most two crossings can occur"
                    % (i + 1, j + 1, int(meet)),
                )
            )
        elif meet == 2 and not aleph:
            out.append(
                Diagnostic(
                    "warning",
                    "components %d and %d meet twice but the boundary is not anticanonical"
                    % (i + 1, j + 1),
                )
            )

    adjacency = pair.adjacency()
    for i in range(pair.r):
        neighbours = sum(1 for j in range(pair.r) if j != i and adjacency[i][j] > 0)
        if neighbours >= 3:
            out.append(
                Diagnostic(
                    "warning",
                    "component %d meets %d others; the dual graph is not a chain forest"
                    % (i + 1, neighbours),
                )
            )
        if neighbours >= 2 and pair.boundary[i].square() < 0:
            out.append(
                Diagnostic(
                    "warning",
                    "interior component %d has negative self-intersection" % (i + 1),
                )
            )
    if pair.r >= 3 and _has_cycle(adjacency) and not aleph:
        out.append(
            Diagnostic("warning", "boundary dual graph has a cycle but is not anticanonical")
        )

    for k, p in enumerate(pair.incidence):
        if p.at_crossing:
            i, j = p.on_components
            out.append(
                Diagnostic(
                    "warning",
                    "genericity violated: P%d sits at the crossing of components %d and %d"
                    % (k + 1, i + 1, j + 1),
                )
            )

    # declared shared ruling curves / lines
    ruling = DivisorClass(base, [0, 1]) if base.model == "Fn" else DivisorClass(base, [1])
    for gid, members in sorted(pair.fiber_groups().items()):
        if len(members) < 2:
            out.append(Diagnostic("warning", "fiber group %s has a single member" % gid))
            continue
        per_component = {}
        for k in members:
            for c in pair.incidence[k].on_components:
                per_component[c] = per_component.get(c, 0) + 1
        impossible = False
        for c, count in per_component.items():
            capacity = pair.base_boundary[c].dot(ruling)
            if pair.base_boundary[c] == ruling and base.model == "Fn":
                impossible = True
                out.append(
                    Diagnostic(
                        "error",
                        "fiber group %s includes a point of the fiber component %d" % (gid, c + 1),
                    )
                )
            elif count > capacity:
                impossible = True
                out.append(
                    Diagnostic(
                        "error",
                        "fiber group %s puts %d points of component %d on one %s (capacity %d)"
                        % (
                            gid,
                            count,
                            c + 1,
                            "fiber" if base.model == "Fn" else "line",
                            int(capacity),
                        ),
                    )
                )
        if not impossible:
            out.append(
                Diagnostic(
                    "warning",
                    "genericity violated: points %s share one %s"
                    % (
                        ",".join("P%d" % (k + 1) for k in members),
                        "curve of the ruling |F|" if base.model == "Fn" else "line",
                    ),
                )
            )

    return out


def has_errors(diagnostics) -> bool:
    return any(d.level == "error" for d in diagnostics)
