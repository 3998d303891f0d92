"""Decision procedure for the (strongly) asymptotically log del Pezzo
property, minimality detection, and the contraction of -1-curves down to
a model of Picard rank at most two.

The ampleness test follows the Nakai-Moishezon shape: the square of the
log anticanonical class and its pairing against every inventory curve
must be positive for all small angles, and the family-level certificates
must hold so that no curve outside the inventory can interfere.  All
checks are exact angle polynomials fed to the small-angle sign rule.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import (
    DIAGONAL,
    INDETERMINATE,
    NON_NEGATIVE,
    NOT_POSITIVE,
    ORTHANT,
    POSITIVE,
    BetaDivisor,
    BetaPolynomial,
    SmallBetaVerdict,
    arithmetic_genus,
    canonical_class,
    exceptional,
    small_beta_sign,
)
from .surface import (
    SurfacePair,
    has_errors,
    test_curves,
    validate_configuration,
)

CATALOG_COMPLETE = "CatalogComplete"
SUPPLIED_TEST_SET_ONLY = "SuppliedTestSetOnly"


def log_anticanonical(pair: SurfacePair) -> BetaDivisor:
    """-K - sum (1 - b_i) C_i with one angle variable per component."""
    nvars = pair.r
    minus_k = BetaDivisor.lift(-canonical_class(pair.basis), nvars)
    total = minus_k
    for i, c in enumerate(pair.boundary):
        scale = BetaPolynomial.variable(nvars, i) - 1  # -(1 - b_i)
        coords = tuple(scale * x for x in BetaDivisor.lift(c, nvars).coords)
        total = total + BetaDivisor(pair.basis, coords)
    return total


@dataclass(frozen=True)
class Check:
    label: str
    polynomial: BetaPolynomial
    strict: bool = True


def ampleness_checks(pair: SurfacePair):
    """Every inequality whose small-angle positivity decides the verdict."""
    d = log_anticanonical(pair)
    curves = test_curves(pair)
    checks = [Check("square", d.square())]
    for t in curves.explicit:
        checks.append(Check(t.label, d.dot(t.divisor)))
    for cert in curves.certificates:
        for label, poly, strict in cert.inequalities:
            checks.append(Check("certificate: %s" % label, poly, strict))
    return checks


@dataclass(frozen=True)
class Verdict:
    strong: SmallBetaVerdict
    diagonal: SmallBetaVerdict
    failing_inequality: tuple = None  # (label, BetaPolynomial)
    certified_scope: str = CATALOG_COMPLETE
    square: BetaPolynomial = None

    @property
    def is_strongly_positive(self) -> bool:
        return self.strong.value == POSITIVE

    def to_json(self):
        out = {
            "strong": self.strong.to_json(),
            "diagonal": self.diagonal.to_json(),
            "certified_scope": self.certified_scope,
            "square": self.square.to_json() if self.square is not None else None,
            "square_pretty": self.square.pretty() if self.square is not None else None,
        }
        if self.failing_inequality:
            label, poly = self.failing_inequality
            out["failing_inequality"] = {
                "curve": label,
                "polynomial": poly.to_json(),
                "pretty": poly.pretty(),
            }
        return out


def _combine(check_verdicts):
    """Fold per-inequality verdicts into one; the first failure wins."""
    for check, verdict in check_verdicts:
        if verdict.value == NOT_POSITIVE:
            return verdict, check
    for check, verdict in check_verdicts:
        if verdict.value == INDETERMINATE:
            return verdict, check
    return SmallBetaVerdict(POSITIVE, reason="all inequalities positive"), None


def verify(pair: SurfacePair) -> Verdict:
    """Strong verdict from the orthant rule, diagonal verdict from the
    all-equal-angles rule, with the first failing inequality as witness."""
    diagnostics = validate_configuration(pair)
    if has_errors(diagnostics):
        raise ValueError(
            "configuration has fatal diagnostics: "
            + "; ".join(d.message for d in diagnostics if d.level == "error")
        )
    checks = ampleness_checks(pair)
    evaluated_strong = []
    evaluated_diag = []
    for check in checks:
        mode_strict = check.strict
        strong = small_beta_sign(check.polynomial, ORTHANT, strict=mode_strict)
        diag = small_beta_sign(check.polynomial, DIAGONAL, strict=mode_strict)
        if not mode_strict:
            # nonneg requirement: NonNegative passes, map it to a pass-through
            strong = _relax(strong)
            diag = _relax(diag)
        evaluated_strong.append((check, strong))
        evaluated_diag.append((check, diag))
    strong, strong_fail = _combine(evaluated_strong)
    diag, _ = _combine(evaluated_diag)
    scope = CATALOG_COMPLETE if (pair.provenance or not pair.basis.is_blow_up) else SUPPLIED_TEST_SET_ONLY
    square = checks[0].polynomial
    failing = None
    if strong_fail is not None:
        failing = (strong_fail.label, strong_fail.polynomial)
    return Verdict(strong, diag, failing, scope, square)


def _relax(verdict: SmallBetaVerdict) -> SmallBetaVerdict:
    if verdict.value == NON_NEGATIVE:
        return SmallBetaVerdict(POSITIVE, verdict.axis, verdict.reason + " (nonneg check)")
    return verdict


# ---------------------------------------------------------------------------
# minimality and contraction


@dataclass(frozen=True)
class ContractionStep:
    contracted_class: object  # DivisorClass on the basis it was contracted from
    kind: str  # "OffBoundary" | "MeetsBoundaryOnce" | "BoundaryTailComponent"
    label: str = ""


OFF_BOUNDARY = "OffBoundary"
MEETS_BOUNDARY_ONCE = "MeetsBoundaryOnce"
BOUNDARY_TAIL = "BoundaryTailComponent"


def _minus_one_curves(pair: SurfacePair):
    boundary = set(pair.boundary)
    for t in test_curves(pair).explicit:
        div = t.divisor
        if div in boundary:
            continue
        if div.square() == -1 and arithmetic_genus(div) == 0:
            yield t


def is_minimal(pair: SurfacePair):
    """Scan the curve inventory for a -1-curve off the boundary that still
    meets it; returns (flag, offending curve or None)."""
    total = pair.boundary_sum()
    for t in _minus_one_curves(pair):
        if t.divisor.dot(total) >= 1:
            return False, t
    return True, None


def minimal_model(pair: SurfacePair):
    """Contract exceptional -1-curves meeting the boundary at most once,
    deterministically by basis order, until no blown-up point remains.
    One level of blow-up means the result has Picard rank <= 2."""
    steps = []
    current = pair
    while current.num_points:
        total = current.boundary_sum()
        chosen = None
        # off-boundary curves first, then those meeting the boundary once
        for want in (0, 1):
            for k in range(current.num_points):
                e = exceptional(current.basis, k + 1)
                if e.dot(total) == want:
                    chosen = (k, e, OFF_BOUNDARY if want == 0 else MEETS_BOUNDARY_ONCE)
                    break
            if chosen:
                break
        if chosen is None:
            raise RuntimeError(
                "no contractible -1-curve although the Picard rank exceeds two"
            )
        k, e, kind = chosen
        steps.append(ContractionStep(e, kind, "E%d" % (k + 1)))
        remaining = current.incidence[:k] + current.incidence[k + 1 :]
        current = SurfacePair(current.base_basis(), current.base_boundary, remaining)
    if current.basis.rank > 2:
        raise RuntimeError("contraction finished above Picard rank two")
    return current, steps
