"""Log canonical threshold primitives and alpha-invariant formulas,
limits and bounds for small-angle surface pairs.

Local thresholds are computed for exactly two singularity shapes: an
ordinary point with smooth pairwise-transverse branches, and two smooth
branches with a finite contact order.  Both admit closed-form rules
(every coefficient <= 1; coefficient sum <= 2, respectively <= 1 + 1/t),
and an independent oracle that simulates the resolution by repeated
blow-ups cross-checks them.  Symbolic answers are rational functions of
a single angle variable b, exact on the whole interval (0, 1]."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .lattice import BetaPolynomial, rat, rat_str
from .classify import ALEPH, BETH, DALETH, GIMEL

EXACT = "Exact"
LOWER_BOUND = "LowerBound"
UPPER_BOUND = "UpperBound"
LIMIT = "Limit"


# ---------------------------------------------------------------------------
# univariate exact helpers (coefficient tuples, low degree)


def _trim(coeffs):
    coeffs = [rat(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _poly_eval(coeffs, x):
    total = Fraction(0)
    for c in reversed(coeffs):
        total = total * x + c
    return total


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1 or 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return _trim(out)


def _poly_add(a, b):
    out = [Fraction(0)] * max(len(a), len(b), 1)
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _poly_sub(a, b):
    return _poly_add(a, tuple(-c for c in b))


def _min_on_unit(coeffs):
    """Exact minimum of a degree <= 2 polynomial over the closed [0, 1]."""
    c = list(coeffs) + [Fraction(0)] * 3
    c0, c1, c2 = c[0], c[1], c[2]
    if len(_trim(coeffs)) > 3:
        raise ValueError("degree above 2")
    values = [c0, c0 + c1 + c2]
    if c2 != 0:
        vertex = Fraction(-c1, 2 * c2)
        if 0 < vertex < 1:
            values.append(c0 + c1 * vertex + c2 * vertex * vertex)
    return min(values)


def _positive_on_unit(coeffs) -> bool:
    """p > 0 on the half-open (0, 1], degree <= 2."""
    coeffs = _trim(coeffs)
    if not coeffs:
        return False
    if coeffs[0] > 0:
        return _min_on_unit(coeffs) > 0
    if coeffs[0] < 0:
        return False
    # p = x * q with q of degree <= 1
    q = coeffs[1:]
    if len(q) == 1:
        return q[0] > 0
    return q[0] >= 0 and q[0] + q[1] > 0


def _nonnegative_on_unit(coeffs) -> bool:
    coeffs = _trim(coeffs)
    return not coeffs or _min_on_unit(coeffs) >= 0


class RationalFunction:
    """Quotient of univariate polynomials in the angle b, exact over the
    rationals and with a denominator positive on the whole (0, 1]."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1,)):
        num, den = _trim(num), _trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _positive_on_unit(den) and not (len(den) == 1 and den[0] > 0):
            raise ValueError("denominator must be positive on (0, 1]")
        self.num, self.den = num, den

    def evaluate(self, beta) -> Fraction:
        beta = rat(beta)
        return _poly_eval(self.num, beta) / _poly_eval(self.den, beta)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction((rat(other),))
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return _poly_sub(_poly_mul(self.num, other.den), _poly_mul(other.num, self.den)) == ()

    def __hash__(self):
        return hash((self.num, self.den))

    @staticmethod
    def _poly_pretty(coeffs):
        if not coeffs:
            return "0"
        parts = []
        for k, c in enumerate(coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("b" if k == 1 else "b^%d" % k)
            body = rat_str(abs(c)) if (abs(c) != 1 or not mono) else ""
            glue = "*" if body and mono else ""
            parts.append("%s%s%s%s" % ("+" if c > 0 else "-", body, glue, mono))
        out = " ".join(parts)
        return out[1:] if out.startswith("+") else out

    def pretty(self) -> str:
        if self.den == (Fraction(1),):
            return self._poly_pretty(self.num)
        return "(%s)/(%s)" % (self._poly_pretty(self.num), self._poly_pretty(self.den))

    def to_json(self):
        return {"num": [rat_str(c) for c in self.num], "den": [rat_str(c) for c in self.den]}

    def __repr__(self):
        return "RationalFunction(%s)" % self.pretty()


@dataclass(frozen=True)
class AlphaValue:
    """A threshold or alpha value: exact rational, or rational function of
    the angle, tagged with how it should be read."""

    value: object  # Fraction | RationalFunction
    kind: str = EXACT

    def evaluate(self, beta) -> Fraction:
        if isinstance(self.value, RationalFunction):
            return self.value.evaluate(beta)
        return rat(self.value)

    def to_json(self):
        if isinstance(self.value, RationalFunction):
            return {"value": self.value.to_json(), "pretty": self.value.pretty(), "kind": self.kind}
        return {"value": rat_str(self.value), "kind": self.kind}


# ---------------------------------------------------------------------------
# local log canonical thresholds


def _affine(value) -> tuple:
    """Coefficient tuple of a rational or degree <= 1 single-angle
    polynomial."""
    if isinstance(value, BetaPolynomial):
        if value.nvars != 1 or value.degree() > 1:
            raise ValueError("branch data must be a single-angle affine polynomial")
        return _trim((value.constant_term(), value.linear_coefficient(0)))
    return _trim((rat(value),))


@dataclass(frozen=True)
class Branch:
    """One smooth branch through the point: its coefficient in the scaled
    divisor is background + lambda * scale."""

    label: str
    background: object = 0
    scale: object = 0


@dataclass(frozen=True)
class LocalSingularityConfig:
    """Branches through one point.  contact = 1 means all branches are
    pairwise transverse (an ordinary point); contact = t >= 2 is allowed
    for exactly two branches with that tangency order.  Richer shapes are
    rejected."""

    branches: tuple
    contact: int = 1

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        if not self.branches:
            raise ValueError("need at least one branch")
        if self.contact < 1:
            raise ValueError("contact order must be >= 1")
        if self.contact >= 2 and len(self.branches) != 2:
            raise ValueError("a tangency configuration takes exactly two branches")


def _lct_constraints(cfg: LocalSingularityConfig):
    """(label, p, q, bound) rows meaning p + lambda*q <= bound, with p, q
    univariate coefficient tuples in the angle."""
    rows = []
    total_p, total_q = (), ()
    for br in cfg.branches:
        p, q = _affine(br.background), _affine(br.scale)
        rows.append(("coefficient of %s" % br.label, p, q, Fraction(1)))
        total_p, total_q = _poly_add(total_p, p), _poly_add(total_q, q)
    if len(cfg.branches) >= 2:
        bound = Fraction(2) if cfg.contact == 1 else 1 + Fraction(1, cfg.contact)
        label = (
            "ordinary %d-fold point" % len(cfg.branches)
            if cfg.contact == 1
            else "contact of order %d" % cfg.contact
        )
        rows.append((label, total_p, total_q, bound))
    return rows


def _solve_scaling(rows, beta=None) -> AlphaValue:
    """Largest lambda satisfying every p + lambda*q <= bound, either at a
    rational angle or uniformly on (0, 1]."""
    if beta is not None:
        beta = rat(beta)
        if not 0 < beta <= 1:
            raise ValueError("angle must lie in (0, 1]")
        best = None
        for label, p, q, bound in rows:
            pv, qv = _poly_eval(p, beta), _poly_eval(q, beta)
            if qv == 0:
                if pv > bound:
                    raise ValueError("pair is not log canonical before scaling (%s)" % label)
                continue
            if qv < 0:
                raise ValueError("negative scaling direction is not supported")
            best = min(best, (bound - pv) / qv) if best is not None else (bound - pv) / qv
        if best is None:
            raise ValueError("nothing is being scaled")
        return AlphaValue(best, EXACT)

    candidates = []
    for label, p, q, bound in rows:
        q = _trim(q)
        if not q:
            slack = _poly_sub((bound,), p)
            if not _nonnegative_on_unit(slack):
                raise ValueError("pair is not log canonical before scaling (%s)" % label)
            continue
        if not _positive_on_unit(q):
            raise ValueError("scaling weights must be positive on (0, 1]")
        candidates.append((label, RationalFunction(_poly_sub((bound,), p), q)))
    if not candidates:
        raise ValueError("nothing is being scaled")
    for label, rf in candidates:
        diffs_ok = True
        for other_label, other in candidates:
            if other is rf:
                continue
            # rf <= other on (0, 1]  <=>  other.num*rf.den - rf.num*other.den >= 0
            diff = _poly_sub(_poly_mul(other.num, rf.den), _poly_mul(rf.num, other.den))
            if not _nonnegative_on_unit(diff):
                diffs_ok = False
                break
        if diffs_ok:
            return AlphaValue(rf, EXACT)
    raise ValueError("no constraint dominates uniformly on (0, 1]; evaluate at a rational angle")


def lct_local(cfg: LocalSingularityConfig, beta=None) -> AlphaValue:
    """Largest scaling keeping the configuration log canonical: every
    branch coefficient stays <= 1 and the coefficient sum stays <= 2 at an
    ordinary point, respectively <= 1 + 1/t at a contact of order t."""
    return _solve_scaling(_lct_constraints(cfg), beta)


def lct_local_by_resolution(cfg: LocalSingularityConfig, beta) -> Fraction:
    """Independent oracle: simulate the resolution, accumulating the
    exceptional coefficient e <- (sum of coefficients through the center)
    - 1 at each blow-up, and solve the affine constraints e_k <= 1 and
    coefficient <= 1 numerically."""
    beta = rat(beta)
    rows = []
    coeffs = []
    for br in cfg.branches:
        p = _poly_eval(_affine(br.background), beta)
        q = _poly_eval(_affine(br.scale), beta)
        coeffs.append((p, q))
        rows.append((p, q, Fraction(1)))
    if len(cfg.branches) >= 2:
        if cfg.contact == 1:
            # one blow-up separates everything
            p = sum(c[0] for c in coeffs)
            q = sum(c[1] for c in coeffs)
            rows.append((p - 1, q, Fraction(1)))
        else:
            # branches stay tangent for contact-many steps
            ep, eq = Fraction(0), Fraction(0)
            bp = coeffs[0][0] + coeffs[1][0]
            bq = coeffs[0][1] + coeffs[1][1]
            for _ in range(cfg.contact):
                ep, eq = ep + bp - 1, eq + bq
                rows.append((ep, eq, Fraction(1)))
    best = None
    for p, q, bound in rows:
        if q == 0:
            if p > bound:
                raise ValueError("not log canonical before scaling")
            continue
        cand = (bound - p) / q
        best = cand if best is None else min(best, cand)
    if best is None:
        raise ValueError("nothing is being scaled")
    return best


# canonical configurations ---------------------------------------------------


def _angle():
    return BetaPolynomial.variable(1, 0)


def eckardt_configuration() -> LocalSingularityConfig:
    """Two scaled lines and the boundary line through one common point."""
    b = _angle()
    return LocalSingularityConfig(
        (
            Branch("L1", 0, 1),
            Branch("L2", 0, 1),
            Branch("C", 1 - b, b),
        )
    )


def nodal_fiber_configuration() -> LocalSingularityConfig:
    """Both components of a split fiber and the boundary through the node."""
    b = _angle()
    return LocalSingularityConfig(
        (
            Branch("F1", 0, 1),
            Branch("F2", 0, 1),
            Branch("C", 1 - b, b),
        )
    )


def tangent_fiber_configuration() -> LocalSingularityConfig:
    """A smooth fiber simply tangent to the boundary at a ramification
    point."""
    b = _angle()
    return LocalSingularityConfig(
        (Branch("F", 0, 1), Branch("C", 1 - b, b)),
        contact=2,
    )


# ---------------------------------------------------------------------------
# alpha invariants


def alpha_on_curve(point_coeffs, degree, curve_is_rational_line=True) -> AlphaValue:
    """(1 - max coefficient)/degree; exact on the projective line, a lower
    bound on other smooth curves."""
    degree = rat(degree)
    if degree <= 0:
        raise ValueError("degree must be positive")
    coeffs = [rat(a) for a in point_coeffs]
    if any(a < 0 or a >= 1 for a in coeffs):
        raise ValueError("point coefficients must lie in [0, 1)")
    top = max(coeffs, default=Fraction(0))
    return AlphaValue((1 - top) / degree, EXACT if curve_is_rational_line else LOWER_BOUND)


def _as_rat(value):
    if isinstance(value, AlphaValue):
        value = value.value
    return rat(value)


def alpha_lower_bound(beta, gamma, alpha_x, alpha_s) -> AlphaValue:
    """min(beta/gamma, alpha of the ambient space, alpha of the boundary),
    valid whenever the boundary is nef and gamma bounds the slope at which
    the polarization minus the boundary stays pseudoeffective."""
    beta, gamma = rat(beta), rat(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if not 0 < beta < 1:
        raise ValueError("angle must lie in (0, 1)")
    return AlphaValue(min(beta / gamma, _as_rat(alpha_x), _as_rat(alpha_s)), LOWER_BOUND)


def berman_lower_bound(beta, alpha_x, alpha_s) -> AlphaValue:
    """Specialization to an ample boundary polarized by beta times itself:
    min(1, alpha_x/beta, alpha_s/beta)."""
    beta = rat(beta)
    if not 0 < beta <= 1:
        raise ValueError("angle must lie in (0, 1]")
    return AlphaValue(
        min(Fraction(1), _as_rat(alpha_x) / beta, _as_rat(alpha_s) / beta), LOWER_BOUND
    )


def anticanonical_alpha_bound(dim: int, beta) -> AlphaValue:
    """Lower bound for a smooth anticanonical boundary: min(1, 1/(9*beta))
    on surfaces and min(1, 1/(64*beta)) on threefolds, from the degree
    bounds K^2 <= 9 and -K^3 <= 64."""
    degree = {2: 9, 3: 64}.get(dim)
    if degree is None:
        raise ValueError("closed-form bound implemented for dimensions 2 and 3")
    return berman_lower_bound(beta, Fraction(1, degree), Fraction(1, degree))


def kee_angle_threshold(dim: int) -> Fraction:
    """Largest angle below which the anticanonical bound clears the
    existence threshold dim/(dim+1) for edge metrics."""
    degree = {2: 9, 3: 64}[dim]
    # 1/(degree*beta) > dim/(dim+1)
    return Fraction(dim + 1, dim * degree)


def alpha_limit(positivity: str) -> AlphaValue:
    """Small-angle limit of the alpha invariant for a smooth irreducible
    boundary: 1 in class Aleph, 1/2 in class Beth, 0 otherwise."""
    table = {ALEPH: Fraction(1), BETH: Fraction(1, 2), GIMEL: Fraction(0), DALETH: Fraction(0)}
    if positivity not in table:
        raise ValueError("unknown positivity class %r" % (positivity,))
    return AlphaValue(table[positivity], LIMIT)


def alpha_upper_bound_big(epsilon, beta) -> AlphaValue:
    """beta/(epsilon + beta), where 1/epsilon is an integer clearing the
    bigness decomposition; forces the limit 0 at angle 0."""
    epsilon, beta = rat(epsilon), rat(beta)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return AlphaValue(beta / (epsilon + beta), UPPER_BOUND)


def beth_upper_bound(beta=None, fiber_singular=True) -> AlphaValue:
    """Threshold of the worst fiber through a ramification point:
    (1+b)/(2+b) when that fiber is split, (1+2b)/(2+2b) when smooth."""
    if fiber_singular:
        rf = RationalFunction((1, 1), (2, 1))
    else:
        rf = RationalFunction((1, 2), (2, 2))
    if beta is None:
        return AlphaValue(rf, UPPER_BOUND)
    return AlphaValue(rf.evaluate(beta), UPPER_BOUND)


def alpha_beth_bounds(c_squared, epsilon, beta_max=1, beta=None, fiber_singular=True):
    """(upper bound, delta): the upper bound above, and the angle bound
    delta = min(1/2, epsilon/|C^2|, beta_max) below which the alpha
    invariant is certified to stay above 1/2 - epsilon."""
    epsilon = rat(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    c_squared = rat(c_squared)
    delta = min(Fraction(1, 2), rat(beta_max))
    if c_squared != 0:
        delta = min(delta, epsilon / abs(c_squared))
    return beth_upper_bound(beta, fiber_singular), delta


def alpha_toric_three_lines(betas) -> AlphaValue:
    """max(b1, b2, b3)/(b1 + b2 + b3) for the triangle of lines."""
    betas = [rat(b) for b in betas]
    if len(betas) != 3 or any(not 0 < b <= 1 for b in betas):
        raise ValueError("need three angles in (0, 1]")
    return AlphaValue(max(betas) / sum(betas), EXACT)


def alpha_cubic_eckardt(beta=None) -> AlphaValue:
    """Exact alpha of a cubic-surface pair whose boundary line carries an
    Eckardt point: (1+b)/(2+b)."""
    rf = RationalFunction((1, 1), (2, 1))
    if beta is None:
        return AlphaValue(rf, EXACT)
    return AlphaValue(rf.evaluate(beta), EXACT)


def adjunction_nef_counterexample(beta) -> bool:
    """True when (1+b)/(2+b) < 1/(2-b): the three-term lower bound fails
    for a non-nef boundary at that angle."""
    beta = rat(beta)
    if not 0 < beta < 1:
        raise ValueError("angle must lie in (0, 1)")
    return (1 + beta) / (2 + beta) < 1 / (2 - beta)


def anticanonical_general_bound(n: int, beta, corrected=True) -> AlphaValue:
    """Dimension-n lower bound min(1, 1/(beta * N^(n-1) * M)) built from
    the anticanonical degree bound M and the base-point-free multiple N.

    The literal form of the display reads min(1, N^(n-1)*M/beta), which is
    >= 1 for every angle and cannot be the intended estimate; corrected =
    False reproduces it anyway."""
    if n < 1:
        raise ValueError("dimension must be positive")
    beta = rat(beta)
    if not 0 < beta <= 1:
        raise ValueError("angle must lie in (0, 1]")
    m_bound = 3 ** n * (2 ** n - 1) ** n * (n + 1) ** (n * (n + 2) * (2 ** n - 1))
    n_free = 2 * (n + 1) * factorial(n + 2)
    scale = n_free ** (n - 1) * m_bound
    if corrected:
        return AlphaValue(min(Fraction(1), Fraction(1, scale) / beta), LOWER_BOUND)
    return AlphaValue(min(Fraction(1), Fraction(scale) / beta), LOWER_BOUND)
