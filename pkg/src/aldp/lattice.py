"""Exact intersection theory on Picard lattices of rational surface models.

Divisor classes are exact-rational coordinate vectors in a fixed basis:
the line class H on the plane; the negative section Z (Z^2 = -n) and the
fiber F on a Hirzebruch surface; plus one exceptional class E_i per
blown-up point.  On top of plain classes the module provides divisors
whose coefficients are polynomials of degree <= 1 in the boundary angle
parameters b_1, ..., b_r, and a decision procedure for the sign that a
degree <= 2 angle polynomial takes for all sufficiently small angles.

Everything is fractions.Fraction arithmetic; no floats enter any verdict.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


def rat(x) -> Fraction:
    """Coerce an int, string 'p/q' or Fraction to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError("expected an exact rational, got %r" % (x,))


def rat_str(x: Fraction) -> str:
    x = rat(x)
    return "%d/%d" % (x.numerator, x.denominator) if x.denominator != 1 else str(x.numerator)


# ---------------------------------------------------------------------------
# Picard bases


@dataclass(frozen=True)
class PicardBasis:
    """Fixed ordered basis of the Picard lattice of a surface model.

    model is "P2" (generator H) or "Fn" (generators Z, F with Z^2 = -n,
    F^2 = 0, Z.F = 1).  points exceptional generators E_1..E_m are appended
    after the base generators; only one level of blow-up above the base
    model is supported.
    """

    model: str
    n: int = 0
    points: int = 0

    def __post_init__(self):
        if self.model not in ("P2", "Fn"):
            raise ValueError("unknown surface model %r" % (self.model,))
        if self.model == "P2" and self.n != 0:
            raise ValueError("P2 takes no ruling parameter")
        if self.n < 0 or self.points < 0:
            raise ValueError("negative basis parameters")

    @property
    def base_rank(self) -> int:
        return 1 if self.model == "P2" else 2

    @property
    def rank(self) -> int:
        return self.base_rank + self.points

    @property
    def is_blow_up(self) -> bool:
        return self.points > 0

    def base(self) -> "PicardBasis":
        return PicardBasis(self.model, self.n, 0)

    def blown_up(self, extra: int) -> "PicardBasis":
        if extra < 1:
            raise ValueError("blow up at least one point")
        return PicardBasis(self.model, self.n, self.points + extra)

    def labels(self) -> tuple:
        base = ("H",) if self.model == "P2" else ("Z", "F")
        return base + tuple("E%d" % (i + 1) for i in range(self.points))


@lru_cache(maxsize=None)
def gram_matrix(basis: PicardBasis) -> tuple:
    """Gram matrix of the intersection form in the basis order."""
    r = basis.rank
    g = [[0] * r for _ in range(r)]
    if basis.model == "P2":
        g[0][0] = 1
    else:
        g[0][0] = -basis.n
        g[0][1] = g[1][0] = 1
    for i in range(basis.base_rank, r):
        g[i][i] = -1
    return tuple(tuple(row) for row in g)


# ---------------------------------------------------------------------------
# Divisor classes


class DivisorClass:
    """Exact-rational coordinate vector in a fixed Picard basis."""

    __slots__ = ("basis", "coords")

    def __init__(self, basis: PicardBasis, coords):
        coords = tuple(rat(c) for c in coords)
        if len(coords) != basis.rank:
            raise ValueError("expected %d coordinates, got %d" % (basis.rank, len(coords)))
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, *a):
        raise AttributeError("DivisorClass is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, DivisorClass)
            and self.basis == other.basis
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.basis, self.coords))

    def __add__(self, other):
        self._check(other)
        return DivisorClass(self.basis, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return DivisorClass(self.basis, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return DivisorClass(self.basis, tuple(-a for a in self.coords))

    def __rmul__(self, scalar):
        s = rat(scalar)
        return DivisorClass(self.basis, tuple(s * a for a in self.coords))

    __mul__ = __rmul__

    def _check(self, other):
        if not isinstance(other, DivisorClass) or other.basis != self.basis:
            raise ValueError("divisor classes live in different bases")

    def dot(self, other) -> Fraction:
        self._check(other)
        g = gram_matrix(self.basis)
        total = Fraction(0)
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            row = g[i]
            for j, b in enumerate(other.coords):
                if b != 0 and row[j] != 0:
                    total += a * b * row[j]
        return total

    def square(self) -> Fraction:
        return self.dot(self)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def to_json(self):
        return [rat_str(c) for c in self.coords]

    def pretty(self) -> str:
        names = self.basis.labels()
        parts = []
        for c, name in zip(self.coords, names):
            if c == 0:
                continue
            if c == 1:
                parts.append("+%s" % name)
            elif c == -1:
                parts.append("-%s" % name)
            else:
                parts.append("%s%s*%s" % ("+" if c > 0 else "-", rat_str(abs(c)), name))
        if not parts:
            return "0"
        out = " ".join(parts)
        return out[1:] if out.startswith("+") else out

    def __repr__(self):
        return "DivisorClass(%s)" % self.pretty()


def divisor_from_json(basis: PicardBasis, data) -> DivisorClass:
    return DivisorClass(basis, [rat(str(c)) for c in data])


def generator(basis: PicardBasis, index: int) -> DivisorClass:
    coords = [0] * basis.rank
    coords[index] = 1
    return DivisorClass(basis, coords)


def exceptional(basis: PicardBasis, i: int) -> DivisorClass:
    """E_i (1-indexed)."""
    if not 1 <= i <= basis.points:
        raise ValueError("no exceptional generator E%d" % i)
    return generator(basis, basis.base_rank + i - 1)


def pullback(d: DivisorClass, target: PicardBasis) -> DivisorClass:
    """Coordinate extension by zeros; an isometry onto the orthogonal
    complement of the new exceptional generators."""
    src = d.basis
    if (src.model, src.n) != (target.model, target.n) or target.points < src.points:
        raise ValueError("target basis does not extend the source basis")
    return DivisorClass(target, d.coords + (Fraction(0),) * (target.points - src.points))


def canonical_class(basis: PicardBasis) -> DivisorClass:
    """K = -3H on the plane, -2Z-(n+2)F on a Hirzebruch surface; a blow-up
    adds +1 on every exceptional generator (K = pullback + sum E_i)."""
    if basis.model == "P2":
        coords = [-3]
    else:
        coords = [-2, -(basis.n + 2)]
    coords += [1] * basis.points
    return DivisorClass(basis, coords)


def arithmetic_genus(c: DivisorClass) -> Fraction:
    """(K.c + c^2)/2 + 1, the adjunction value."""
    k = canonical_class(c.basis)
    return (k.dot(c) + c.square()) / 2 + 1


def euler_characteristic(d: DivisorClass) -> Fraction:
    """chi(O(d)) = 1 + d.(d - K)/2 on a rational surface."""
    k = canonical_class(d.basis)
    return 1 + d.dot(d - k) / 2


# ---------------------------------------------------------------------------
# Polynomials in the angle parameters


class BetaPolynomial:
    """Polynomial of total degree <= 2 in angle variables b_1..b_r with
    exact rational coefficients, stored as a sparse exponent map."""

    __slots__ = ("nvars", "terms")

    MAX_DEGREE = 2

    def __init__(self, nvars: int, terms=None):
        if nvars < 1:
            raise ValueError("need at least one angle variable")
        clean = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError("bad exponent vector %r" % (exps,))
            if sum(exps) > self.MAX_DEGREE:
                raise ValueError("degree above %d" % self.MAX_DEGREE)
            coeff = rat(coeff)
            if coeff != 0:
                clean[exps] = clean.get(exps, Fraction(0)) + coeff
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c != 0})

    def __setattr__(self, *a):
        raise AttributeError("BetaPolynomial is immutable")

    # -- constructors

    @classmethod
    def zero(cls, nvars: int) -> "BetaPolynomial":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value) -> "BetaPolynomial":
        return cls(nvars, {(0,) * nvars: rat(value)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "BetaPolynomial":
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, {tuple(exps): Fraction(1)})

    # -- ring operations

    def _coerce(self, other):
        if isinstance(other, BetaPolynomial):
            if other.nvars != self.nvars:
                raise ValueError("angle variable counts differ")
            return other
        return BetaPolynomial.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return BetaPolynomial(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return BetaPolynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, BetaPolynomial):
            s = rat(other)
            return BetaPolynomial(self.nvars, {e: s * c for e, c in self.terms.items()})
        other = self._coerce(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if sum(e) > self.MAX_DEGREE:
                    raise ValueError("product exceeds degree %d" % self.MAX_DEGREE)
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return BetaPolynomial(self.nvars, terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BetaPolynomial.constant(self.nvars, other)
        return (
            isinstance(other, BetaPolynomial)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- structure queries

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def linear_coefficient(self, i: int) -> Fraction:
        exps = [0] * self.nvars
        exps[i] = 1
        return self.terms.get(tuple(exps), Fraction(0))

    def quadratic_coefficient(self, i: int, j: int) -> Fraction:
        exps = [0] * self.nvars
        exps[i] += 1
        exps[j] += 1
        return self.terms.get(tuple(exps), Fraction(0))

    def evaluate(self, values) -> Fraction:
        values = [rat(v) for v in values]
        if len(values) != self.nvars:
            raise ValueError("expected %d values" % self.nvars)
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = coeff
            for v, e in zip(values, exps):
                for _ in range(e):
                    term *= v
            total += term
        return total

    def diagonal_coefficients(self) -> tuple:
        """Coefficients (c0, c1, c2) of p(t, t, ..., t)."""
        out = [Fraction(0)] * (self.MAX_DEGREE + 1)
        for exps, coeff in self.terms.items():
            out[sum(exps)] += coeff
        return tuple(out)

    def to_json(self):
        items = sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        return {"nvars": self.nvars, "terms": [[list(e), rat_str(c)] for e, c in items]}

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        def monomial(exps):
            factors = []
            for i, e in enumerate(exps):
                name = "b" if self.nvars == 1 else "b%d" % (i + 1)
                if e == 1:
                    factors.append(name)
                elif e == 2:
                    factors.append(name + "^2")
            return "*".join(factors)
        parts = []
        for exps, coeff in sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            mono = monomial(exps)
            if not mono:
                parts.append("%s%s" % ("+" if coeff > 0 else "-", rat_str(abs(coeff))))
            elif abs(coeff) == 1:
                parts.append("%s%s" % ("+" if coeff > 0 else "-", mono))
            else:
                parts.append("%s%s*%s" % ("+" if coeff > 0 else "-", rat_str(abs(coeff)), mono))
        out = " ".join(parts)
        return out[1:] if out.startswith("+") else out

    def __repr__(self):
        return "BetaPolynomial(%s)" % self.pretty()


def beta_polynomial_from_json(data) -> BetaPolynomial:
    return BetaPolynomial(
        data["nvars"], {tuple(e): rat(str(c)) for e, c in data["terms"]}
    )


# ---------------------------------------------------------------------------
# Beta divisors


class BetaDivisor:
    """Divisor class whose coordinates are angle polynomials of degree <= 1.

    Specializing the angles at a rational point gives a DivisorClass, and
    the pairing of two BetaDivisors is a degree <= 2 angle polynomial."""

    __slots__ = ("basis", "coords", "nvars")

    def __init__(self, basis: PicardBasis, coords):
        coords = tuple(coords)
        if len(coords) != basis.rank:
            raise ValueError("expected %d coordinates" % basis.rank)
        if not coords or not all(isinstance(c, BetaPolynomial) for c in coords):
            raise ValueError("coordinates must be BetaPolynomial values")
        nvars = coords[0].nvars
        if any(c.nvars != nvars for c in coords):
            raise ValueError("angle variable counts differ between coordinates")
        if any(c.degree() > 1 for c in coords):
            raise ValueError("beta divisor coordinates must have degree <= 1")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "nvars", nvars)

    def __setattr__(self, *a):
        raise AttributeError("BetaDivisor is immutable")

    @classmethod
    def lift(cls, d: DivisorClass, nvars: int) -> "BetaDivisor":
        return cls(d.basis, tuple(BetaPolynomial.constant(nvars, c) for c in d.coords))

    def __add__(self, other):
        other = self._coerce(other)
        return BetaDivisor(self.basis, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        other = self._coerce(other)
        return BetaDivisor(self.basis, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def _coerce(self, other):
        if isinstance(other, DivisorClass):
            other = BetaDivisor.lift(other, self.nvars)
        if not isinstance(other, BetaDivisor) or other.basis != self.basis:
            raise ValueError("beta divisors live in different bases")
        if other.nvars != self.nvars:
            raise ValueError("angle variable counts differ")
        return other

    def dot(self, other) -> BetaPolynomial:
        other = self._coerce(other)
        g = gram_matrix(self.basis)
        total = BetaPolynomial.zero(self.nvars)
        for i, a in enumerate(self.coords):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coords):
                if g[i][j] != 0 and not b.is_zero():
                    total = total + (a * b) * g[i][j]
        return total

    def square(self) -> BetaPolynomial:
        return self.dot(self)

    def specialize(self, values) -> DivisorClass:
        return DivisorClass(self.basis, tuple(c.evaluate(values) for c in self.coords))

    def __repr__(self):
        return "BetaDivisor(%s)" % ", ".join(c.pretty() for c in self.coords)


def intersect(a, b):
    """Symmetric bilinear pairing; exact rational for plain classes, an
    angle polynomial as soon as one side carries angle coefficients."""
    if isinstance(a, BetaDivisor):
        return a.dot(b)
    if isinstance(b, BetaDivisor):
        return b.dot(a)
    return a.dot(b)


# ---------------------------------------------------------------------------
# Small-angle sign decision


POSITIVE = "Positive"
NON_NEGATIVE = "NonNegative"
NOT_POSITIVE = "NotPositive"
INDETERMINATE = "Indeterminate"

ORTHANT = "Orthant"
DIAGONAL = "Diagonal"


@dataclass(frozen=True)
class SmallBetaVerdict:
    """Sign of an angle polynomial for all sufficiently small angles.

    axis (0-indexed) names a witness direction for NotPositive verdicts:
    walk b_axis = t with every other angle t^3.  A None axis with a
    NotPositive verdict means the constant term or the whole polynomial
    already decides along the all-equal direction.
    """

    value: str
    axis: int = None
    reason: str = ""

    @property
    def is_positive(self) -> bool:
        return self.value == POSITIVE

    @property
    def is_nonnegative(self) -> bool:
        return self.value in (POSITIVE, NON_NEGATIVE)

    def witness_direction(self, nvars: int, t: Fraction) -> tuple:
        t = rat(t)
        if self.axis is None:
            return (t,) * nvars
        return tuple(t if i == self.axis else t ** 3 for i in range(nvars))

    def to_json(self):
        out = {"value": self.value}
        if self.axis is not None:
            out["axis"] = self.axis + 1
        if self.reason:
            out["reason"] = self.reason
        return out


def small_beta_sign(p: BetaPolynomial, mode: str = ORTHANT, strict: bool = True) -> SmallBetaVerdict:
    """Decide the sign of p on (0, eps)^r for every small enough eps.

    Diagonal mode restricts to the all-equal ray b = (t, ..., t) and reads
    the lowest-order coefficient.  Orthant mode decides the full orthant
    germ by layers: constant term, then linear coefficients, then the
    quadratic form restricted to the variables with vanishing linear part.
    Mixed-sign quadratic cases that need a discriminant analysis come back
    Indeterminate; they never arise from the built-in catalog.

    With strict=True an identically zero polynomial counts as NotPositive
    (no strictly positive values); with strict=False it is NonNegative.
    """
    if p.degree() > BetaPolynomial.MAX_DEGREE:
        raise ValueError("degree above %d" % BetaPolynomial.MAX_DEGREE)

    zero_value = NOT_POSITIVE if strict else NON_NEGATIVE

    if mode == DIAGONAL:
        for k, coeff in enumerate(p.diagonal_coefficients()):
            if coeff > 0:
                return SmallBetaVerdict(POSITIVE, reason="t^%d coefficient %s" % (k, rat_str(coeff)))
            if coeff < 0:
                return SmallBetaVerdict(
                    NOT_POSITIVE, reason="t^%d coefficient %s" % (k, rat_str(coeff))
                )
        return SmallBetaVerdict(zero_value, reason="identically zero on the diagonal")
    if mode != ORTHANT:
        raise ValueError("unknown mode %r" % (mode,))

    c0 = p.constant_term()
    if c0 > 0:
        return SmallBetaVerdict(POSITIVE, reason="constant term %s" % rat_str(c0))
    if c0 < 0:
        return SmallBetaVerdict(NOT_POSITIVE, reason="constant term %s" % rat_str(c0))

    linear = [p.linear_coefficient(i) for i in range(p.nvars)]
    for i, c in enumerate(linear):
        if c < 0:
            return SmallBetaVerdict(
                NOT_POSITIVE, axis=i, reason="linear coefficient of b%d is %s" % (i + 1, rat_str(c))
            )
    zero_axes = [i for i, c in enumerate(linear) if c == 0]
    positive_axes = [i for i, c in enumerate(linear) if c > 0]

    if not zero_axes:
        return SmallBetaVerdict(POSITIVE, reason="all linear coefficients positive")

    # Quadratic form restricted to the vanishing-linear variables.  Cross
    # terms with a positive-linear variable are dominated by that linear
    # term on the orthant, so only this block can decide the sign.
    block = {}
    for i, j in itertools.combinations_with_replacement(zero_axes, 2):
        q = p.quadratic_coefficient(i, j)
        if q != 0:
            block[(i, j)] = q
    for i in zero_axes:
        q = block.get((i, i), Fraction(0))
        if q < 0:
            return SmallBetaVerdict(
                NOT_POSITIVE,
                axis=i,
                reason="pure quadratic term of b%d is %s" % (i + 1, rat_str(q)),
            )
    if any(q < 0 for q in block.values()):
        bad = next((k, q) for k, q in block.items() if q < 0)
        return SmallBetaVerdict(
            INDETERMINATE,
            reason="mixed-sign quadratic term b%d*b%d = %s needs case analysis"
            % (bad[0][0] + 1, bad[0][1] + 1, rat_str(bad[1])),
        )
    if positive_axes or any(q > 0 for q in block.values()):
        return SmallBetaVerdict(
            POSITIVE, reason="nonnegative dominated quadratic block, positive part present"
        )
    # No positive linear part and an identically zero block: p was zero.
    return SmallBetaVerdict(zero_value, reason="identically zero")
