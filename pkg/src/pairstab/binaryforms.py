"""Exact SL(2) oracle for pairs of binary forms.

A binary form is kept in factored shape: projective points on P^1 with
multiplicities. The pair criterion reads: (f, g) with degrees (e, d) is
numerically semistable iff e <= d and at every point ord_p(g) - ord_p(f) is
at most (d - e)/2. Only roots of g can violate once e <= d holds. The strict
variant (labelled numerical-strict, the orbit-closure characterization is not
claimed) uses strict inequalities, which forces e < d.

Convention: x vanishes at [0:1] and y at [1:0]; a root [a:b] corresponds to
the linear factor b*x - a*y.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import rep, stability
from .errors import ConsistencyError, RequiresFactoredInputError
from .rep import GaussianRational, WeightedVector

Point = tuple[Fraction, Fraction]

_GENERIC_CANDIDATES = [(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (1, 5), (5, 2), (3, 4)]


def normalize_point(a, b) -> Point:
    a, b = Fraction(a), Fraction(b)
    if b != 0:
        return (a / b, Fraction(1))
    if a == 0:
        raise ValueError("[0:0] is not a projective point")
    return (Fraction(1), Fraction(0))


@dataclass(frozen=True)
class BinaryForm:
    degree: int
    factors: tuple[tuple[Point, int], ...]

    def __post_init__(self):
        pts = [p for p, _ in self.factors]
        if len(pts) != len(set(pts)):
            raise ValueError("repeated projective points in the factor list")
        if any(m < 1 for _, m in self.factors):
            raise ValueError("multiplicities must be positive")
        if sum(m for _, m in self.factors) != self.degree:
            raise ValueError("multiplicities must sum to the degree")
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))

    @staticmethod
    def from_roots(roots: Sequence[tuple], degree: Optional[int] = None) -> "BinaryForm":
        factors = {}
        for entry in roots:
            (a, b), m = entry
            p = normalize_point(a, b)
            factors[p] = factors.get(p, 0) + int(m)
        total = sum(factors.values())
        if degree is None:
            degree = total
        if degree != total:
            raise ValueError("declared degree disagrees with the factors")
        return BinaryForm(degree, tuple(factors.items()))

    def coefficients(self) -> tuple[Fraction, ...]:
        """Exact expansion: c_i is the coefficient of x^i y^(degree-i)."""
        coeffs = [Fraction(1)]  # polynomial in x of degree len-1, ascending
        for (a, b), m in self.factors:
            for _ in range(m):
                # multiply by (b*x - a*y); track coefficients of x^i
                nxt = [Fraction(0)] * (len(coeffs) + 1)
                for i, c in enumerate(coeffs):
                    nxt[i + 1] += c * b
                    nxt[i] += c * (-a)
                coeffs = nxt
        if len(coeffs) != self.degree + 1:
            coeffs = coeffs + [Fraction(0)] * (self.degree + 1 - len(coeffs))
        return tuple(coeffs)

    def to_vector(self) -> WeightedVector:
        spec = rep.symmetric_power_sl2(self.degree)
        coeffs = {}
        for i, c in enumerate(self.coefficients()):
            if c != 0:
                coeffs[f"x^{i}*y^{self.degree - i}"] = GaussianRational(c)
        return WeightedVector(spec, coeffs)

    def roots(self) -> tuple[Point, ...]:
        return tuple(p for p, _ in self.factors)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "factors": [
                [[str(p[0]), str(p[1])], m] for p, m in self.factors
            ],
        }

    @staticmethod
    def from_json(data) -> "BinaryForm":
        factors = [((Fraction(a), Fraction(b)), int(m)) for (a, b), m in data["factors"]]
        return BinaryForm.from_roots(factors, degree=int(data["degree"]))


def ord_at(f: BinaryForm, point) -> int:
    """Multiplicity of the point in f (0 if absent)."""
    p = normalize_point(*point)
    for q, m in f.factors:
        if q == p:
            return m
    return 0


_FACTOR_RE = re.compile(r"\(([^()]*)\)(?:\^(\d+))?")
_TERM_RE = re.compile(r"([+-]?[^+-]+)")


def _parse_linear(text: str) -> Point:
    """Parse 'a*x + b*y' style linear forms; returns the root point."""
    text = text.replace(" ", "")
    cx = Fraction(0)
    cy = Fraction(0)
    for term in _TERM_RE.findall(text):
        sign = Fraction(1)
        if term.startswith("-"):
            sign = Fraction(-1)
            term = term[1:]
        elif term.startswith("+"):
            term = term[1:]
        if term.endswith("x"):
            var = "x"
        elif term.endswith("y"):
            var = "y"
        else:
            raise ValueError(f"cannot parse linear term {term!r}")
        coeff_text = term[:-1].rstrip("*")
        coeff = sign * (Fraction(coeff_text) if coeff_text else Fraction(1))
        if var == "x":
            cx += coeff
        else:
            cy += coeff
    if cx == 0 and cy == 0:
        raise ValueError("zero linear form")
    # p*x + q*y vanishes at [a:b] = [-q : p]
    return normalize_point(-cy, cx)


def parse_form(text: str) -> BinaryForm:
    """Parse factored text like '(x)^2*(x-y)^1' into a BinaryForm."""
    text = text.replace("−", "-").strip()
    if text in ("1", ""):
        return BinaryForm(0, ())
    pos = 0
    roots = []
    for m in _FACTOR_RE.finditer(text):
        mult = int(m.group(2) or 1)
        roots.append((_parse_linear(m.group(1)), mult))
        pos = m.end()
    if not roots:
        # allow bare factors without parentheses, e.g. "x^2*y"
        for part in text.split("*"):
            name, _, e = part.partition("^")
            roots.append((_parse_linear(name), int(e or 1)))
    return BinaryForm.from_roots(roots)


def from_coefficients(coeffs: Sequence) -> BinaryForm:
    """Build a factored form from c_i of x^i y^(d-i); rational roots required."""
    import sympy

    coeffs = [Fraction(c) for c in coeffs]
    degree = len(coeffs) - 1
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ValueError("the zero form has no factorization")
    x, y = sympy.symbols("x y")
    expr = sum(
        sympy.Rational(c.numerator, c.denominator) * x**i * y**(degree - i)
        for i, c in enumerate(coeffs)
    )
    _, factors = sympy.factor_list(expr)
    roots = []
    for base, mult in factors:
        poly = sympy.Poly(base, x, y)
        if poly.total_degree() != 1:
            raise RequiresFactoredInputError(
                "requires factored input: the form does not split into rational linear factors"
            )
        cx = Fraction(str(poly.coeff_monomial(x)))
        cy = Fraction(str(poly.coeff_monomial(y)))
        roots.append((normalize_point(-cy, cx), int(mult)))
    return BinaryForm.from_roots(roots, degree=degree)


# ---------------------------------------------------------------------------
# The pair criterion


@dataclass(frozen=True)
class PairVerdict:
    status: str  # stable | semistable-not-stable | unstable
    witness_point: Optional[Point]
    certificate: str

    @property
    def semistable(self) -> bool:
        return self.status != "unstable"


def _generic_point(*forms: BinaryForm) -> Point:
    taken = {p for f in forms for p in f.roots()}
    for a, b in _GENERIC_CANDIDATES:
        p = normalize_point(a, b)
        if p not in taken:
            return p
    raise RuntimeError("ran out of generic candidate points")


def sl2_pair_semistable(f: BinaryForm, g: BinaryForm) -> PairVerdict:
    """Root-multiplicity criterion for the pair (f, g) of degrees (e, d)."""
    e, d = f.degree, g.degree
    half_gap = Fraction(d - e, 2)
    if e > d:
        wit = _generic_point(f, g)
        return PairVerdict(
            "unstable", wit, f"deg(f)={e} exceeds deg(g)={d}; generic point {wit} violates"
        )
    worst = None
    for p, mg in g.factors:
        diff = mg - ord_at(f, p)
        if worst is None or diff > worst[1]:
            worst = (p, diff)
        if diff > half_gap:
            return PairVerdict(
                "unstable",
                p,
                f"ord_p(g)-ord_p(f)={diff} > (d-e)/2={half_gap} at p={p}",
            )
    # semistable; refine to the strict (numerical-strict) verdict
    strict = e < d and all(mg - ord_at(f, p) < half_gap for p, mg in g.factors)
    if strict:
        return PairVerdict("stable", None, "numerical-strict: all ord gaps strictly below (d-e)/2")
    reason = "e = d forces equality at generic points" if e == d else (
        f"ord gap reaches (d-e)/2 at p={worst[0]}" if worst else "degree-zero pair"
    )
    return PairVerdict("semistable-not-stable", None, f"numerical-strict fails: {reason}")


def mobius_to_infinity(point) -> tuple[tuple[Fraction, ...], ...]:
    """A determinant-one rational matrix sending the point to [1:0]."""
    a, b = normalize_point(*point)
    if b == 0:
        return ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    return ((Fraction(0), Fraction(1)), (Fraction(-1), a))


@dataclass(frozen=True)
class CrossCheckReport:
    oracle: PairVerdict
    checked_points: tuple[Point, ...]
    conjugated_semistable: tuple[bool, ...]

    @property
    def torus_conjunction(self) -> bool:
        return all(self.conjugated_semistable)


def cross_check(f: BinaryForm, g: BinaryForm) -> CrossCheckReport:
    """Verify the ord criterion against the conjugated torus-weight machinery.

    Each root of f*g (plus one generic non-root point, which carries the
    degree comparison e <= d) is moved to [1:0] by a rational Moebius matrix;
    the diagonal-torus verdict of the conjugated pair is computed with
    `stability.pair_semistable_torus`. The conjunction over all checked points
    must equal the ord-criterion verdict; disagreement raises ConsistencyError.
    """
    fv, gv = f.to_vector(), g.to_vector()
    points = sorted({*f.roots(), *g.roots()})
    points.append(_generic_point(f, g))
    oracle = sl2_pair_semistable(f, g)
    flags = []
    for p in points:
        sigma = mobius_to_infinity(p)
        conj = stability.Pair(rep.group_act(sigma, fv), rep.group_act(sigma, gv))
        verdict = stability.pair_semistable_torus(conj)
        flags.append(verdict.status != "unstable")
    conjunction = all(flags)
    if conjunction != oracle.semistable:
        bad = [p for p, ok in zip(points, flags) if not ok]
        raise ConsistencyError(
            f"ord criterion ({oracle.status}) disagrees with the conjugated torus tests; "
            f"violating points {bad or 'none'}"
        )
    return CrossCheckReport(oracle, tuple(points), tuple(flags))
