"""Plane curves: Chow forms, hyperdiscriminants (dual curves), Futaki numbers.

Everything here is exact over the rationals via sympy.

For a smooth plane curve F of degree d in (x, y, z):

* The Chow form evaluates F at the cross product of the two rows of a 2x3
  matrix, giving a bihomogeneous polynomial of degree d in each row (total
  2d). Left multiplication of the matrix by a unimodular 2x2 gamma rescales
  it by det(gamma)^d, so it is an SL(2)-invariant of the row pair.
* The hyperdiscriminant is the dual curve: the locus of lines (u:v:w) tangent
  to the curve. It is eliminated exactly: restrict F to the line in the w-chart
  (z = -(u x + v y)/w, cleared by w^d), take the Sylvester resultant of the two
  partial derivatives of the restricted binary form, and strip the w-power and
  rational content. The same elimination in the u-chart must produce a
  proportional polynomial, and the degree must equal d(d-1); any mismatch is a
  hard failure rather than a guess.
* Both sections are only defined up to scale, so the graded-lex leading
  coefficient is normalized to 1; weights never see the normalization.

The induced torus weights: a Chow-form monomial weighs its column-degree
vector, a dual monomial weighs its exponent vector, and both pair against
trace-zero cocharacters of SL(3). The pair that feeds K-stability is
(R_M^{dbar}, Delta_M^{2d}) with dbar = d(d-1), kept as lazy powers so weights
scale linearly without expanding the powers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import sympy
from sympy import Poly, Rational, symbols

from . import lattice, rep
from .errors import ConsistencyError
from .lattice import Cocharacter
from .rep import GaussianRational, PowerVector, WeightedVector

X, Y, Z = symbols("x y z")
U, V, W = symbols("u v w")
R_VARS = symbols("r0 r1 r2 s0 s1 s2")


def _to_fraction(value) -> Fraction:
    return Fraction(int(sympy.numer(value)), int(sympy.denom(value)))


@dataclass(frozen=True, eq=False)
class PlaneCurve:
    """A homogeneous rational form in (x, y, z) of degree >= 1."""

    poly: Poly
    degree: int

    @staticmethod
    def from_expr(expr) -> "PlaneCurve":
        poly = Poly(sympy.expand(expr), X, Y, Z, domain="QQ")
        if poly.is_zero:
            raise ValueError("the zero polynomial does not define a curve")
        if not poly.is_homogeneous:
            raise ValueError("curve polynomial must be homogeneous")
        degree = poly.total_degree()
        if degree < 1:
            raise ValueError("curve degree must be at least 1")
        return PlaneCurve(poly, degree)

    @staticmethod
    def from_string(text: str) -> "PlaneCurve":
        text = text.replace("−", "-")
        expr = sympy.parse_expr(text, local_dict={"x": X, "y": Y, "z": Z})
        return PlaneCurve.from_expr(expr)

    def is_smooth(self) -> bool:
        """No common projective zero of the partials, decided exactly.

        Uses the Groebner emptiness criterion: the singular locus is empty iff
        the leading-monomial ideal of grad(F) contains a pure power of every
        variable.
        """
        cached = getattr(self, "_smooth", None)
        if cached is not None:
            return cached
        grads = [g for g in (self.poly.diff(v).as_expr() for v in (X, Y, Z)) if g != 0]
        basis = sympy.groebner(grads, X, Y, Z, order="grevlex")
        if any(g == 1 for g in basis.exprs):
            smooth = True
        else:
            lead_monoms = [Poly(g, X, Y, Z).LM(order="grevlex") for g in basis.exprs]
            smooth = True
            for k in range(3):
                # need a leading monomial that is a pure power of variable k
                if not any(
                    m.exponents[k] > 0 and sum(m.exponents) == m.exponents[k]
                    for m in lead_monoms
                ):
                    smooth = False
                    break
        object.__setattr__(self, "_smooth", smooth)
        return smooth

    def gradient_at(self, point) -> tuple[Fraction, ...]:
        subs = dict(zip((X, Y, Z), [Rational(str(c)) for c in point]))
        return tuple(_to_fraction(self.poly.diff(v).as_expr().subs(subs)) for v in (X, Y, Z))

    def contains_point(self, point) -> bool:
        subs = dict(zip((X, Y, Z), [Rational(str(c)) for c in point]))
        return self.poly.as_expr().subs(subs) == 0

    def to_string(self) -> str:
        return str(self.poly.as_expr())


def _grlex_normalize(expr, vars_) -> sympy.Expr:
    poly = Poly(expr, *vars_, domain="QQ")
    lc = poly.coeff_monomial(poly.LM(order="grlex").as_expr())
    return sympy.expand(poly.as_expr() / lc)


@dataclass(frozen=True, eq=False)
class ChowForm:
    expr: sympy.Expr  # polynomial in r0 r1 r2 s0 s1 s2
    degree: int
    normalization: str = "grlex-monic"

    def support(self) -> tuple[tuple[int, int, int], ...]:
        """Column-degree vectors: degree in {r_j, s_j} for j = 0, 1, 2."""
        poly = Poly(self.expr, *R_VARS, domain="QQ")
        out = set()
        for monom in poly.monoms():
            out.add(tuple(monom[j] + monom[j + 3] for j in range(3)))
        return tuple(sorted(out))

    def as_vector(self) -> WeightedVector:
        poly = Poly(self.expr, *R_VARS, domain="QQ")
        spec = rep.chow_matrix_space(2, 3, self.degree)
        varnames = spec.meta["vars"]
        coeffs = {}
        for monom, coeff in zip(poly.monoms(), poly.coeffs()):
            label = "*".join(f"{v}^{e}" for v, e in zip(varnames, monom))
            coeffs[label] = GaussianRational(_to_fraction(coeff))
        return WeightedVector(spec, coeffs)

    def evaluate(self, matrix) -> Fraction:
        vals = [Rational(str(c)) for row in matrix for c in row]
        return _to_fraction(self.expr.subs(dict(zip(R_VARS, vals))))


@dataclass(frozen=True, eq=False)
class Hyperdiscriminant:
    expr: sympy.Expr  # polynomial in u, v, w
    degree: int
    normalization: str = "grlex-monic"

    def support(self) -> tuple[tuple[int, int, int], ...]:
        poly = Poly(self.expr, U, V, W, domain="QQ")
        return tuple(sorted(set(poly.monoms())))

    def as_vector(self) -> WeightedVector:
        poly = Poly(self.expr, U, V, W, domain="QQ")
        spec = rep.dual_coordinate_space(self.degree)
        coeffs = {}
        for monom, coeff in zip(poly.monoms(), poly.coeffs()):
            label = "*".join(f"{v}^{e}" for v, e in zip(("u", "v", "w"), monom))
            coeffs[label] = GaussianRational(_to_fraction(coeff))
        return WeightedVector(spec, coeffs)

    def vanishes_at(self, line) -> bool:
        vals = [Rational(str(c)) for c in line]
        return self.expr.subs(dict(zip((U, V, W), vals))) == 0


def chow_form(curve: PlaneCurve) -> ChowForm:
    """R(rows) = F(row1 x row2); degree 2d, SL(2)-row-invariant."""
    r0, r1, r2, s0, s1, s2 = R_VARS
    cross = (r1 * s2 - r2 * s1, r2 * s0 - r0 * s2, r0 * s1 - r1 * s0)
    expr = sympy.expand(curve.poly.as_expr().subs(dict(zip((X, Y, Z), cross)), simultaneous=True))
    expr = _grlex_normalize(expr, R_VARS)
    degree = Poly(expr, *R_VARS).total_degree()
    if degree != 2 * curve.degree:
        raise ConsistencyError(f"Chow form degree {degree} != 2d = {2 * curve.degree}")
    return ChowForm(expr, degree)


def genus(curve: PlaneCurve) -> int:
    d = curve.degree
    return (d - 1) * (d - 2) // 2


def mu(curve: PlaneCurve) -> Fraction:
    """Mean scalar curvature surrogate (2 - 2g)/d; equals 3 - d for smooth curves."""
    if not curve.is_smooth():
        raise ValueError("mu is computed for smooth curves only")
    value = Fraction(2 - 2 * genus(curve), curve.degree)
    assert value == 3 - curve.degree
    return value


def dual_degree(curve: PlaneCurve) -> int:
    """n d (n+1-mu) with n = 1: the class d(d-1) of a smooth plane curve."""
    d = curve.degree
    return int(d * (2 - mu(curve)))


def _restrict_to_line(curve: PlaneCurve, eliminated: int):
    """w^d * F with the eliminated coordinate solved from u x + v y + w z = 0.

    Built term by term, so no rational-function division ever happens. The
    remaining two point coordinates parametrize the line in this chart.
    """
    d = curve.degree
    duals = (U, V, W)
    pts = (X, Y, Z)
    keep = [k for k in range(3) if k != eliminated]
    chart = duals[eliminated]
    g = sympy.Integer(0)
    for monom, coeff in zip(curve.poly.monoms(), curve.poly.coeffs()):
        c = monom[eliminated]
        term = coeff * chart ** (d - c)
        term *= (-(duals[keep[0]] * pts[keep[0]] + duals[keep[1]] * pts[keep[1]])) ** c
        for k in keep:
            term *= pts[k] ** monom[k]
        g += term
    return sympy.expand(g), pts[keep[0]], pts[keep[1]]


def _eliminate_dual(curve: PlaneCurve, eliminated: int):
    """Sylvester resultant of the partials of the restricted binary form."""
    g, s, t = _restrict_to_line(curve, eliminated)
    gs = sympy.expand(sympy.diff(g, s)).subs({t: 1})
    gt = sympy.expand(sympy.diff(g, t)).subs({t: 1})
    return sympy.expand(sympy.resultant(gs, gt, s))


def _strip_content(expr, vars_):
    """Remove rational content and any pure-variable monomial factors."""
    poly = Poly(expr, *vars_, domain="QQ")
    if poly.is_zero:
        return sympy.Integer(0)
    monoms = poly.monoms()
    common = [min(m[k] for m in monoms) for k in range(len(vars_))]
    if any(common):
        expr = sympy.cancel(expr / sympy.prod([v ** c for v, c in zip(vars_, common)]))
        poly = Poly(sympy.expand(expr), *vars_, domain="QQ")
    _, prim = poly.primitive()
    return prim.as_expr()


def hyperdiscriminant(curve: PlaneCurve) -> Hyperdiscriminant:
    """The dual curve of a smooth plane curve of degree >= 2, degree d(d-1).

    Eliminated twice (w-chart and u-chart Sylvester resultants of the
    restricted form's partials); the two primitives must be proportional and
    of the predicted degree, otherwise a ConsistencyError is raised.
    """
    if curve.degree < 2:
        raise ValueError("hyperdiscriminants need degree >= 2")
    if not curve.is_smooth():
        raise ValueError("hyperdiscriminant is defined for smooth curves only")
    target = dual_degree(curve)
    raw_w = _eliminate_dual(curve, eliminated=2)
    delta = _strip_content(raw_w, (U, V, W))
    poly = Poly(delta, U, V, W, domain="QQ")
    if poly.total_degree() != target:
        raise ConsistencyError(
            f"dual elimination degree {poly.total_degree()} != d(d-1) = {target}"
        )
    raw_u = _eliminate_dual(curve, eliminated=0)
    delta_u = _strip_content(raw_u, (U, V, W))
    cross = sympy.expand(delta * Poly(delta_u, U, V, W).LC(order="grlex")
                         - delta_u * Poly(delta, U, V, W).LC(order="grlex"))
    if cross != 0:
        raise ConsistencyError("the two dual-curve eliminations disagree")
    return Hyperdiscriminant(_grlex_normalize(delta, (U, V, W)), target)


def p_coordinates(curve: PlaneCurve) -> tuple[PowerVector, PowerVector]:
    """(R_M^{dbar}, Delta_M^{2d}) as lazy powers; both live in degree 2d*dbar."""
    dbar = dual_degree(curve)
    r_vec = chow_form(curve).as_vector()
    d_vec = hyperdiscriminant(curve).as_vector()
    return (
        PowerVector(r_vec, dbar, "poly"),
        PowerVector(d_vec, 2 * curve.degree, "poly"),
    )


def _check_sl3_cocharacter(lam: Cocharacter):
    if lam.rank != 3:
        raise ValueError("expected a cocharacter of the diagonal torus of SL(3)")
    if sum(lam.coords) != 0:
        raise ValueError("cocharacter must be trace-zero")


def futaki(curve: PlaneCurve, lam: Cocharacter) -> int:
    """w_lambda(Delta(M)) - w_lambda(R(M)) through the lazy power rule."""
    _check_sl3_cocharacter(lam)
    d = curve.degree
    dbar = dual_degree(curve)
    chow = _cached_chow(curve)
    dual = _cached_dual(curve)
    w_r = dbar * min(sum(a * b for a, b in zip(lam.coords, cd)) for cd in chow.support())
    w_d = 2 * d * min(sum(a * b for a, b in zip(lam.coords, e)) for e in dual.support())
    return w_d - w_r


@dataclass(frozen=True)
class KStabilityVerdict:
    status: str  # passes | antecedent-vacuous | fails
    futaki: int
    w_r: int
    w_delta: int
    w_identity: int
    deg_v: int

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "futaki": self.futaki,
            "w_R": self.w_r,
            "w_Delta": self.w_delta,
            "w_I": self.w_identity,
            "deg_V": self.deg_v,
        }


def k_stability_along(curve: PlaneCurve, lam: Cocharacter) -> KStabilityVerdict:
    """The K-criterion implication at a single lambda for (R(M), Delta(M)).

    deg(V) = 2d*dbar; the antecedent is deg(V) w(I) < w(R(M)) and the
    consequent w(Delta(M)) < w(R(M)).
    """
    _check_sl3_cocharacter(lam)
    d = curve.degree
    dbar = dual_degree(curve)
    deg_v = 2 * d * dbar
    chow = _cached_chow(curve)
    dual = _cached_dual(curve)
    w_r = dbar * min(sum(a * b for a, b in zip(lam.coords, cd)) for cd in chow.support())
    w_d = 2 * d * min(sum(a * b for a, b in zip(lam.coords, e)) for e in dual.support())
    w_i = min(lam.coords)
    fut = w_d - w_r
    if deg_v * w_i >= w_r:
        status = "antecedent-vacuous"
    elif w_d < w_r:
        status = "passes"
    else:
        status = "fails"
    return KStabilityVerdict(status, fut, w_r, w_d, w_i, deg_v)


def _cached_chow(curve: PlaneCurve) -> ChowForm:
    cached = getattr(curve, "_chow", None)
    if cached is None:
        cached = chow_form(curve)
        object.__setattr__(curve, "_chow", cached)
    return cached


def _cached_dual(curve: PlaneCurve) -> Hyperdiscriminant:
    cached = getattr(curve, "_dual", None)
    if cached is None:
        cached = hyperdiscriminant(curve)
        object.__setattr__(curve, "_dual", cached)
    return cached


# ---------------------------------------------------------------------------
# Rational points and tangent lines (used by the incidence checks)


def tangent_line(curve: PlaneCurve, point) -> tuple[int, int, int]:
    """Primitive integral dual coordinates of the tangent line at a smooth point."""
    if not curve.contains_point(point):
        raise ValueError("point does not lie on the curve")
    grad = curve.gradient_at(point)
    if all(g == 0 for g in grad):
        raise ValueError("singular point has no tangent line")
    return lattice.primitive_integer(grad)


def curve_through_points(points: Sequence, degree: int) -> Optional[PlaneCurve]:
    """Interpolate a degree-d curve through the points (None if only 0 works)."""
    monoms = list(rep._monomial_exponents(3, degree))
    rows = []
    for p in points:
        vals = [Rational(str(c)) for c in p]
        rows.append([vals[0] ** a * vals[1] ** b * vals[2] ** c for (a, b, c) in monoms])
    mat = sympy.Matrix(rows)
    null = mat.nullspace()
    if not null:
        return None
    coeffs = null[0]
    expr = sum(
        coeffs[i] * X ** a * Y ** b * Z ** c for i, (a, b, c) in enumerate(monoms)
    )
    if expr == 0:
        return None
    try:
        return PlaneCurve.from_expr(sympy.expand(expr))
    except ValueError:
        return None


def _line_points(p, q):
    """Parametrize the line through p and q as p + t q."""
    return [Rational(str(a)) + sympy.Symbol("t") * Rational(str(b)) for a, b in zip(p, q)]


def more_rational_points(curve: PlaneCurve, known: Sequence, count: int) -> list[tuple]:
    """Generate extra rational points by intersecting with rational chords.

    Works for conics (sweep lines through one point) and cubics (chords through
    two points give the third intersection rationally).
    """
    pts = [tuple(Fraction(str(c)) for c in p) for p in known]
    seen = set(pts)
    t = sympy.Symbol("t")
    attempts = 0
    i, j = 0, 1
    while len(pts) < count and attempts < 400:
        attempts += 1
        if curve.degree == 2:
            p = pts[attempts % len(pts)]
            direction = (1, attempts, attempts * attempts + 1)
            line = [Rational(str(a)) + t * b for a, b in zip(p, direction)]
        else:
            i = attempts % len(pts)
            j = (attempts * 7 + 1) % len(pts)
            if i == j:
                continue
            line = _line_points(pts[i], [b - a for a, b in zip(pts[i], pts[j])])
        restricted = sympy.expand(curve.poly.as_expr().subs(dict(zip((X, Y, Z), line))))
        poly = sympy.Poly(restricted, t)
        roots = [r for r in sympy.roots(poly, t, filter="Q")]
        for r in roots:
            vals = tuple(Fraction(str(sympy.nsimplify(c.subs(t, r)))) for c in line)
            if all(v == 0 for v in vals):
                continue
            norm = lattice.primitive_integer(vals)
            pt = tuple(Fraction(c) for c in norm)
            if pt not in seen and curve.contains_point(pt):
                grad = curve.gradient_at(pt)
                if any(g != 0 for g in grad):
                    seen.add(pt)
                    pts.append(pt)
    return pts[:count]


def random_smooth_curve(degree: int, rng, max_tries: int = 200):
    """A random smooth rational curve through random rational points.

    Returns (curve, seed_points); the seed points lie on the curve by
    construction, so incidence checks have exact rational data to work with.
    """
    npoints = {2: 5, 3: 9}.get(degree)
    if npoints is None:
        raise ValueError("random smooth curves are generated for degrees 2 and 3")
    for _ in range(max_tries):
        pts = []
        seen = set()
        while len(pts) < npoints:
            p = (rng.randint(-6, 6), rng.randint(-6, 6), rng.randint(1, 6))
            key = lattice.primitive_integer(p)
            if key in seen:
                continue
            seen.add(key)
            pts.append(p)
        curve = curve_through_points(pts, degree)
        if curve is None or curve.degree != degree:
            continue
        if not curve.is_smooth():
            continue
        on_curve = [p for p in pts if curve.contains_point(p)]
        if len(on_curve) < npoints:
            continue
        return curve, on_curve
    raise RuntimeError("failed to sample a smooth curve")
