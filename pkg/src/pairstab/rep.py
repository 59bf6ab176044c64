"""Rational representations presented by weight data.

A representation is described by an ordered basis of labels, one character per
label, and a family tag saying how the full group acts. Vectors store exact
Gaussian-rational coefficients on their nonzero basis labels, so supports and
weight polytopes are exact; floating point only ever appears downstream in the
energy module.

Conventions fixed here:

* Polynomial families act by substitution, sigma . f = f(sigma^{-1} z) with z
  a column vector. This is a left action and matches the geometric action on
  zero sets (zeros of sigma.f are sigma applied to zeros of f).
* Binary forms use the basis {x^i y^(d-i)}. The rank-1 torus coordinate u is
  embedded as diag(t^-u, t^u), which makes the weight of x equal to +1.
* gl(N+1) with left multiplication has weight(e_ij) = e_i, the row indicator.
* Chow matrix spaces transform by right multiplication A -> A sigma, dual
  coordinate rows by U -> U sigma; their weights are column-degree vectors and
  exponent vectors respectively.
* Families whose torus sits inside SL carry `modulo` = the all-ones character
  direction; stability decisions quantify over trace-zero cocharacters only.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from . import lattice
from .lattice import Character, Cocharacter, WeightPolytope

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# Gaussian rationals


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction = ZERO
    im: Fraction = ZERO

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is Fraction else Fraction(re))
        object.__setattr__(self, "im", im if type(im) is Fraction else Fraction(im))

    @staticmethod
    def coerce(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ValueError("complex coefficient must be a [re, im] pair")
            return GaussianRational(Fraction(value[0]), Fraction(value[1]))
        if isinstance(value, complex):
            return GaussianRational(Fraction(value.real), Fraction(value.imag))
        return GaussianRational(Fraction(value))

    def __add__(self, other):
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussianRational(other)
        if self.im == 0 and other.im == 0:
            return GaussianRational(self.re * other.re)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_json(self):
        if self.im == 0:
            return lattice.frac_str(self.re)
        return [lattice.frac_str(self.re), lattice.frac_str(self.im)]

    def __pow__(self, n: int) -> "GaussianRational":
        out = GaussianRational(1)
        base = self
        n = int(n)
        if n < 0:
            raise ValueError("negative powers of Gaussian rationals not needed")
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out


# ---------------------------------------------------------------------------
# Exact matrices


Matrix = tuple[tuple[Fraction, ...], ...]


def mat_frac(sigma) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in sigma)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum((a[i][t] * b[t][j] for t in range(k)), ZERO) for j in range(m))
        for i in range(n)
    )


def mat_det(a: Matrix) -> Fraction:
    n = len(a)
    rows = [list(r) for r in a]
    det = ONE
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            return ZERO
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        inv = ONE / rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col] != 0:
                f = rows[r][col] * inv
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return det


def mat_inv(a: Matrix) -> Matrix:
    n = len(a)
    rows = [list(r) + [ONE if j == i else ZERO for j in range(n)] for i, r in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = ONE / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return tuple(tuple(r[n:]) for r in rows)


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# Representation specs


def _monomial_label(varnames: Sequence[str], exponents: Sequence[int]) -> str:
    return "*".join(f"{v}^{e}" for v, e in zip(varnames, exponents))


def _label_exponents(label: str, varnames: Sequence[str]) -> tuple[int, ...]:
    parts = label.split("*")
    if len(parts) != len(varnames):
        raise ValueError(f"bad monomial label {label!r}")
    exps = []
    for part, v in zip(parts, varnames):
        name, _, e = part.partition("^")
        if name != v:
            raise ValueError(f"bad monomial label {label!r}")
        exps.append(int(e))
    return tuple(exps)


def _monomial_exponents(nvars: int, degree: int):
    if nvars == 1:
        yield (degree,)
        return
    for head in range(degree, -1, -1):
        for rest in _monomial_exponents(nvars - 1, degree - head):
            yield (head,) + rest


@dataclass(frozen=True, eq=False)
class RepresentationSpec:
    """Weight data plus a family tag describing the full group action."""

    family: str
    rank: int
    basis: tuple[str, ...]
    weights: dict[str, tuple[int, ...]]
    modulo: tuple[tuple[int, ...], ...] = ()
    group_dim: Optional[int] = None
    meta: dict = field(default_factory=dict)

    def weight_of(self, label: str) -> tuple[int, ...]:
        return self.weights[label]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def full_weight_polytope(self) -> WeightPolytope:
        return lattice.convex_hull(self.weights.values())

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "basis": list(self.basis),
            "weights": {l: list(w) for l, w in self.weights.items()},
            "modulo": [list(m) for m in self.modulo],
        }


def symmetric_power_sl2(degree: int) -> RepresentationSpec:
    """Binary forms of the given degree; weight of x^i y^(d-i) is 2i-d."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    varnames = ("x", "y")
    basis = []
    weights = {}
    for i in range(degree, -1, -1):
        label = _monomial_label(varnames, (i, degree - i))
        basis.append(label)
        weights[label] = (2 * i - degree,)
    return RepresentationSpec(
        family=f"symmetric-power-sl2({degree})",
        rank=1,
        basis=tuple(basis),
        weights=weights,
        group_dim=2,
        meta={"kind": "sym-sl2", "degree": degree, "vars": varnames},
    )


def matrix_space_gl(size: int) -> RepresentationSpec:
    """(size x size) matrices under left multiplication; weight(e_ij) = e_i."""
    basis = []
    weights = {}
    for i in range(size):
        for j in range(size):
            label = f"e_{i}_{j}"
            basis.append(label)
            weights[label] = tuple(1 if k == i else 0 for k in range(size))
    return RepresentationSpec(
        family=f"matrix-space-gl({size})",
        rank=size,
        basis=tuple(basis),
        weights=weights,
        modulo=(tuple(1 for _ in range(size)),),
        group_dim=size,
        meta={"kind": "matrix-space", "size": size},
    )


def trivial_rep(rank: int = 1, modulo: tuple = ()) -> RepresentationSpec:
    """One-dimensional trivial representation in a torus of the given rank."""
    return RepresentationSpec(
        family=f"trivial({rank})",
        rank=rank,
        basis=("1",),
        weights={"1": tuple(0 for _ in range(rank))},
        modulo=tuple(tuple(m) for m in modulo),
        group_dim=None,
        meta={"kind": "trivial"},
    )


def polynomial_space(varnames: Sequence[str], degree: int) -> RepresentationSpec:
    """Homogeneous polynomials under f -> f(sigma^{-1} z); weights are minus exponents."""
    varnames = tuple(varnames)
    n = len(varnames)
    basis = []
    weights = {}
    for exps in _monomial_exponents(n, degree):
        label = _monomial_label(varnames, exps)
        basis.append(label)
        weights[label] = tuple(-e for e in exps)
    return RepresentationSpec(
        family=f"polynomial-space({':'.join(varnames)},{degree})",
        rank=n,
        basis=tuple(basis),
        weights=weights,
        modulo=(tuple(1 for _ in range(n)),),
        group_dim=n,
        meta={"kind": "poly-space", "degree": degree, "vars": varnames},
    )


def chow_matrix_space(rows: int, cols: int, degree: int) -> RepresentationSpec:
    """Polynomials on (rows x cols) matrices under A -> A sigma.

    Weights are column-degree vectors, so the torus rank is `cols`.
    """
    varnames = tuple(f"a_{i}_{j}" for i in range(rows) for j in range(cols))
    basis = []
    weights = {}
    for exps in _monomial_exponents(len(varnames), degree):
        label = _monomial_label(varnames, exps)
        basis.append(label)
        coldeg = [0] * cols
        for flat, e in enumerate(exps):
            coldeg[flat % cols] += e
        weights[label] = tuple(coldeg)
    return RepresentationSpec(
        family=f"chow-matrix-space({rows},{cols},{degree})",
        rank=cols,
        basis=tuple(basis),
        weights=weights,
        modulo=(tuple(1 for _ in range(cols)),),
        group_dim=cols,
        meta={"kind": "chow-space", "degree": degree, "rows": rows, "cols": cols, "vars": varnames},
    )


def dual_coordinate_space(degree: int, varnames: Sequence[str] = ("u", "v", "w")) -> RepresentationSpec:
    """Polynomials in dual (line) coordinates under U -> U sigma; weights are exponents."""
    varnames = tuple(varnames)
    n = len(varnames)
    basis = []
    weights = {}
    for exps in _monomial_exponents(n, degree):
        label = _monomial_label(varnames, exps)
        basis.append(label)
        weights[label] = tuple(exps)
    return RepresentationSpec(
        family=f"dual-coordinate-space({n},{degree})",
        rank=n,
        basis=tuple(basis),
        weights=weights,
        modulo=(tuple(1 for _ in range(n)),),
        group_dim=n,
        meta={"kind": "dual-space", "degree": degree, "vars": varnames},
    )


_FAMILY_RE = re.compile(r"^([a-z0-9-]+)\((.*)\)$")


def rep_from_family(tag: str) -> RepresentationSpec:
    m = _FAMILY_RE.match(tag.strip())
    if not m:
        raise ValueError(f"unrecognized family tag {tag!r}")
    name, args = m.group(1), m.group(2)
    if name == "symmetric-power-sl2":
        return symmetric_power_sl2(int(args))
    if name == "matrix-space-gl":
        return matrix_space_gl(int(args))
    if name == "trivial":
        return trivial_rep(int(args))
    if name == "polynomial-space":
        vars_part, deg = args.rsplit(",", 1)
        return polynomial_space(tuple(vars_part.split(":")), int(deg))
    if name == "chow-matrix-space":
        r, c, d = (int(a) for a in args.split(","))
        return chow_matrix_space(r, c, d)
    if name == "dual-coordinate-space":
        n, d = args.split(",")
        rep = dual_coordinate_space(int(d))
        if int(n) != 3:
            raise ValueError("dual coordinate spaces are built for 3 variables")
        return rep
    raise ValueError(f"unrecognized family tag {tag!r}")


def rep_from_json(data: Mapping) -> RepresentationSpec:
    fam = data.get("family", "")
    if fam != "explicit":
        return rep_from_family(fam)
    weights = {l: tuple(int(c) for c in w) for l, w in data["weights"].items()}
    return RepresentationSpec(
        family="explicit",
        rank=int(data["rank"]),
        basis=tuple(data["basis"]),
        weights=weights,
        modulo=tuple(tuple(int(c) for c in m) for m in data.get("modulo", [])),
        group_dim=None,
        meta={"kind": "explicit"},
    )


# ---------------------------------------------------------------------------
# Vectors


@dataclass(frozen=True, eq=False)
class WeightedVector:
    """A nonzero vector stored by its nonzero coefficients per basis label."""

    rep: RepresentationSpec
    coeffs: dict[str, GaussianRational]

    def __post_init__(self):
        clean = {}
        for label, c in self.coeffs.items():
            if label not in self.rep.weights:
                raise ValueError(f"unknown basis label {label!r}")
            c = GaussianRational.coerce(c)
            if c:
                clean[label] = c
        if not clean:
            raise ValueError("the zero vector is not admitted")
        object.__setattr__(self, "coeffs", clean)

    def support(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted({self.rep.weights[l] for l in self.coeffs}))

    def weight_polytope(self) -> WeightPolytope:
        return lattice.convex_hull(self.support())

    def norm_sq(self) -> Fraction:
        return sum((c.abs2() for c in self.coeffs.values()), ZERO)

    def hermitian_norm(self) -> float:
        return _sqrt_fraction(self.norm_sq())

    def weight_norms(self) -> dict[tuple[int, ...], Fraction]:
        """Squared norm of each weight-space component (labels are orthonormal)."""
        out: dict[tuple[int, ...], Fraction] = {}
        for label, c in self.coeffs.items():
            w = self.rep.weights[label]
            out[w] = out.get(w, ZERO) + c.abs2()
        return out

    def to_json(self) -> dict:
        return {
            "rep": self.rep.to_json(),
            "coeffs": {l: c.to_json() for l, c in sorted(self.coeffs.items())},
        }


@dataclass(frozen=True, eq=False)
class PowerVector:
    """Lazy q-th power of a vector: tensor powers v^{(x)q} or polynomial powers f^q.

    Supports are kept combinatorial so weights scale linearly without
    materializing the power. For the polynomial flavor, `support` returns the
    scaled generators q*a, which has the same convex hull (hence the same
    weights and polytope) as the true monomial support.
    """

    base: WeightedVector
    power: int
    kind: str  # "tensor" | "poly"

    def __post_init__(self):
        if self.power < 1:
            raise ValueError("power must be >= 1")
        if self.kind not in ("tensor", "poly"):
            raise ValueError("kind must be 'tensor' or 'poly'")

    @property
    def rep(self) -> RepresentationSpec:
        return self.base.rep

    def support(self) -> tuple[tuple[int, ...], ...]:
        base_supp = self.base.support()
        if self.kind == "poly":
            return tuple(sorted({tuple(self.power * c for c in a) for a in base_supp}))
        acc = {tuple(0 for _ in range(self.base.rep.rank))}
        for _ in range(self.power):
            acc = {tuple(x + y for x, y in zip(a, b)) for a in acc for b in base_supp}
        return tuple(sorted(acc))

    def weight_polytope(self) -> WeightPolytope:
        return lattice.convex_hull(self.support())

    def norm_sq(self) -> Fraction:
        if self.kind == "tensor":
            return self.base.norm_sq() ** self.power
        return expand_poly_power(self).norm_sq()

    def hermitian_norm(self) -> float:
        if self.kind == "tensor":
            return math.exp(0.5 * self.power * log_fraction(self.base.norm_sq()))
        return expand_poly_power(self).hermitian_norm()


Vector = Union[WeightedVector, PowerVector]


def vector_from_json(data: Mapping) -> WeightedVector:
    rep = rep_from_json(data["rep"])
    coeffs = {l: GaussianRational.coerce(c) for l, c in data["coeffs"].items()}
    return WeightedVector(rep, coeffs)


def _sqrt_fraction(f: Fraction) -> float:
    try:
        return math.sqrt(float(f))
    except OverflowError:
        return math.exp(0.5 * log_fraction(f))


def log_fraction(f: Fraction) -> float:
    """log of a positive rational, safe for huge numerators/denominators."""
    f = Fraction(f)
    if f <= 0:
        raise ValueError("log of a nonpositive rational")
    return math.log(f.numerator) - math.log(f.denominator)


# ---------------------------------------------------------------------------
# Spec operations


def support(v: Vector) -> tuple[tuple[int, ...], ...]:
    """Weights whose component of v is nonzero."""
    return v.support()


def weight_polytope(v: Vector) -> WeightPolytope:
    """Convex hull of the support of v."""
    return v.weight_polytope()


def hermitian_norm(v: Vector) -> float:
    """sqrt of the sum of squared coefficient moduli in the orthonormal basis."""
    return v.hermitian_norm()


def inner_product(v: WeightedVector, w: WeightedVector) -> GaussianRational:
    """Exact Hermitian inner product sum(conj(v_l) w_l) over shared labels."""
    if v.rep is not w.rep and v.rep.basis != w.rep.basis:
        raise ValueError("inner product requires vectors in the same representation")
    out = GaussianRational(0)
    for label, c in v.coeffs.items():
        d = w.coeffs.get(label)
        if d is not None:
            out = out + c.conjugate() * d
    return out


def torus_act(t: Sequence, v: Vector) -> Vector:
    """Scale each component by the character value a(t) = prod t_i^{a_i}."""
    if isinstance(v, PowerVector):
        return PowerVector(torus_act(t, v.base), v.power, v.kind)
    tvals = [Fraction(x) for x in t]
    if len(tvals) != v.rep.rank:
        raise ValueError("torus parameter rank mismatch")
    if any(x == 0 for x in tvals):
        raise ValueError("torus parameters must be nonzero")
    coeffs = {}
    for label, c in v.coeffs.items():
        factor = ONE
        for ti, ai in zip(tvals, v.rep.weights[label]):
            factor *= ti ** ai
        coeffs[label] = c * factor
    return WeightedVector(v.rep, coeffs)


def _poly_substitute(v: WeightedVector, var_images: list[dict[int, GaussianRational]]):
    """Substitute each variable by a linear form; v lives in a monomial-basis rep."""
    varnames = v.rep.meta["vars"]
    n = len(varnames)
    # power tables, shared across monomials
    max_exp = [0] * n
    decoded = []
    for label, c in v.coeffs.items():
        exps = _label_exponents(label, varnames)
        decoded.append((exps, c))
        for i, e in enumerate(exps):
            max_exp[i] = max(max_exp[i], e)
    tables = []
    for idx in range(n):
        tab = [{tuple(0 for _ in range(n)): GaussianRational(1)}]
        for e in range(1, max_exp[idx] + 1):
            tab.append(_poly_mul(tab[-1], _form_as_poly(var_images[idx], n)))
        tables.append(tab)
    acc: dict[tuple[int, ...], GaussianRational] = {}
    for exps, c in decoded:
        term = {tuple(0 for _ in range(n)): GaussianRational(1)}
        for idx, e in enumerate(exps):
            if e:
                term = _poly_mul(term, tables[idx][e])
        for exps2, c2 in term.items():
            add = c * c2
            key = _monomial_label(varnames, exps2)
            cur = acc.get(key)
            acc[key] = add if cur is None else cur + add
    coeffs = {k: v2 for k, v2 in acc.items() if v2}
    return WeightedVector(v.rep, coeffs)


def _form_as_poly(form: dict[int, GaussianRational], n: int):
    return {
        tuple(1 if k == idx else 0 for k in range(n)): c for idx, c in form.items()
    }


def _poly_mul(p1, p2):
    out: dict[tuple[int, ...], GaussianRational] = {}
    for e1, c1 in p1.items():
        for e2, c2 in p2.items():
            key = tuple(a + b for a, b in zip(e1, e2))
            add = c1 * c2
            cur = out.get(key)
            out[key] = add if cur is None else cur + add
    return {k: c for k, c in out.items() if c}


def group_act(sigma, v: Vector) -> Vector:
    """Image of v under the family's group action; sigma must be invertible."""
    if isinstance(v, PowerVector):
        return PowerVector(group_act(sigma, v.base), v.power, v.kind)
    kind = v.rep.meta.get("kind")
    if kind == "trivial":
        return v
    sig = mat_frac(sigma)
    n = v.rep.group_dim
    if n is None or len(sig) != n or any(len(row) != n for row in sig):
        raise ValueError(f"expected an invertible {n}x{n} matrix for family {v.rep.family}")
    if mat_det(sig) == 0:
        raise ValueError("singular matrix")
    if kind == "matrix-space":
        coeffs: dict[str, GaussianRational] = {}
        for label, c in v.coeffs.items():
            _, i, j = label.split("_")
            i, j = int(i), int(j)
            for k in range(n):
                if sig[k][i] != 0:
                    key = f"e_{k}_{j}"
                    add = c * sig[k][i]
                    cur = coeffs.get(key)
                    coeffs[key] = add if cur is None else cur + add
        return WeightedVector(v.rep, {k: c for k, c in coeffs.items() if c})
    if kind in ("sym-sl2", "poly-space"):
        inv = mat_inv(sig)
        images = [
            {j: GaussianRational(inv[i][j]) for j in range(n) if inv[i][j] != 0}
            for i in range(n)
        ]
        return _poly_substitute(v, images)
    if kind == "chow-space":
        rows, cols = v.rep.meta["rows"], v.rep.meta["cols"]
        images = []
        for i in range(rows):
            for j in range(cols):
                images.append(
                    {i * cols + k: GaussianRational(sig[k][j]) for k in range(cols) if sig[k][j] != 0}
                )
        return _poly_substitute(v, images)
    if kind == "dual-space":
        images = [
            {k: GaussianRational(sig[k][j]) for k in range(n) if sig[k][j] != 0}
            for j in range(n)
        ]
        return _poly_substitute(v, images)
    raise ValueError(f"family {v.rep.family} has no group action")


def cocharacter_matrix(rep: RepresentationSpec, u: Cocharacter, t: Fraction) -> Optional[Matrix]:
    """The group element lambda^u(t) in the family's torus embedding."""
    t = Fraction(t)
    if t == 0:
        raise ValueError("torus parameter must be nonzero")
    kind = rep.meta.get("kind")
    if kind == "trivial":
        return None
    if kind == "sym-sl2":
        (uc,) = u.coords
        return ((t ** (-uc), ZERO), (ZERO, t ** uc))
    n = rep.group_dim
    if n is None:
        raise ValueError(f"family {rep.family} has no torus embedding")
    if u.rank != n:
        raise ValueError("cocharacter rank does not match the group")
    return tuple(
        tuple((t ** u.coords[i]) if i == j else ZERO for j in range(n)) for i in range(n)
    )


def torus_param_of_diagonal(rep: RepresentationSpec, sigma) -> tuple[Fraction, ...]:
    """Abstract torus coordinates corresponding to a diagonal group element."""
    sig = mat_frac(sigma)
    n = len(sig)
    if any(sig[i][j] != 0 for i in range(n) for j in range(n) if i != j):
        raise ValueError("matrix is not diagonal")
    diag = [sig[i][i] for i in range(n)]
    if rep.meta.get("kind") == "sym-sl2":
        if diag[0] * diag[1] != 1:
            raise ValueError("sl2 torus elements have determinant one")
        return (ONE / diag[0],)
    return tuple(diag)


def expand_poly_power(pv: PowerVector, max_terms: int = 200_000) -> WeightedVector:
    """Materialize a lazy polynomial power into the degree-scaled monomial space."""
    if pv.kind != "poly":
        raise ValueError("only polynomial powers expand to a monomial space")
    rep = pv.base.rep
    kind = rep.meta.get("kind")
    varnames = rep.meta["vars"]
    degree = rep.meta["degree"]
    target_degree = degree * pv.power
    if kind == "poly-space":
        target = polynomial_space(varnames, target_degree)
    elif kind == "sym-sl2":
        target = symmetric_power_sl2(target_degree)
    elif kind == "chow-space":
        target = chow_matrix_space(rep.meta["rows"], rep.meta["cols"], target_degree)
    elif kind == "dual-space":
        target = dual_coordinate_space(target_degree, varnames)
    else:
        raise ValueError(f"cannot expand powers in family {rep.family}")
    poly = {
        _label_exponents(l, varnames): c for l, c in pv.base.coeffs.items()
    }
    acc = {tuple(0 for _ in varnames): GaussianRational(1)}
    for _ in range(pv.power):
        nxt: dict[tuple[int, ...], GaussianRational] = {}
        for e1, c1 in acc.items():
            for e2, c2 in poly.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                add = c1 * c2
                cur = nxt.get(key)
                nxt[key] = add if cur is None else cur + add
        acc = {k: c for k, c in nxt.items() if c}
        if len(acc) > max_terms:
            raise ValueError("polynomial power too large to expand")
    coeffs = {_monomial_label(varnames, e): c for e, c in acc.items()}
    return WeightedVector(target, coeffs)


def identity_matrix_vector(size: int) -> WeightedVector:
    """The identity matrix as a vector of the gl(size) matrix space."""
    rep = matrix_space_gl(size)
    return WeightedVector(rep, {f"e_{i}_{i}": GaussianRational(1) for i in range(size)})


def identity_tensor_power(size: int, q: int) -> PowerVector:
    """I^q in gl(size)^{(x)q}, kept lazy."""
    return PowerVector(identity_matrix_vector(size), q, "tensor")


# ---------------------------------------------------------------------------
# Random group elements (exact; shared by sampling routines and tests)


def random_unimodular(n: int, rng, steps: int = 6, max_entry: int = 2) -> Matrix:
    """Product of integer shears: always determinant one, exactly."""
    m = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i = rng.randrange(n)
        j = rng.randrange(n - 1)
        if j >= i:
            j += 1
        s = Fraction(rng.choice([k for k in range(-max_entry, max_entry + 1) if k != 0]))
        for col in range(n):
            m[i][col] += s * m[j][col]
    return tuple(tuple(row) for row in m)


def random_special_linear(n: int, rng, steps: int = 6) -> Matrix:
    """Random rational matrix of determinant one (shears and balanced diagonals)."""
    m = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    denoms = [1, 2, 3]
    for _ in range(steps):
        if rng.random() < 0.7:
            i = rng.randrange(n)
            j = rng.randrange(n - 1)
            if j >= i:
                j += 1
            s = Fraction(rng.randint(-2, 2), rng.choice(denoms))
            if s == 0:
                continue
            for col in range(n):
                m[i][col] += s * m[j][col]
        else:
            i = rng.randrange(n)
            j = rng.randrange(n - 1)
            if j >= i:
                j += 1
            a = Fraction(rng.choice([1, 2, 3]), rng.choice([1, 2]))
            if a in (0, 1):
                continue
            for col in range(n):
                m[i][col] *= a
                m[j][col] /= a
    return tuple(tuple(row) for row in m)
