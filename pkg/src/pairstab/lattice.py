"""Exact lattice and convex-geometry kernel.

Characters and cocharacters are integer lattice vectors paired by the standard
dot product. Weight polytopes are convex hulls of rational points, and every
geometric decision (hull vertex detection, membership, strict support
dominance, integer scaling) is settled by an exact rational simplex rather
than floating point, so verdicts never depend on a tolerance.

Directional decisions quantify over the cones on which the min-support
functions are simultaneously linear: for each tuple of candidate minimizing
vertices we intersect the corresponding normal cones and ask an exact LP
whether a violating direction exists inside. This refines the normal fans of
all polytopes involved and is complete, including cone interiors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from ._simplex import solve_mixed
from .errors import NoFiniteScaleError, RankMismatchError, UnsupportedRankError

MAX_EXACT_RANK = 4

Vec = tuple[Fraction, ...]


def _vec(coords) -> Vec:
    return tuple(Fraction(c) for c in coords)


def _dot(u, v) -> Fraction:
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))


def _sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def frac_str(f: Fraction) -> str:
    f = Fraction(f)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def primitive_integer(vec) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on the same ray."""
    vec = _vec(vec)
    lcm = 1
    for c in vec:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in vec]
    g = 0
    for c in ints:
        g = math.gcd(g, abs(c))
    if g > 1:
        ints = [c // g for c in ints]
    return tuple(ints)


@dataclass(frozen=True)
class Character:
    """A point of the character lattice, stored in fixed torus coordinates."""

    coords: tuple[int, ...]

    def __init__(self, coords):
        object.__setattr__(self, "coords", tuple(int(c) for c in coords))

    @property
    def rank(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class Cocharacter:
    """An integral one-parameter subgroup direction of the fixed torus."""

    coords: tuple[int, ...]

    def __init__(self, coords):
        object.__setattr__(self, "coords", tuple(int(c) for c in coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def is_trivial(self) -> bool:
        return all(c == 0 for c in self.coords)


Direction = Union[Cocharacter, Sequence]


def _direction_coords(u: Direction) -> Vec:
    if isinstance(u, Cocharacter):
        return _vec(u.coords)
    return _vec(u)


def pairing(u: Cocharacter, m: Character) -> int:
    """Standard integer pairing sum(u_i m_i)."""
    if u.rank != m.rank:
        raise RankMismatchError(f"rank {u.rank} cocharacter paired with rank {m.rank} character")
    return sum(a * b for a, b in zip(u.coords, m.coords))


@dataclass(frozen=True)
class WeightPolytope:
    """Convex hull of finitely many rational lattice points.

    `vertices` are exactly the extreme points; `generators` keep the original
    point set so support minima can be cross-checked against both.
    """

    vertices: tuple[Vec, ...]
    generators: tuple[Vec, ...]
    rank: int

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "vertices": [[frac_str(c) for c in v] for v in self.vertices],
            "generators": [[frac_str(c) for c in g] for g in self.generators],
        }

    @staticmethod
    def from_json(data: dict) -> "WeightPolytope":
        gens = [tuple(Fraction(c) for c in g) for g in data["generators"]]
        return convex_hull(gens)


def _affine_rank(points: Sequence[Vec]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    rows = [list(_sub(p, base)) for p in points[1:]]
    rank = 0
    ncols = len(base)
    row_idx = 0
    for col in range(ncols):
        piv = None
        for r in range(row_idx, len(rows)):
            if rows[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        rows[row_idx], rows[piv] = rows[piv], rows[row_idx]
        prow = rows[row_idx]
        inv = Fraction(1) / prow[col]
        rows[row_idx] = [x * inv for x in prow]
        prow = rows[row_idx]
        for r in range(len(rows)):
            if r != row_idx and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], prow)]
        row_idx += 1
        rank += 1
    return rank


def point_in_hull(point, generators: Sequence[Vec]) -> bool:
    """Exact LP membership: point in conv(generators)?"""
    point = _vec(point)
    gens = [_vec(g) for g in generators]
    if not gens:
        return False
    r = len(point)
    if r == 1:
        lo = min(g[0] for g in gens)
        hi = max(g[0] for g in gens)
        return lo <= point[0] <= hi
    rows = []
    rhs = []
    for k in range(r):
        rows.append([g[k] for g in gens])
        rhs.append(point[k])
    rows.append([Fraction(1)] * len(gens))
    rhs.append(Fraction(1))
    return solve_mixed(rows, rhs, len(gens), 0) is not None


def convex_hull(points: Iterable) -> WeightPolytope:
    """Hull of a nonempty finite rational point set; ties settled by exact LP."""
    pts = sorted({_vec(p) for p in points})
    if not pts:
        raise ValueError("convex_hull of an empty point set")
    ranks = {len(p) for p in pts}
    if len(ranks) != 1:
        raise RankMismatchError("points of mixed rank in convex_hull")
    rank = ranks.pop()
    if len(pts) == 1:
        return WeightPolytope(tuple(pts), tuple(pts), rank)
    arank = _affine_rank(pts)
    if arank == 0:
        return WeightPolytope((pts[0],), tuple(pts), rank)
    if arank == 1:
        # Points on a line: the extremes along the direction are the vertices.
        base = pts[0]
        direction = next(_sub(p, base) for p in pts[1:] if p != base)
        j = next(i for i, c in enumerate(direction) if c != 0)
        keyed = sorted(pts, key=lambda p: (p[j] - base[j]) / direction[j])
        verts = tuple(sorted({keyed[0], keyed[-1]}))
        return WeightPolytope(verts, tuple(pts), rank)
    verts = []
    for i, p in enumerate(pts):
        others = pts[:i] + pts[i + 1 :]
        if not point_in_hull(p, others):
            verts.append(p)
    return WeightPolytope(tuple(verts), tuple(pts), rank)


def support_min(P: WeightPolytope, u: Direction) -> Fraction:
    """min over the polytope of the linear functional u."""
    uc = _direction_coords(u)
    if len(uc) != P.rank:
        raise RankMismatchError("direction rank does not match polytope rank")
    return min(_dot(uc, g) for g in P.generators)


def contains(Q: WeightPolytope, P: WeightPolytope) -> bool:
    """Does Q contain P (every vertex of P inside Q, decided by exact LP)."""
    if Q.rank != P.rank:
        raise RankMismatchError("polytopes of different rank")
    return all(point_in_hull(v, Q.vertices) for v in P.vertices)


def _solve_direction_system(constraints, rank, objective=None):
    """Feasible direction u for constraints [(coeffs, rhs, 'le'|'eq'), ...].

    'le' rows read coeffs.u <= rhs. Returns u (list of Fractions) or None.
    """
    slack_count = sum(1 for _, _, sense in constraints if sense == "le")
    rows = []
    rhs = []
    si = 0
    for coeffs, b, sense in constraints:
        row = [Fraction(0)] * slack_count
        if sense == "le":
            row[si] = Fraction(1)
            si += 1
        rows.append(row + [Fraction(c) for c in coeffs])
        rhs.append(Fraction(b))
    sol = solve_mixed(rows, rhs, slack_count, rank, objective)
    if sol is None:
        return None
    return sol[slack_count:]


def _normal_cone_rows(P: WeightPolytope, v: Vec):
    # u lies in the cone where v minimizes <u,.> over P iff (v - v').u <= 0.
    return [(_sub(v, other), Fraction(0), "le") for other in P.vertices if other != v]


def strict_dominance_violation(Q: WeightPolytope, P: WeightPolytope) -> Optional[tuple[int, ...]]:
    """A nonzero integral u with support_min(Q,u) >= support_min(P,u), else None.

    Works cone by cone over pairs of candidate minimizing vertices; on each
    cone both support functions are linear, so existence of a violating
    direction is an exact LP question (checked under 2r sign normalizations
    to exclude u = 0).
    """
    if Q.rank != P.rank:
        raise RankMismatchError("polytopes of different rank")
    rank = Q.rank
    if rank > MAX_EXACT_RANK:
        raise UnsupportedRankError(f"strict dominance supported up to rank {MAX_EXACT_RANK}")
    if rank == 1:
        # intervals: only the two signed directions exist
        for u in ((-1,), (1,)):
            if support_min(Q, u) >= support_min(P, u):
                return u
        return None
    for q in Q.vertices:
        for p in P.vertices:
            cone = _normal_cone_rows(Q, q) + _normal_cone_rows(P, p)
            cone.append((_sub(p, q), Fraction(0), "le"))  # q.u >= p.u
            for i in range(rank):
                for s in (1, -1):
                    norm = [Fraction(0)] * rank
                    norm[i] = Fraction(1)
                    sol = _solve_direction_system(cone + [(tuple(norm), Fraction(s), "eq")], rank)
                    if sol is not None:
                        return primitive_integer(sol)
    return None


def strictly_dominates(Q: WeightPolytope, P: WeightPolytope) -> bool:
    """True iff support_min(Q,u) < support_min(P,u) for every nonzero u."""
    return strict_dominance_violation(Q, P) is None


def k_implication_violation(
    V: WeightPolytope, W: WeightPolytope, S: WeightPolytope, deg_v: int
) -> Optional[tuple[int, ...]]:
    """Direction violating: deg_v*min_S(u) < min_V(u) implies min_W(u) < min_V(u).

    Returns an integral witness u with the antecedent strict and the consequent
    failed, or None when no such direction exists. Exact over every refined
    cone (the antecedent's strictness is scaled to <= -1, which also rules out
    u = 0).
    """
    if not (V.rank == W.rank == S.rank):
        raise RankMismatchError("polytopes of different rank")
    rank = V.rank
    if rank > MAX_EXACT_RANK:
        raise UnsupportedRankError(f"K-criterion check supported up to rank {MAX_EXACT_RANK}")
    for a in V.vertices:
        for b in W.vertices:
            for s in S.vertices:
                cone = (
                    _normal_cone_rows(V, a)
                    + _normal_cone_rows(W, b)
                    + _normal_cone_rows(S, s)
                )
                f_row = tuple(deg_v * sc - ac for sc, ac in zip(s, a))
                g_row = _sub(a, b)
                cone.append((f_row, Fraction(-1), "le"))  # antecedent, scaled strict
                cone.append((g_row, Fraction(0), "le"))  # consequent fails
                sol = _solve_direction_system(cone, rank)
                if sol is not None:
                    return primitive_integer(sol)
    return None


def separating_direction(point, generators: Sequence[Vec]) -> Optional[tuple[int, ...]]:
    """Integral u with u.(g - point) >= 1 for all generators, else None."""
    point = _vec(point)
    gens = [_vec(g) for g in generators]
    rank = len(point)
    if rank == 1:
        lo = min(g[0] for g in gens)
        hi = max(g[0] for g in gens)
        if point[0] < lo:
            return (1,)
        if point[0] > hi:
            return (-1,)
        return None
    constraints = [(_sub(point, g), Fraction(-1), "le") for g in gens]  # (g-point).u >= 1
    sol = _solve_direction_system(constraints, rank)
    if sol is None:
        return None
    return primitive_integer(sol)


def gauge(point, generators: Sequence[Vec]) -> Optional[Fraction]:
    """Minimal k >= 0 with point in k*conv(generators), or None if no such k.

    This is the LP min sum(nu) subject to sum(nu_i g_i) = point, nu >= 0; it is
    the Minkowski functional when the hull contains the origin.
    """
    point = _vec(point)
    gens = [_vec(g) for g in generators]
    r = len(point)
    rows = [[g[k] for g in gens] for k in range(r)]
    rhs = [point[k] for k in range(r)]
    sol = solve_mixed(rows, rhs, len(gens), 0, objective=[Fraction(1)] * len(gens))
    if sol is None:
        return None
    return sum(sol, Fraction(0))


def min_scale_containment(P: WeightPolytope, S: WeightPolytope) -> int:
    """Smallest positive integer k with P inside k*S (S must contain the origin)."""
    if P.rank != S.rank:
        raise RankMismatchError("polytopes of different rank")
    origin = tuple(Fraction(0) for _ in range(S.rank))
    if not point_in_hull(origin, S.vertices):
        raise ValueError("scaling base must contain the origin")
    worst = Fraction(0)
    for v in P.vertices:
        g = gauge(v, S.vertices)
        if g is None:
            raise NoFiniteScaleError(f"vertex {v} is outside every scaling of the base")
        worst = max(worst, g)
    return max(1, math.ceil(worst))
