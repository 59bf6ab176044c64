"""Stability decisions for pairs of vectors.

Over a fixed maximal torus the decisions are exact: semistability is hull
containment of the two weight polytopes, stability is strict support
dominance over every nonzero direction, and the K-criterion is the weight
implication checked exactly on each refined normal-fan cone. Representations
whose torus sits inside SL carry an all-ones `modulo` direction; decisions
then quantify over trace-zero cocharacters, realized by rewriting characters
through a trace-zero lattice basis before any geometry runs.

Full-group exactness is not attempted: `group_verdict_sampled` conjugates the
pair by random unimodular rational matrices (so supports stay exact) and can
only ever answer `unstable` or `unknown-sampled`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from . import lattice, rep
from .errors import UnsupportedRankError
from .lattice import Character, Cocharacter, WeightPolytope
from .rep import PowerVector, Vector, WeightedVector


@dataclass(frozen=True)
class Pair:
    """A (v, w) instance; both vectors nonzero over the same torus."""

    v: Vector
    w: Vector

    def __post_init__(self):
        if self.v.rep.rank != self.w.rep.rank:
            raise ValueError("pair members live over tori of different rank")
        if tuple(self.v.rep.modulo) != tuple(self.w.rep.modulo):
            raise ValueError("pair members disagree on the torus quotient convention")

    @property
    def rank(self) -> int:
        return self.v.rep.rank


@dataclass(frozen=True)
class Verdict:
    status: str  # stable | semistable-not-stable | unstable | unknown-sampled
    witness: Optional[Cocharacter]
    certificate: str

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witness": list(self.witness.coords) if self.witness is not None else None,
            "certificate": self.certificate,
        }


# ---------------------------------------------------------------------------
# Weights


def _check_cocharacter(lam: Cocharacter, vec: Vector):
    if lam.rank != vec.rep.rank:
        raise lattice.RankMismatchError("cocharacter rank does not match the representation")
    for m in vec.rep.modulo:
        if sum(a * b for a, b in zip(lam.coords, m)) != 0:
            raise ValueError(
                "cocharacter must pair to zero with the quotient direction (trace zero)"
            )


def weight(lam: Cocharacter, vec: Vector) -> int:
    """min over the support of the pairing with lam (the weight w_lambda)."""
    _check_cocharacter(lam, vec)
    return min(sum(a * b for a, b in zip(lam.coords, a_)) for a_ in vec.support())


def verify_weight_by_limit(lam: Cocharacter, vec: Vector) -> tuple[int, Vector]:
    """The weight as the exponent of the first surviving term of lambda(a) v.

    Returns (k, v0) where v0 collects the components of minimal pairing; by
    construction lim a^-k lambda(a) v = v0 != 0 and k equals `weight`.
    """
    _check_cocharacter(lam, vec)
    if isinstance(vec, PowerVector):
        k0, base0 = verify_weight_by_limit(lam, vec.base)
        factor = vec.power if vec.kind in ("tensor", "poly") else 1
        return k0 * factor, PowerVector(base0, vec.power, vec.kind)
    pairings = {
        label: sum(a * b for a, b in zip(lam.coords, vec.rep.weights[label]))
        for label in vec.coeffs
    }
    k = min(pairings.values())
    limit = WeightedVector(vec.rep, {l: c for l, c in vec.coeffs.items() if pairings[l] == k})
    assert k == weight(lam, vec)
    return k, limit


# ---------------------------------------------------------------------------
# Torus-coordinate reduction for SL quotients


def _reduction_columns(vec_rep) -> Optional[list[tuple[int, ...]]]:
    modulo = tuple(vec_rep.modulo)
    if not modulo:
        return None
    n = vec_rep.rank
    ones = tuple(1 for _ in range(n))
    if modulo != (ones,):
        raise NotImplementedError("only the all-ones quotient direction is supported")
    cols = []
    for i in range(n - 1):
        col = [0] * n
        col[i] = 1
        col[i + 1] = -1
        cols.append(tuple(col))
    return cols


def _reduce_points(points, cols) -> list[tuple[int, ...]]:
    if cols is None:
        return [tuple(p) for p in points]
    return [tuple(sum(a * b for a, b in zip(p, col)) for col in cols) for p in points]


def _lift_direction(u_red, cols) -> tuple[int, ...]:
    if cols is None:
        return tuple(int(c) for c in u_red)
    n = len(cols[0])
    out = [0] * n
    for c, col in zip(u_red, cols):
        for i in range(n):
            out[i] += int(c) * col[i]
    return tuple(out)


def _reduced_polytope(vec: Vector, cols) -> WeightPolytope:
    return lattice.convex_hull(_reduce_points(vec.support(), cols))


def _effective_rank_check(pair_rank: int, cols):
    eff = pair_rank if cols is None else len(cols)
    if eff > lattice.MAX_EXACT_RANK:
        raise UnsupportedRankError(
            f"effective torus rank {eff} exceeds the exact-decision cap {lattice.MAX_EXACT_RANK}"
        )
    return eff


# ---------------------------------------------------------------------------
# Torus-exact verdicts


def destabilizer(pair: Pair) -> Optional[Cocharacter]:
    """An integral lambda with weight(lambda, w) > weight(lambda, v), if one exists.

    Found by an exact separating-functional LP at each hull violation; the
    rational functional is cleared to a primitive integer vector and the
    lexicographically smallest candidate is returned. The returned witness is
    always re-verified by direct weight comparison.
    """
    cols = _reduction_columns(pair.v.rep)
    _effective_rank_check(pair.rank, cols)
    gens_v = _reduce_points(pair.v.support(), cols)
    gens_w = _reduce_points(pair.w.support(), cols)
    Pv = lattice.convex_hull(gens_v)
    candidates = []
    for vert in Pv.vertices:
        if lattice.point_in_hull(vert, gens_w):
            continue
        u = lattice.separating_direction(vert, gens_w)
        if u is None:
            raise lattice.RankMismatchError("separation failed for a hull violation")
        candidates.append(_lift_direction(u, cols))
    if not candidates:
        return None
    lam = Cocharacter(min(candidates))
    assert weight(lam, pair.w) > weight(lam, pair.v)
    return lam


def _torus_verdict(pair: Pair) -> Verdict:
    cols = _reduction_columns(pair.v.rep)
    eff = _effective_rank_check(pair.rank, cols)
    Pv = _reduced_polytope(pair.v, cols)
    Pw = _reduced_polytope(pair.w, cols)
    if not lattice.contains(Pw, Pv):
        lam = destabilizer(pair)
        return Verdict(
            status="unstable",
            witness=lam,
            certificate=(
                f"weight polytope violation: N(v) not inside N(w); "
                f"separating cocharacter {list(lam.coords)} verified by weight comparison"
            ),
        )
    if eff == 0:
        return Verdict(
            status="semistable-not-stable",
            witness=None,
            certificate="trivial effective torus: only the trivial cocharacter remains",
        )
    violation = lattice.strict_dominance_violation(Pw, Pv)
    if violation is None:
        ncones = len(Pw.vertices) * len(Pv.vertices)
        return Verdict(
            status="stable",
            witness=None,
            certificate=(
                f"strict support gap verified on all {ncones} refined normal-fan cones "
                f"({len(Pw.vertices)}x{len(Pv.vertices)} vertex pairs, trivial cocharacter excluded)"
            ),
        )
    lifted = _lift_direction(violation, cols)
    return Verdict(
        status="semistable-not-stable",
        witness=None,
        certificate=f"support equality along the fan ray u={list(lifted)}",
    )


def pair_semistable_torus(pair: Pair) -> Verdict:
    """Exact verdict over the fixed torus: N(v) inside N(w) iff semistable."""
    return _torus_verdict(pair)


def pair_stable_torus(pair: Pair) -> Verdict:
    """Exact strict verdict over the fixed torus (trivial cocharacter excluded)."""
    return _torus_verdict(pair)


def k_stable_torus(pair: Pair, deg_v: int, n_simplex: WeightPolytope) -> Verdict:
    """Exact K-criterion over the fixed torus.

    For every nonzero direction u: deg_v * min_{N(I)} u < min_{N(v)} u must
    force min_{N(w)} u < min_{N(v)} u. Checked cone-by-cone on the common
    refinement of the three normal fans with an exact LP per cone, so cone
    interiors are covered, not just extreme rays.
    """
    cols = _reduction_columns(pair.v.rep)
    _effective_rank_check(pair.rank, cols)
    Pv = _reduced_polytope(pair.v, cols)
    Pw = _reduced_polytope(pair.w, cols)
    Ps = lattice.convex_hull(_reduce_points([tuple(g) for g in n_simplex.generators], cols))
    violation = lattice.k_implication_violation(Pv, Pw, Ps, deg_v)
    if violation is None:
        ncones = len(Pv.vertices) * len(Pw.vertices) * len(Ps.vertices)
        return Verdict(
            status="stable",
            witness=None,
            certificate=f"K-criterion implication holds on all {ncones} refined cones",
        )
    lam = Cocharacter(_lift_direction(violation, cols))
    wv = weight(lam, pair.v)
    ww = weight(lam, pair.w)
    wi = min(sum(a * b for a, b in zip(violation, s)) for s in Ps.generators)
    assert deg_v * wi < wv and not (ww < wv)
    return Verdict(
        status="unstable",
        witness=lam,
        certificate=(
            f"K-criterion violated at lambda={list(lam.coords)}: "
            f"deg(V)*w(I)={deg_v * wi} < w(v)={wv} but w(w)={ww} >= w(v)"
        ),
    )


# ---------------------------------------------------------------------------
# Sampled full-group verdicts


def _sample_verdict(pair: Pair, idx: int, seed: int, group_dim: int):
    rng = random.Random((seed, idx))
    if idx == 0:
        k = rep.identity_matrix(group_dim)
    else:
        k = rep.random_unimodular(group_dim, rng, steps=4 + idx % 5)
    cv = rep.group_act(k, pair.v)
    cw = rep.group_act(k, pair.w)
    conj = Pair(cv, cw)
    lam = destabilizer(conj)
    if lam is None:
        return None
    assert weight(lam, cw) > weight(lam, cv)
    return lam, k


def group_verdict_sampled(pair: Pair, samples: int, seed: int, workers: int = 1) -> Verdict:
    """Random conjugation search for instabilities beyond the fixed torus.

    Conjugators are random unimodular rational matrices so all supports stay
    exact. A violation reports the diagonal witness for the conjugated pair
    together with the conjugator; absence of violations is reported as
    `unknown-sampled`, never as a stability claim. Results are merged
    first-violation-wins by sample index, so the outcome is independent of
    scheduling.
    """
    dims = {v.rep.group_dim for v in (pair.v, pair.w) if v.rep.group_dim is not None}
    if not dims:
        raise ValueError("neither representation supports a group action")
    if len(dims) != 1:
        raise ValueError("pair members act under groups of different size")
    group_dim = dims.pop()

    results: dict[int, Optional[tuple]] = {}
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            futs = {idx: pool.submit(_sample_verdict, pair, idx, seed, group_dim) for idx in range(samples)}
            for idx, fut in futs.items():
                results[idx] = fut.result()
    else:
        for idx in range(samples):
            results[idx] = _sample_verdict(pair, idx, seed, group_dim)

    for idx in sorted(results):
        hit = results[idx]
        if hit is not None:
            lam, k = hit
            rows = [[lattice.frac_str(x) for x in row] for row in k]
            return Verdict(
                status="unstable",
                witness=lam,
                certificate=(
                    f"violation at sample {idx}: conjugator k={rows}; the destabilizing "
                    f"one-parameter subgroup of the original pair is k^-1 lambda k"
                ),
            )
    return Verdict(
        status="unknown-sampled",
        witness=None,
        certificate=f"no violation across {samples} unimodular conjugations (seed={seed})",
    )


# ---------------------------------------------------------------------------
# deg(V) and the identity simplex


def identity_simplex(vec_rep) -> WeightPolytope:
    """N(I): the weight polytope of the identity matrix in the matching gl.

    Returned in the same torus coordinates the representation uses (rank-1
    interval for the sl2 convention, the standard simplex for SL(n) families).
    """
    kind = vec_rep.meta.get("kind")
    if kind == "sym-sl2":
        return lattice.convex_hull([(-1,), (1,)])
    if vec_rep.modulo:
        n = vec_rep.rank
        return lattice.convex_hull(
            [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        )
    raise ValueError(f"no identity simplex convention for family {vec_rep.family}")


def deg_of_rep(vec_rep) -> int:
    """deg(V): the least k with every weight polytope of V inside k*N(I)."""
    cols = _reduction_columns(vec_rep)
    full = lattice.convex_hull(_reduce_points(vec_rep.weights.values(), cols))
    simplex = lattice.convex_hull(
        _reduce_points([tuple(g) for g in identity_simplex(vec_rep).generators], cols)
    )
    return lattice.min_scale_containment(full, simplex)
