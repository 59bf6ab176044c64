"""Pair energy p_{v,w} and its probes.

energy(sigma) = log ||sigma w||^2 - log ||sigma v||^2. Everything in this
module is floating point (the energies are transcendental); all exact verdicts
live in `stability`. Norms of exactly-acted vectors are computed as exact
rationals first and logged via numerator/denominator, so huge weights cannot
overflow. Profiles along one-parameter subgroups use the support data directly
through a log-sum-exp, which stays stable for |log t| in the hundreds.

Descent toward the infimum follows products of elementary unipotent and
diagonal one-parameter factors with step-halving sweeps, restarted from
Haar-ish unitaries (QR of Gaussian matrices); when the pair has a torus
destabilizer the walk down that ray is included, so certified-unstable pairs
drive the estimate below any floor.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import rep as rep_mod
from . import stability
from .lattice import Cocharacter
from .rep import PowerVector, Vector, WeightedVector, log_fraction
from .stability import Pair


# ---------------------------------------------------------------------------
# Exact energies


def _is_exact_matrix(sigma) -> bool:
    try:
        for row in sigma:
            for x in row:
                if isinstance(x, float) or isinstance(x, complex):
                    return False
                Fraction(x)
        return True
    except (TypeError, ValueError):
        return False


def _log_norm_sq_exact(vec: Vector, sigma) -> float:
    if isinstance(vec, PowerVector):
        if vec.kind == "tensor":
            return vec.power * _log_norm_sq_exact(vec.base, sigma)
        vec = rep_mod.expand_poly_power(vec)
    moved = rep_mod.group_act(sigma, vec)
    return log_fraction(moved.norm_sq())


def energy(pair: Pair, sigma) -> float:
    """log ||sigma w||^2 - log ||sigma v||^2 for an invertible sigma."""
    if _is_exact_matrix(sigma):
        return _log_norm_sq_exact(pair.w, sigma) - _log_norm_sq_exact(pair.v, sigma)
    ctx = NumericPair(pair)
    val = ctx.energy(np.asarray(sigma, dtype=complex))
    if val is None:
        raise ValueError("energy is not finite for this matrix")
    return val


def fs_distance(pair: Pair, sigma) -> float:
    """Fubini-Study distance d(sigma[v,w], sigma[v,0]) via the cosine formula."""
    if _is_exact_matrix(sigma):
        lv = _log_norm_sq_exact(pair.v, sigma)
        lw = _log_norm_sq_exact(pair.w, sigma)
    else:
        ctx = NumericPair(pair)
        sig = np.asarray(sigma, dtype=complex)
        lv, lw = ctx.log_norm_sq_v(sig), ctx.log_norm_sq_w(sig)
        if lv is None or lw is None:
            raise ValueError("norms are not finite for this matrix")
    # cos^2 = ||sv||^2 / (||sv||^2 + ||sw||^2), evaluated in log space
    log_cos_sq = lv - np.logaddexp(lv, lw)
    cos = math.exp(0.5 * log_cos_sq)
    return math.acos(min(1.0, cos))


def fs_point_distance(v1: WeightedVector, w1, v2: WeightedVector, w2) -> float:
    """Distance between [v1, w1] and [v2, w2] in P(V + W); w's may be None."""
    ip = rep_mod.inner_product(v1, v2)
    if w1 is not None and w2 is not None:
        ip = ip + rep_mod.inner_product(w1, w2)
    n1 = v1.norm_sq() + (w1.norm_sq() if w1 is not None else Fraction(0))
    n2 = v2.norm_sq() + (w2.norm_sq() if w2 is not None else Fraction(0))
    cos_sq = Fraction(ip.abs2(), n1 * n2)
    return math.acos(min(1.0, math.sqrt(float(cos_sq))))


# ---------------------------------------------------------------------------
# Ray profiles


def _ray_terms(vec: Vector, lam: Cocharacter):
    """Support data for log||lambda(t) vec||^2: (power, [(pairing, log nsq)])."""
    if isinstance(vec, PowerVector) and vec.kind == "tensor":
        power, terms = _ray_terms(vec.base, lam)
        return vec.power * power, terms
    if isinstance(vec, PowerVector):
        vec = rep_mod.expand_poly_power(vec)
    terms = []
    for wt, nsq in vec.weight_norms().items():
        pairing = sum(a * b for a, b in zip(lam.coords, wt))
        terms.append((pairing, log_fraction(nsq)))
    return 1, terms


def _ray_log_nsq(power_terms, L: float) -> float:
    power, terms = power_terms
    vals = [2.0 * p * L + ln for p, ln in terms]
    m = max(vals)
    return power * (m + math.log(sum(math.exp(v - m) for v in vals)))


def ray_profile(pair: Pair, lam: Cocharacter, t_grid: Sequence[float]):
    """Energies along sigma = lambda(t); exact support exponents, stable logs."""
    if lam.is_trivial:
        raise ValueError("the trivial one-parameter subgroup has no ray profile")
    stability._check_cocharacter(lam, pair.v)
    tv = _ray_terms(pair.v, lam)
    tw = _ray_terms(pair.w, lam)
    out = []
    for t in t_grid:
        t = float(t)
        if t <= 0:
            raise ValueError("grid points must be positive")
        L = math.log(t)
        out.append((t, _ray_log_nsq(tw, L) - _ray_log_nsq(tv, L)))
    return out


def ray_slope(pair: Pair, lam: Cocharacter, l0: float = -45.0, l1: float = -20.0) -> float:
    """Fitted slope of the energy against log t deep in the t -> 0 tail."""
    prof = ray_profile(pair, lam, [math.exp(l0), math.exp(l1)])
    return (prof[1][1] - prof[0][1]) / (l1 - l0)


# ---------------------------------------------------------------------------
# Numeric evaluation


def _numeric_subst_matrix(spec, images, nvars):
    varnames = spec.meta["vars"]
    index = {label: k for k, label in enumerate(spec.basis)}
    dim = len(spec.basis)
    M = np.zeros((dim, dim), dtype=complex)
    for col, label in enumerate(spec.basis):
        exps = rep_mod._label_exponents(label, varnames)
        term = {tuple(0 for _ in range(nvars)): 1.0 + 0j}
        for idx, e in enumerate(exps):
            for _ in range(e):
                nxt: dict = {}
                for key, c in term.items():
                    for j, fc in images[idx].items():
                        k2 = tuple(x + (1 if t == j else 0) for t, x in enumerate(key))
                        nxt[k2] = nxt.get(k2, 0.0) + c * fc
                term = nxt
        for exps2, c in term.items():
            M[index[rep_mod._monomial_label(varnames, exps2)], col] += c
    return M


def action_matrix(spec, sigma: np.ndarray) -> np.ndarray:
    """Matrix of the family action on coefficient vectors, complex floats."""
    kind = spec.meta.get("kind")
    if kind == "trivial":
        return np.eye(1, dtype=complex)
    n = spec.group_dim
    if kind == "matrix-space":
        dim = len(spec.basis)
        index = {label: k for k, label in enumerate(spec.basis)}
        M = np.zeros((dim, dim), dtype=complex)
        for col, label in enumerate(spec.basis):
            _, i, j = label.split("_")
            i, j = int(i), int(j)
            for k in range(n):
                M[index[f"e_{k}_{j}"], col] += sigma[k, i]
        return M
    if kind in ("sym-sl2", "poly-space"):
        inv = np.linalg.inv(sigma)
        images = [{j: inv[i, j] for j in range(n) if inv[i, j] != 0} for i in range(n)]
        return _numeric_subst_matrix(spec, images, n)
    if kind == "chow-space":
        rows, cols = spec.meta["rows"], spec.meta["cols"]
        images = []
        for i in range(rows):
            for j in range(cols):
                images.append({i * cols + k: sigma[k, j] for k in range(cols)})
        return _numeric_subst_matrix(spec, images, rows * cols)
    if kind == "dual-space":
        images = [{k: sigma[k, j] for k in range(n)} for j in range(n)]
        return _numeric_subst_matrix(spec, images, n)
    raise ValueError(f"family {spec.family} has no group action")


def coefficient_array(vec: WeightedVector) -> np.ndarray:
    arr = np.zeros(len(vec.rep.basis), dtype=complex)
    index = {label: k for k, label in enumerate(vec.rep.basis)}
    for label, c in vec.coeffs.items():
        arr[index[label]] = c.to_complex()
    return arr


class NumericPair:
    """Float-path energy evaluation for descent and sampling loops."""

    def __init__(self, pair: Pair):
        self.pair = pair
        self.sides = []
        for vec in (pair.v, pair.w):
            power = 1
            if isinstance(vec, PowerVector):
                if vec.kind == "poly":
                    vec = rep_mod.expand_poly_power(vec)
                else:
                    power, vec = vec.power, vec.base
            self.sides.append((vec.rep, coefficient_array(vec), power))
        dims = {s[0].group_dim for s in self.sides if s[0].group_dim is not None}
        if not dims:
            raise ValueError("neither representation supports a group action")
        if len(dims) != 1:
            raise ValueError("pair members act under groups of different size")
        self.group_dim = dims.pop()

    def _log_norm_sq(self, side, sigma) -> Optional[float]:
        spec, arr, power = side
        if spec.meta.get("kind") == "trivial":
            moved = arr
        else:
            moved = action_matrix(spec, sigma) @ arr
        nsq = float(np.vdot(moved, moved).real)
        if not math.isfinite(nsq) or nsq <= 0.0:
            return None
        return power * math.log(nsq)

    def log_norm_sq_v(self, sigma) -> Optional[float]:
        return self._log_norm_sq(self.sides[0], sigma)

    def log_norm_sq_w(self, sigma) -> Optional[float]:
        return self._log_norm_sq(self.sides[1], sigma)

    def energy(self, sigma) -> Optional[float]:
        lv = self.log_norm_sq_v(sigma)
        lw = self.log_norm_sq_w(sigma)
        if lv is None or lw is None:
            return None
        return lw - lv


def _descent_moves(n: int, s: float):
    moves = []
    for k in range(n - 1):
        d = np.eye(n, dtype=complex)
        d[k, k] = math.exp(s)
        d[k + 1, k + 1] = math.exp(-s)
        moves.append(d)
    for i in range(n):
        for j in range(n):
            if i != j:
                u = np.eye(n, dtype=complex)
                u[i, j] = s
                moves.append(u)
    return moves


def _random_unitary(n: int, rng) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    q = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
    det = np.linalg.det(q)
    return q / det ** (1.0 / n)


@dataclass(frozen=True)
class InfimumEstimate:
    value: float
    diverged: bool
    trace: tuple[float, ...]


def infimum_estimate(
    pair: Pair,
    iterations: int = 60,
    restarts: int = 4,
    seed: int = 0,
    divergence_floor: float = -1e4,
) -> InfimumEstimate:
    """Multi-start descent upper bound for inf_G p_{v,w}; deterministic per seed."""
    ctx = NumericPair(pair)
    n = ctx.group_dim
    trace: list[float] = []
    best = math.inf

    def record(val: float):
        nonlocal best
        if val < best:
            best = val
        trace.append(best)

    start = ctx.energy(np.eye(n, dtype=complex))
    if start is not None:
        record(start)

    lam = None
    try:
        lam = stability.destabilizer(pair)
    except (ValueError, NotImplementedError):
        lam = None
    if lam is not None:
        tv = _ray_terms(pair.v, lam)
        tw = _ray_terms(pair.w, lam)
        L = 0.0
        for _ in range(4000):
            L -= 1.0
            record(_ray_log_nsq(tw, L) - _ray_log_nsq(tv, L))
            if best < divergence_floor - 100.0:
                break

    for ridx in range(restarts):
        rng = np.random.default_rng([seed, ridx])
        sigma = np.eye(n, dtype=complex) if ridx == 0 else _random_unitary(n, rng)
        cur = ctx.energy(sigma)
        if cur is None:
            continue
        record(cur)
        step = 1.0
        for _ in range(iterations):
            improved = False
            for sign in (1.0, -1.0):
                for move in _descent_moves(n, sign * step):
                    cand = sigma @ move
                    val = ctx.energy(cand)
                    if val is not None and val < cur - 1e-15:
                        sigma, cur = cand, val
                        record(cur)
                        improved = True
            if best < divergence_floor - 100.0:
                break
            if not improved:
                step *= 0.5
                if step < 1e-12:
                    break
    return InfimumEstimate(value=best, diverged=best < divergence_floor, trace=tuple(trace))


# ---------------------------------------------------------------------------
# J-bound sampling


@dataclass(frozen=True)
class JBoundReport:
    worst: float
    records: tuple[tuple[float, float], ...]  # (||sigma||, log||sigma v|| - degV log||sigma||)


def j_bound_check(
    v: Vector, deg_v: int, samples: int = 10000, seed: int = 0, max_norm: float = 1e6
) -> JBoundReport:
    """Empirical max of log||sigma v|| - deg_v log||sigma|| over det-1 samples.

    Alternates pure diagonal escalation with randomly rotated escalation so the
    supremum is approached both near the identity and at large norm.
    """
    ctx = NumericPair(Pair(v, v))
    n = ctx.group_dim
    side = ctx.sides[0]
    records = []
    worst = -math.inf
    exponent_span = math.log10(max_norm)
    for i in range(samples):
        scale = 10.0 ** (exponent_span * i / max(1, samples - 1))
        d = np.eye(n, dtype=complex)
        d[0, 0] = scale
        d[n - 1, n - 1] = 1.0 / scale
        if i % 2 == 1:
            rng = np.random.default_rng([seed, i])
            sigma = _random_unitary(n, rng) @ d @ _random_unitary(n, rng)
        else:
            sigma = d
        lnsq = ctx._log_norm_sq(side, sigma)
        if lnsq is None:
            continue
        signorm = float(np.linalg.norm(sigma))
        value = 0.5 * lnsq - deg_v * math.log(signorm)
        worst = max(worst, value)
        records.append((signorm, value))
    return JBoundReport(worst=worst, records=tuple(records))


# ---------------------------------------------------------------------------
# Properness modulo p_{v, I^q}


@dataclass(frozen=True)
class RayRecord:
    direction: tuple[int, ...]
    conjugated: bool
    slope_pvw: int
    slope_pI: int
    slope_pvw_fit: float
    slope_pI_fit: float
    flagged: bool


@dataclass(frozen=True)
class ProbeReport:
    records: tuple[RayRecord, ...]

    @property
    def flagged(self) -> tuple[RayRecord, ...]:
        return tuple(r for r in self.records if r.flagged)


def _random_direction(vec_rep, rng) -> Cocharacter:
    n = vec_rep.rank
    while True:
        if vec_rep.modulo:
            coords = [rng.randint(-3, 3) for _ in range(n - 1)]
            coords.append(-sum(coords))
        else:
            coords = [rng.randint(-3, 3) for _ in range(n)]
        lam = Cocharacter(coords)
        if not lam.is_trivial:
            return lam


def properness_modulo_probe(
    pair: Pair, deg_v: int, q: int, rays: int = 8, seed: int = 0
) -> ProbeReport:
    """Compare p_{v,w} and p_{v,I^q} along torus rays and conjugated rays.

    A ray is flagged when p_{v,I^q} diverges (deg_v*w(I) < w(v)) while p_{v,w}
    stays bounded or sinks, which is exactly a failure of the K-criterion
    implication along that ray. Slopes are computed twice: from the exact
    weights and from a numeric fit of the profiles.
    """
    rng = random.Random(seed)
    simplex = stability.identity_simplex(pair.v.rep)
    records = []
    for ridx in range(rays):
        conjugated = ridx % 2 == 1
        lam = _random_direction(pair.v.rep, rng)
        if conjugated:
            n = pair.v.rep.group_dim or 2
            k = rep_mod.random_unimodular(n, rng, steps=4)
            probe_pair = Pair(rep_mod.group_act(k, pair.v), rep_mod.group_act(k, pair.w))
        else:
            probe_pair = pair
        wv = stability.weight(lam, probe_pair.v)
        ww = stability.weight(lam, probe_pair.w)
        wI = min(
            sum(a * b for a, b in zip(lam.coords, g)) for g in simplex.generators
        )
        slope_pvw = 2 * (ww - wv)
        slope_pI = deg_v * wI - wv
        # numeric fits from the profiles
        l0, l1 = -40.0, -20.0
        tv = _ray_terms(probe_pair.v, lam)
        tw = _ray_terms(probe_pair.w, lam)
        e0 = _ray_log_nsq(tw, l0) - _ray_log_nsq(tv, l0)
        e1 = _ray_log_nsq(tw, l1) - _ray_log_nsq(tv, l1)
        fit_pvw = (e1 - e0) / (l1 - l0)
        tI = (1, [(c, 0.0) for c in set(
            sum(a * b for a, b in zip(lam.coords, g)) for g in simplex.generators
        )])
        i0 = deg_v * 0.5 * _ray_log_nsq(tI, l0) - 0.5 * _ray_log_nsq(tv, l0)
        i1 = deg_v * 0.5 * _ray_log_nsq(tI, l1) - 0.5 * _ray_log_nsq(tv, l1)
        fit_pI = (i1 - i0) / (l1 - l0)
        flagged = slope_pI < 0 and slope_pvw >= 0
        records.append(
            RayRecord(
                direction=lam.coords,
                conjugated=conjugated,
                slope_pvw=slope_pvw,
                slope_pI=slope_pI,
                slope_pvw_fit=fit_pvw,
                slope_pI_fit=fit_pI,
                flagged=flagged,
            )
        )
    return ProbeReport(records=tuple(records))
