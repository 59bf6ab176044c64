"""Stability of pairs: exact Hilbert-Mumford style verdicts and energy probes."""

from .lattice import (
    Character,
    Cocharacter,
    WeightPolytope,
    contains,
    convex_hull,
    min_scale_containment,
    pairing,
    strictly_dominates,
    support_min,
)
from .rep import (
    GaussianRational,
    PowerVector,
    RepresentationSpec,
    WeightedVector,
    group_act,
    hermitian_norm,
    matrix_space_gl,
    polynomial_space,
    support,
    symmetric_power_sl2,
    torus_act,
    trivial_rep,
    weight_polytope,
)
from .stability import (
    Pair,
    Verdict,
    deg_of_rep,
    destabilizer,
    group_verdict_sampled,
    identity_simplex,
    k_stable_torus,
    pair_semistable_torus,
    pair_stable_torus,
    verify_weight_by_limit,
    weight,
)
from .binaryforms import BinaryForm, cross_check, ord_at, parse_form, sl2_pair_semistable
from .kempfness import (
    energy,
    fs_distance,
    infimum_estimate,
    j_bound_check,
    properness_modulo_probe,
    ray_profile,
)
from .planecurves import (
    PlaneCurve,
    chow_form,
    futaki,
    hyperdiscriminant,
    k_stability_along,
    mu,
    p_coordinates,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
