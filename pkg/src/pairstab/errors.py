"""Shared exception types."""

from __future__ import annotations


class RankMismatchError(ValueError):
    """Lattice objects of different torus ranks were combined."""


class UnsupportedRankError(ValueError):
    """Exact fan-refinement decisions are capped at rank 4."""


class NoFiniteScaleError(ValueError):
    """No positive integer scaling of the base polytope contains the target."""


class ConsistencyError(RuntimeError):
    """Two supposedly equivalent computations disagreed; this is a hard failure."""


class RequiresFactoredInputError(ValueError):
    """A binary form did not factor into rational linear pieces."""
