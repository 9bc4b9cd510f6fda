"""Range projections of an operator and tolerance-based range decisions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatch
from .kernel import DEFAULT_TOL, ToleranceConfig, as_matrix, fro, rank_cutoff, svd

__all__ = [
    "ProjectionQuad",
    "RangeDecision",
    "projection_quad",
    "numerical_rank",
    "range_inclusion",
    "range_equal",
]


@dataclass(frozen=True)
class ProjectionQuad:
    """The four canonical projections attached to one operator ``a``.

    ``p_a`` projects onto R(a) (codomain side), ``p_astar`` onto R(a*)
    (domain side); ``n_a = I - p_astar`` and ``n_astar = I - p_a`` project
    onto the kernel and cokernel.  Built from SVD factors so each one is a
    Hermitian idempotent up to one rounding.
    """

    p_a: np.ndarray
    p_astar: np.ndarray
    n_a: np.ndarray
    n_astar: np.ndarray


def _hermitianize(p: np.ndarray) -> np.ndarray:
    return (p + p.conj().T) / 2.0


def projection_quad(a, tol: ToleranceConfig = DEFAULT_TOL) -> ProjectionQuad:
    a = as_matrix(a)
    rows, cols = a.shape
    if a.size == 0 or not a.any():
        p_a = np.zeros((rows, rows), dtype=np.complex128)
        p_astar = np.zeros((cols, cols), dtype=np.complex128)
    else:
        f = svd(a)
        keep = f.singular_values > rank_cutoff(f.singular_values, a.shape, tol)
        u = f.u[:, keep]
        v = f.v[:, keep]
        p_a = _hermitianize(u @ u.conj().T)
        p_astar = _hermitianize(v @ v.conj().T)
    return ProjectionQuad(
        p_a=p_a,
        p_astar=p_astar,
        n_a=np.eye(cols, dtype=np.complex128) - p_astar,
        n_astar=np.eye(rows, dtype=np.complex128) - p_a,
    )


def numerical_rank(a, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    a = as_matrix(a)
    if a.size == 0 or not a.any():
        return 0
    s = svd(a).singular_values
    return int(np.count_nonzero(s > rank_cutoff(s, a.shape, tol)))


@dataclass(frozen=True)
class RangeDecision:
    """Certificate for a claim of the form R(C) subset-of R(A).

    ``residual`` is the relative Frobenius norm of the part of C outside
    the claimed range; ``rank_data`` carries the corroborating ranks.
    """

    holds: bool
    residual: float
    rank_data: dict = field(default_factory=dict)


def range_inclusion(c, a, tol: ToleranceConfig = DEFAULT_TOL,
                    scale: float | None = None) -> RangeDecision:
    """Decide R(c) subset-of R(a) by projection residual.

    The decision is residual-based; the rank comparison of [a c] against a
    is computed only as corroborating data.  A zero c is included in any
    range; callers testing a computed product (say C N_B, which can cancel
    to roundoff dust whose self-relative residual is meaningless) pass the
    factor magnitude as ``scale`` so that ||c|| <= rank_rel * scale also
    counts as zero.
    """
    c = as_matrix(c)
    a = as_matrix(a)
    if c.shape[0] != a.shape[0]:
        raise DimensionMismatch(
            f"row counts differ: C is {c.shape}, A is {a.shape}"
        )
    rank_a = numerical_rank(a, tol)
    rank_data = {
        "rank_a": rank_a,
        "rank_a_aug": numerical_rank(np.hstack([a, c]), tol) if c.size else rank_a,
    }
    norm_c = fro(c)
    if norm_c == 0.0 or (scale is not None and norm_c <= tol.rank_rel * scale):
        return RangeDecision(holds=True, residual=0.0, rank_data=rank_data)
    p_a = projection_quad(a, tol).p_a
    residual = fro(c - p_a @ c) / norm_c
    return RangeDecision(holds=residual <= tol.residual_rel, residual=residual, rank_data=rank_data)


def range_equal(a, b, tol: ToleranceConfig = DEFAULT_TOL) -> RangeDecision:
    """Decide R(a) = R(b) by inclusion both ways."""
    fwd = range_inclusion(b, a, tol)
    bwd = range_inclusion(a, b, tol)
    rank_data = {
        "rank_a": fwd.rank_data["rank_a"],
        "rank_b": bwd.rank_data["rank_a"],
        "rank_a_aug_b": fwd.rank_data["rank_a_aug"],
    }
    return RangeDecision(
        holds=fwd.holds and bwd.holds,
        residual=max(fwd.residual, bwd.residual),
        rank_data=rank_data,
    )
