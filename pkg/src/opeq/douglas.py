"""The one-sided equation A X = C: reduced solution and majorization factor.

Solvability is equivalent to the range inclusion R(C) subset-of R(A), and a
solution always majorizes: C C* <= lambda A A* with lambda the squared
spectral norm of the reduced solution.  The converse implication is not
true for general Hilbert modules and is asserted nowhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatch, HypothesisViolated, RangeNotContained
from .kernel import DEFAULT_TOL, ToleranceConfig, as_matrix, dagger, fro, pinv, psd_sqrt, spectral_norm
from .projections import RangeDecision, projection_quad, range_equal, range_inclusion

__all__ = [
    "ReducedSolutionReport",
    "reduced_solution",
    "douglas_factor",
    "solve_scaled_equality",
    "polar_range_check",
]


@dataclass(frozen=True)
class ReducedSolutionReport:
    """Reduced solution D of A X = C with its certificate.

    ``residual``           relative Frobenius norm of A D - C
    ``reduced_certificate`` ||D - P_{A*} D||_F, zero when R(D) lies in the
                            orthogonal complement of the kernel of A
    ``lambda_factor``      ||D||_2^2, the least lambda with C C* <= lambda A A*
    """

    d: np.ndarray
    residual: float
    reduced_certificate: float
    lambda_factor: float


def reduced_solution(a, c, tol: ToleranceConfig = DEFAULT_TOL) -> ReducedSolutionReport:
    """Solve A X = C by the reduced (minimum-norm) solution D = pinv(A) C.

    Raises :class:`RangeNotContained` when R(C) is not inside R(A), i.e.
    when the equation has no solution.
    """
    a = as_matrix(a)
    c = as_matrix(c)
    if a.shape[0] != c.shape[0]:
        raise DimensionMismatch(f"row counts differ: A is {a.shape}, C is {c.shape}")
    inclusion = range_inclusion(c, a, tol)
    if not inclusion.holds:
        raise RangeNotContained(
            f"R(C) is not contained in R(A): relative residual {inclusion.residual:.3e}",
            decision=inclusion,
        )
    d = pinv(a, tol) @ c
    norm_c = fro(c)
    residual = fro(a @ d - c) / norm_c if norm_c else 0.0
    p_astar = projection_quad(a, tol).p_astar
    return ReducedSolutionReport(
        d=d,
        residual=residual,
        reduced_certificate=fro(d - p_astar @ d),
        lambda_factor=spectral_norm(d) ** 2,
    )


def douglas_factor(a, c, tol: ToleranceConfig = DEFAULT_TOL):
    """Least lambda with C C* <= lambda A A*, or None when A X = C is unsolvable.

    The factor is ||pinv(A) C||_2^2; the PSD certificate
    min-eig(lambda (1 + 1e-8) A A* - C C*) >= -1e-8 * ||A A*||_2 is checked
    before returning.
    """
    a = as_matrix(a)
    c = as_matrix(c)
    if a.shape[0] != c.shape[0]:
        raise DimensionMismatch(f"row counts differ: A is {a.shape}, C is {c.shape}")
    if not range_inclusion(c, a, tol).holds:
        return None
    lam = spectral_norm(pinv(a, tol) @ c) ** 2
    aa = a @ dagger(a)
    cc = c @ dagger(c)
    gap = float(np.linalg.eigvalsh(lam * (1.0 + 1e-8) * aa - cc)[0])
    scale = spectral_norm(aa)
    if gap < -1e-8 * max(scale, 1e-300):
        raise RuntimeError(
            f"majorization certificate failed: min eigenvalue {gap:.3e} at lambda={lam:.6e}"
        )
    return lam


def solve_scaled_equality(a, c, lambda_in: float,
                          tol: ToleranceConfig = DEFAULT_TOL) -> ReducedSolutionReport:
    """Solve A X = C under the verified hypothesis C C* = lambda_in A A*.

    The hypothesis forces R(A) = R(C), which is asserted before the reduced
    solution is computed; :class:`HypothesisViolated` is raised when the
    scaled equality fails the Frobenius check.
    """
    a = as_matrix(a)
    c = as_matrix(c)
    if a.shape[0] != c.shape[0]:
        raise DimensionMismatch(f"row counts differ: A is {a.shape}, C is {c.shape}")
    if not lambda_in > 0.0:
        raise HypothesisViolated(f"lambda must be positive, got {lambda_in!r}")
    aa = a @ dagger(a)
    cc = c @ dagger(c)
    defect = fro(cc - lambda_in * aa)
    bound = tol.residual_rel * fro(aa) * lambda_in
    if defect > bound:
        raise HypothesisViolated(
            f"C C* != lambda A A*: defect {defect:.3e} exceeds bound {bound:.3e}"
        )
    equal = range_equal(a, c, tol)
    if not equal.holds:
        raise RuntimeError(
            "tolerance anomaly: scaled equality holds but range equality failed "
            f"(residual {equal.residual:.3e})"
        )
    return reduced_solution(a, c, tol)


def polar_range_check(t, tol: ToleranceConfig = DEFAULT_TOL) -> RangeDecision:
    """Check R(T) = R(|T*|) with |T*| the PSD square root of T T*.

    This equality is a theorem for every operator, so the decision doubles
    as a self-test oracle for the projection machinery.
    """
    t = as_matrix(t)
    mod = psd_sqrt(t @ dagger(t))
    return range_equal(t, mod, tol)
