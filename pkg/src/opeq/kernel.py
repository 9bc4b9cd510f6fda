"""Dense complex matrix primitives: SVD, Moore-Penrose inverse, PSD square root.

Operators are plain 2-D ``numpy`` arrays with complex128 entries; every
rank and range decision made elsewhere in the package descends from the
single cutoff rule defined here (see :class:`ToleranceConfig`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import EmptyMatrix, NotPSD

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOL",
    "SvdResult",
    "as_matrix",
    "svd",
    "rank_cutoff",
    "pinv",
    "psd_sqrt",
    "fro",
    "spectral_norm",
    "dagger",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """The two tolerance knobs governing every numerical decision.

    ``rank_rel``: a singular value sigma counts as nonzero only when
    sigma > sigma_max * rank_rel * max(rows, cols).

    ``residual_rel``: relative Frobenius residual below which an equation
    or a range inclusion is accepted.
    """

    rank_rel: float = 1e-10
    residual_rel: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel", "residual_rel"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie strictly inside (0, 1), got {value!r}")


DEFAULT_TOL = ToleranceConfig()


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a 2-D complex128 array, rejecting non-finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if m.size and not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return m


def dagger(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(m).conj().T


def fro(m) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(as_matrix(m)))


def spectral_norm(m) -> float:
    """Largest singular value; 0.0 for empty or all-zero input."""
    m = as_matrix(m)
    if m.size == 0 or not m.any():
        return 0.0
    return float(np.linalg.norm(m, 2))


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD ``m = u @ diag(singular_values) @ v.conj().T``.

    ``u`` and ``v`` have orthonormal columns; singular values are real,
    nonnegative and descending.
    """

    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray


def svd(m) -> SvdResult:
    m = as_matrix(m)
    if m.size == 0:
        raise EmptyMatrix(f"cannot factor an empty matrix of shape {m.shape}")
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    return SvdResult(u=u, singular_values=s, v=vh.conj().T)


def rank_cutoff(singular_values, shape, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Cutoff below which singular values are treated as zero."""
    if len(singular_values) == 0:
        return 0.0
    return float(singular_values[0]) * tol.rank_rel * max(shape)


def pinv(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse via truncated SVD.

    The zero matrix maps to the transpose-shaped zero matrix, so the
    projection formulas built on top never need a special case.
    """
    m = as_matrix(m)
    if m.size == 0 or not m.any():
        return np.zeros((m.shape[1], m.shape[0]), dtype=np.complex128)
    f = svd(m)
    keep = f.singular_values > rank_cutoff(f.singular_values, m.shape, tol)
    u = f.u[:, keep]
    s = f.singular_values[keep]
    v = f.v[:, keep]
    return (v / s) @ u.conj().T


def psd_sqrt(m, scale: float | None = None) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix.

    Eigenvalue dust in (-1e-10 * ||m||_2, 1e-12 * ||m||_2) is clamped to
    zero; anything more negative raises :class:`NotPSD`.  Products such as
    A X A* cancel to zero with roundoff proportional to the factors rather
    than to the product, so callers forming one may pass the factor
    magnitude as ``scale`` to widen the dust thresholds accordingly.
    """
    m = as_matrix(m)
    if m.size == 0:
        raise EmptyMatrix("cannot take the square root of an empty matrix")
    if m.shape[0] != m.shape[1]:
        raise NotPSD(f"matrix of shape {m.shape} is not square")
    defect = float(np.linalg.norm(m - m.conj().T))
    if defect > 1e-10 * max(fro(m), 1.0):
        raise NotPSD(f"matrix is not Hermitian (defect {defect:.3e})")
    w, q = np.linalg.eigh(m)
    norm2 = max(abs(w[0]), abs(w[-1]))
    if scale is not None:
        norm2 = max(norm2, float(scale))
    if w[0] < -1e-10 * norm2:
        raise NotPSD(f"minimum eigenvalue {w[0]:.3e} below -1e-10 * ||m||")
    # Positive dust is clamped as well: the square root turns eigenvalues
    # of size eps into sqrt(eps), which would fake a nonzero range where a
    # product cancelled to zero.  The default cut sits well below any
    # meaningful eigenvalue but above eigh roundoff.
    cut = 1e-10 * norm2 if scale is not None else 1e-12 * norm2
    w = np.where(w > cut, w, 0.0)
    root = (q * np.sqrt(w)) @ q.conj().T
    return (root + root.conj().T) / 2.0
