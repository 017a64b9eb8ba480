"""Dense numerical kernels shared by every other module.

Matrices are plain :class:`numpy.ndarray` objects (real or complex double
precision). Vectors are 1-d arrays. All functions are pure.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import DimensionMismatch, NonFinite, NotHermitian, NotPSD


@dataclass(frozen=True)
class Tolerances:
    """Numerical slack used across the package.

    Parameters
    ----------
    rank_tol : float
        Relative singular-value cutoff for numerical rank.
    psd_tol : float
        Allowed eigenvalue negativity when testing semidefiniteness.
    eq_tol : float
        Slack for matrix equalities.
    """

    rank_tol: float = 1e-10
    psd_tol: float = 1e-10
    eq_tol: float = 1e-9

    def __post_init__(self):
        for name in ("rank_tol", "psd_tol", "eq_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        if self.rank_tol >= 1:
            raise ValueError("rank_tol must be < 1")


DEFAULT_TOL = Tolerances()


class EigDecomp(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(M, name="matrix"):
    """Return ``M`` as a finite 2-d float or complex array."""
    M = np.asarray(M)
    if M.ndim == 1:
        M = M[:, None]
    if M.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-d, got shape {M.shape}")
    if not np.issubdtype(M.dtype, np.complexfloating):
        M = M.astype(np.float64)
    else:
        M = M.astype(np.complex128)
    if not np.all(np.isfinite(M)):
        raise NonFinite(f"{name} contains NaN or Inf entries")
    return M


def adjoint(M):
    return np.conj(M).T


def hermitian_part(M):
    """``(M + M^*) / 2``; use on differences of Hermitian matrices."""
    M = np.asarray(M)
    return (M + adjoint(M)) / 2


def opnorm(M):
    """Spectral norm; zero for empty matrices."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def is_complex(*arrays):
    return any(np.iscomplexobj(a) for a in arrays)


def _check_hermitian(M, tol):
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    scale = opnorm(M)
    if opnorm(M - adjoint(M)) > tol.eq_tol * scale:
        raise NotHermitian("matrix is not Hermitian within eq_tol")
    return (M + adjoint(M)) / 2


def sym_eig(M, tol=DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    H = _check_hermitian(M, tol)
    w, V = np.linalg.eigh(H)
    return EigDecomp(w, V)


def svd(M):
    """Thin SVD ``M = U @ diag(s) @ V^*`` with ``V`` returned (not ``V^*``)."""
    M = as_matrix(M)
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    return U, s, adjoint(Vh)


def numerical_rank(s, tol=DEFAULT_TOL):
    """Number of singular values above ``rank_tol * max(s)``."""
    s = np.asarray(s)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > tol.rank_tol * s.max()))


def range_basis(M, tol=DEFAULT_TOL):
    """Orthonormal basis of the column space of ``M`` (rank-revealed)."""
    U, s, _ = svd(M)
    return U[:, : numerical_rank(s, tol)]


def null_basis(M, tol=DEFAULT_TOL):
    """Orthonormal basis of the null space of ``M``."""
    M = as_matrix(M)
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    r = numerical_rank(s, tol)
    return adjoint(Vh)[:, r:]


def pinv(M, tol=DEFAULT_TOL):
    """Moore-Penrose pseudo-inverse with a relative singular-value cutoff."""
    U, s, V = svd(M)
    r = numerical_rank(s, tol)
    return (V[:, :r] / s[:r]) @ adjoint(U[:, :r])


def psd_min_eig(M, tol=DEFAULT_TOL):
    """Smallest eigenvalue of a Hermitian matrix."""
    return float(sym_eig(M, tol).eigenvalues[0])


def _psd_eig(M, tol):
    w, V = sym_eig(M, tol)
    top = max(float(w[-1]), 0.0) if w.size else 0.0
    if w.size and w[0] < -tol.psd_tol * max(1.0, top):
        raise NotPSD(f"matrix has eigenvalue {w[0]:.3e} below -psd_tol")
    # Eigenvalues below the rank cutoff are roundoff of an exact zero.
    w = np.where(w > tol.rank_tol * top, w, 0.0)
    return w, V


def psd_sqrt(M, tol=DEFAULT_TOL):
    """Principal square root of a positive semidefinite matrix."""
    w, V = _psd_eig(M, tol)
    return (V * np.sqrt(w)) @ adjoint(V)


def psd_pinv_sqrt(M, tol=DEFAULT_TOL):
    """Pseudo-inverse of the principal square root of a PSD matrix."""
    w, V = _psd_eig(M, tol)
    inv = np.zeros_like(w)
    pos = w > 0
    inv[pos] = 1.0 / np.sqrt(w[pos])
    return (V * inv) @ adjoint(V)


def range_contains(T, S, tol=DEFAULT_TOL):
    """True iff every column of ``S`` lies in the column span of ``T``."""
    T = as_matrix(T, "T")
    S = as_matrix(S, "S")
    if T.shape[0] != S.shape[0]:
        raise DimensionMismatch(f"row counts differ: {T.shape[0]} vs {S.shape[0]}")
    Q = range_basis(T, tol)
    residual = S - Q @ (adjoint(Q) @ S)
    return opnorm(residual) <= tol.rank_tol * max(1.0, opnorm(S))
