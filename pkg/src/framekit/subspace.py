"""Closed subspaces stored as orthonormal column bases."""

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatch, EmptyInput
from .numkit import DEFAULT_TOL, adjoint, as_matrix, opnorm, range_basis, range_contains


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of an ``ambient_dim``-dimensional space.

    ``basis`` has orthonormal columns; a basis with zero columns is the zero
    subspace. Use :meth:`span` to build one from an arbitrary spanning set.
    """

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis)
        if basis.ndim != 2 or basis.shape[0] != self.ambient_dim:
            raise DimensionMismatch(
                f"basis must have shape ({self.ambient_dim}, k), got {basis.shape}"
            )
        if basis.shape[1] > self.ambient_dim:
            raise DimensionMismatch("basis has more columns than the ambient dimension")
        basis = as_matrix(basis, "basis")
        gram = adjoint(basis) @ basis
        if opnorm(gram - np.eye(basis.shape[1])) > DEFAULT_TOL.eq_tol:
            raise ValueError("basis columns are not orthonormal")
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def span(cls, vectors, tol=DEFAULT_TOL, ambient_dim=None):
        """Subspace spanned by the columns of ``vectors``."""
        vectors = np.asarray(vectors)
        if vectors.ndim == 1:
            vectors = vectors[:, None]
        n = vectors.shape[0] if ambient_dim is None else ambient_dim
        if vectors.shape[1] == 0:
            return cls.zero(n, complex=np.iscomplexobj(vectors))
        return cls(n, range_basis(vectors, tol))

    @classmethod
    def zero(cls, ambient_dim, complex=False):
        dtype = np.complex128 if complex else np.float64
        return cls(ambient_dim, np.zeros((ambient_dim, 0), dtype=dtype))

    @classmethod
    def full(cls, ambient_dim, complex=False):
        dtype = np.complex128 if complex else np.float64
        return cls(ambient_dim, np.eye(ambient_dim, dtype=dtype))

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def projection(self):
        return project(self)

    def contains(self, vectors, tol=DEFAULT_TOL):
        """True iff every column of ``vectors`` lies in this subspace."""
        vectors = as_matrix(vectors)
        if vectors.shape[0] != self.ambient_dim:
            raise DimensionMismatch("vector dimension differs from ambient_dim")
        residual = vectors - project(self) @ vectors
        return opnorm(residual) <= tol.eq_tol * max(1.0, opnorm(vectors))

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


def _check_same_ambient(U, V):
    if U.ambient_dim != V.ambient_dim:
        raise DimensionMismatch(
            f"ambient dimensions differ: {U.ambient_dim} vs {V.ambient_dim}"
        )


def project(W):
    """Orthogonal projection matrix ``basis @ basis^*`` onto ``W``."""
    return W.basis @ adjoint(W.basis)


def is_projection(P, tol=DEFAULT_TOL):
    P = np.asarray(P)
    return (
        opnorm(P @ P - P) <= tol.eq_tol * max(1.0, opnorm(P))
        and opnorm(P - adjoint(P)) <= tol.eq_tol * max(1.0, opnorm(P))
    )


def commute(U, V, tol=DEFAULT_TOL):
    """True iff the orthogonal projections onto ``U`` and ``V`` commute."""
    _check_same_ambient(U, V)
    PU, PV = project(U), project(V)
    return opnorm(PU @ PV - PV @ PU) <= tol.eq_tol


def intersect(U, V, tol=DEFAULT_TOL):
    """Intersection ``U ∩ V`` via principal angles.

    Directions whose principal-angle cosine is within ``rank_tol`` of one are
    shared by both subspaces.
    """
    _check_same_ambient(U, V)
    complex_ = np.iscomplexobj(U.basis) or np.iscomplexobj(V.basis)
    if U.dim == 0 or V.dim == 0:
        return Subspace.zero(U.ambient_dim, complex=complex_)
    # Singular values of U^* V are those of P_U P_V (the cosines).
    Y, cosines, _ = np.linalg.svd(adjoint(U.basis) @ V.basis)
    k = int(np.count_nonzero(cosines >= 1.0 - tol.rank_tol))
    if k == 0:
        return Subspace.zero(U.ambient_dim, complex=complex_)
    # Re-orthonormalize to remove drift from the product.
    Q, _ = np.linalg.qr(U.basis @ Y[:, :k])
    return Subspace(U.ambient_dim, Q)


def subspace_equal(U, V, tol=DEFAULT_TOL):
    """Equality as mutual containment (bases are not unique)."""
    _check_same_ambient(U, V)
    if U.dim != V.dim:
        return False
    if U.dim == 0:
        return True
    return range_contains(U.basis, V.basis, tol) and range_contains(V.basis, U.basis, tol)


def block_embeddings(dims):
    """Isometries embedding each summand space into the external direct sum."""
    total = int(sum(dims))
    maps = []
    offset = 0
    for d in dims:
        E = np.zeros((total, d))
        E[offset : offset + d, :] = np.eye(d)
        maps.append(E)
        offset += d
    return maps


def direct_sum(parts):
    """External direct sum of subspaces living in (possibly) different spaces."""
    parts = list(parts)
    if not parts:
        raise EmptyInput("direct_sum needs at least one subspace")
    complex_ = any(np.iscomplexobj(p.basis) for p in parts)
    dtype = np.complex128 if complex_ else np.float64
    embeds = block_embeddings([p.ambient_dim for p in parts])
    total = sum(p.ambient_dim for p in parts)
    columns = [E @ p.basis for E, p in zip(embeds, parts)]
    basis = np.hstack(columns).astype(dtype) if columns else np.zeros((total, 0), dtype)
    return Subspace(total, basis)
