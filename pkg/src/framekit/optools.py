"""Range inclusion, majorization and factorization of operators, and quotients.

For operators ``S`` and ``T`` with the same codomain the three statements

1. ``R(S) ⊆ R(T)``
2. ``S S^* <= alpha T T^*`` for some ``alpha > 0``
3. ``S = T L`` for some bounded ``L``

are equivalent. :func:`douglas_check` evaluates each one by its own numerical
route so that the equivalence can be observed rather than assumed.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .exceptions import DimensionMismatch, NullSpaceViolation
from .numkit import (
    DEFAULT_TOL,
    adjoint,
    as_matrix,
    hermitian_part,
    null_basis,
    numerical_rank,
    opnorm,
    pinv,
    psd_min_eig,
    psd_pinv_sqrt,
    psd_sqrt,
    range_contains,
)


@dataclass(frozen=True)
class DouglasReport:
    range_inclusion: bool
    majorization: bool
    factorization: bool
    alpha_min: Optional[float]
    factor_L: Optional[np.ndarray]
    witness: Optional[np.ndarray] = None

    @property
    def consistent(self):
        return self.range_inclusion == self.majorization == self.factorization


def majorization_constant(S, T, tol=DEFAULT_TOL):
    """Smallest ``alpha`` with ``S S^* <= alpha T T^*`` assuming ``R(S) ⊆ R(T)``.

    Returns ``(alpha, witness)`` where ``witness`` is a unit vector attaining
    equality in the quadratic form.
    """
    G = T @ adjoint(T)
    R = psd_pinv_sqrt(G, tol)
    M = R @ S
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return 0.0, None
    witness = R @ U[:, 0]
    nrm = np.linalg.norm(witness)
    return float(s[0] ** 2), (witness / nrm if nrm > 0 else None)


def douglas_check(S, T, tol=DEFAULT_TOL):
    """Evaluate the three Douglas conditions for ``S`` against ``T``."""
    S = as_matrix(S, "S")
    T = as_matrix(T, "T")
    if S.shape[0] != T.shape[0]:
        raise DimensionMismatch(f"row counts differ: {S.shape[0]} vs {T.shape[0]}")

    inclusion = range_contains(T, S, tol)

    # Majorization: the best candidate constant either works or nothing does,
    # since any component of R(S) outside R(T) makes the form negative for all alpha.
    alpha, witness = majorization_constant(S, T, tol)
    SS = S @ adjoint(S)
    TT = T @ adjoint(T)
    gap = psd_min_eig(hermitian_part(alpha * TT - SS), tol)
    scale = max(1.0, opnorm(SS), alpha * opnorm(TT))
    majorized = gap >= -tol.psd_tol * scale

    L = pinv(T, tol) @ S
    factored = opnorm(T @ L - S) <= tol.eq_tol * max(1.0, opnorm(S))

    return DouglasReport(
        range_inclusion=inclusion,
        majorization=majorized,
        factorization=factored,
        alpha_min=alpha if inclusion else None,
        factor_L=L if inclusion else None,
        witness=witness if inclusion else None,
    )


@dataclass(frozen=True)
class QuotientOp:
    """The map ``Bx -> Ax`` on ``R(B)``.

    ``matrix`` acts on coordinates with respect to ``domain_basis`` (an
    orthonormal basis of ``R(B)``) and returns vectors in the codomain of ``A``.
    The operator is never extended off ``R(B)``.
    """

    domain_basis: np.ndarray
    matrix: np.ndarray
    op_norm: float

    def __call__(self, y):
        """Apply to a vector ``y`` assumed to lie in ``R(B)``."""
        return self.matrix @ (adjoint(self.domain_basis) @ y)

    def top_singular_pair(self):
        """Unit ``y`` in ``R(B)`` maximizing ``|T y|``, and that maximum."""
        if self.matrix.shape[1] == 0:
            return None, 0.0
        _, s, Vh = np.linalg.svd(self.matrix, full_matrices=False)
        return self.domain_basis @ np.conj(Vh[0]), float(s[0])


def quotient(A, B, tol=DEFAULT_TOL):
    """Quotient operator ``[A/B]``; requires ``N(B) ⊆ N(A)``.

    Raises
    ------
    NullSpaceViolation
        If some null vector of ``B`` is not annihilated by ``A``.
    """
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatch(f"A and B need the same domain: {A.shape} vs {B.shape}")
    U, s, Vh = np.linalg.svd(B, full_matrices=True)
    smax = s[0] if s.size else 0.0
    r = int(np.count_nonzero(s > tol.rank_tol * smax)) if smax > 0 else 0
    null = adjoint(Vh)[:, r:]
    if null.shape[1]:
        leak = np.linalg.norm(A @ null, axis=0).max()
        if leak > tol.eq_tol * opnorm(A):
            raise NullSpaceViolation(
                f"N(B) is not contained in N(A): |A v| = {leak:.3e} for a null vector v of B"
            )
    Q = U[:, :r]
    # A B^+ restricted to R(B): B^+ Q = V_r diag(1/s_r).
    matrix = A @ (adjoint(Vh)[:, :r] / s[:r])
    return QuotientOp(domain_basis=Q, matrix=matrix, op_norm=opnorm(matrix))


def operator_lower_bound(S, K, tol=DEFAULT_TOL):
    """Largest ``A`` with ``S >= A K K^*`` for PSD ``S``, via ``[K^*/S^{1/2}]``.

    Returns ``(well_defined, A, witness)``. ``A`` is ``inf`` when ``K = 0``
    and ``0.0`` when the quotient is ill-defined. ``witness`` is a unit vector
    attaining the constant (or, in the ill-defined case, a null vector of
    ``S`` that ``K^*`` does not annihilate).
    """
    S = as_matrix(S, "S")
    K = as_matrix(K, "K")
    root = psd_sqrt(S, tol)
    if not np.any(K):
        w, V = np.linalg.eigh((S + adjoint(S)) / 2)
        return True, np.inf, V[:, 0]
    try:
        q = quotient(adjoint(K), root, tol)
    except NullSpaceViolation:
        null = null_basis(root, tol)
        leaks = np.linalg.norm(adjoint(K) @ null, axis=0)
        return False, 0.0, null[:, int(np.argmax(leaks))]
    y, sigma = q.top_singular_pair()
    f = psd_pinv_sqrt(S, tol) @ y
    return True, 1.0 / sigma**2, f / np.linalg.norm(f)


def pencil_lower_bound(S, K, tol=DEFAULT_TOL):
    """Largest ``A`` with ``S >= A K K^*`` from a generalized eigenproblem.

    Splits the space into ``R(K)`` and ``N(K^*)``, eliminates the ``N(K^*)``
    block of ``S`` by its Schur complement and solves the definite pencil
    ``(schur, Q^* K K^* Q)`` on ``R(K)``. Independent of the quotient route.
    """
    S = as_matrix(S, "S")
    K = as_matrix(K, "K")
    U, s, _ = np.linalg.svd(K, full_matrices=True)
    r = numerical_rank(s, tol)
    if r == 0:
        return np.inf
    QK, QN = U[:, :r], U[:, r:]
    S_rr = adjoint(QK) @ S @ QK
    if QN.shape[1]:
        S_rn = adjoint(QK) @ S @ QN
        S_nn = adjoint(QN) @ S @ QN
        S_rr = S_rr - S_rn @ pinv(S_nn, tol) @ adjoint(S_rn)
    G = adjoint(QK) @ K @ adjoint(K) @ QK
    w = scipy.linalg.eigh(
        (S_rr + adjoint(S_rr)) / 2, (G + adjoint(G)) / 2, eigvals_only=True
    )
    return max(float(w[0]), 0.0)
