"""Fusion frames, K-fusion frames and atomic subspaces.

A :class:`FusionSystem` is a finite family of weighted subspaces
``{(W_i, v_i)}``. Its synthesis operator acts on the block space
``W_1 ⊕ ... ⊕ W_m``; in matrix form we use the canonical orthonormal basis
obtained by concatenating each member's own orthonormal basis in member order,
so the synthesis operator is the ``n x sum(dim W_i)`` matrix returned by
:func:`synthesis_map`.
"""

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .exceptions import (
    BadPartition,
    BlockNotInSubspace,
    CommutationHypothesisFailed,
    DimensionMismatch,
    EmptyInput,
    MemberCountMismatch,
    NonCommutingProjections,
    NullSpaceViolation,
    NotAFusionFrame,
    NotAKFrame,
    NotKFusion,
    WeightMismatch,
    ZeroOperator,
    ZeroOperatorInProduct,
)
from .frames import BoundsReport, _plain_bounds, kframe_bounds, operator_bounds
from .numkit import DEFAULT_TOL, adjoint, as_matrix, opnorm, pinv, psd_sqrt
from .optools import quotient
from .subspace import Subspace, commute, direct_sum, intersect, project


@dataclass(frozen=True, eq=False)
class FusionSystem:
    """Weighted subspaces sharing one ambient space."""

    subspaces: Tuple[Subspace, ...]
    weights: np.ndarray

    def __post_init__(self):
        subspaces = tuple(self.subspaces)
        if not subspaces:
            raise EmptyInput("a fusion system needs at least one member")
        n = subspaces[0].ambient_dim
        if any(W.ambient_dim != n for W in subspaces):
            raise DimensionMismatch("all subspaces must share the ambient dimension")
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if weights.shape[0] != len(subspaces):
            raise MemberCountMismatch(
                f"{weights.shape[0]} weights for {len(subspaces)} subspaces"
            )
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            raise ValueError("weights must be finite and strictly positive")
        weights.setflags(write=False)
        object.__setattr__(self, "subspaces", subspaces)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_spans(cls, spans, weights=None, tol=DEFAULT_TOL):
        """Build from spanning sets (columns of each matrix)."""
        subspaces = tuple(Subspace.span(M, tol) for M in spans)
        if weights is None:
            weights = np.ones(len(subspaces))
        return cls(subspaces, weights)

    @property
    def ambient_dim(self):
        return self.subspaces[0].ambient_dim

    @property
    def members(self):
        return list(zip(self.subspaces, self.weights))

    @property
    def dims(self):
        return tuple(W.dim for W in self.subspaces)

    @property
    def is_complex(self):
        return any(np.iscomplexobj(W.basis) for W in self.subspaces)

    def __len__(self):
        return len(self.subspaces)


@dataclass(frozen=True, eq=False)
class EllTwoTuple:
    """Element ``{f_i}`` of the block space, each ``f_i`` an ambient vector."""

    blocks: Tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(np.asarray(b) for b in self.blocks))

    def norm(self):
        return math.sqrt(sum(float(np.vdot(b, b).real) for b in self.blocks))

    def inner(self, other):
        """``sum_i <f_i, g_i>``, linear in the first argument."""
        return sum(np.vdot(g, f) for f, g in zip(self.blocks, other.blocks))

    def coordinates(self, W):
        """Coordinates in the canonical orthonormal basis of the block space."""
        return np.concatenate(
            [adjoint(V.basis) @ b for V, b in zip(W.subspaces, self.blocks)]
        )

    @classmethod
    def from_coordinates(cls, W, coords):
        blocks, offset = [], 0
        for V in W.subspaces:
            blocks.append(V.basis @ coords[offset : offset + V.dim])
            offset += V.dim
        return cls(tuple(blocks))

    @classmethod
    def zeros(cls, W):
        dtype = np.complex128 if W.is_complex else np.float64
        return cls(tuple(np.zeros(W.ambient_dim, dtype=dtype) for _ in W.subspaces))


def _check_signal(W, f):
    f = np.asarray(f)
    if f.shape != (W.ambient_dim,):
        raise DimensionMismatch(f"signal must have shape ({W.ambient_dim},), got {f.shape}")
    return f


def _check_operator(W, K):
    K = as_matrix(K, "K")
    n = W.ambient_dim
    if K.shape != (n, n):
        raise DimensionMismatch(f"K must be {n}x{n}, got {K.shape}")
    return K


def fusion_frame_operator(W):
    """``S_W = sum_i v_i^2 P_{W_i}``."""
    L = synthesis_map(W)
    return L @ adjoint(L)


def synthesis_map(W):
    """Matrix of the synthesis operator on the canonical block basis.

    The column for the ``l``-th basis vector ``e`` of member ``i`` is
    ``v_i e``; hence ``L L^* = S_W``.
    """
    cols = [v * V.basis for V, v in W.members]
    dtype = np.complex128 if W.is_complex else np.float64
    return np.hstack(cols).astype(dtype, copy=False)


def fusion_bounds(W, tol=DEFAULT_TOL):
    """Optimal fusion frame bounds and the tight/Parseval/orthonormal flags."""
    S = fusion_frame_operator(W)
    report = _plain_bounds(S, tol)
    orthonormal = (
        opnorm(S - np.eye(W.ambient_dim)) <= tol.eq_tol and sum(W.dims) == W.ambient_dim
    )
    uniform = bool(np.all(W.weights == W.weights[0]))
    return replace(report, orthonormal=orthonormal, uniform=uniform)


def analysis(W, f):
    """Measurements ``{v_i P_{W_i} f}``."""
    f = _check_signal(W, f)
    return EllTwoTuple(tuple(v * (project(V) @ f) for V, v in W.members))


def _check_tuple(W, t, tol):
    if len(t.blocks) != len(W):
        raise MemberCountMismatch(f"{len(t.blocks)} blocks for {len(W)} members")
    for i, (V, b) in enumerate(zip(W.subspaces, t.blocks)):
        if b.shape != (W.ambient_dim,):
            raise DimensionMismatch(f"block {i} has shape {b.shape}")
        if np.linalg.norm(b - project(V) @ b) > tol.eq_tol * max(1.0, np.linalg.norm(b)):
            raise BlockNotInSubspace(f"block {i} does not lie in its subspace")


def synthesis(W, t, tol=DEFAULT_TOL):
    """``sum_i v_i f_i``."""
    _check_tuple(W, t, tol)
    return sum(v * b for v, b in zip(W.weights, t.blocks))


def fusion_reconstruct(W, measurements, tol=DEFAULT_TOL):
    """``f = sum_i v_i S_W^{-1} (v_i P_{W_i} f)`` from the measurements."""
    bounds = fusion_bounds(W, tol)
    if not bounds.lower_ok:
        raise NotAFusionFrame(f"fusion frame operator is singular (A = {bounds.A_opt:.3e})")
    S_inv = pinv(fusion_frame_operator(W), tol)
    return S_inv @ synthesis(W, measurements, tol)


def kfusion_bounds(W, K, tol=DEFAULT_TOL):
    """Optimal constants in ``A |K^* f|^2 <= sum v_i^2 |P_{W_i} f|^2 <= B |f|^2``.

    ``A_opt`` comes from the norm of the quotient ``[K^*/S_W^{1/2}]``;
    ``A_check`` is the same constant from a Schur-complement pencil.
    """
    K = _check_operator(W, K)
    report = operator_bounds(fusion_frame_operator(W), K, tol)
    return replace(report, uniform=bool(np.all(W.weights == W.weights[0])))


def kfusion_via_quotient(W, K, tol=DEFAULT_TOL):
    """``(bounded, norm)`` for the quotient ``[K^*/S_W^{1/2}]``."""
    K = _check_operator(W, K)
    try:
        q = quotient(adjoint(K), psd_sqrt(fusion_frame_operator(W), tol), tol)
    except NullSpaceViolation:
        return False, None
    return True, q.op_norm


# -- atomic subspaces -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AtomicReport:
    """Verdict on whether ``W`` is an atomic subspace for ``K``.

    ``is_atomic`` is decided by the decomposition route (``K = T_W L`` solvable);
    ``lower_A`` by the inequality route. ``consistent`` records that both agree.
    """

    is_atomic: bool
    bessel_B: float
    lower_A: float
    decomposition_C: Optional[float]
    factor_L: Optional[np.ndarray]
    consistent: bool


def construct_atomic(K, basis=None, tol=DEFAULT_TOL):
    """Atomic subspace ``{(span K e_n, |K e_n|)}`` for ``K``.

    Images ``K e_n`` below ``rank_tol * |K|`` are dropped, since weights must
    be positive. The result satisfies
    ``sum_n v_n^2 |P_{W_n} f|^2 = |K^* f|^2`` exactly.
    """
    K = as_matrix(K, "K")
    n = K.shape[0]
    if K.shape[1] != n:
        raise DimensionMismatch("K must be square")
    if basis is None:
        basis = np.eye(n)
    basis = as_matrix(basis, "basis")
    if basis.shape != (n, n) or opnorm(adjoint(basis) @ basis - np.eye(n)) > tol.eq_tol:
        raise ValueError("basis must be an orthonormal basis of the ambient space")
    knorm = opnorm(K)
    if knorm == 0:
        raise ZeroOperator("K = 0 has no atomic subspace with positive weights")
    images = K @ basis
    lengths = np.linalg.norm(images, axis=0)
    keep = lengths > tol.rank_tol * knorm
    subspaces = tuple(
        Subspace(n, (images[:, j] / lengths[j])[:, None]) for j in np.flatnonzero(keep)
    )
    return FusionSystem(subspaces, lengths[keep])


def _douglas_factor(W, K, tol):
    """Minimal-norm ``L`` with ``K = T_W L`` (block coordinates), or ``None``."""
    T = synthesis_map(W)
    L = pinv(T, tol) @ K
    if opnorm(T @ L - K) <= tol.eq_tol * max(1.0, opnorm(K)):
        return L
    return None


def atomic_decompose(W, K, f, tol=DEFAULT_TOL):
    """``{f_i}`` with ``K f = sum_i v_i f_i`` and ``|{f_i}| <= |L| |f|``."""
    K = _check_operator(W, K)
    f = _check_signal(W, f)
    if not kfusion_bounds(W, K, tol).lower_ok:
        raise NotKFusion("W is not a K-fusion frame, so K f has no atomic decomposition")
    L = _douglas_factor(W, K, tol)
    if L is None:
        raise NotKFusion("K = T_W L has no solution within eq_tol")
    return EllTwoTuple.from_coordinates(W, L @ f)


def verify_atomic(W, K, tol=DEFAULT_TOL):
    """Check the atomic-subspace property by decomposition and by inequality."""
    K = _check_operator(W, K)
    bounds = kfusion_bounds(W, K, tol)
    L = _douglas_factor(W, K, tol)
    is_atomic = L is not None
    inequality_ok = bounds.lower_ok and (bounds.A_opt > tol.psd_tol)
    return AtomicReport(
        is_atomic=is_atomic,
        bessel_B=bounds.B_opt,
        lower_A=bounds.A_opt,
        decomposition_C=opnorm(L) if is_atomic else None,
        factor_L=L,
        consistent=is_atomic == inequality_ok,
    )


# -- constructions with certified bounds -------------------------------------


@dataclass(frozen=True, eq=False)
class CertifiedBounds:
    """Bounds guaranteed by a construction next to the optimal ones."""

    certified_A: float
    certified_B: float
    actual: BoundsReport
    slack: float = 1e-9

    @property
    def holds(self):
        return (
            self.certified_A <= self.actual.A_opt + self.slack
            and self.actual.B_opt <= self.certified_B + self.slack
        )


def partition_kframe(F, K, partition, weights=None, tol=DEFAULT_TOL):
    """K-fusion frame from a partition of a K-frame's index set.

    Member ``i`` is the span of the vectors indexed by ``partition[i]``
    (0-based). Certified bounds are ``(A_F/B_F) min v_i^2`` and
    ``len(partition) * max v_i^2``.
    """
    m = F.size
    flat = [int(j) for part in partition for j in part]
    if any(len(part) == 0 for part in partition):
        raise BadPartition("partition contains an empty part")
    if sorted(flat) != list(range(m)):
        raise BadPartition(f"partition must cover 0..{m - 1} exactly once")
    K = as_matrix(K, "K")
    fb = kframe_bounds(F, K, tol)
    if not fb.lower_ok:
        raise NotAKFrame("the vector family is not a K-frame")
    if weights is None:
        weights = np.ones(len(partition))
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (len(partition),):
        raise MemberCountMismatch("one weight per part is required")
    W = FusionSystem(
        tuple(Subspace.span(F.vectors[:, list(part)], tol) for part in partition), weights
    )
    vmin, vmax = float(weights.min()), float(weights.max())
    cert_A = fb.A_opt / fb.B_opt * vmin**2 if fb.B_opt > 0 else math.inf
    cert_B = len(partition) * vmax**2
    return W, CertifiedBounds(cert_A, cert_B, kfusion_bounds(W, K, tol))


def direct_sum_kfusion(systems, Ks, tol=DEFAULT_TOL):
    """Member-wise external direct sum of K_j-fusion frames sharing weights.

    Certified bounds are ``min_j A_j`` and ``max_j B_j`` for the block-diagonal
    operator ``K_1 ⊕ ... ⊕ K_p``.
    """
    from scipy.linalg import block_diag

    systems = list(systems)
    Ks = [as_matrix(K, "K") for K in Ks]
    if not systems:
        raise EmptyInput("need at least one system")
    if len(Ks) != len(systems):
        raise MemberCountMismatch("one operator per system is required")
    count = len(systems[0])
    if any(len(W) != count for W in systems):
        raise MemberCountMismatch("all systems must have the same number of members")
    weights = systems[0].weights
    if any(not np.allclose(W.weights, weights, rtol=tol.eq_tol, atol=0) for W in systems):
        raise WeightMismatch("member i must carry the same weight in every system")
    reports = []
    for j, (W, K) in enumerate(zip(systems, Ks)):
        rep = kfusion_bounds(W, K, tol)
        if not rep.lower_ok:
            raise NotKFusion(f"system {j} is not a K-fusion frame for its operator")
        reports.append(rep)
    members = tuple(
        direct_sum([W.subspaces[i] for W in systems]) for i in range(count)
    )
    out = FusionSystem(members, weights)
    K_sum = block_diag(*Ks)
    cert = CertifiedBounds(
        min(r.A_opt for r in reports),
        max(r.B_opt for r in reports),
        kfusion_bounds(out, K_sum, tol),
    )
    return out, cert


@dataclass(frozen=True, eq=False)
class OperatorAlgebraReport:
    """Certified lower bounds for ``sum a_j K_j`` and ``prod K_j``."""

    common_A: float
    sum_operator: np.ndarray
    product_operator: np.ndarray
    certified_sum_A: float
    certified_product_A: float
    actual_sum: BoundsReport
    actual_product: BoundsReport
    slack: float = 1e-8

    @property
    def holds(self):
        return (
            self.certified_sum_A <= self.actual_sum.A_opt + self.slack
            and self.certified_product_A <= self.actual_product.A_opt + self.slack
        )


def combined_operator_bounds(W, Ks, coeffs, tol=DEFAULT_TOL):
    """Bounds for linear combinations and products of operators.

    The sum uses the common constant ``min_j A_j``; the product
    ``K_1 K_2 ... K_p`` only needs the constant for ``K_1``, giving
    ``A_1 / prod_{j>=2} |K_j^*|^2``.
    """
    Ks = [_check_operator(W, K) for K in Ks]
    coeffs = list(coeffs)
    if not Ks:
        raise EmptyInput("need at least one operator")
    if len(coeffs) != len(Ks):
        raise MemberCountMismatch("one coefficient per operator is required")
    if any(not np.any(K) for K in Ks):
        raise ZeroOperatorInProduct("zero operators are excluded")
    reports = [kfusion_bounds(W, K, tol) for K in Ks]
    for j, rep in enumerate(reports):
        if not rep.lower_ok:
            raise NotKFusion(f"W is not a K-fusion frame for operator {j}")
    common_A = min(r.A_opt for r in reports)
    total = sum(abs(a) for a in coeffs)
    K_sum = sum(a * K for a, K in zip(coeffs, Ks))
    K_prod = Ks[0]
    for K in Ks[1:]:
        K_prod = K_prod @ K
    cert_sum = common_A / total**2 if total > 0 else math.inf
    cert_prod = reports[0].A_opt / math.prod(opnorm(K) ** 2 for K in Ks[1:])
    return OperatorAlgebraReport(
        common_A=common_A,
        sum_operator=K_sum,
        product_operator=K_prod,
        certified_sum_A=cert_sum,
        certified_product_A=cert_prod,
        actual_sum=kfusion_bounds(W, K_sum, tol),
        actual_product=kfusion_bounds(W, K_prod, tol),
    )


@dataclass(frozen=True, eq=False)
class IntersectionReport:
    """Outcome of intersecting every member with a fixed subspace ``V``.

    ``restricted`` holds optimal bounds for the inequality on ``R(P_V)``
    (``None`` when no lower-bound claim applies).
    """

    bessel_before: float
    bessel_after: float
    certified_A: Optional[float]
    restricted: Optional[BoundsReport]
    slack: float = 1e-9

    @property
    def holds(self):
        ok = self.bessel_after <= self.bessel_before + self.slack
        if self.certified_A is not None and self.restricted is not None:
            ok = ok and self.certified_A <= self.restricted.A_opt + self.slack
        return ok


def restricted_bounds(W, K, V, tol=DEFAULT_TOL):
    """Optimal constants of the K-fusion inequality for ``f`` in ``V`` only."""
    Q = V.basis
    S = adjoint(Q) @ fusion_frame_operator(W) @ Q
    K_r = adjoint(Q) @ K
    if opnorm(K_r) <= tol.rank_tol * opnorm(K):
        # K^* vanishes on V up to roundoff.
        K_r = np.zeros_like(K_r)
    return operator_bounds(S, K_r, tol)


def intersect_system(W, V, K=None, tol=DEFAULT_TOL):
    """``{(W_i ∩ V, w_i)}`` for ``V`` whose projection commutes with every ``P_{W_i}``.

    Zero intersections stay in the system as zero subspaces. With ``K=None``
    and ``W`` a fusion frame, the result is checked as a ``P_V``-fusion frame;
    with ``K`` given it is checked as a K-fusion frame on ``R(P_V)``.
    """
    for i, Wi in enumerate(W.subspaces):
        if not commute(Wi, V, tol):
            raise NonCommutingProjections(f"P_V does not commute with member {i}")
    P = project(V)
    if K is not None:
        K = _check_operator(W, K)
        Kh = adjoint(K)
        if opnorm(P @ Kh - Kh @ P) > tol.eq_tol:
            raise CommutationHypothesisFailed("P_V^+ does not commute with K^*")
    out = FusionSystem(tuple(intersect(Wi, V, tol) for Wi in W.subspaces), W.weights)
    before = fusion_bounds(W, tol)
    after_B = float(np.linalg.eigvalsh(fusion_frame_operator(out))[-1])

    certified = restricted = None
    if K is None:
        if before.lower_ok:
            certified = before.A_opt
            restricted = kfusion_bounds(out, P, tol)
    else:
        base = kfusion_bounds(W, K, tol)
        if base.lower_ok and V.dim > 0:
            # |P_V^+| = 1 for a nonzero orthogonal projection.
            certified = base.A_opt / opnorm(P) ** 2
            restricted = restricted_bounds(out, K, V, tol)
    report = IntersectionReport(before.B_opt, after_B, certified, restricted)
    return out, report

