"""Random instance generators for demos and property checks.

All generators take a :class:`numpy.random.Generator`; use
:func:`make_rng` for the seeded PCG64 generator used by the CLI so that runs
are reproducible. Entries are independent standard normals (real, or complex
with independent real and imaginary parts of variance 1/2).
"""

import numpy as np

from .frames import VectorFrame
from .fusion import FusionSystem, fusion_frame_operator, synthesis_map
from .subspace import Subspace

# Generic-position guard: spectra of drawn frame operators stay within this ratio.
MIN_CONDITION = 1e-6
_MAX_TRIES = 100


def well_conditioned(S, ratio=MIN_CONDITION):
    w = np.linalg.eigvalsh(S)
    return w[-1] > 0 and w[0] >= ratio * w[-1]


def make_rng(seed):
    """PCG64 generator seeded with ``seed`` (numpy's ``default_rng``)."""
    return np.random.Generator(np.random.PCG64(seed))


def gaussian(rng, shape, field="real"):
    if field == "real":
        return rng.standard_normal(shape)
    if field == "complex":
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    raise ValueError(f"unknown field {field!r}")


def unitary(rng, n, field="real"):
    """Haar-distributed orthogonal/unitary matrix (QR with phase correction)."""
    Q, R = np.linalg.qr(gaussian(rng, (n, n), field))
    d = np.diag(R)
    return Q * (d / np.abs(d))


def low_rank(rng, n, rank, field="real", cols=None):
    """Product of random ``n x rank`` and ``rank x cols`` factors."""
    cols = n if cols is None else cols
    return gaussian(rng, (n, rank), field) @ gaussian(rng, (rank, cols), field)


def operator(rng, n, field="real", rank_deficient=False):
    if rank_deficient and n > 1:
        return low_rank(rng, n, int(rng.integers(1, n)), field)
    return gaussian(rng, (n, n), field)


def subspace(rng, n, k, field="real", within=None):
    """Random ``k``-dimensional subspace, optionally inside span(``within``)."""
    if k == 0:
        return Subspace.zero(n, complex=field == "complex")
    if within is None:
        return Subspace.span(gaussian(rng, (n, k), field))
    return Subspace.span(within @ gaussian(rng, (within.shape[1], k), field))


def weights(rng, m, low=0.5, high=2.0):
    return rng.uniform(low, high, size=m)


def fusion_system(rng, n, m=None, field="real", within=None, spanning=True):
    """Random weighted subspaces.

    With ``spanning=True`` the dimensions add up to at least ``n`` (or the
    dimension of ``within``) so the system is generically a fusion frame for
    that space.
    """
    r = n if within is None else within.shape[1]
    m = int(rng.integers(2, 5)) if m is None else m
    for _ in range(_MAX_TRIES):
        dims = rng.integers(1, max(r, 1) + 1, size=m)
        if spanning and dims.sum() < r:
            dims[-1] = min(r, dims[-1] + r - dims.sum())
        if spanning and dims.sum() < r:
            dims[:] = r
        if not spanning:
            dims = np.minimum(dims, max(r - 1, 1))
        subs = tuple(subspace(rng, n, int(k), field, within) for k in dims)
        W = FusionSystem(subs, weights(rng, m))
        if not spanning:
            return W
        S = fusion_frame_operator(W)
        if within is not None:
            S = np.conj(within).T @ S @ within
        if well_conditioned(S):
            return W
    raise RuntimeError("could not draw a well-conditioned fusion frame")


def singular_system(rng, n, field="real", m=None):
    """System whose subspaces all lie in a random proper subspace ``R``.

    Returns ``(W, R_basis)``.
    """
    r = int(rng.integers(1, n))
    R = Subspace.span(gaussian(rng, (n, r), field)).basis
    return fusion_system(rng, n, m=m, field=field, within=R), R


def planted_operator(rng, W, field="real", rank_deficient=True):
    """``K = T_W L`` so that ``R(K) ⊆ R(T_W)``; W is then a K-fusion frame."""
    T = synthesis_map(W)
    n = W.ambient_dim
    if rank_deficient and n > 1:
        L = low_rank(rng, T.shape[1], int(rng.integers(1, n)), field, cols=n)
    else:
        L = gaussian(rng, (T.shape[1], n), field)
    return T @ L


def commuting_family(rng, n, field="real", m=None, cover=True):
    """Subspaces spanned by subsets of one random orthonormal basis.

    Returns ``(W, V, U, v_idx)`` with ``V`` spanned by columns ``v_idx`` of
    ``U``; every projection involved commutes with every other.
    """
    U = unitary(rng, n, field)
    m = int(rng.integers(2, 5)) if m is None else m
    masks = rng.random((m, n)) < 0.5
    if cover:
        for j in np.flatnonzero(~masks.any(axis=0)):
            masks[rng.integers(m), j] = True
    subs = tuple(Subspace(n, U[:, mask]) for mask in masks)
    v_idx = np.flatnonzero(rng.random(n) < 0.6)
    if v_idx.size == 0:
        v_idx = np.array([0])
    V = Subspace(n, U[:, v_idx])
    return FusionSystem(subs, weights(rng, m)), V, U, v_idx


def reducing_operator(rng, U, v_idx, field="real", zero_rows=()):
    """``K = U M U^*`` with ``M`` block-diagonal for ``v_idx`` and its complement.

    Then ``P_V K = K P_V``. Rows of ``M`` listed in ``zero_rows`` are zeroed,
    which removes those basis directions from ``R(K)``.
    """
    n = U.shape[0]
    inside = np.zeros(n, dtype=bool)
    inside[v_idx] = True
    M = gaussian(rng, (n, n), field)
    M[np.ix_(inside, ~inside)] = 0
    M[np.ix_(~inside, inside)] = 0
    M[list(zero_rows), :] = 0
    return U @ M @ np.conj(U).T


def unit_vectors(rng, n, count, field="real"):
    X = gaussian(rng, (n, count), field)
    return X / np.linalg.norm(X, axis=0)


def frame(rng, n, field="real", m=None):
    """Random frame with at least ``n`` vectors and a well-conditioned operator."""
    for _ in range(_MAX_TRIES):
        size = n + int(rng.integers(0, n + 1)) if m is None else m
        F = VectorFrame(gaussian(rng, (n, size), field))
        if well_conditioned(F.vectors @ np.conj(F.vectors).T):
            return F
    raise RuntimeError("could not draw a well-conditioned frame")


def kframe(rng, n, field="real"):
    """``(F, K)`` with F a K-frame.

    Either a genuine frame with arbitrary ``K``, or a family confined to a
    proper subspace with ``K = F G`` planted inside its span.
    """
    if rng.integers(2):
        return frame(rng, n, field), operator(rng, n, field)
    r = int(rng.integers(1, n))
    R = gaussian(rng, (n, r), field)
    m = r + int(rng.integers(1, n + 1))
    F = VectorFrame(R @ gaussian(rng, (r, m), field))
    return F, F.vectors @ gaussian(rng, (m, n), field)
