"""Finite vector frames and K-frames."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import DimensionMismatch, EmptyInput, NotAFrame
from .numkit import (
    DEFAULT_TOL,
    Tolerances,
    adjoint,
    as_matrix,
    opnorm,
    pinv,
    sym_eig,
)
from .optools import operator_lower_bound, pencil_lower_bound


@dataclass(frozen=True, eq=False)
class VectorFrame:
    """A finite family of vectors, stored as the columns of ``vectors``."""

    vectors: np.ndarray

    def __post_init__(self):
        V = as_matrix(self.vectors, "vectors")
        if V.shape[1] < 1:
            raise EmptyInput("a frame needs at least one vector")
        V.setflags(write=False)
        object.__setattr__(self, "vectors", V)

    @property
    def ambient_dim(self):
        return self.vectors.shape[0]

    @property
    def size(self):
        return self.vectors.shape[1]

    def synthesis(self, coeffs):
        return self.vectors @ coeffs

    def analysis(self, f):
        """Coefficients ``<f, f_i>``."""
        return adjoint(self.vectors) @ f


@dataclass(frozen=True, eq=False)
class BoundsReport:
    """Optimal bounds for a frame-type inequality.

    ``A_opt`` is ``math.inf`` when the lower inequality is vacuous (``K = 0``)
    and ``0.0`` when no positive lower constant exists. ``A_check`` carries the
    independent cross-check of ``A_opt`` when one was computed.
    """

    is_bessel: bool
    lower_ok: bool
    A_opt: float
    B_opt: float
    witness_low: np.ndarray
    witness_high: np.ndarray
    tol: Tolerances
    tight: bool = False
    parseval: bool = False
    orthonormal: Optional[bool] = None
    uniform: Optional[bool] = None
    A_check: Optional[float] = None

    def as_dict(self):
        out = {
            "is_bessel": self.is_bessel,
            "lower_ok": self.lower_ok,
            "A_opt": self.A_opt,
            "B_opt": self.B_opt,
            "tight": self.tight,
            "parseval": self.parseval,
        }
        for key in ("orthonormal", "uniform", "A_check"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out


def frame_operator(F):
    """``S = sum_i f_i f_i^*``."""
    return F.vectors @ adjoint(F.vectors)


def _plain_bounds(S, tol):
    """Extremal eigenpairs of a PSD operator as a bounds report."""
    w, V = sym_eig(S, tol)
    A, B = float(w[0]), float(w[-1])
    lower_ok = A > tol.psd_tol
    tight = lower_ok and abs(A - B) <= tol.eq_tol * B
    return BoundsReport(
        is_bessel=True,
        lower_ok=lower_ok,
        A_opt=A,
        B_opt=B,
        witness_low=V[:, 0],
        witness_high=V[:, -1],
        tol=tol,
        tight=tight,
        parseval=tight and abs(A - 1.0) <= tol.eq_tol,
    )


def frame_bounds(F, tol=DEFAULT_TOL):
    """Optimal frame bounds: extremal eigenvalues of the frame operator."""
    return _plain_bounds(frame_operator(F), tol)


def operator_bounds(S, K, tol=DEFAULT_TOL, cross_check=True):
    """Optimal constants in ``A |K^* f|^2 <= <S f, f> <= B |f|^2``.

    Shared by K-frames and K-fusion frames; ``S`` is the (fusion) frame
    operator.
    """
    S = as_matrix(S, "S")
    K = as_matrix(K, "K")
    if K.shape[0] != S.shape[0]:
        raise DimensionMismatch(f"K has {K.shape[0]} rows, expected {S.shape[0]}")
    w, V = sym_eig(S, tol)
    B = float(w[-1])
    lower_ok, A, witness = operator_lower_bound(S, K, tol)
    A_check = None
    if cross_check and lower_ok and math.isfinite(A):
        A_check = pencil_lower_bound(S, K, tol)
    tight = False
    if lower_ok and math.isfinite(A):
        tight = opnorm(S - A * K @ adjoint(K)) <= tol.eq_tol * max(1.0, opnorm(S))
    return BoundsReport(
        is_bessel=True,
        lower_ok=lower_ok,
        A_opt=A,
        B_opt=B,
        witness_low=witness,
        witness_high=V[:, -1],
        tol=tol,
        tight=tight,
        parseval=tight and abs(A - 1.0) <= tol.eq_tol,
        A_check=A_check,
    )


def kframe_bounds(F, K, tol=DEFAULT_TOL):
    """Optimal K-frame bounds; ``lower_ok`` iff ``N(S^{1/2}) ⊆ N(K^*)``."""
    K = as_matrix(K, "K")
    if K.shape != (F.ambient_dim, F.ambient_dim):
        raise DimensionMismatch(f"K must be {F.ambient_dim}x{F.ambient_dim}")
    return operator_bounds(frame_operator(F), K, tol)


def reconstruct(F, f, tol=DEFAULT_TOL):
    """Recover ``f`` from its frame coefficients with the canonical dual.

    Evaluates ``sum <f, S^-1 f_i> f_i`` and checks it against the other
    ordering ``sum <f, f_i> S^-1 f_i``.
    """
    f = np.asarray(f)
    if f.shape != (F.ambient_dim,):
        raise DimensionMismatch(f"signal must have shape ({F.ambient_dim},)")
    bounds = frame_bounds(F, tol)
    if not bounds.lower_ok:
        raise NotAFrame(f"lower frame bound {bounds.A_opt:.3e} is not positive")
    S_inv = pinv(frame_operator(F), tol)
    primal = F.vectors @ (adjoint(F.vectors) @ (S_inv @ f))
    dual = S_inv @ (F.vectors @ (adjoint(F.vectors) @ f))
    cond = bounds.B_opt / bounds.A_opt
    if np.linalg.norm(primal - dual) > tol.eq_tol * cond * max(1.0, np.linalg.norm(f)):
        raise ArithmeticError("dual reconstruction orders disagree beyond roundoff")
    return primal


def is_exact(F, tol=DEFAULT_TOL):
    """True iff ``F`` is a frame and removing any single vector breaks that."""
    if not frame_bounds(F, tol).lower_ok:
        return False
    if F.size == 1:
        return True
    for i in range(F.size):
        rest = VectorFrame(np.delete(F.vectors, i, axis=1))
        if frame_bounds(rest, tol).lower_ok:
            return False
    return True
