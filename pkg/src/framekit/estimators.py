"""scikit-learn compatible transformers built on frames and fusion frames.

``transform`` is the analysis operator (signals to coefficients) and
``inverse_transform`` reconstructs with the canonical dual, so the
transformers slot into a :class:`sklearn.pipeline.Pipeline`. ``fit`` learns
nothing from the data beyond its width; it validates the system and records
the frame operator and optimal bounds.

Examples
--------
>>> import numpy as np
>>> from framekit.estimators import FrameTransformer
>>> mercedes = np.array([[0, np.sqrt(3) / 2, -np.sqrt(3) / 2], [1, -0.5, -0.5]])
>>> ft = FrameTransformer(vectors=mercedes).fit()
>>> round(ft.bounds_.A_opt, 12), round(ft.bounds_.B_opt, 12)
(1.5, 1.5)
>>> X = np.array([[1.0, 2.0]])
>>> np.allclose(ft.inverse_transform(ft.transform(X)), X)
True
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_signals, check_square
from .exceptions import NotAFrame, NotAFusionFrame
from .frames import VectorFrame, frame_bounds, frame_operator, kframe_bounds
from .fusion import FusionSystem, fusion_bounds, fusion_frame_operator, kfusion_bounds, synthesis_map
from .numkit import Tolerances, pinv


class _FrameBase(TransformerMixin, BaseEstimator):
    def _tolerances(self):
        return Tolerances(rank_tol=self.rank_tol, psd_tol=self.psd_tol, eq_tol=self.eq_tol)

    def _synthesis(self):
        raise NotImplementedError

    def _finish_fit(self, X, S, bounds):
        n = S.shape[0]
        if X is not None:
            check_signals(X, n)
        self.frame_operator_ = S
        self.bounds_ = bounds
        self.lower_bound_ = bounds.A_opt
        self.upper_bound_ = bounds.B_opt
        self.n_features_in_ = n
        return self

    def transform(self, X):
        """Analysis coefficients, one row per signal."""
        check_is_fitted(self, "frame_operator_")
        X = check_signals(X, self.n_features_in_)
        return X @ np.conj(self._synthesis())

    def inverse_transform(self, C):
        """Reconstruct signals from coefficients via ``S^-1 T c``."""
        check_is_fitted(self, "frame_operator_")
        T = self._synthesis()
        C = check_signals(C, T.shape[1], name="C")
        if self.lower_bound_ <= self.tol_.psd_tol:
            raise self._not_a_frame("frame operator is singular; reconstruction is not unique")
        S_inv = pinv(self.frame_operator_, self.tol_)
        return (S_inv @ T @ C.T).T


class FrameTransformer(_FrameBase):
    """Analysis/synthesis with a finite vector frame.

    Parameters
    ----------
    vectors : array-like of shape (n_features, n_vectors)
        Frame vectors as columns.
    K : array-like of shape (n_features, n_features), default=None
        If given, ``bounds_`` holds the optimal K-frame bounds.
    rank_tol, psd_tol, eq_tol : float
        Numerical tolerances, see :class:`framekit.numkit.Tolerances`.

    Attributes
    ----------
    frame_operator_ : ndarray of shape (n_features, n_features)
    bounds_ : BoundsReport
    lower_bound_, upper_bound_ : float
    n_features_in_ : int
    """

    _not_a_frame = NotAFrame

    def __init__(self, vectors=None, K=None, rank_tol=1e-10, psd_tol=1e-10, eq_tol=1e-9):
        self.vectors = vectors
        self.K = K
        self.rank_tol = rank_tol
        self.psd_tol = psd_tol
        self.eq_tol = eq_tol

    def fit(self, X=None, y=None):
        self.tol_ = self._tolerances()
        self.frame_ = VectorFrame(self.vectors)
        if self.K is None:
            bounds = frame_bounds(self.frame_, self.tol_)
        else:
            K = check_square(self.K, self.frame_.ambient_dim)
            bounds = kframe_bounds(self.frame_, K, self.tol_)
        self.n_components_ = self.frame_.size
        return self._finish_fit(X, frame_operator(self.frame_), bounds)

    def _synthesis(self):
        return self.frame_.vectors


class FusionFrameTransformer(_FrameBase):
    """Fusion frame measurements in canonical block coordinates.

    ``transform`` returns, for each signal ``f``, the coordinates of
    ``{v_i P_{W_i} f}`` with respect to the concatenated member bases.

    Parameters
    ----------
    subspaces : list of array-like or list of Subspace
        Spanning sets (columns) of the member subspaces.
    weights : array-like, default=None
        Positive weights; all ones when omitted.
    K : array-like, default=None
        If given, ``bounds_`` holds the optimal K-fusion bounds.
    """

    _not_a_frame = NotAFusionFrame

    def __init__(self, subspaces=None, weights=None, K=None, rank_tol=1e-10, psd_tol=1e-10, eq_tol=1e-9):
        self.subspaces = subspaces
        self.weights = weights
        self.K = K
        self.rank_tol = rank_tol
        self.psd_tol = psd_tol
        self.eq_tol = eq_tol

    def fit(self, X=None, y=None):
        from .subspace import Subspace

        self.tol_ = self._tolerances()
        if isinstance(self.subspaces, FusionSystem):
            system = self.subspaces
        else:
            members = [
                s if isinstance(s, Subspace) else Subspace.span(s, self.tol_)
                for s in self.subspaces
            ]
            weights = np.ones(len(members)) if self.weights is None else self.weights
            system = FusionSystem(tuple(members), weights)
        self.system_ = system
        if self.K is None:
            bounds = fusion_bounds(system, self.tol_)
        else:
            K = check_square(self.K, system.ambient_dim)
            bounds = kfusion_bounds(system, K, self.tol_)
        self.n_components_ = sum(system.dims)
        return self._finish_fit(X, fusion_frame_operator(system), bounds)

    def _synthesis(self):
        return synthesis_map(self.system_)
