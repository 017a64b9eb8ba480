"""Finite frames, K-frames, fusion frames and K-fusion frames.

Optimal bounds, reconstruction, atomic decompositions and constructions
with certified bounds, on dense real or complex matrices.
"""

from .estimators import FrameTransformer, FusionFrameTransformer
from .exceptions import FramekitError, HypothesisViolated
from .frames import (
    BoundsReport,
    VectorFrame,
    frame_bounds,
    frame_operator,
    is_exact,
    kframe_bounds,
    reconstruct,
)
from .fusion import (
    EllTwoTuple,
    FusionSystem,
    analysis,
    atomic_decompose,
    combined_operator_bounds,
    construct_atomic,
    direct_sum_kfusion,
    fusion_bounds,
    fusion_frame_operator,
    fusion_reconstruct,
    intersect_system,
    kfusion_bounds,
    kfusion_via_quotient,
    partition_kframe,
    synthesis,
    synthesis_map,
    verify_atomic,
)
from .numkit import DEFAULT_TOL, Tolerances
from .optools import douglas_check, quotient
from .subspace import Subspace

__version__ = "0.1.0"

__all__ = [
    "BoundsReport",
    "DEFAULT_TOL",
    "EllTwoTuple",
    "FrameTransformer",
    "FramekitError",
    "FusionFrameTransformer",
    "FusionSystem",
    "HypothesisViolated",
    "Subspace",
    "Tolerances",
    "VectorFrame",
    "analysis",
    "atomic_decompose",
    "combined_operator_bounds",
    "construct_atomic",
    "direct_sum_kfusion",
    "douglas_check",
    "frame_bounds",
    "frame_operator",
    "fusion_bounds",
    "fusion_frame_operator",
    "fusion_reconstruct",
    "intersect_system",
    "is_exact",
    "kframe_bounds",
    "kfusion_bounds",
    "kfusion_via_quotient",
    "partition_kframe",
    "quotient",
    "reconstruct",
    "synthesis",
    "synthesis_map",
    "verify_atomic",
]
