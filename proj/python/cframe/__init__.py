"""Connotation frames: typed sentiment relations of verbs."""

from ._cframe import (
    ASPECTS,
    CframeError,
    FactorGraph,
    FrameWeights,
    __version__,
    accuracy,
    decode_frame,
    enumerate_marginals,
    frame_graph,
    krippendorff_alpha,
    loopy_sum_product,
    macro_f1,
    polarity_from_score,
    sum_product_tree,
    synthetic,
    train_piecewise,
)

__all__ = [
    "ASPECTS",
    "CframeError",
    "FactorGraph",
    "FrameWeights",
    "__version__",
    "accuracy",
    "decode_frame",
    "enumerate_marginals",
    "frame_graph",
    "krippendorff_alpha",
    "loopy_sum_product",
    "macro_f1",
    "polarity_from_score",
    "sum_product_tree",
    "synthetic",
    "train_piecewise",
]
