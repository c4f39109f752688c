"""Topology-driven image enhancement.

Segments each color channel of an image by contour-tree structure and
applies feature-local transfer functions (contrast, denoise, brightness,
gamma), driven by a scriptable CLI and a local HTTP session service.
"""

from .edits import (
    EditOp,
    EditRequest,
    apply_brightness,
    apply_contrast,
    apply_denoise,
    apply_edit,
    apply_gamma,
)
from .features import (
    BinaryMask,
    BrushRect,
    DiagramPoint,
    PVPoint,
    brush_select,
    build_mask,
    filter_inclusions,
    persistence_diagram,
    persistence_volume_diagram,
)
from .field import (
    ChannelField,
    ChannelId,
    ImageRGB,
    SuperPixelGraph,
    build_superpixels,
    extract_channel,
    load_image,
    save_image,
    write_channel,
)
from .session import ChannelAnalysis, Session, analyze_field
from .topology import (
    AugmentedContourTree,
    AugmentedTree,
    ContourTree,
    FeatureKind,
    FeaturePair,
    build_join_tree,
    build_split_tree,
    extract_feature_subtree,
    merge_to_contour_tree,
    pair_critical_points,
    reduce_regular_nodes,
)

__version__ = "0.1.0"

__all__ = [
    "AugmentedContourTree",
    "AugmentedTree",
    "BinaryMask",
    "BrushRect",
    "ChannelAnalysis",
    "ChannelField",
    "ChannelId",
    "ContourTree",
    "DiagramPoint",
    "EditOp",
    "EditRequest",
    "FeatureKind",
    "FeaturePair",
    "ImageRGB",
    "PVPoint",
    "Session",
    "SuperPixelGraph",
    "analyze_field",
    "apply_brightness",
    "apply_contrast",
    "apply_denoise",
    "apply_edit",
    "apply_gamma",
    "brush_select",
    "build_join_tree",
    "build_mask",
    "build_split_tree",
    "build_superpixels",
    "extract_channel",
    "extract_feature_subtree",
    "filter_inclusions",
    "load_image",
    "merge_to_contour_tree",
    "pair_critical_points",
    "persistence_diagram",
    "persistence_volume_diagram",
    "reduce_regular_nodes",
    "save_image",
    "write_channel",
]
