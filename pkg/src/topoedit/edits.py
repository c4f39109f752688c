"""Feature-local transfer functions and the edit/recompute loop.

Each transform remaps only the pixels of a feature's subtree, parameterized
by that feature's own birth and death values. Edits run on the real-valued
working channel; clamping to [0, 255] happens at write-back, never here.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ScaleOutOfRangeError, ZeroPersistenceError
from .field import ChannelField, ChannelId, SuperPixelGraph
from .topology import FeaturePair


class EditOp(Enum):
    CONTRAST = "contrast"
    DENOISE = "denoise"
    BRIGHTNESS = "brightness"
    GAMMA = "gamma"


# constraint messages match the API surface ("s≥1" etc.)
_BOUNDS = {
    EditOp.CONTRAST: ("s≥1", lambda s: s >= 1.0),
    EditOp.DENOISE: ("0≤s≤1", lambda s: 0.0 <= s <= 1.0),
    EditOp.BRIGHTNESS: ("−255≤s≤255", lambda s: -255.0 <= s <= 255.0),
    EditOp.GAMMA: ("γ>0", lambda s: s > 0.0),
}


def check_scale(op: EditOp, scale: float) -> None:
    message, ok = _BOUNDS[op]
    if not np.isfinite(scale) or not ok(scale):
        raise ScaleOutOfRangeError(f"{op.value} requires {message}, got {scale}")


@dataclass(frozen=True)
class EditRequest:
    """A validated edit: which op, how strong, on which channel's selection."""

    op: EditOp
    scale: float
    channel: ChannelId
    target: frozenset  # pair ids, already inclusion-filtered

    def __post_init__(self):
        check_scale(self.op, self.scale)


def _subtree_pixels(graph: SuperPixelGraph, subtree) -> np.ndarray:
    parts = [graph.members[v] for v in sorted(subtree)]
    if not parts:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(parts)


def _stretch(field: ChannelField, graph: SuperPixelGraph, subtree, pair: FeaturePair, scale: float) -> ChannelField:
    # shared by contrast and denoise: fix the death value, scale the offset
    if scale == 1.0:
        return field.with_values(field.values.copy())
    out = field.values.copy()
    flat = out.ravel()
    idx = _subtree_pixels(graph, subtree)
    flat[idx] = pair.death + (flat[idx] - pair.death) * scale
    return field.with_values(out)


def apply_contrast(field: ChannelField, graph: SuperPixelGraph, subtree, pair: FeaturePair, scale: float) -> ChannelField:
    """Fix the saddle value and linearly stretch the rest of the subtree."""
    check_scale(EditOp.CONTRAST, scale)
    return _stretch(field, graph, subtree, pair, scale)


def apply_denoise(field: ChannelField, graph: SuperPixelGraph, subtree, pair: FeaturePair, scale: float) -> ChannelField:
    """Linearly collapse the subtree toward the death value; s=0 flattens it."""
    check_scale(EditOp.DENOISE, scale)
    return _stretch(field, graph, subtree, pair, scale)


def apply_brightness(field: ChannelField, graph: SuperPixelGraph, subtree, pair: FeaturePair, scale: float) -> ChannelField:
    """Shift the whole subtree uniformly; out-of-range values survive until write-back."""
    check_scale(EditOp.BRIGHTNESS, scale)
    if scale == 0.0:
        return field.with_values(field.values.copy())
    out = field.values.copy()
    flat = out.ravel()
    idx = _subtree_pixels(graph, subtree)
    flat[idx] = flat[idx] + scale
    return field.with_values(out)


def apply_gamma(field: ChannelField, graph: SuperPixelGraph, subtree, pair: FeaturePair, gamma: float) -> ChannelField:
    """Normalize subtree values to [death, birth], gamma-correct, re-interpolate."""
    check_scale(EditOp.GAMMA, gamma)
    if pair.birth == pair.death:
        raise ZeroPersistenceError("gamma correction needs persistence > 0")
    if gamma == 1.0:
        return field.with_values(field.values.copy())
    out = field.values.copy()
    flat = out.ravel()
    idx = _subtree_pixels(graph, subtree)
    normalized = (flat[idx] - pair.death) / (pair.birth - pair.death)
    corrected = normalized**gamma
    flat[idx] = pair.death * (1.0 - corrected) + pair.birth * corrected
    return field.with_values(out)


_DISPATCH = {
    EditOp.CONTRAST: apply_contrast,
    EditOp.DENOISE: apply_denoise,
    EditOp.BRIGHTNESS: apply_brightness,
    EditOp.GAMMA: apply_gamma,
}


def apply_transfer(field: ChannelField, graph: SuperPixelGraph, subtree, pair: FeaturePair, op: EditOp, scale: float) -> ChannelField:
    return _DISPATCH[op](field, graph, subtree, pair, scale)


def apply_edit(session, req: EditRequest) -> int:
    """Apply an edit to the session's current selection and recompute.

    Returns the new revision. Pair ids are revision-scoped, so the
    selection is cleared afterwards.
    """
    return session.apply(req)
