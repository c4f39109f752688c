"""Persistence diagrams, brush selection, inclusion filtering, and masks."""

from __future__ import annotations

from dataclasses import dataclass
from io import BytesIO

import numpy as np
from PIL import Image

from .errors import DimensionMismatchError
from .field import SuperPixelGraph
from .topology import FeatureKind

PD = "pd"
PV = "pv"


@dataclass(frozen=True)
class DiagramPoint:
    """Persistence-diagram point: x = birth, y = death."""

    pair_id: int
    x: float
    y: float
    kind: FeatureKind


@dataclass(frozen=True)
class PVPoint:
    """Persistence-volume point: x = persistence (linear), y = volume.

    The log scaling of the volume axis is a rendering concern; the stored
    value is the raw pixel count.
    """

    pair_id: int
    x: float
    y: int
    kind: FeatureKind


@dataclass(frozen=True)
class BrushRect:
    """Axis-aligned selection rectangle in diagram data coordinates."""

    diagram: str
    x: tuple
    y: tuple

    def __post_init__(self):
        if self.diagram not in (PD, PV):
            raise ValueError(f"diagram must be '{PD}' or '{PV}', got {self.diagram!r}")
        if not (self.x[0] < self.x[1]) or not (self.y[0] < self.y[1]):
            raise ValueError("brush ranges must be non-degenerate (min < max)")

    def contains(self, x: float, y: float) -> bool:
        # boundary exclusive: points exactly on an edge are not selected
        return self.x[0] < x < self.x[1] and self.y[0] < y < self.y[1]


@dataclass(frozen=True)
class BinaryMask:
    """Full-resolution boolean mask, shape (height, width)."""

    pixels: np.ndarray

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def popcount(self) -> int:
        return int(self.pixels.sum())


def persistence_diagram(pairs) -> list:
    """One point per join/split feature; the global pair appears twice,
    once per orientation."""
    points = []
    for p in pairs:
        if p.kind is FeatureKind.GLOBAL:
            points.append(DiagramPoint(p.pair_id, p.birth, p.death, p.kind))
            points.append(DiagramPoint(p.pair_id, p.death, p.birth, p.kind))
        else:
            points.append(DiagramPoint(p.pair_id, p.birth, p.death, p.kind))
    return points


def persistence_volume_diagram(pairs) -> list:
    points = []
    for p in pairs:
        if p.volume is None:
            raise ValueError(f"pair {p.pair_id} has no volume; attach regions first")
        points.append(PVPoint(p.pair_id, p.persistence, p.volume, p.kind))
    return points


def brush_select(points, rect: BrushRect) -> set:
    """Pair ids whose diagram point lies strictly inside the rectangle."""
    return {pt.pair_id for pt in points if rect.contains(pt.x, pt.y)}


def filter_inclusions(pairs) -> set:
    """Keep only outermost features among a selection.

    Drops any pair whose subtree is a subset of another selected pair's
    subtree; identical subtrees keep the lowest pair id.
    """
    chosen = set()
    items = []
    for p in pairs:
        if p.subtree is None:
            raise ValueError(f"pair {p.pair_id} has no subtree; attach regions first")
        items.append(p)
    for p in items:
        dominated = False
        for q in items:
            if q.pair_id == p.pair_id:
                continue
            if p.subtree < q.subtree:
                dominated = True
                break
            if p.subtree == q.subtree and q.pair_id < p.pair_id:
                dominated = True
                break
        if not dominated:
            chosen.add(p.pair_id)
    return chosen


def build_mask(subtrees, graph: SuperPixelGraph, width: int, height: int) -> BinaryMask:
    """Mark every pixel belonging to any super-pixel of any subtree."""
    if graph.width != width or graph.height != height:
        raise DimensionMismatchError(
            f"graph is {graph.width}x{graph.height}, expected {width}x{height}"
        )
    flat = np.zeros(width * height, dtype=bool)
    for subtree in subtrees:
        for node in subtree:
            flat[graph.members[node]] = True
    return BinaryMask(pixels=flat.reshape(height, width))


def mask_to_png_bytes(mask: BinaryMask) -> bytes:
    buf = BytesIO()
    Image.fromarray(mask.pixels).convert("1").save(buf, format="PNG")
    return buf.getvalue()
