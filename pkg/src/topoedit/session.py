"""Editing session: real-valued working image, per-channel analyses, selection.

The pipeline per channel is: extract field -> super-pixels -> join/split
trees -> augmented contour tree -> critical skeleton -> feature pairs with
volumes. Analyses are cached per revision and invalidated for every channel
derived from an edited one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import features, topology
from .edits import EditOp, EditRequest, apply_transfer
from .errors import InvalidPairIdError, NoSelectionError
from .field import (
    ChannelField,
    ChannelId,
    ImageRGB,
    SuperPixelGraph,
    build_superpixels,
    channel_values,
    quantize,
    recompose_rgb,
)
from .topology import FeatureKind, FeaturePair


@dataclass(frozen=True)
class ChannelAnalysis:
    """Everything derived from one channel at one revision."""

    field: ChannelField
    graph: SuperPixelGraph
    join_tree: topology.AugmentedTree
    split_tree: topology.AugmentedTree
    act: topology.AugmentedContourTree
    contour: topology.ContourTree
    pairs: tuple  # volumes attached, subtrees on demand
    pd_points: tuple
    pv_points: tuple

    def pair(self, pair_id: int) -> FeaturePair:
        if not (0 <= pair_id < len(self.pairs)):
            raise InvalidPairIdError(f"pair id {pair_id} does not exist at this revision")
        return self.pairs[pair_id]

    def pair_with_region(self, pair_id: int) -> FeaturePair:
        p = self.pair(pair_id)
        region = topology.extract_feature_subtree(self.act, p)
        return p.with_region(region, topology.region_volume(self.graph, region))


def analyze_field(field: ChannelField, connectivity: int = 8) -> ChannelAnalysis:
    """Run the full per-channel pipeline."""
    graph = build_superpixels(field, connectivity)
    join = topology.build_join_tree(graph)
    split = topology.build_split_tree(graph)
    act = topology.merge_to_contour_tree(join, split)
    contour = topology.reduce_regular_nodes(act)
    pairs = tuple(topology.pair_volumes(topology.pair_critical_points(contour), act, graph))
    return ChannelAnalysis(
        field=field,
        graph=graph,
        join_tree=join,
        split_tree=split,
        act=act,
        contour=contour,
        pairs=pairs,
        pd_points=tuple(features.persistence_diagram(pairs)),
        pv_points=tuple(features.persistence_volume_diagram(pairs)),
    )


# which cached analyses an edit invalidates; saturation/brightness write-backs
# recompose RGB, so they touch everything
_DERIVED = {
    ChannelId.RED: (ChannelId.RED, ChannelId.SATURATION, ChannelId.BRIGHTNESS),
    ChannelId.GREEN: (ChannelId.GREEN, ChannelId.SATURATION, ChannelId.BRIGHTNESS),
    ChannelId.BLUE: (ChannelId.BLUE, ChannelId.SATURATION, ChannelId.BRIGHTNESS),
    ChannelId.SATURATION: tuple(ChannelId),
    ChannelId.BRIGHTNESS: tuple(ChannelId),
}


@dataclass
class Selection:
    channel: ChannelId
    pair_ids: frozenset


class Session:
    """Single-image editing state with a monotonically increasing revision."""

    def __init__(self, image: ImageRGB, connectivity: int = 8):
        self.connectivity = connectivity
        self.rgb = image.as_float()
        self.revision = 0
        self.selection: Selection | None = None
        self.log: list = []
        self._analyses: dict = {}

    @property
    def height(self) -> int:
        return self.rgb.shape[0]

    @property
    def width(self) -> int:
        return self.rgb.shape[1]

    def field(self, channel: ChannelId) -> ChannelField:
        return ChannelField(values=channel_values(self.rgb, channel), channel=channel)

    def analysis(self, channel: ChannelId) -> ChannelAnalysis:
        cached = self._analyses.get(channel)
        if cached is None:
            cached = analyze_field(self.field(channel), self.connectivity)
            self._analyses[channel] = cached
        return cached

    def diagram_points(self, channel: ChannelId, kind: str):
        analysis = self.analysis(channel)
        return analysis.pd_points if kind == features.PD else analysis.pv_points

    # -- selection ----------------------------------------------------------

    def select(self, channel: ChannelId, kind: str, rects) -> frozenset:
        """Brush one diagram; unions with the existing same-channel selection.

        Returns the inclusion-filtered pair ids. Selecting on a different
        channel discards the previous selection.
        """
        points = self.diagram_points(channel, kind)
        picked = set()
        for rect in rects:
            picked |= features.brush_select(points, rect)
        if self.selection is not None and self.selection.channel is channel:
            picked |= set(self.selection.pair_ids)
        analysis = self.analysis(channel)
        enriched = [analysis.pair_with_region(pid) for pid in sorted(picked)]
        kept = features.filter_inclusions(enriched)
        self.selection = Selection(channel=channel, pair_ids=frozenset(kept))
        self.log.append(
            {
                "op": "select",
                "channel": channel.value,
                "diagram": kind,
                "rects": [{"x": [rect.x[0], rect.x[1]], "y": [rect.y[0], rect.y[1]]} for rect in rects],
            }
        )
        return self.selection.pair_ids

    def clear_selection(self) -> None:
        self.selection = None

    def selection_mask(self) -> features.BinaryMask:
        if self.selection is None or not self.selection.pair_ids:
            return features.BinaryMask(np.zeros((self.height, self.width), dtype=bool))
        analysis = self.analysis(self.selection.channel)
        subtrees = [
            analysis.pair_with_region(pid).subtree for pid in sorted(self.selection.pair_ids)
        ]
        return features.build_mask(subtrees, analysis.graph, self.width, self.height)

    # -- editing ------------------------------------------------------------

    def apply(self, req: EditRequest) -> int:
        if self.selection is None or not req.target:
            raise NoSelectionError("select features before editing")
        if req.channel is not self.selection.channel:
            raise InvalidPairIdError(
                f"selection is on {self.selection.channel.value}, edit targets {req.channel.value}"
            )
        analysis = self.analysis(req.channel)
        pairs = []
        for pid in sorted(req.target):
            pairs.append(analysis.pair_with_region(pid))

        working = analysis.field
        for pair in pairs:
            working = apply_transfer(working, analysis.graph, pair.subtree, pair, req.op, req.scale)

        self.rgb = recompose_rgb(self.rgb, req.channel, working.values)
        self.revision += 1
        for channel in _DERIVED[req.channel]:
            self._analyses.pop(channel, None)
        self.selection = None
        step = {"op": "edit", "kind": req.op.value, "scale": req.scale}
        if any(p.kind is FeatureKind.GLOBAL for p in pairs):
            step["global_edit"] = True
        self.log.append(step)
        return self.revision

    def apply_to_selection(self, op: EditOp, scale: float) -> int:
        if self.selection is None:
            raise NoSelectionError("select features before editing")
        req = EditRequest(
            op=op, scale=scale, channel=self.selection.channel, target=self.selection.pair_ids
        )
        return self.apply(req)

    # -- output -------------------------------------------------------------

    def render(self) -> ImageRGB:
        return ImageRGB(quantize(self.rgb))

    def log_lines(self) -> list:
        from . import script

        return script.serialize_steps(self.log)
