"""JSON views of graphs, trees, pairs, and diagrams.

Used for CLI dumps, the HTTP API, and debugging. All serializers sort keys
and emit plain lists so that identical inputs produce identical bytes.
"""

from __future__ import annotations

import json

from .field import SuperPixelGraph
from .topology import AugmentedContourTree, AugmentedTree, ContourTree, FeaturePair


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def graph_to_dict(graph: SuperPixelGraph) -> dict:
    return {
        "width": graph.width,
        "height": graph.height,
        "connectivity": graph.connectivity,
        "nodes": [
            {
                "id": i,
                "value": float(graph.node_values[i]),
                "pixels": [int(p) for p in graph.members[i]],
            }
            for i in range(graph.node_count)
        ],
        "adjacency": [[int(u) for u in adj] for adj in graph.adjacency],
    }


def tree_to_dict(tree: AugmentedTree) -> dict:
    return {
        "kind": tree.kind.value,
        "order": [int(v) for v in tree.order],
        "nodes": [
            {
                "id": v,
                "value": float(tree.node_values[v]),
                "parent": int(tree.parent[v]) if tree.parent[v] != -1 else None,
                "children": [int(c) for c in tree.children[v]],
            }
            for v in range(tree.node_count)
        ],
    }


def act_to_dict(act: AugmentedContourTree) -> dict:
    return {
        "values": [float(v) for v in act.node_values],
        "edges": [[int(u), int(w)] for u, w in act.edges],
    }


def contour_tree_to_dict(ct: ContourTree) -> dict:
    return {
        "critical_nodes": [int(v) for v in ct.critical_nodes],
        "edges": [
            {
                "low": int(lo),
                "high": int(hi),
                "absorbed": [int(v) for v in absorbed],
            }
            for lo, hi, absorbed in ct.edges
        ],
    }


def pair_to_dict(pair: FeaturePair, include_subtree: bool = False) -> dict:
    body = {
        "id": pair.pair_id,
        "kind": pair.kind.value,
        "extremum": pair.extremum,
        "saddle": pair.saddle,
        "birth": pair.birth,
        "death": pair.death,
        "persistence": pair.persistence,
        "volume": pair.volume,
    }
    if include_subtree and pair.subtree is not None:
        body["subtree"] = sorted(pair.subtree)
    return body


def pairs_to_dict(pairs, include_subtree: bool = False) -> list:
    return [pair_to_dict(p, include_subtree) for p in pairs]
