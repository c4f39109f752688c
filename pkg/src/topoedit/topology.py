"""Sweep-based merge trees, contour tree assembly, and feature pairing.

Both sweeps use the same total order on nodes, (value, node id): the join
sweep inserts in ascending order, the split sweep in exactly the reverse.
Sharing one total order keeps the two trees consistent when non-adjacent
super-pixels carry equal values, and makes every structure bit-reproducible
across runs.

Feature pairing runs the elder rule on the join and split trees
independently, and feature regions are strict sub/superlevel components of
the super-pixel graph. Neither depends on the merged contour tree: on
plateau-heavy inputs the pixel-graph model can admit no tree that is
simultaneously faithful to both sweep directions, and the merge is then a
best-effort artifact for inspection rather than the source of truth.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import MalformedTreesError, SaddleNotFoundError
from .field import SuperPixelGraph


class TreeKind(Enum):
    JOIN = "join"
    SPLIT = "split"


class FeatureKind(Enum):
    JOIN = "join"
    SPLIT = "split"
    GLOBAL = "global"


@dataclass(frozen=True)
class AugmentedTree:
    """Merge tree over every super-pixel, in sweep insertion order.

    ``parent[v]`` is the node whose insertion absorbed v's component
    (-1 for the root, which is the last node inserted). ``children[v]``
    lists the component tops that attached to v when it was inserted.
    """

    kind: TreeKind
    graph: SuperPixelGraph
    order: np.ndarray
    parent: np.ndarray
    children: tuple

    @property
    def node_values(self) -> np.ndarray:
        return self.graph.node_values

    @property
    def node_count(self) -> int:
        return len(self.graph.node_values)

    @property
    def root(self) -> int:
        return int(self.order[-1])

    def leaves(self) -> list:
        return [v for v in range(self.node_count) if not self.children[v]]


@dataclass(frozen=True)
class AugmentedContourTree:
    """Contour tree still containing every super-pixel."""

    graph: SuperPixelGraph
    join_tree: AugmentedTree
    split_tree: AugmentedTree
    edges: tuple
    adjacency: tuple

    @property
    def node_values(self) -> np.ndarray:
        return self.graph.node_values

    @property
    def node_count(self) -> int:
        return len(self.graph.node_values)

    def up_degree(self, v: int) -> int:
        values = self.node_values
        return sum(1 for u in self.adjacency[v] if (values[u], u) > (values[v], v))

    def down_degree(self, v: int) -> int:
        values = self.node_values
        return sum(1 for u in self.adjacency[v] if (values[u], u) < (values[v], v))


@dataclass(frozen=True)
class ContourTree:
    """Critical-node skeleton; each edge remembers the regular nodes it absorbed."""

    act: AugmentedContourTree
    critical_nodes: tuple
    edges: tuple  # (low node, high node, absorbed regular nodes low->high)

    @property
    def node_values(self) -> np.ndarray:
        return self.act.node_values

    @property
    def node_count(self) -> int:
        return len(self.critical_nodes)


@dataclass(frozen=True)
class FeaturePair:
    """Birth/death pair of critical nodes.

    ``subtree`` (super-pixel ids) and ``volume`` (pixel count) are filled
    on demand; pairing itself only needs the trees.
    """

    pair_id: int
    kind: FeatureKind
    extremum: int
    saddle: int
    birth: float
    death: float
    subtree: frozenset | None = None
    volume: int | None = None

    @property
    def persistence(self) -> float:
        return abs(self.birth - self.death)

    def with_region(self, subtree, volume: int) -> "FeaturePair":
        return replace(self, subtree=subtree, volume=volume)


def _sweep_order(values: np.ndarray, kind: TreeKind) -> np.ndarray:
    ids = np.arange(len(values), dtype=np.int64)
    order = np.lexsort((ids, values))
    return order if kind is TreeKind.JOIN else order[::-1]


def _build_merge_tree(graph: SuperPixelGraph, kind: TreeKind) -> AugmentedTree:
    n = graph.node_count
    order = _sweep_order(graph.node_values, kind)
    parent = np.full(n, -1, dtype=np.int64)
    children: list = [[] for _ in range(n)]
    inserted = np.zeros(n, dtype=bool)

    uf_parent = list(range(n))
    comp_top = list(range(n))

    def find(x: int) -> int:
        root = x
        while uf_parent[root] != root:
            root = uf_parent[root]
        while uf_parent[x] != root:
            uf_parent[x], x = root, uf_parent[x]
        return root

    adjacency = graph.adjacency
    for v in order.tolist():
        roots = []
        for u in adjacency[v].tolist():
            if inserted[u]:
                r = find(u)
                if r not in roots:
                    roots.append(r)
        for r in roots:
            top = comp_top[r]
            parent[top] = v
            children[v].append(top)
            uf_parent[r] = v
        comp_top[v] = v
        inserted[v] = True
    return AugmentedTree(
        kind=kind,
        graph=graph,
        order=order,
        parent=parent,
        children=tuple(tuple(ch) for ch in children),
    )


def build_join_tree(graph: SuperPixelGraph) -> AugmentedTree:
    """Ascending sweep: leaves are local minima, root is the global maximum."""
    return _build_merge_tree(graph, TreeKind.JOIN)


def build_split_tree(graph: SuperPixelGraph) -> AugmentedTree:
    """Descending sweep: leaves are local maxima, root is the global minimum."""
    return _build_merge_tree(graph, TreeKind.SPLIT)


def merge_to_contour_tree(join: AugmentedTree, split: AugmentedTree) -> AugmentedContourTree:
    """Combine join and split trees by repeatedly peeling transferable leaves.

    A node is peeled when it is a leaf in one tree and regular in the other;
    its single incident arc becomes a contour-tree edge and the node is
    spliced out of the other tree. A node that becomes a leaf in *both*
    trees while others remain has already received all its edges from its
    neighbours' peels and is dropped without adding an arc (this only
    happens on plateau-degenerate inputs that admit no consistent tree).
    """
    if join.graph is not split.graph and not (
        join.node_count == split.node_count
        and np.array_equal(join.node_values, split.node_values)
    ):
        raise MalformedTreesError("join and split trees cover different node sets")
    if join.kind is not TreeKind.JOIN or split.kind is not TreeKind.SPLIT:
        raise MalformedTreesError("arguments must be (join tree, split tree)")

    graph = join.graph
    n = join.node_count
    if n == 1:
        return AugmentedContourTree(
            graph=graph, join_tree=join, split_tree=split, edges=(), adjacency=((),)
        )

    jparent = join.parent.copy()
    sparent = split.parent.copy()
    jkids = [set(ch) for ch in join.children]
    skids = [set(ch) for ch in split.children]
    removed = np.zeros(n, dtype=bool)
    alive = n
    edges = []
    queue = deque(range(n))

    def splice(parents, kids, v: int):
        p = parents[v]
        if kids[v]:
            child = next(iter(kids[v]))
            parents[child] = p
            if p != -1:
                kids[p].discard(v)
                kids[p].add(child)
        elif p != -1:
            kids[p].discard(v)
        return p

    while alive > 1 and queue:
        v = queue.popleft()
        if removed[v]:
            continue
        touched = ()
        if not jkids[v] and not skids[v]:
            # fully wired by neighbouring peels; drop without an arc
            if jparent[v] != -1:
                jkids[jparent[v]].discard(v)
            if sparent[v] != -1:
                skids[sparent[v]].discard(v)
            touched = (jparent[v], sparent[v])
        elif not jkids[v] and len(skids[v]) == 1 and jparent[v] != -1:
            partner = jparent[v]
            jkids[partner].discard(v)
            other = splice(sparent, skids, v)
            edges.append((v, partner))
            touched = (partner, other)
        elif not skids[v] and len(jkids[v]) == 1 and sparent[v] != -1:
            partner = sparent[v]
            skids[partner].discard(v)
            other = splice(jparent, jkids, v)
            edges.append((v, partner))
            touched = (partner, other)
        else:
            continue
        removed[v] = True
        alive -= 1
        for w in touched:
            if w != -1 and not removed[w]:
                queue.append(w)

    adjacency: list = [[] for _ in range(n)]
    for u, w in edges:
        adjacency[u].append(w)
        adjacency[w].append(u)
    canonical = tuple(sorted((min(u, w), max(u, w)) for u, w in edges))
    return AugmentedContourTree(
        graph=graph,
        join_tree=join,
        split_tree=split,
        edges=canonical,
        adjacency=tuple(tuple(sorted(a)) for a in adjacency),
    )


def _split_neighbors(act: AugmentedContourTree):
    """Per-node neighbours partitioned into (below, above) in sweep order."""
    values = act.node_values
    down: list = [[] for _ in range(act.node_count)]
    up: list = [[] for _ in range(act.node_count)]
    for v in range(act.node_count):
        vk = (values[v], v)
        for u in act.adjacency[v]:
            if (values[u], u) < vk:
                down[v].append(u)
            else:
                up[v].append(u)
    return down, up


def reduce_regular_nodes(act: AugmentedContourTree) -> ContourTree:
    """Contract maximal chains of regular nodes into single edges."""
    down, up = _split_neighbors(act)
    regular = [len(down[v]) == 1 and len(up[v]) == 1 for v in range(act.node_count)]
    criticals = tuple(v for v in range(act.node_count) if not regular[v])
    edges = []
    for c in criticals:
        for start in up[c]:
            absorbed = []
            w = start
            while regular[w]:
                absorbed.append(w)
                w = up[w][0]
            edges.append((c, w, tuple(absorbed)))
    return ContourTree(
        act=act,
        critical_nodes=criticals,
        edges=tuple(sorted(edges, key=lambda e: (e[0], e[1]))),
    )


def _elder_pairs(tree: AugmentedTree):
    """Elder-rule events on one merge tree.

    Walk nodes in insertion order keeping, per component, the elder: the
    extremum inserted first (most extreme value, ties to the earlier id in
    sweep order). Where k >= 2 components meet, the k-1 younger elders die.
    Returns (events, survivor); events are (extremum, saddle) in insertion
    order.
    """
    values = tree.node_values
    if tree.kind is TreeKind.JOIN:
        elder_key = lambda v: (values[v], v)
    else:
        elder_key = lambda v: (-values[v], -v)
    elder = {}
    events = []
    for v in tree.order.tolist():
        kids = tree.children[v]
        if not kids:
            elder[v] = v
            continue
        champions = sorted((elder[c] for c in kids), key=elder_key)
        for dying in champions[1:]:
            events.append((dying, v))
        elder[v] = champions[0]
    return events, elder[tree.root]


def pair_critical_points(ct: ContourTree) -> list:
    """Pair births with deaths by the elder rule.

    Join saddles kill the younger of the merging minima branches; split
    saddles kill the younger merging maxima branch; the two surviving
    extrema form the global pair, emitted once (diagram layers render it
    in both orientations). A saddle merging k > 2 branches yields k-1
    pairs sharing that saddle. Computed on the join and split trees, so
    the result is well defined even when the merged tree is degenerate.
    """
    values = ct.node_values
    join_events, global_min = _elder_pairs(ct.act.join_tree)
    split_events, global_max = _elder_pairs(ct.act.split_tree)

    pairs = []
    for extremum, saddle in join_events:
        pairs.append(
            FeaturePair(
                pair_id=len(pairs),
                kind=FeatureKind.JOIN,
                extremum=extremum,
                saddle=saddle,
                birth=float(values[extremum]),
                death=float(values[saddle]),
            )
        )
    for extremum, saddle in split_events:
        pairs.append(
            FeaturePair(
                pair_id=len(pairs),
                kind=FeatureKind.SPLIT,
                extremum=extremum,
                saddle=saddle,
                birth=float(values[extremum]),
                death=float(values[saddle]),
            )
        )
    pairs.append(
        FeaturePair(
            pair_id=len(pairs),
            kind=FeatureKind.GLOBAL,
            extremum=global_min,
            saddle=global_max,
            birth=float(values[global_min]),
            death=float(values[global_max]),
        )
    )
    return pairs


def extract_feature_subtree(act: AugmentedContourTree, pair: FeaturePair) -> frozenset:
    """Super-pixels of the region that died at ``pair.saddle``.

    For a join feature this is the connected component of the strict
    sublevel set below the death value that contains the extremum, plus
    the saddle itself; split features use the strict superlevel set. The
    global pair covers the whole domain. Components are taken on the
    super-pixel graph, which the augmented tree preserves by construction.
    """
    graph = act.graph
    n = act.node_count
    if pair.kind is FeatureKind.GLOBAL:
        return frozenset(range(n))
    values = act.node_values
    if not (0 <= pair.saddle < n) or values[pair.saddle] != pair.death:
        raise SaddleNotFoundError(f"saddle {pair.saddle} does not match the tree")
    if not (0 <= pair.extremum < n) or values[pair.extremum] != pair.birth:
        raise SaddleNotFoundError(f"extremum {pair.extremum} does not match the tree")

    death = pair.death
    if pair.kind is FeatureKind.JOIN:
        keep = lambda u: values[u] < death
    else:
        keep = lambda u: values[u] > death
    seen = {pair.extremum}
    stack = [pair.extremum]
    while stack:
        v = stack.pop()
        for u in graph.adjacency[v].tolist():
            if u not in seen and keep(u):
                seen.add(u)
                stack.append(u)
    seen.add(pair.saddle)
    return frozenset(seen)


def region_volume(graph: SuperPixelGraph, subtree) -> int:
    """Pixel count covered by a set of super-pixel ids."""
    return int(sum(len(graph.members[v]) for v in subtree))


def complete_pairs(pairs, act: AugmentedContourTree, graph: SuperPixelGraph) -> list:
    """Attach subtree and volume to every pair."""
    out = []
    for p in pairs:
        region = extract_feature_subtree(act, p)
        out.append(p.with_region(region, region_volume(graph, region)))
    return out


def pair_volumes(pairs, act: AugmentedContourTree, graph: SuperPixelGraph) -> list:
    """Attach volumes only; subtrees are discarded to keep memory flat."""
    out = []
    for p in pairs:
        region = extract_feature_subtree(act, p)
        out.append(p.with_region(None, region_volume(graph, region)))
    return out
