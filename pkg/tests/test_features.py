import numpy as np
import pytest

from topoedit import (
    BrushRect,
    FeatureKind,
    brush_select,
    build_mask,
    filter_inclusions,
    persistence_diagram,
    persistence_volume_diagram,
)
from topoedit.errors import DimensionMismatchError
from topoedit.features import mask_to_png_bytes
from topoedit.session import analyze_field
from topoedit.topology import complete_pairs

from conftest import field_of


def _completed(analysis):
    return complete_pairs(analysis.pairs, analysis.act, analysis.graph)


# ---------------------------------------------------------------------------
# diagrams


def test_terrain_diagram_sidedness(terrain_analysis, terrain_ids):
    points = persistence_diagram(terrain_analysis.pairs)
    by_kind = {}
    for pt in points:
        by_kind.setdefault(pt.kind, []).append(pt)
    # join features sit above the diagonal (upper left), splits below
    assert len(by_kind[FeatureKind.JOIN]) == 2
    assert all(pt.y > pt.x for pt in by_kind[FeatureKind.JOIN])
    assert len(by_kind[FeatureKind.SPLIT]) == 1
    assert all(pt.y < pt.x for pt in by_kind[FeatureKind.SPLIT])
    # the global pair is emitted in both orientations
    globals_ = by_kind[FeatureKind.GLOBAL]
    assert sorted((pt.x, pt.y) for pt in globals_) == [(0.0, 14.0), (14.0, 0.0)]
    assert len({pt.pair_id for pt in globals_}) == 1


def test_constant_image_diagram_has_two_global_points():
    a = analyze_field(field_of(np.full((3, 3), 5.0)), 8)
    points = persistence_diagram(a.pairs)
    assert len(points) == 2
    assert all(pt.kind is FeatureKind.GLOBAL for pt in points)


def test_line5_diagram_points(line5_analysis):
    points = persistence_diagram(line5_analysis.pairs)
    coords = sorted((pt.kind.value, pt.x, pt.y) for pt in points)
    assert coords == [
        ("global", 0.0, 4.0),
        ("global", 4.0, 0.0),
        ("join", 1.0, 3.0),
        ("split", 2.0, 0.0),
        ("split", 3.0, 1.0),
    ]


def test_terrain_pv_point_for_mo(terrain_analysis, terrain_ids):
    points = persistence_volume_diagram(terrain_analysis.pairs)
    m_pair = next(p for p in terrain_analysis.pairs if p.extremum == terrain_ids["m"])
    pt = next(pt for pt in points if pt.pair_id == m_pair.pair_id)
    assert (pt.x, pt.y) == (5.0, 4)


def test_global_pv_volume_is_pixel_count(terrain_analysis):
    points = persistence_volume_diagram(terrain_analysis.pairs)
    gp = next(p for p in terrain_analysis.pairs if p.kind is FeatureKind.GLOBAL)
    pt = next(pt for pt in points if pt.pair_id == gp.pair_id)
    assert pt.y == 15
    # emitted once, unlike the persistence diagram
    assert sum(1 for q in points if q.pair_id == gp.pair_id) == 1


def test_line5_pv_join_point(line5_analysis):
    points = persistence_volume_diagram(line5_analysis.pairs)
    jp = next(p for p in line5_analysis.pairs if p.kind is FeatureKind.JOIN)
    pt = next(pt for pt in points if pt.pair_id == jp.pair_id)
    assert (pt.x, pt.y) == (2.0, 2)


def test_pv_requires_volumes(line5_analysis):
    stripped = [p.with_region(None, None) for p in line5_analysis.pairs]
    with pytest.raises(ValueError):
        persistence_volume_diagram(stripped)


# ---------------------------------------------------------------------------
# brushing


def test_brush_whole_range_selects_everything(line5_analysis):
    points = persistence_diagram(line5_analysis.pairs)
    rect = BrushRect("pd", (-1.0, 5.0), (-1.0, 5.0))
    assert brush_select(points, rect) == {p.pair_id for p in line5_analysis.pairs}


def test_brush_empty_region(line5_analysis):
    points = persistence_diagram(line5_analysis.pairs)
    assert brush_select(points, BrushRect("pd", (100.0, 101.0), (0.0, 1.0))) == set()


def test_brush_is_boundary_exclusive(line5_analysis):
    points = persistence_volume_diagram(line5_analysis.pairs)
    jp = next(p for p in line5_analysis.pairs if p.kind is FeatureKind.JOIN)
    # the join point sits at (2, 2); rects with 2 on the edge must miss it
    assert jp.pair_id not in brush_select(points, BrushRect("pv", (2.0, 3.0), (1.0, 3.0)))
    assert jp.pair_id not in brush_select(points, BrushRect("pv", (1.0, 2.0), (1.0, 3.0)))
    assert jp.pair_id in brush_select(points, BrushRect("pv", (1.9, 2.1), (1.9, 2.1)))


def test_brush_pv_mid_rect_on_line5(line5_analysis):
    # all three interior features of the 1x5 line sit at persistence 2,
    # volume 2, so this rectangle picks up exactly those three
    points = persistence_volume_diagram(line5_analysis.pairs)
    got = brush_select(points, BrushRect("pv", (1.5, 2.5), (1.0, 3.0)))
    interior = {p.pair_id for p in line5_analysis.pairs if p.kind is not FeatureKind.GLOBAL}
    assert got == interior and len(got) == 3


def test_brush_rect_validation():
    with pytest.raises(ValueError):
        BrushRect("pd", (1.0, 1.0), (0.0, 2.0))
    with pytest.raises(ValueError):
        BrushRect("pd", (0.0, 1.0), (3.0, 2.0))
    with pytest.raises(ValueError):
        BrushRect("scatter", (0.0, 1.0), (2.0, 3.0))


# ---------------------------------------------------------------------------
# inclusion filtering


def test_single_selection_unchanged(line5_analysis):
    pairs = _completed(line5_analysis)
    assert filter_inclusions([pairs[0]]) == {pairs[0].pair_id}


def test_nested_pair_keeps_outer(line5_analysis):
    pairs = _completed(line5_analysis)
    jp = next(p for p in pairs if p.kind is FeatureKind.JOIN)
    gp = next(p for p in pairs if p.kind is FeatureKind.GLOBAL)
    assert filter_inclusions([jp, gp]) == {gp.pair_id}


def test_disjoint_pairs_both_kept(terrain_analysis, terrain_ids):
    pairs = _completed(terrain_analysis)
    lo = next(p for p in pairs if p.extremum == terrain_ids["l"])
    mo = next(p for p in pairs if p.extremum == terrain_ids["m"])
    assert filter_inclusions([lo, mo]) == {lo.pair_id, mo.pair_id}


def test_identical_subtrees_keep_lower_id(line5_analysis):
    # the join feature (1,3) and split feature (3,1) cover the same two
    # nodes {value-1, value-3}; the tie keeps the smaller pair id
    pairs = _completed(line5_analysis)
    jp = next(p for p in pairs if p.kind is FeatureKind.JOIN)
    sp = next(p for p in pairs if p.kind is FeatureKind.SPLIT and p.subtree == jp.subtree)
    kept = filter_inclusions([jp, sp])
    assert kept == {min(jp.pair_id, sp.pair_id)}


def test_filter_is_idempotent():
    rng = np.random.default_rng(31)
    for _ in range(20):
        vals = rng.integers(0, 6, size=(4, 4)).astype(float)
        a = analyze_field(field_of(vals), 8)
        pairs = _completed(a)
        once = filter_inclusions(pairs)
        kept_pairs = [p for p in pairs if p.pair_id in once]
        assert filter_inclusions(kept_pairs) == once


# ---------------------------------------------------------------------------
# masks


def test_terrain_mo_mask(terrain_analysis, terrain_ids):
    pairs = _completed(terrain_analysis)
    mo = next(p for p in pairs if p.extremum == terrain_ids["m"])
    mask = build_mask([mo.subtree], terrain_analysis.graph, 5, 3)
    want = np.zeros((3, 5), dtype=bool)
    for letter in "mino":
        r, c = divmod(terrain_ids[letter], 5)
        want[r, c] = True
    assert np.array_equal(mask.pixels, want)
    assert mask.popcount() == 4


def test_empty_selection_mask(terrain_analysis):
    mask = build_mask([], terrain_analysis.graph, 5, 3)
    assert mask.popcount() == 0


def test_global_selection_mask_is_full(terrain_analysis):
    pairs = _completed(terrain_analysis)
    gp = next(p for p in pairs if p.kind is FeatureKind.GLOBAL)
    mask = build_mask([gp.subtree], terrain_analysis.graph, 5, 3)
    assert mask.popcount() == 15


def test_mask_dimension_mismatch(terrain_analysis):
    with pytest.raises(DimensionMismatchError):
        build_mask([], terrain_analysis.graph, 4, 3)


def test_mask_popcount_equals_volume_sum_for_disjoint_joins():
    rng = np.random.default_rng(32)
    for _ in range(25):
        vals = rng.integers(0, 8, size=(5, 5)).astype(float)
        a = analyze_field(field_of(vals), 8)
        pairs = _completed(a)
        joins = [p for p in pairs if p.kind is FeatureKind.JOIN]
        kept = filter_inclusions(joins) if joins else set()
        kept_pairs = [p for p in joins if p.pair_id in kept]
        mask = build_mask([p.subtree for p in kept_pairs], a.graph, 5, 5)
        # outermost join subtrees are disjoint except possibly at shared
        # saddles, which boolean masking counts once
        union = set()
        overlap = 0
        for p in kept_pairs:
            for node in p.subtree:
                pix = {int(x) for x in a.graph.members[node]}
                overlap += len(pix & union)
                union |= pix
        assert mask.popcount() == sum(p.volume for p in kept_pairs) - overlap


def test_pd_and_pv_selection_of_same_pairs_give_same_mask(terrain_analysis, terrain_ids):
    pairs = _completed(terrain_analysis)
    mo = next(p for p in pairs if p.extremum == terrain_ids["m"])
    pd_ids = brush_select(
        persistence_diagram(pairs), BrushRect("pd", (1.5, 2.5), (6.5, 7.5))
    )
    pv_ids = brush_select(
        persistence_volume_diagram(pairs), BrushRect("pv", (4.5, 5.5), (3.5, 4.5))
    )
    assert pd_ids == pv_ids == {mo.pair_id}
    by_id = {p.pair_id: p for p in pairs}
    mask_pd = build_mask([by_id[i].subtree for i in pd_ids], terrain_analysis.graph, 5, 3)
    mask_pv = build_mask([by_id[i].subtree for i in pv_ids], terrain_analysis.graph, 5, 3)
    assert np.array_equal(mask_pd.pixels, mask_pv.pixels)


def test_mask_png_export_is_one_bit(terrain_analysis, terrain_ids):
    from PIL import Image
    from io import BytesIO

    pairs = _completed(terrain_analysis)
    mo = next(p for p in pairs if p.extremum == terrain_ids["m"])
    mask = build_mask([mo.subtree], terrain_analysis.graph, 5, 3)
    data = mask_to_png_bytes(mask)
    img = Image.open(BytesIO(data))
    assert img.mode == "1"
    assert img.size == (5, 3)
