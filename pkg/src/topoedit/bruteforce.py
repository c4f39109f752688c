"""Brute-force reference computations for verification.

Everything here works directly on the pixel grid by re-deriving connected
components at every distinct threshold with plain BFS. It shares no code
or data structures with the sweep implementation in :mod:`topoedit.topology`,
which is what makes it usable as an independent oracle (tests and the
``--seed-check`` CLI flag).
"""

from __future__ import annotations

import numpy as np


def _neighbors(r: int, c: int, height: int, width: int, connectivity: int):
    if connectivity == 4:
        steps = ((-1, 0), (1, 0), (0, -1), (0, 1))
    else:
        steps = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
    for dr, dc in steps:
        rr, cc = r + dr, c + dc
        if 0 <= rr < height and 0 <= cc < width:
            yield rr, cc


def _components(mask: np.ndarray, connectivity: int):
    """List of pixel-index sets, one per connected component of ``mask``."""
    height, width = mask.shape
    seen = np.zeros_like(mask, dtype=bool)
    comps = []
    for r in range(height):
        for c in range(width):
            if mask[r, c] and not seen[r, c]:
                stack = [(r, c)]
                seen[r, c] = True
                comp = set()
                while stack:
                    rr, cc = stack.pop()
                    comp.add(rr * width + cc)
                    for nr, nc in _neighbors(rr, cc, height, width, connectivity):
                        if mask[nr, nc] and not seen[nr, nc]:
                            seen[nr, nc] = True
                            stack.append((nr, nc))
                comps.append(comp)
    return comps


def _filtration_pairs(values: np.ndarray, connectivity: int, descending: bool):
    """(birth, death) values from component evolution across thresholds.

    Ascending: components of {f <= t}; a component's birth is its minimum
    value. When components coalesce at threshold t, every merging component
    except the one with the most extreme birth dies at t.
    """
    field = -values if descending else values
    levels = np.unique(field)
    prev: list = []  # (pixel set, birth value)
    pairs = []
    for t in levels:
        comps = _components(field <= t, connectivity)
        merged = []
        for comp in comps:
            inside = [
                (birth, old) for old, birth in prev if old & comp
            ]
            if inside:
                births = sorted(b for b, _ in inside)
                for b in births[1:]:
                    pairs.append((b, float(t)))
                merged.append((comp, births[0]))
            else:
                merged.append((comp, float(field.ravel()[min(comp)])))
        prev = [(comp, birth) for comp, birth in merged]
    if descending:
        pairs = [(-b, -d) for b, d in pairs]
    return pairs


def brute_force_pairs(values: np.ndarray, connectivity: int = 8):
    """Multiset of (kind, birth, death) for a 2d field.

    Kinds are "join", "split", and a single "global" pair spanning the
    field's value range.
    """
    values = np.asarray(values, dtype=np.float64)
    join = [("join", b, d) for b, d in _filtration_pairs(values, connectivity, descending=False)]
    split = [("split", b, d) for b, d in _filtration_pairs(values, connectivity, descending=True)]
    out = join + split
    out.append(("global", float(values.min()), float(values.max())))
    return sorted(out)


def brute_force_region(values: np.ndarray, connectivity: int, seed_pixel: int, death: float, kind: str):
    """Pixel set of the strict sub/superlevel component containing ``seed_pixel``.

    The saddle is *not* included; callers add its pixels themselves.
    """
    values = np.asarray(values, dtype=np.float64)
    if kind == "join":
        mask = values < death
    elif kind == "split":
        mask = values > death
    else:
        return set(range(values.size))
    for comp in _components(mask, connectivity):
        if seed_pixel in comp:
            return comp
    raise ValueError("seed pixel is not inside the strict level set")


def pairs_match(values: np.ndarray, computed_pairs, connectivity: int = 8) -> bool:
    """Compare a pairing result against the brute-force reference."""
    reference = brute_force_pairs(values, connectivity)
    got = sorted((p.kind.value, float(p.birth), float(p.death)) for p in computed_pairs)
    return got == reference
