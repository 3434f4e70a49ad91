"""Distance patterns of repeated labels in a labeling of a product graph.

Used to spot-check the structural lemmas behind the lower bounds: which
distances separate equal labels within a row, and how far the nearest
repeat of each label is.
"""

from __future__ import annotations

from .graphs import Graph, bfs_distances
from .labeling import Labeling


def row_repeat_distances(g: Graph, lab: Labeling, interior_only: bool = True) -> dict[int, list[int]]:
    """For each row, the sorted graph distances between equal-label pairs in that row.

    With ``interior_only`` the first and last rows are skipped; only
    interior rows consist of degree-4 star centers. Pairs in different
    components are ignored.
    """
    if g.coords is None:
        raise ValueError("row audit needs a product graph")
    rows: dict[int, list[int]] = {}
    for v, (i, _) in enumerate(g.coords):
        rows.setdefault(i, []).append(v)
    top = max(rows)
    out = {}
    for i, vs in sorted(rows.items()):
        if interior_only and i in (0, top):
            continue
        ds = []
        for t, a in enumerate(vs):
            dist = bfs_distances(g, a)
            ds += [dist[b] for b in vs[t + 1:] if b in dist and lab[a] == lab[b]]
        out[i] = sorted(ds)
    return out


def nearest_repeat(g: Graph, lab: Labeling) -> list[int | None]:
    """Distance from each vertex to the closest other vertex with the same label."""
    out = []
    for u in range(g.vertex_count):
        dist = bfs_distances(g, u)
        ds = [d for v, d in dist.items() if v != u and lab[v] == lab[u]]
        out.append(min(ds) if ds else None)
    return out
