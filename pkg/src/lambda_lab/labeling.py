"""Labelings, the L(h,k) checker, and closed-form lambda values."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import InvalidSizeError, MissingLabelError, UnsupportedRegimeError
from .graphs import Graph, second_neighbors


@dataclass(frozen=True)
class Labeling:
    """Total map vertex id -> non-negative integer label."""

    labels: tuple[int, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        missing = [v for v, x in enumerate(labels) if x is None]
        if missing:
            raise MissingLabelError(missing)
        labels = tuple(int(x) for x in labels)
        if any(x < 0 for x in labels):
            raise ValueError("labels must be non-negative")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int], vertex_count: int) -> "Labeling":
        missing = [v for v in range(vertex_count) if v not in mapping]
        if missing:
            raise MissingLabelError(missing)
        return cls(tuple(mapping[v] for v in range(vertex_count)))

    @property
    def span(self) -> int:
        return max(self.labels, default=0)

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, v: int) -> int:
        return self.labels[v]

    def to_json(self, graph_key: str = "") -> str:
        return json.dumps({"graph": graph_key, "labels": list(self.labels), "span": self.span})

    @classmethod
    def from_json(cls, text: Union[str, bytes]) -> "Labeling":
        """Parse the JSON form. A stored ``span`` is ignored; it is recomputed."""
        data = json.loads(text)
        return cls(tuple(data["labels"]))


@dataclass(frozen=True)
class Violation:
    u: int
    v: int
    dist: int
    required_gap: int
    actual_gap: int

    def __str__(self):
        return f"({self.u},{self.v}) d={self.dist} gap={self.actual_gap} need={self.required_gap}"


def verify(g: Graph, lab: Union[Labeling, Sequence[int]], h: int, k: int) -> list[Violation]:
    """All pairs breaking the L(h,k) condition, sorted by ``(u, v)``.

    An empty list means the labeling is valid.
    """
    labels = lab.labels if isinstance(lab, Labeling) else tuple(lab)
    n = g.vertex_count
    if len(labels) < n or any(x is None for x in labels[:n]):
        missing = [v for v in range(n) if v >= len(labels) or labels[v] is None]
        raise MissingLabelError(missing)
    if len(labels) > n:
        raise ValueError(f"labeling has {len(labels)} entries for a graph of order {n}")
    out = []
    far = second_neighbors(g)
    for u in range(n):
        lu = labels[u]
        pairs = [(v, 1) for v in g.adjacency[u] if v > u] + [(v, 2) for v in far[u] if v > u]
        pairs.sort()
        for v, d in pairs:
            need = h if d == 1 else k
            gap = abs(lu - labels[v])
            if gap < need:
                out.append(Violation(u, v, d, need, gap))
    return out


def is_valid(g: Graph, lab, h: int = 1, k: int = 1) -> bool:
    return not verify(g, lab, h, k)


def lambda_path(m: int) -> int:
    """lambda_1^1 of the path on ``m`` vertices."""
    if m < 2:
        raise InvalidSizeError("lambda_path needs m >= 2")
    return 1 if m == 2 else 2


def lambda_cycle(n: int) -> int:
    """lambda_1^1 of C_n: 2 when 3 | n, 4 for C_5, otherwise 3."""
    if n < 3:
        raise InvalidSizeError("lambda_cycle needs n >= 3")
    if n % 3 == 0:
        return 2
    return 4 if n == 5 else 3


def star_lower_bound(g: Graph, h: int, k: int) -> int:
    """(Delta - 1) k + h, the lambda_h^k value of the largest star at a vertex.

    Valid as a lower bound for ``g`` whenever h >= k.
    """
    if h < k:
        raise UnsupportedRegimeError(f"star bound requires h >= k (got h={h}, k={k})")
    delta = g.max_degree
    if delta == 0:
        return 0
    return (delta - 1) * k + h


def lambda_of_union(spans: Iterable[int]) -> int:
    spans = list(spans)
    if not spans:
        raise ValueError("lambda_of_union needs at least one component span")
    return max(spans)


def render_grid(g: Graph, lab: Optional[Labeling] = None, shape: Optional[tuple[int, int]] = None) -> str:
    """Text grid with row i per line and column j per field; "." marks absent positions.

    Without a labeling, vertex ids are shown instead of labels.
    """
    if g.coords is None:
        raise ValueError("grid rendering needs a product graph")
    m, n = shape or g.shape or (max(i for i, _ in g.coords) + 1, max(j for _, j in g.coords) + 1)
    cells = [["."] * n for _ in range(m)]
    for v, (i, j) in enumerate(g.coords):
        cells[i][j] = str(lab[v] if lab is not None else v)
    width = max(len(c) for row in cells for c in row)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells) + "\n"
