"""Paths, cycles, graph products, components and distances.

Graphs are immutable. Product graphs number the pair ``(i, j)`` as
``i * n + j`` where ``n`` is the order of the second factor, and keep the
pair in ``coords`` so grid positions survive component extraction.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import InvalidSizeError, VertexRangeError

Coord = tuple[int, int]


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph on vertices ``0 .. vertex_count - 1``.

    ``coords`` is set exactly when the graph came from a product; ``shape``
    then holds the factor orders ``(m, n)``.
    """

    adjacency: tuple[tuple[int, ...], ...]
    coords: Optional[tuple[Coord, ...]] = None
    shape: Optional[tuple[int, int]] = None
    name: str = ""
    _index: Optional[dict] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        adj = tuple(tuple(sorted(set(nb))) for nb in self.adjacency)
        object.__setattr__(self, "adjacency", adj)
        n = len(adj)
        for u, nb in enumerate(adj):
            for v in nb:
                if not 0 <= v < n:
                    raise VertexRangeError(f"neighbor {v} of {u} out of range")
                if v == u:
                    raise ValueError(f"self-loop at {u}")
        for u, nb in enumerate(adj):
            for v in nb:
                if u not in adj[v]:
                    raise ValueError(f"asymmetric adjacency: {u}->{v}")
        if self.coords is not None:
            coords = tuple((int(i), int(j)) for i, j in self.coords)
            if len(coords) != n:
                raise ValueError("coords length differs from vertex count")
            index = {c: v for v, c in enumerate(coords)}
            if len(index) != n:
                raise ValueError("coords are not injective")
            object.__setattr__(self, "coords", coords)
            object.__setattr__(self, "_index", index)

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    def __len__(self) -> int:
        return len(self.adjacency)

    @property
    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.adjacency) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nb in enumerate(self.adjacency) for v in nb if u < v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[self._check(v)])

    @property
    def max_degree(self) -> int:
        return max((len(nb) for nb in self.adjacency), default=0)

    def vertex_at(self, i: int, j: int) -> Optional[int]:
        """Vertex id at grid position ``(i, j)``, or None if absent."""
        if self._index is None:
            raise ValueError("graph has no grid coordinates")
        return self._index.get((i, j))

    def row(self, i: int) -> list[int]:
        """Vertices with first coordinate ``i`` (a row slice of a product)."""
        if self.coords is None:
            raise ValueError("graph has no grid coordinates")
        return [v for v, (a, _) in enumerate(self.coords) if a == i]

    def column(self, j: int) -> list[int]:
        if self.coords is None:
            raise ValueError("graph has no grid coordinates")
        return [v for v, (_, b) in enumerate(self.coords) if b == j]

    def _check(self, v: int) -> int:
        if not 0 <= v < len(self.adjacency):
            raise VertexRangeError(f"vertex {v} not in graph of order {len(self.adjacency)}")
        return v

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.adjacency == other.adjacency and self.coords == other.coords

    def __hash__(self):
        return hash((self.adjacency, self.coords))

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<Graph{label} |V|={self.vertex_count} |E|={self.edge_count}>"


def from_edges(vertex_count: int, edges: Iterable[tuple[int, int]], **kw) -> Graph:
    adj: list[set[int]] = [set() for _ in range(vertex_count)]
    for u, v in edges:
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise VertexRangeError(f"edge ({u}, {v}) out of range")
        adj[u].add(v)
        adj[v].add(u)
    return Graph(tuple(tuple(s) for s in adj), **kw)


def path(m: int) -> Graph:
    """Path on ``m`` vertices ``0 - 1 - ... - (m-1)``."""
    if m < 1:
        raise InvalidSizeError(f"path needs at least 1 vertex, got {m}")
    return from_edges(m, ((t, t + 1) for t in range(m - 1)), name=f"P{m}")


def cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidSizeError(f"cycle needs at least 3 vertices, got {n}")
    return from_edges(n, ((t, (t + 1) % n) for t in range(n)), name=f"C{n}")


def star(delta: int) -> Graph:
    """K_{1,delta} with the center as vertex 0."""
    if delta < 0:
        raise InvalidSizeError("star needs a non-negative number of leaves")
    return from_edges(delta + 1, ((0, t) for t in range(1, delta + 1)), name=f"K1,{delta}")


def _product(g: Graph, h: Graph, cartesian: bool, symbol: str) -> Graph:
    if g.vertex_count == 0 or h.vertex_count == 0:
        raise InvalidSizeError("product factors must be nonempty")
    m, n = g.vertex_count, h.vertex_count
    adj = []
    for a in range(m):
        for b in range(n):
            nb = [a2 * n + b2 for a2 in g.adjacency[a] for b2 in h.adjacency[b]]
            if cartesian:
                nb += [a2 * n + b for a2 in g.adjacency[a]]
                nb += [a * n + b2 for b2 in h.adjacency[b]]
                nb = [x for x in nb if (x // n == a) != (x % n == b)]
            adj.append(tuple(nb))
    coords = tuple((a, b) for a in range(m) for b in range(n))
    name = f"{g.name or 'G'}{symbol}{h.name or 'H'}"
    return Graph(tuple(adj), coords=coords, shape=(m, n), name=name)


def direct_product(g: Graph, h: Graph) -> Graph:
    """Direct (tensor) product: (a,b)~(a',b') iff a~a' in g and b~b' in h."""
    return _product(g, h, cartesian=False, symbol="x")


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """Box product: one coordinate adjacent, the other equal."""
    return _product(g, h, cartesian=True, symbol="[]")


@dataclass(frozen=True)
class Component:
    graph: Graph
    vertices: tuple[int, ...]  # parent vertex id of each component vertex
    parity: Optional[str] = None  # "even"/"odd" when i+j parity is constant, else "mixed"


@dataclass(frozen=True)
class ComponentDecomposition:
    components: tuple[Component, ...]

    def __len__(self):
        return len(self.components)

    def __getitem__(self, idx) -> Component:
        return self.components[idx]

    def __iter__(self):
        return iter(self.components)

    def sizes(self) -> list[int]:
        return [c.graph.vertex_count for c in self.components]


def induced_subgraph(g: Graph, vertices: Sequence[int], name: str = "") -> Graph:
    """Subgraph induced by ``vertices``, renumbered in the given order."""
    pos = {v: t for t, v in enumerate(vertices)}
    if len(pos) != len(vertices):
        raise ValueError("duplicate vertices")
    adj = [tuple(pos[u] for u in g.adjacency[g._check(v)] if u in pos) for v in vertices]
    coords = None if g.coords is None else tuple(g.coords[v] for v in vertices)
    return Graph(tuple(adj), coords=coords, shape=g.shape, name=name)


def connected_components(g: Graph) -> ComponentDecomposition:
    """Split ``g`` into connected components.

    Component 0 is the one holding vertex 0 (grid position (0, 0) for
    products); the rest follow by smallest vertex id. Vertices inside a
    component keep their parent order.
    """
    seen = [False] * g.vertex_count
    parts = []
    for s in range(g.vertex_count):
        if seen[s]:
            continue
        seen[s] = True
        queue = deque([s])
        members = [s]
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if not seen[w]:
                    seen[w] = True
                    members.append(w)
                    queue.append(w)
        members.sort()
        parity = None
        if g.coords is not None:
            pars = {sum(g.coords[v]) % 2 for v in members}
            parity = "mixed" if len(pars) > 1 else ("even" if pars == {0} else "odd")
        sub = induced_subgraph(g, members, name=f"{g.name}[{len(parts)}]" if g.name else "")
        parts.append(Component(sub, tuple(members), parity))
    return ComponentDecomposition(tuple(parts))


def bfs_distances(g: Graph, source: int, cutoff: Optional[int] = None) -> dict[int, int]:
    """Hop distances from ``source`` to every reachable vertex (up to ``cutoff``)."""
    dist = {g._check(source): 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        if cutoff is not None and du >= cutoff:
            continue
        for w in g.adjacency[u]:
            if w not in dist:
                dist[w] = du + 1
                queue.append(w)
    return dist


def distance(g: Graph, u: int, v: int) -> Optional[int]:
    """Shortest-path length between ``u`` and ``v``; None when unreachable."""
    g._check(v)
    return bfs_distances(g, u).get(v)


def second_neighbors(g: Graph) -> tuple[tuple[int, ...], ...]:
    """For each vertex, the sorted vertices at distance exactly 2."""
    out = []
    for u, nb in enumerate(g.adjacency):
        near = set(nb)
        near.add(u)
        far = {w for x in nb for w in g.adjacency[x]} - near
        out.append(tuple(sorted(far)))
    return tuple(out)


def square_graph(g: Graph) -> Graph:
    """Same vertices; u~v iff 1 <= d(u, v) <= 2 in ``g``."""
    d2 = second_neighbors(g)
    adj = tuple(tuple(sorted(set(nb) | set(far))) for nb, far in zip(g.adjacency, d2))
    return Graph(adj, coords=g.coords, shape=g.shape, name=f"({g.name})^2" if g.name else "")


def product_of(family: str, m: int, n: int) -> Graph:
    """P_m x P_n, P_m x C_n or C_m x C_n by family tag PP / PC / CC."""
    family = family.upper()
    if family == "PP":
        return direct_product(path(m), path(n))
    if family == "PC":
        return direct_product(path(m), cycle(n))
    if family == "CC":
        return direct_product(cycle(m), cycle(n))
    raise ValueError(f"unknown family {family!r}")


# -- text formats -----------------------------------------------------------

def to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for v in range(g.vertex_count):
        if g.coords is not None:
            i, j = g.coords[v]
            lines.append(f'  {v} [label="{i},{j}"];')
        else:
            lines.append(f"  {v};")
    for u, v in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_adjlist(g: Graph) -> str:
    """First line ``"n m"``, then one ``"u v"`` line per edge (0-indexed)."""
    edges = g.edges()
    lines = [f"{g.vertex_count} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def from_adjlist(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 2:
        raise ValueError("adjacency list must start with a 'n m' header line")
    n, m = map(int, rows[0])
    body = rows[1:]
    if len(body) != m:
        raise ValueError(f"header declares {m} edges, found {len(body)}")
    edges = []
    for r in body:
        if len(r) != 2:
            raise ValueError(f"bad edge line: {' '.join(r)!r}")
        edges.append((int(r[0]), int(r[1])))
    return from_edges(n, edges)
