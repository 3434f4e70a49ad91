"""Exact lambda_h^k by backtracking, plus two independent cross-checks.

``solve_exact`` runs a decision search for spans ``lb, lb+1, ...`` where
``lb`` is the star bound, and stops at the first feasible span. Each
decision layer is a DSATUR-ordered backtracking search over bitmask domains
with forward checking on the distance-1 and distance-2 neighborhoods.
``solve_via_square`` colors the square graph with the same engine and
``brute_force`` enumerates every labeling.
"""

from __future__ import annotations

import hashlib
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InfeasibleError, ResourceLimitError
from .graphs import Graph, second_neighbors, square_graph, to_adjlist
from .labeling import Labeling, star_lower_bound, verify

ORDERINGS = ("dsatur", "grid-sweep", "input-order")
BRUTE_FORCE_MAX_VERTICES = 10
BRUTE_FORCE_MAX_SPAN = 8


@dataclass(frozen=True)
class SearchConfig:
    node_limit: Optional[int] = None
    time_limit: Optional[float] = None  # seconds
    target_span: Optional[int] = None
    ordering: str = "dsatur"
    workers: int = 1

    def __post_init__(self):
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node_limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.target_span is not None and self.target_span < 0:
            raise ValueError("target_span must be non-negative")
        if self.ordering not in ORDERINGS:
            raise ValueError(f"ordering must be one of {ORDERINGS}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class LambdaResult:
    instance: str
    h: int
    k: int
    span: int
    witness: Labeling
    method: str
    nodes_explored: int
    elapsed: float
    lower_bound: int = 0


@dataclass(frozen=True)
class DecisionResult:
    instance: str
    h: int
    k: int
    target_span: int
    feasible: bool
    witness: Optional[Labeling]
    nodes_explored: int
    elapsed: float


def graph_fingerprint(g: Graph) -> str:
    return "sha256:" + hashlib.sha256(to_adjlist(g).encode()).hexdigest()[:16]


def lower_bound(g: Graph, h: int, k: int) -> int:
    """Star bound for h >= k; otherwise Delta * min(h, k) from a closed neighborhood."""
    if h >= k:
        return star_lower_bound(g, h, k)
    return g.max_degree * min(h, k)


class _Limit(Exception):
    pass


class _Search:
    """One decision layer: is there a labeling of the graph into [0, span]?"""

    def __init__(self, nbr1, nbr2, sqdeg, static_order, span, h, k, deadline=None, node_limit=None):
        self.nbr1 = nbr1
        self.nbr2 = nbr2
        self.sqdeg = sqdeg
        self.n = len(nbr1)
        self.static_order = static_order
        self.span = span
        full = (1 << (span + 1)) - 1
        self.full = full
        self.block1 = [sum(1 << x for x in range(span + 1) if abs(x - c) < h) for c in range(span + 1)]
        self.block2 = [sum(1 << x for x in range(span + 1) if abs(x - c) < k) for c in range(span + 1)]
        # with all gaps <= 1, labels are interchangeable; otherwise only the
        # reflection c -> span - c is a symmetry
        self.interchangeable = h <= 1 and k <= 1
        self.dom = [full] * self.n
        self.lab = [-1] * self.n
        self.trail: list[tuple[int, int]] = []
        self.used = 0  # labels 0..used-1 introduced so far (interchangeable case)
        self.nodes = 0
        self.deadline = deadline
        self.node_limit = node_limit
        self.assigned = 0
        self.reflect_open = not self.interchangeable
        self.frontier_depth = None
        self.frontier: list[tuple[tuple[int, int], ...]] = []

    def _assign(self, v, c) -> bool:
        dom, lab, trail = self.dom, self.lab, self.trail
        b = ~self.block1[c]
        for u in self.nbr1[v]:
            if lab[u] < 0:
                d = dom[u]
                nd = d & b
                if nd != d:
                    trail.append((u, d))
                    dom[u] = nd
                    if not nd:
                        return False
        b = ~self.block2[c]
        for u in self.nbr2[v]:
            if lab[u] < 0:
                d = dom[u]
                nd = d & b
                if nd != d:
                    trail.append((u, d))
                    dom[u] = nd
                    if not nd:
                        return False
        return True

    def _undo(self, mark):
        dom, trail = self.dom, self.trail
        while len(trail) > mark:
            u, d = trail.pop()
            dom[u] = d

    def _select(self) -> int:
        lab = self.lab
        if self.static_order is not None:
            for v in self.static_order:
                if lab[v] < 0:
                    return v
        dom, sqdeg = self.dom, self.sqdeg
        best, best_key = -1, None
        for v in range(self.n):
            if lab[v] < 0:
                key = (dom[v].bit_count(), -sqdeg[v])
                if best_key is None or key < best_key:
                    best, best_key = v, key
        return best

    def fix(self, assignments) -> bool:
        """Pre-assign a prefix (used by parallel workers)."""
        for v, c in assignments:
            if self.lab[v] >= 0 or not (self.dom[v] >> c) & 1:
                return False
            if not self._assign(v, c):
                return False
            self.lab[v] = c
            self.assigned += 1
            self.used = max(self.used, c + 1)
            self.reflect_open = False
        return True

    def run(self) -> bool:
        if self.assigned == self.n:
            return True
        if self.frontier_depth is not None and self.assigned >= self.frontier_depth:
            self.frontier.append(tuple((v, c) for v, c in enumerate(self.lab) if c >= 0))
            return False
        v = self._select()
        d = self.dom[v]
        used_before = self.used
        if self.interchangeable:
            d &= (1 << (used_before + 1)) - 1
        reflect = self.reflect_open
        if reflect:
            d &= (1 << (self.span // 2 + 1)) - 1
            self.reflect_open = False
        while d:
            bit = d & -d
            d ^= bit
            c = bit.bit_length() - 1
            self.nodes += 1
            if self.node_limit is not None and self.nodes > self.node_limit:
                raise _Limit
            if self.deadline is not None and not self.nodes & 1023 and time.perf_counter() > self.deadline:
                raise _Limit
            mark = len(self.trail)
            if self._assign(v, c):
                self.lab[v] = c
                self.assigned += 1
                if c >= used_before:
                    self.used = c + 1
                if self.run():
                    return True
                self.lab[v] = -1
                self.assigned -= 1
                self.used = used_before
            self._undo(mark)
        if reflect:
            self.reflect_open = True
        return False


class _Problem:
    def __init__(self, g: Graph, ordering: str):
        self.g = g
        self.nbr1 = g.adjacency
        self.nbr2 = second_neighbors(g)
        self.sqdeg = tuple(len(a) + len(b) for a, b in zip(self.nbr1, self.nbr2))
        if ordering == "dsatur":
            self.static_order = None
        elif ordering == "input-order":
            self.static_order = tuple(range(g.vertex_count))
        else:
            if g.coords is None:
                self.static_order = tuple(range(g.vertex_count))
            else:
                self.static_order = tuple(sorted(range(g.vertex_count), key=lambda v: (g.coords[v][1], g.coords[v][0])))

    def search(self, span, h, k, deadline=None, node_limit=None):
        return _Search(self.nbr1, self.nbr2, self.sqdeg, self.static_order, span, h, k, deadline, node_limit)


def _worker(args):
    nbr1, nbr2, sqdeg, static_order, span, h, k, prefix, deadline, node_limit = args
    s = _Search(nbr1, nbr2, sqdeg, static_order, span, h, k, deadline, node_limit)
    try:
        ok = s.fix(prefix) and s.run()
    except _Limit:
        return "limit", None, s.nodes
    return ("sat" if ok else "unsat"), (list(s.lab) if ok else None), s.nodes


def _decide_layer(p: _Problem, span, h, k, cfg: SearchConfig, deadline, nodes_left, fixed=()):
    """Return (labels or None, nodes); raises _LayerLimit when a limit hits."""
    if cfg.workers <= 1:
        s = p.search(span, h, k, deadline, nodes_left)
        try:
            ok = s.fix(fixed) and s.run()
        except _Limit:
            raise _LayerLimit(s.nodes)
        return (list(s.lab) if ok else None), s.nodes
    # split the search into prefixes, then hand them to a process pool
    depth = len(fixed) + 1
    while True:
        probe = p.search(span, h, k)
        if not probe.fix(fixed):
            return None, 0
        probe.frontier_depth = depth
        if probe.run():
            return list(probe.lab), probe.nodes
        if len(probe.frontier) >= 4 * cfg.workers or depth >= p.g.vertex_count:
            break
        depth += 1
    prefixes = probe.frontier
    if not prefixes:
        return None, probe.nodes
    total = probe.nodes
    tasks = [(p.nbr1, p.nbr2, p.sqdeg, p.static_order, span, h, k, pre, deadline, nodes_left) for pre in prefixes]
    limited = False
    with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
        for status, labs, nodes in ex.map(_worker, tasks):
            total += nodes
            if status == "sat":
                ex.shutdown(wait=False, cancel_futures=True)
                return labs, total
            if status == "limit":
                limited = True
    if limited:
        raise _LayerLimit(total)
    return None, total


class _LayerLimit(Exception):
    def __init__(self, nodes):
        self.nodes = nodes


def greedy_labeling(g: Graph, h: int, k: int) -> Labeling:
    """First-fit labeling in DSATUR order; an upper bound, not optimal."""
    n = g.vertex_count
    far = second_neighbors(g)
    lab = [-1] * n
    sqdeg = [len(a) + len(b) for a, b in zip(g.adjacency, far)]
    for _ in range(n):
        best, best_key = -1, None
        for v in range(n):
            if lab[v] < 0:
                sat = len({lab[u] for u in g.adjacency[v] if lab[u] >= 0} | {lab[u] for u in far[v] if lab[u] >= 0})
                key = (-sat, -sqdeg[v], v)
                if best_key is None or key < best_key:
                    best, best_key = v, key
        c = 0
        while True:
            if all(lab[u] < 0 or abs(lab[u] - c) >= h for u in g.adjacency[best]) and all(
                lab[u] < 0 or abs(lab[u] - c) >= k for u in far[best]
            ):
                break
            c += 1
        lab[best] = c
    return Labeling(tuple(lab))


def _check_witness(g, lab, h, k):
    bad = verify(g, lab, h, k)
    if bad:  # pragma: no cover - engine bug guard
        raise AssertionError(f"solver produced an invalid witness: {bad[0]}")


def solve_exact(g: Graph, h: int = 1, k: int = 1, cfg: Optional[SearchConfig] = None, instance: str = "") -> LambdaResult:
    """Exact lambda_h^k(g) with a verified witness.

    Raises ResourceLimitError when a limit stops the search; the error holds
    the refuted lower bound and the best witness found so far.
    """
    cfg = cfg or SearchConfig()
    if g.vertex_count == 0:
        raise ValueError("graph must be nonempty")
    t0 = time.perf_counter()
    deadline = None if cfg.time_limit is None else t0 + cfg.time_limit
    instance = instance or graph_fingerprint(g)
    lb = lower_bound(g, h, k)
    upper = greedy_labeling(g, h, k)
    _check_witness(g, upper, h, k)
    p = _Problem(g, cfg.ordering)
    nodes = 0
    s = lb
    while s < upper.span:
        left = None if cfg.node_limit is None else cfg.node_limit - nodes
        if left is not None and left <= 0:
            raise ResourceLimitError(s, upper.span, upper, nodes)
        try:
            labs, used = _decide_layer(p, s, h, k, cfg, deadline, left)
        except _LayerLimit as e:
            raise ResourceLimitError(s, upper.span, upper, nodes + e.nodes) from None
        nodes += used
        if labs is not None:
            upper = Labeling(tuple(labs))
            break
        s += 1
    _check_witness(g, upper, h, k)
    return LambdaResult(instance, h, k, upper.span, upper, "backtrack", nodes, time.perf_counter() - t0, lb)


def decide(
    g: Graph,
    h: int = 1,
    k: int = 1,
    cfg: Optional[SearchConfig] = None,
    instance: str = "",
    pins: Optional[dict[int, int]] = None,
) -> DecisionResult:
    """Is there an L(h,k)-labeling of ``g`` with span <= ``cfg.target_span``?

    ``pins`` fixes the labels of some vertices before the search starts.
    """
    cfg = cfg or SearchConfig()
    if cfg.target_span is None:
        raise ValueError("decision mode needs cfg.target_span")
    t0 = time.perf_counter()
    deadline = None if cfg.time_limit is None else t0 + cfg.time_limit
    instance = instance or graph_fingerprint(g)
    target = cfg.target_span
    if target < lower_bound(g, h, k):
        return DecisionResult(instance, h, k, target, False, None, 0, time.perf_counter() - t0)
    p = _Problem(g, cfg.ordering)
    try:
        fixed = tuple(sorted((pins or {}).items()))
        if any(c > target for _, c in fixed):
            labs, nodes = None, 0
        else:
            labs, nodes = _decide_layer(p, target, h, k, cfg, deadline, cfg.node_limit, fixed)
    except _LayerLimit as e:
        raise ResourceLimitError(0, None, None, e.nodes) from None
    wit = None
    if labs is not None:
        wit = Labeling(tuple(labs))
        _check_witness(g, wit, h, k)
    return DecisionResult(instance, h, k, target, labs is not None, wit, nodes, time.perf_counter() - t0)


def _greedy_clique(g: Graph) -> int:
    best = 1 if g.vertex_count else 0
    adj = [set(nb) for nb in g.adjacency]
    for v in range(g.vertex_count):
        clique = [v]
        cand = sorted(adj[v], key=lambda u: -len(adj[u]))
        for u in cand:
            if all(u in adj[w] for w in clique):
                clique.append(u)
        best = max(best, len(clique))
    return best


def solve_via_square(g: Graph, cfg: Optional[SearchConfig] = None, instance: str = "") -> LambdaResult:
    """lambda_1^1(g) as chi(g^2) - 1, coloring the square graph directly."""
    cfg = cfg or SearchConfig()
    t0 = time.perf_counter()
    sq = square_graph(g)
    instance = instance or graph_fingerprint(g)
    lb = max(_greedy_clique(sq) - 1, 0)
    upper = greedy_labeling(sq, 1, 0)
    p = _Problem(sq, cfg.ordering)
    deadline = None if cfg.time_limit is None else t0 + cfg.time_limit
    nodes = 0
    s = lb
    while s < upper.span:
        left = None if cfg.node_limit is None else cfg.node_limit - nodes
        try:
            labs, used = _decide_layer(p, s, 1, 0, cfg, deadline, left)
        except _LayerLimit as e:
            raise ResourceLimitError(s, upper.span, upper, nodes + e.nodes) from None
        nodes += used
        if labs is not None:
            upper = Labeling(tuple(labs))
            break
        s += 1
    _check_witness(g, upper, 1, 1)
    return LambdaResult(instance, 1, 1, upper.span, upper, "square-coloring", nodes, time.perf_counter() - t0, lb)


def brute_force(g: Graph, h: int, k: int, max_span: int, instance: str = "") -> LambdaResult:
    """Smallest feasible span by enumerating every labeling in [0, s]^V.

    Shares nothing with the backtracking engine; kept for cross-checking only.
    """
    n = g.vertex_count
    if n > BRUTE_FORCE_MAX_VERTICES:
        raise ValueError(f"brute_force is capped at {BRUTE_FORCE_MAX_VERTICES} vertices (got {n})")
    if not 0 <= max_span <= BRUTE_FORCE_MAX_SPAN:
        raise ValueError(f"brute_force is capped at max_span {BRUTE_FORCE_MAX_SPAN} (got {max_span})")
    t0 = time.perf_counter()
    instance = instance or graph_fingerprint(g)
    # pairs come straight from BFS distances, not from second_neighbors
    from .graphs import bfs_distances

    pairs = []
    for u in range(n):
        for v, d in bfs_distances(g, u, cutoff=2).items():
            if v > u and d in (1, 2):
                pairs.append((u, v, h if d == 1 else k))
    explored = 0
    for s in range(max_span + 1):
        base = s + 1
        total = base**n
        chunk = 1 << 18
        for start in range(0, total, chunk):
            idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
            digits = np.empty((n, idx.size), dtype=np.int64)
            rest = idx
            for v in range(n - 1, -1, -1):
                digits[v] = rest % base
                rest = rest // base
            ok = np.ones(idx.size, dtype=bool)
            for u, v, gap in pairs:
                ok &= np.abs(digits[u] - digits[v]) >= gap
            explored += idx.size
            hits = np.flatnonzero(ok)
            if hits.size:
                lab = Labeling(tuple(int(x) for x in digits[:, hits[0]]))
                # the labeling may not use the top label; its own span is what counts
                if lab.span == s:
                    return LambdaResult(instance, h, k, s, lab, "brute-force", explored, time.perf_counter() - t0)
                raise AssertionError("enumeration order broke minimality")  # pragma: no cover
    raise InfeasibleError(max_span, explored, "brute_force search range exhausted")
