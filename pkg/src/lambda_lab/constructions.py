"""Explicit L(1,1)-labelings of P_m x P_n, P_m x C_n and C_m x C_n.

Every scheme is a label function of the grid position ``(i, j)``. Three
facts about direct products let a small set of patterns cover everything:

* a labeling of ``X x C_n`` lifts to ``X x C_{qn}`` through ``j mod n``;
* for odd ``n``, ``P_m x C_n`` is isomorphic to the even-sum component of
  ``P_m x C_{2n}``, so a labeling of the latter is read at the lift
  ``(i, j')`` with ``j' in {j, j + n}`` and ``i + j'`` even;
* restricting a labeling to an induced subgraph keeps it valid, so a
  pattern for ``C_p x C_n`` also labels ``P_m x C_n`` via ``i mod p``.

``construct`` dispatches an ``InstanceKey`` to the first applicable scheme
(see ``DISPATCH``) and falls back to the exact solver.
"""

from __future__ import annotations

import hashlib
from functools import lru_cache
from itertools import combinations_with_replacement
from pathlib import Path
from typing import Callable, Optional, Union

from .errors import DataIntegrityError, InfeasibleError, OutOfRegimeError
from .graphs import Graph, connected_components, product_of
from .keys import UNRESOLVED, InstanceKey, expected_lambda
from .labeling import Labeling, verify
from .solver import SearchConfig, decide, lower_bound, solve_exact
from .tiles import PatternTile, TileStore, concat_many, concat_tiles, read_tile

__all__ = [
    "formula_label", "label_grid_formula", "label_torus_mult5", "label_pm_c3", "label_pm_c4",
    "label_pm_c7", "load_fig1_tiles", "concat_tiles", "derive_tile", "construct",
    "construct_with_method", "expected_lambda", "walk_labeling",
]

DATA_DIR = Path(__file__).parent / "data" / "tiles"
DERIVED_DIR = DATA_DIR / "derived"

FIG1_FILES = {
    10: ("fig1_a.tile", "bc99a436161e0a3458c5e6fcbdcdecdaad90b5565b1e6bbc7e9998c3d941f069"),
    12: ("fig1_b.tile", "59bd2fd69e0c30cc29dfa21e5f38de0ccfef9ed051760cd53ed29fc6b6988ef3"),
    16: ("fig1_c.tile", "c24ffb6733537ba2e926d907811c61d5d64f6a4aaf490ed23c5c8cef04e1c700"),
    18: ("fig1_d.tile", "f796769ec1ffdbc2864171602c213035de975b7466b16db65df151ecd923f1c2"),
}
# single-cell correction that makes the 16-column tile valid; the
# 18-column tile has no small repair and is replaced by a derived tile
FIG1_ERRATA = {16: {(3, 9): 4}}

Label = Callable[[int, int], int]


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise OutOfRegimeError(msg)


def _labels(g: Graph, fn: Label) -> Labeling:
    return Labeling(tuple(fn(i, j) for i, j in g.coords))


def _component_graph(g: Graph, component) -> Graph:
    if component is None or component == "all":
        return g
    parts = connected_components(g)
    if not 0 <= component < len(parts):
        raise ValueError(f"component {component} out of range (graph has {len(parts)})")
    return parts[component].graph


# -- closed-form patterns ------------------------------------------------------

def formula_label(i: int, j: int) -> int:
    """floor((i + 3j) / 2) mod 5; period 10 in both coordinates."""
    return ((i + 3 * j) // 2) % 5


def label_grid_formula(m: int, n: int, component: Optional[int] = 0) -> Labeling:
    """Formula labeling of P_m x P_n (one component, or all with ``None``)."""
    _need(m >= 3 and n >= 3, f"grid formula needs m, n >= 3 (got {m}, {n})")
    g = _component_graph(product_of("PP", m, n), component)
    return _labels(g, formula_label)


def _even_lift(i: int, j: int, m: Optional[int], n: Optional[int]) -> tuple[int, int]:
    """Move (i, j) to an even-sum position by adding a cycle length (None = path axis)."""
    if (i + j) % 2 == 0:
        return i, j
    if n is not None and n % 2:
        return i, j + n
    if m is not None and m % 2:
        return i + m, j
    return i, j


def _torus5_fn(m: Optional[int], n: int) -> Label:
    """Formula label for C_m x C_n (``m`` None for a path row factor), m, n multiples of 5."""
    return lambda i, j: formula_label(*_even_lift(i, j, m, n))


def label_torus_mult5(m: int, n: int, rows: str = "cycle") -> Labeling:
    """Span-4 labeling of C_m x C_n (or P_m x C_n with ``rows="path"``) for multiples of 5.

    When a cycle length is odd its product components are not invariant
    under the formula's period, so each vertex takes the formula value at
    its even-sum lift in the doubled cycle.
    """
    _need(n % 5 == 0 and n >= 5, f"n must be a multiple of 5 (got {n})")
    if rows == "cycle":
        _need(m % 5 == 0 and m >= 5, f"m must be a multiple of 5 (got {m})")
        return _labels(product_of("CC", m, n), _torus5_fn(m, n))
    if rows == "path":
        _need(m >= 2, "path factor needs m >= 2")
        return _labels(product_of("PC", m, n), _torus5_fn(None, n))
    raise ValueError("rows must be 'cycle' or 'path'")


def _c3_fn(i: int, j: int) -> int:
    # rows 4q, 4q+1 use {0,1,2}; rows 4q+2, 4q+3 use {3,4,5}
    return 3 * ((i % 4) // 2) + j % 3


def _c4_fn(i: int, j: int) -> int:
    # period 3 down the rows; columns j, j+1 never share a label
    return 2 * (i % 3) + (j % 4) // 2


C7_SEED = (0, 1, 2, 0, 3, 4, 5)
C7_SEED_FREE = 3  # the column whose label repeats four columns later


def _c7_next(row: tuple[int, ...], free: int) -> tuple[tuple[int, ...], int]:
    """Shift every label three columns right, except the one at ``free``.

    The position left empty by the skipped label copies the label that
    lands four columns to its left; that column is the next row's free one.
    """
    out = [None] * 7
    for col in range(7):
        if col != free:
            out[(col + 3) % 7] = row[col]
    out[(free + 3) % 7] = out[(free - 1) % 7]
    return tuple(out), (free - 1) % 7


@lru_cache(maxsize=None)
def c7_rows(count: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """The first ``count`` rows of the C_7 pattern with each row's free column."""
    out = [(C7_SEED, C7_SEED_FREE)]
    while len(out) < count:
        out.append(_c7_next(*out[-1]))
    return tuple(out)


def _c7_fn(m: int) -> Label:
    rows = c7_rows(m)
    return lambda i, j: rows[i][0][j % 7]


def label_pm_c3(m: int, n: int = 3) -> Labeling:
    """Six-label pattern on P_m x C_3, lifted to C_{3q}."""
    _need(m >= 3, "P_m x C_3 pattern needs m >= 3")
    _need(n % 3 == 0, "n must be a multiple of 3")
    return _labels(product_of("PC", m, n), _c3_fn)


def label_pm_c4(m: int, n: int = 4) -> Labeling:
    """Six-label pattern on P_m x C_4, lifted to C_{4q}."""
    _need(m >= 3, "P_m x C_4 pattern needs m >= 3")
    _need(n % 4 == 0, "n must be a multiple of 4")
    return _labels(product_of("PC", m, n), _c4_fn)


def label_pm_c7(m: int, n: int = 7) -> Labeling:
    """Six-label shifted pattern on P_m x C_7, lifted to C_{7q}."""
    _need(m >= 3, "P_m x C_7 pattern needs m >= 3")
    _need(n % 7 == 0, "n must be a multiple of 7")
    return _labels(product_of("PC", m, n), _c7_fn(m))


def walk_labeling(g: Graph) -> Labeling:
    """Optimal L(1,1)-labeling of a graph whose components are paths or cycles.

    Paths get 0,1,2,0,1,2,...; a cycle of length N gets blocks of 012 and
    0123 (or 01234 for N = 5) so that any three consecutive labels differ.
    """
    if g.max_degree > 2:
        raise OutOfRegimeError("walk labeling needs maximum degree <= 2")
    labels = [0] * g.vertex_count
    for comp in connected_components(g):
        sub = comp.graph
        ends = [v for v in range(sub.vertex_count) if sub.degree(v) <= 1]
        start = ends[0] if ends else 0
        order, prev, cur = [start], None, start
        while True:
            nxt = [w for w in sub.adjacency[cur] if w != prev and w != start]
            if not nxt:
                break
            prev, cur = cur, min(nxt)
            order.append(cur)
        size = len(order)
        if ends or size % 3 == 0:
            seq = [t % 3 for t in range(size)]
        elif size in (4, 5):
            seq = list(range(size))
        else:
            fours = 1 if size % 3 == 1 else 2
            seq = [0, 1, 2] * ((size - 4 * fours) // 3) + [0, 1, 2, 3] * fours
        for v, x in zip(order, seq):
            labels[comp.vertices[v]] = x
    return Labeling(tuple(labels))


# -- tiles ---------------------------------------------------------------------

def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def load_fig1_tiles(apply_errata: bool = False) -> list[PatternTile]:
    """The four P_4 x C_n tiles (n = 10, 12, 16, 18) exactly as shipped.

    File checksums are checked; with ``apply_errata`` the known one-cell
    correction is applied (source becomes ``scheme``). The tiles are not
    verified here; call ``tile.violations()``.
    """
    out = []
    for n, (name, digest) in FIG1_FILES.items():
        path = DATA_DIR / name
        tile = read_tile(path)
        if _sha256(path) != digest:
            raise DataIntegrityError(f"{name}: checksum mismatch")
        if apply_errata and n in FIG1_ERRATA:
            tile = tile.with_cells(FIG1_ERRATA[n], source="scheme")
        out.append(tile)
    return out


def _pins_digest(pins: dict) -> str:
    text = ";".join(f"{i},{j}={x}" for (i, j), x in sorted(pins.items()))
    return hashlib.sha256(text.encode()).hexdigest()[:10]


def tile_name(family: str, m: int, n: int, target_span: int, component=None, pins=None) -> str:
    name = f"{family}_{m}x{n}_s{target_span}"
    if component is not None:
        name += f"_c{component}"
    if pins:
        name += f"_p{_pins_digest(pins)}"
    return name


def derive_tile(
    family: str,
    m: int,
    n: int,
    target_span: int,
    component: Optional[int] = None,
    pins: Optional[dict[tuple[int, int], int]] = None,
    store: Union[TileStore, str, Path, None] = None,
    cfg: Optional[SearchConfig] = None,
) -> PatternTile:
    """A solver-found tile for ``family`` m x n with span <= ``target_span``.

    ``pins`` fixes labels at grid positions. Shipped tiles are used first,
    then the tile store (default ``$LAMBDA_LAB_STORE/tiles``); new tiles are
    written to the store. Raises InfeasibleError when no such labeling
    exists and ResourceLimitError when the search is cut off.
    """
    family = family.upper()
    pins = dict(pins or {})
    name = tile_name(family, m, n, target_span, component, pins)
    shipped = DERIVED_DIR / f"{name}.tile"
    if shipped.exists():
        return read_tile(shipped)
    if store is None:
        from .store import default_store_dir

        store = TileStore(default_store_dir() / "tiles")
    elif not isinstance(store, TileStore):
        store = TileStore(store)
    cached = store.get(name)
    if cached is not None:
        return cached

    g = _component_graph(product_of(family, m, n), component)
    if target_span < lower_bound(g, 1, 1):
        raise InfeasibleError(target_span, 0, f"star bound forces span >= {lower_bound(g, 1, 1)}")
    base = SearchConfig() if cfg is None else cfg
    cfg = SearchConfig(base.node_limit, base.time_limit, target_span, base.ordering, base.workers)
    grid = [[None] * n for _ in range(m)]
    nodes = 0
    for comp in connected_components(g):
        sub = comp.graph
        local = {}
        for (i, j), x in pins.items():
            v = sub.vertex_at(i, j)
            if v is not None:
                local[v] = x
        res = decide(sub, 1, 1, cfg, pins=local)
        nodes += res.nodes_explored
        if not res.feasible:
            raise InfeasibleError(target_span, nodes, f"{name} has no labeling within span {target_span}")
        for v, (i, j) in enumerate(sub.coords):
            grid[i][j] = res.witness[v]
    tile = PatternTile(tuple(map(tuple, grid)), family == "CC", family != "PP", family, "derived-by-solver")
    if tile.violations():  # pragma: no cover - solver guard
        raise AssertionError(f"derived tile {name} does not verify")
    store.put(name, tile)
    return tile


def formula_tile(rows: int = 10, cols: int = 10) -> PatternTile:
    """The grid formula as a fully labeled C_rows x C_cols torus tile."""
    _need(rows % 10 == 0 and cols % 10 == 0, "formula torus tile needs multiples of 10")
    grid = tuple(tuple(formula_label(i, j) for j in range(cols)) for i in range(rows))
    return PatternTile(grid, True, True, "CC", "formula")


def seam_pins(left: PatternTile, cols: int, rows: Optional[int] = None) -> dict[tuple[int, int], int]:
    """Pin columns 0 and cols-1 to ``left``'s first and last columns.

    Constraints only reach two columns across, so every seam window spans
    three consecutive columns. With both end columns shared, each window
    at a seam between the new tile and ``left`` already occurs inside one
    of the two wrapped tiles, and concatenation in any order stays valid.
    """
    rows = left.rows if rows is None else rows
    pins = {}
    for src, dst in ((0, 0), (left.cols - 1, cols - 1)):
        for i in range(rows):
            x = left.grid[i][src]
            if x is not None:
                pins[(i, dst)] = x
    return pins


def derived_torus_tile(k: int, store=None) -> PatternTile:
    """Span-5 C_10 x C_k tile (k in 12, 14, 16, 18) with formula boundary columns."""
    _need(k in (12, 14, 16, 18), f"no derived torus tile for k={k}")
    return derive_tile("CC", 10, k, 5, pins=seam_pins(formula_tile(), k), store=store)


def derived_p4_c18(store=None) -> PatternTile:
    """Span-4 P_4 x C_18 tile (even component) sharing boundary columns with the 10-column tile."""
    first = load_fig1_tiles()[0]
    return derive_tile("PC", 4, 18, 4, component=0, pins=seam_pins(first, 18), store=store)


def _split(total: int, sizes: tuple[int, ...]) -> Optional[tuple[int, ...]]:
    """Fewest parts from ``sizes`` summing to ``total`` (first in lexicographic order)."""
    for count in range(1, total // min(sizes) + 1):
        for parts in combinations_with_replacement(sizes, count):
            if sum(parts) == total:
                return parts
    return None


@lru_cache(maxsize=None)
def p4_strip(cols: int) -> PatternTile:
    """Span-4 P_4 x C_cols tile (even component) glued from the 10/12/16/18 tiles."""
    tiles = {t.cols: t for t in load_fig1_tiles(apply_errata=True)}
    tiles[18] = derived_p4_c18()
    parts = _split(cols, (10, 12, 16, 18))
    _need(parts is not None, f"no P_4 x C_{cols} tile from 10/12/16/18 columns")
    return concat_many([tiles[c] for c in parts]) if len(parts) > 1 else tiles[parts[0]]


@lru_cache(maxsize=None)
def torus_strip(cols: int) -> PatternTile:
    """Span-5 C_10 x C_cols tile: one derived k-column tile then formula blocks."""
    k = next((k for k in (12, 14, 16, 18) if k <= cols and (cols - k) % 10 == 0), None)
    _need(k is not None, f"no C_10 x C_{cols} torus strip")
    parts = [derived_torus_tile(k)] + [formula_tile()] * ((cols - k) // 10)
    return concat_many(parts) if len(parts) > 1 else parts[0]


def _strip_fn(tile: PatternTile, n: int) -> Label:
    """Read a C_N strip (N = n or 2n) as a labeling of P_m x C_n."""
    N = tile.cols
    full = all(x is not None for row in tile.grid for x in row)

    def fn(i, j):
        r = i % tile.rows if tile.wrap_rows else i
        if N != n:  # odd n: read the even-sum lift
            j = j if (i + j) % 2 == 0 else j + n
        elif not full and (r + j) % 2:  # odd component: shift onto the even one
            j = (j - 1) % N
        return tile.grid[r][j]

    return fn


# -- dispatch ------------------------------------------------------------------

# Order of precedence, first match wins (formula before tiles on ties):
#   PP:  m, n >= 3 -> formula; otherwise walk
#   PC:  m = 2 -> walk; n = 0 mod 5 -> torus-mult5; n in {3,6} -> c3-scheme;
#        n in {4,8} -> c4-scheme; n in {7,14} -> c7-scheme;
#        m in {3,4} -> fig1-tiles; m >= 5 -> derived-tiles
#   CC:  both multiples of 5 -> torus-mult5; one a multiple of 10 and the
#        other even with last digit 2/4/6/8 (>= 12) -> derived-tiles
#   anything else, and any (h, k) != (1, 1) -> solver
DISPATCH = ("walk", "formula", "torus-mult5", "c3-scheme", "c4-scheme", "c7-scheme",
            "fig1-tiles", "derived-tiles", "solver")
SCHEME_GROUPS = {
    "formula": {"formula", "torus-mult5"},
    "tile": {"fig1-tiles", "derived-tiles", "c3-scheme", "c4-scheme", "c7-scheme"},
    "solver": {"solver"},
}


def _lazy(build: Callable[[], Label]) -> Label:
    """Label function whose tile is only built on first use."""
    cell = []

    def fn(i, j):
        if not cell:
            cell.append(build())
        return cell[0](i, j)

    return fn


def _strip_cols(n: int) -> int:
    return n if n % 2 == 0 else 2 * n


def _candidates(key: InstanceKey) -> list[tuple[str, Optional[Label]]]:
    """Applicable (method, label function) pairs in dispatch order."""
    if (key.h, key.k) != (1, 1):
        return []
    fam, m, n = key.family, key.m, key.n
    out: list[tuple[str, Optional[Label]]] = []
    if fam == "PP":
        if m >= 3 and n >= 3:
            out.append(("formula", formula_label))
        else:
            out.append(("walk", None))
    elif fam == "PC":
        if m == 2:
            out.append(("walk", None))
            return out
        if n % 5 == 0:
            out.append(("torus-mult5", _torus5_fn(None, n)))
        if n % 3 == 0 and n in (3, 6):
            out.append(("c3-scheme", _c3_fn))
        if n in (4, 8):
            out.append(("c4-scheme", _c4_fn))
        if n in (7, 14):
            out.append(("c7-scheme", _c7_fn(m)))
        N = _strip_cols(n)
        if n >= 9 and n != 14:
            if m <= 4 and _split(N, (10, 12, 16, 18)):
                out.append(("fig1-tiles", _lazy(lambda: _strip_fn(p4_strip(N).rows_slice(m), n))))
            if m >= 5 and n % 5:
                out.append(("derived-tiles", _lazy(lambda: _strip_fn(torus_strip(N), n))))
    else:
        if m % 5 == 0 and n % 5 == 0:
            out.append(("torus-mult5", _torus5_fn(m, n)))

        def strip_ok(c):
            return c >= 12 and c % 2 == 0 and c % 10 != 0

        if m % 10 == 0 and strip_ok(n):
            out.append(("derived-tiles", lambda i, j: torus_strip(n).grid[i % 10][j]))
        elif n % 10 == 0 and strip_ok(m):
            out.append(("derived-tiles", lambda i, j: torus_strip(m).grid[j % 10][i]))
    return out


def construction_method(key: InstanceKey, scheme: str = "auto") -> str:
    cands = [name for name, _ in _candidates(key)]
    if scheme != "auto":
        if scheme not in SCHEME_GROUPS:
            raise ValueError(f"scheme must be auto, formula, tile or solver (got {scheme!r})")
        if scheme == "solver":
            return "solver"
        cands = [c for c in cands if c in SCHEME_GROUPS[scheme]]
        if not cands:
            raise OutOfRegimeError(f"no {scheme} construction covers {key}")
    return cands[0] if cands else "solver"


def construct_with_method(
    key: InstanceKey, scheme: str = "auto", cfg: Optional[SearchConfig] = None
) -> tuple[Labeling, str]:
    """Labeling of ``key.target()`` and the method that produced it.

    The labeling is always re-verified. The solver fallback raises
    ResourceLimitError when ``cfg`` limits cut it short.
    """
    method = construction_method(key, scheme)
    g = key.target()
    if method == "solver":
        cfg = cfg or SearchConfig(time_limit=60.0)
        labels = [0] * g.vertex_count
        for comp in connected_components(g):
            res = solve_exact(comp.graph, key.h, key.k, cfg, instance=str(key))
            for v, x in zip(comp.vertices, res.witness.labels):
                labels[v] = x
        lab = Labeling(tuple(labels))
    elif method == "walk":
        lab = walk_labeling(g)
    else:
        fn = dict(_candidates(key))[method]
        lab = _labels(g, fn)
    bad = verify(g, lab, key.h, key.k)
    if bad:  # pragma: no cover - construction bug guard
        raise AssertionError(f"{method} labeling of {key} fails: {bad[0]}")
    return lab, method


def construct(key: Union[InstanceKey, str], scheme: str = "auto", cfg: Optional[SearchConfig] = None) -> Labeling:
    if isinstance(key, str):
        key = InstanceKey.parse(key)
    return construct_with_method(key, scheme, cfg)[0]


__all__ += ["UNRESOLVED", "formula_tile", "seam_pins", "p4_strip", "torus_strip", "c7_rows",
            "construction_method", "tile_name", "derived_torus_tile", "derived_p4_c18"]
