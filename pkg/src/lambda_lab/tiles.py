"""Pattern tiles: finite label grids that glue into labelings of products.

Text format (UTF-8, LF)::

    rows cols wrap_rows wrap_cols span family source
    <rows lines of space-separated labels, "." for holes>

``wrap_rows``/``wrap_cols`` are ``0`` or ``1``. Row ``i`` of the file is
row ``i`` of the grid, so the first line after the header is row 0.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

from filelock import FileLock

from .errors import DataIntegrityError, SeamViolationError
from .graphs import Graph, cycle, direct_product, induced_subgraph, path
from .labeling import Labeling, Violation, verify

SOURCES = ("paper-figure", "formula", "derived-by-solver", "scheme")
FAMILIES = ("PP", "PC", "CC")

Grid = tuple[tuple[Optional[int], ...], ...]


@dataclass(frozen=True)
class PatternTile:
    grid: Grid
    wrap_rows: bool = False
    wrap_cols: bool = True
    family: str = "PC"
    source: str = "derived-by-solver"

    def __post_init__(self):
        grid = tuple(tuple(None if x is None else int(x) for x in row) for row in self.grid)
        if not grid or not grid[0]:
            raise ValueError("tile grid must be nonempty")
        if len({len(r) for r in grid}) != 1:
            raise ValueError("tile rows have different lengths")
        if any(x is not None and x < 0 for r in grid for x in r):
            raise ValueError("labels must be non-negative")
        if self.source not in SOURCES:
            raise ValueError(f"unknown tile source {self.source!r}")
        object.__setattr__(self, "grid", grid)

    @property
    def rows(self) -> int:
        return len(self.grid)

    @property
    def cols(self) -> int:
        return len(self.grid[0])

    @property
    def span(self) -> int:
        return max(x for r in self.grid for x in r if x is not None)

    def cell(self, i: int, j: int) -> Optional[int]:
        return self.grid[i][j]

    def graph(self) -> Graph:
        """Product subgraph on the non-hole cells, with wraparound where flagged."""
        row_factor = cycle(self.rows) if self.wrap_rows else path(self.rows)
        col_factor = cycle(self.cols) if self.wrap_cols else path(self.cols)
        full = direct_product(row_factor, col_factor)
        keep = [v for v, (i, j) in enumerate(full.coords) if self.grid[i][j] is not None]
        return induced_subgraph(full, keep, name=f"tile{self.rows}x{self.cols}")

    def labeling(self, g: Optional[Graph] = None) -> Labeling:
        g = g or self.graph()
        return Labeling(tuple(self.grid[i][j] for i, j in g.coords))

    def violations(self, h: int = 1, k: int = 1) -> list[Violation]:
        g = self.graph()
        return verify(g, self.labeling(g), h, k)

    def label_for(self, g: Graph, row_offset: int = 0) -> Labeling:
        """Label every vertex (i, j) of ``g`` by the cell (i mod rows, j mod cols).

        Raises ValueError if a vertex lands on a hole.
        """
        out = []
        for i, j in g.coords:
            i += row_offset
            if (not self.wrap_rows and not 0 <= i < self.rows) or (not self.wrap_cols and not 0 <= j < self.cols):
                raise ValueError(f"vertex ({i},{j}) lies outside a non-wrapping tile")
            x = self.grid[i % self.rows][j % self.cols]
            if x is None:
                raise ValueError(f"vertex ({i},{j}) falls on a tile hole")
            out.append(x)
        return Labeling(tuple(out))

    def to_text(self) -> str:
        head = f"{self.rows} {self.cols} {int(self.wrap_rows)} {int(self.wrap_cols)} {self.span} {self.family} {self.source}"
        body = [" ".join("." if x is None else str(x) for x in row) for row in self.grid]
        return "\n".join([head, *body]) + "\n"

    @classmethod
    def from_text(cls, text: str, name: str = "<tile>") -> "PatternTile":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        try:
            rows, cols, wr, wc, span, family, source = lines[0].split(" ")
            rows, cols, span = int(rows), int(cols), int(span)
            if wr not in ("0", "1") or wc not in ("0", "1"):
                raise ValueError("wrap flags must be 0 or 1")
            body = lines[1:]
            if len(body) != rows:
                raise ValueError(f"expected {rows} grid lines, found {len(body)}")
            grid = []
            for ln in body:
                cells = ln.split(" ")
                if len(cells) != cols:
                    raise ValueError(f"expected {cols} cells in line {ln!r}")
                grid.append(tuple(None if c == "." else int(c) for c in cells))
            tile = cls(tuple(grid), wr == "1", wc == "1", family, source)
        except (ValueError, IndexError) as e:
            raise DataIntegrityError(f"{name}: malformed tile file ({e})") from None
        if tile.span != span:
            raise DataIntegrityError(f"{name}: header span {span} but grid span {tile.span}")
        return tile

    def with_cells(self, changes: dict[tuple[int, int], Optional[int]], source: Optional[str] = None) -> "PatternTile":
        grid = [list(r) for r in self.grid]
        for (i, j), x in changes.items():
            grid[i][j] = x
        return PatternTile(tuple(map(tuple, grid)), self.wrap_rows, self.wrap_cols, self.family, source or self.source)

    def rows_slice(self, count: int) -> "PatternTile":
        """First ``count`` rows (the tile restricted to a shorter path factor)."""
        if self.wrap_rows:
            raise ValueError("cannot slice a row-wrapped tile")
        return PatternTile(self.grid[:count], False, self.wrap_cols, self.family, self.source)


def read_tile(path_: Union[str, Path]) -> PatternTile:
    p = Path(path_)
    try:
        text = p.read_bytes().decode("utf-8")
    except FileNotFoundError:
        raise DataIntegrityError(f"{p.name}: tile file missing") from None
    except UnicodeDecodeError:
        raise DataIntegrityError(f"{p.name}: not UTF-8") from None
    if "\r" in text:
        raise DataIntegrityError(f"{p.name}: CR line endings")
    return PatternTile.from_text(text, name=p.name)


def write_tile(tile: PatternTile, path_: Union[str, Path]) -> None:
    Path(path_).write_bytes(tile.to_text().encode("utf-8"))


def glue(a: PatternTile, b: PatternTile, axis: str = "cols") -> PatternTile:
    """Concatenate without checking the seam."""
    if a.family != b.family:
        raise ValueError(f"cannot glue {a.family} tile to {b.family} tile")
    if (a.wrap_rows, a.wrap_cols) != (b.wrap_rows, b.wrap_cols):
        raise ValueError("tiles have different wrap flags")
    source = a.source if a.source == b.source else "scheme"
    if axis == "cols":
        if a.rows != b.rows:
            raise ValueError(f"row counts differ ({a.rows} vs {b.rows})")
        grid = tuple(ra + rb for ra, rb in zip(a.grid, b.grid))
    elif axis == "rows":
        if a.cols != b.cols:
            raise ValueError(f"column counts differ ({a.cols} vs {b.cols})")
        grid = a.grid + b.grid
    else:
        raise ValueError("axis must be 'rows' or 'cols'")
    return PatternTile(grid, a.wrap_rows, a.wrap_cols, a.family, source)


def concat_tiles(a: PatternTile, b: PatternTile, axis: str = "cols") -> PatternTile:
    """Glue ``b`` after ``a`` and re-verify; raises SeamViolationError on conflict."""
    out = glue(a, b, axis)
    bad = out.violations()
    if bad:
        raise SeamViolationError(bad)
    return out


def concat_many(parts: Sequence[PatternTile], axis: str = "cols") -> PatternTile:
    out = parts[0]
    for t in parts[1:]:
        out = glue(out, t, axis)
    bad = out.violations()
    if bad:
        raise SeamViolationError(bad)
    return out


class TileStore:
    """Directory of derived tiles; writes go through one lock file."""

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)

    def path_for(self, name: str) -> Path:
        return self.root / f"{name}.tile"

    def get(self, name: str) -> Optional[PatternTile]:
        p = self.path_for(name)
        return read_tile(p) if p.exists() else None

    def put(self, name: str, tile: PatternTile) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        p = self.path_for(name)
        with FileLock(str(self.root / ".lock")):
            tmp = p.with_suffix(".tmp")
            write_tile(tile, tmp)
            os.replace(tmp, p)
        return p
