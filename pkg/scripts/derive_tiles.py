"""Regenerate the solver-derived tiles shipped under data/tiles/derived."""

import time

from lambda_lab.constructions import DERIVED_DIR, derived_p4_c18, derived_torus_tile
from lambda_lab.tiles import TileStore


def main():
    store = TileStore(DERIVED_DIR)
    for k in (12, 14, 16, 18):
        t0 = time.perf_counter()
        tile = derived_torus_tile(k, store=store)
        print(f"C10 x C{k}: span {tile.span} ({time.perf_counter() - t0:.1f}s)")
    t0 = time.perf_counter()
    tile = derived_p4_c18(store=store)
    print(f"P4 x C18: span {tile.span} ({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
