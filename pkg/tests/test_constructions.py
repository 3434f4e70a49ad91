import pytest

from lambda_lab import constructions as C
from lambda_lab.constructions import (
    c7_rows,
    construct,
    construct_with_method,
    construction_method,
    derive_tile,
    formula_label,
    label_grid_formula,
    label_pm_c3,
    label_pm_c4,
    label_pm_c7,
    label_torus_mult5,
    load_fig1_tiles,
    walk_labeling,
)
from lambda_lab.errors import InfeasibleError, OutOfRegimeError
from lambda_lab.graphs import connected_components, product_of
from lambda_lab.keys import UNRESOLVED, InstanceKey, expected_lambda
from lambda_lab.labeling import verify
from lambda_lab.solver import solve_exact
from lambda_lab.tiles import TileStore, read_tile


def _ok(g, lab):
    return verify(g, lab, 1, 1) == []


def test_formula_values():
    assert formula_label(0, 0) == 0
    assert formula_label(2, 3) == 0
    comp = connected_components(product_of("PP", 5, 5))[0].graph
    lab = label_grid_formula(5, 5, 0)
    assert _ok(comp, lab) and lab.span == 4
    whole = label_grid_formula(4, 6, None)
    assert _ok(product_of("PP", 4, 6), whole)
    with pytest.raises(OutOfRegimeError):
        label_grid_formula(2, 5)


def test_formula_periodicity_exhaustive():
    for i in range(25):
        for j in range(25):
            assert formula_label(i, j) == formula_label(i, j + 10) == formula_label(i + 10, j)


def test_torus_mult5():
    lab = label_torus_mult5(10, 10)
    assert _ok(product_of("CC", 10, 10), lab) and lab.span == 4
    g = product_of("CC", 10, 20)
    lab = label_torus_mult5(10, 20)
    for v, (i, j) in enumerate(g.coords):
        if j + 10 < 20:
            assert lab[v] == lab[g.vertex_at(i, j + 10)]
    pc = label_torus_mult5(3, 5, rows="path")
    assert _ok(product_of("PC", 3, 5), pc) and pc.span == 4
    for m, n in [(5, 5), (5, 15), (15, 10), (15, 15), (10, 15), (25, 5)]:
        assert _ok(product_of("CC", m, n), label_torus_mult5(m, n))
    with pytest.raises(OutOfRegimeError):
        label_torus_mult5(10, 12)
    with pytest.raises(OutOfRegimeError):
        label_torus_mult5(7, 10)


def test_c3_scheme():
    lab = label_pm_c3(3)
    assert _ok(product_of("PC", 3, 3), lab) and lab.span == 5
    g = product_of("PC", 7, 3)
    lab = label_pm_c3(7)
    assert {lab[v] for v in g.row(0)} == {lab[v] for v in g.row(4)}
    assert {lab[v] for v in g.row(0)} == {lab[v] for v in g.row(1)}
    assert not {lab[v] for v in g.row(0)} & {lab[v] for v in g.row(2)}
    six = label_pm_c3(3, 6)
    assert _ok(product_of("PC", 3, 6), six) and six.span == 5
    with pytest.raises(OutOfRegimeError):
        label_pm_c3(2)


def test_c4_scheme():
    lab = label_pm_c4(3)
    assert _ok(product_of("PC", 3, 4), lab) and lab.span == 5
    g = product_of("PC", 6, 4)
    lab = label_pm_c4(6)
    col = lambda i: {lab[v] for v in g.row(i)}  # noqa: E731
    assert col(0) == col(3)
    assert all(not col(i) & col(i + 1) for i in range(5))
    eight = label_pm_c4(3, 8)
    assert _ok(product_of("PC", 3, 8), eight) and eight.span == 5
    with pytest.raises(OutOfRegimeError):
        label_pm_c4(2)


def test_c7_scheme():
    lab = label_pm_c7(3)
    assert _ok(product_of("PC", 3, 7), lab) and lab.span == 5
    lab14 = label_pm_c7(3, 14)
    assert _ok(product_of("PC", 3, 14), lab14) and lab14.span == 5
    rows = c7_rows(12)
    for (r, free), (r2, _) in zip(rows, rows[1:]):
        assert len(set(r)) == 6 and r[free] == r[(free + 4) % 7]
        shifted = [col for col in range(7) if r2[(col + 3) % 7] == r[col]]
        assert len(shifted) >= 6 and all(col in shifted for col in range(7) if col != free)
    with pytest.raises(OutOfRegimeError):
        label_pm_c7(2)


@pytest.mark.parametrize("m", range(3, 13))
def test_small_cycle_schemes_all_m(m):
    for n, fn in [(3, label_pm_c3), (6, label_pm_c3), (4, label_pm_c4), (8, label_pm_c4),
                  (7, label_pm_c7), (14, label_pm_c7)]:
        lab = fn(m, n)
        assert _ok(product_of("PC", m, n), lab) and lab.span == 5


def test_walk_labeling():
    for fam, m, n, want in [("PP", 2, 2, 1), ("PP", 2, 7, 2), ("PC", 2, 5, 3), ("PC", 2, 9, 2), ("PC", 2, 4, 3)]:
        g = product_of(fam, m, n)
        lab = walk_labeling(g)
        assert _ok(g, lab) and lab.span == want
    with pytest.raises(OutOfRegimeError):
        walk_labeling(product_of("PP", 3, 3))


def test_fig1_tiles_verbatim_status():
    tiles = load_fig1_tiles()
    assert [len(t.violations()) for t in tiles] == [0, 0, 2, 2]


def test_derive_tile_examples(tmp_path):
    store = TileStore(tmp_path)
    t = derive_tile("CC", 10, 12, 5, store=store)
    assert t.span == 5 and t.source == "derived-by-solver" and t.violations() == []
    assert t.wrap_rows and t.wrap_cols
    assert (tmp_path / "CC_10x12_s5.tile").exists()
    assert derive_tile("CC", 10, 12, 5, store=store) == t
    t = derive_tile("PC", 5, 9, 5, store=store)
    assert t.span <= 5 and t.violations() == []
    with pytest.raises(InfeasibleError):
        derive_tile("PC", 5, 9, 4, store=store)
    with pytest.raises(InfeasibleError, match="star bound"):
        derive_tile("PC", 3, 5, 3, store=store)


def test_default_tile_store_uses_env(tmp_path, monkeypatch):
    monkeypatch.setenv("LAMBDA_LAB_STORE", str(tmp_path / "s"))
    derive_tile("PC", 3, 9, 4)
    assert (tmp_path / "s" / "tiles" / "PC_3x9_s4.tile").exists()


def test_shipped_derived_tiles_reproduce(tmp_path, monkeypatch):
    shipped = {p.name: p.read_bytes() for p in C.DERIVED_DIR.glob("*.tile")}
    assert len(shipped) == 5
    monkeypatch.setattr(C, "DERIVED_DIR", tmp_path / "none")
    store = TileStore(tmp_path / "fresh")
    for k in (12, 14, 16, 18):
        C.derived_torus_tile(k, store=store)
    C.derived_p4_c18(store=store)
    fresh = {p.name: p.read_bytes() for p in (tmp_path / "fresh").glob("*.tile")}
    assert fresh == shipped


def test_shipped_derived_tiles_verify():
    for p in C.DERIVED_DIR.glob("*.tile"):
        t = read_tile(p)
        assert t.violations() == [] and t.source == "derived-by-solver"


def test_strips_concatenate():
    for cols in (20, 22, 26, 28, 30, 34, 38, 40):
        t = C.p4_strip(cols)
        assert t.cols == cols and t.span == 4 and t.violations() == []
    for cols in (12, 14, 16, 18, 22, 24, 26, 28, 34, 38):
        t = C.torus_strip(cols)
        assert t.cols == cols and t.span == 5 and t.violations() == []


def test_construct_examples():
    assert construct("PP:2×2:1,1:all").span == 1
    assert construct("PC:2×9:1,1:all").span == 2
    assert construct("PC:4×11:1,1:all").span == 4


def test_expected_lambda_examples():
    assert expected_lambda(InstanceKey("PP", 7, 3)) == 4
    assert expected_lambda(InstanceKey("PC", 6, 10)) == 4
    assert expected_lambda(InstanceKey("PC", 2, 7)) == 3
    assert expected_lambda(InstanceKey("PC", 3, 14)) == UNRESOLVED
    assert expected_lambda(InstanceKey("CC", 7, 9)) == UNRESOLVED
    assert expected_lambda(InstanceKey("PC", 3, 5, 2, 1)) == UNRESOLVED


def test_dispatch_formula_wins_ties():
    assert construction_method(InstanceKey("PC", 3, 10)) == "torus-mult5"
    assert construction_method(InstanceKey("PC", 3, 10), "tile") == "fig1-tiles"
    assert construction_method(InstanceKey("PC", 3, 11)) == "fig1-tiles"
    assert construction_method(InstanceKey("PC", 6, 11)) == "derived-tiles"
    assert construction_method(InstanceKey("PC", 3, 14)) == "c7-scheme"
    assert construction_method(InstanceKey("CC", 7, 9)) == "solver"
    assert construction_method(InstanceKey("PC", 3, 5, 2, 1)) == "solver"
    with pytest.raises(OutOfRegimeError):
        construction_method(InstanceKey("PC", 3, 3), "formula")
    with pytest.raises(ValueError):
        construction_method(InstanceKey("PC", 3, 3), "magic")


def _regime_keys():
    for m in range(2, 13):
        for n in range(2, 21):
            yield InstanceKey("PP", m, n)
        for n in range(3, 21):
            yield InstanceKey("PC", m, n)
    for m in (5, 10, 15, 20):
        for n in range(5, 21, 5):
            yield InstanceKey("CC", m, n)
    for n in (12, 14, 16, 18, 22, 24):
        yield InstanceKey("CC", 10, n)
        yield InstanceKey("CC", n, 10)


@pytest.mark.parametrize("key", list(_regime_keys()), ids=str)
def test_every_construction_verifies_and_matches(key):
    lab, method = construct_with_method(key)
    assert method != "solver"
    assert verify(key.target(), lab, 1, 1) == []
    want = expected_lambda(key)
    if want == UNRESOLVED:
        # only the conflicting P_m x C_14 column is unresolved here
        assert (key.family, key.n) == ("PC", 14) and lab.span == 5
    else:
        assert lab.span == want


@pytest.mark.parametrize("comp", [0, 1])
def test_component_keys(comp):
    for fam, m, n in [("PC", 4, 12), ("PP", 5, 6), ("PC", 6, 10)]:
        key = InstanceKey(fam, m, n, 1, 1, comp)
        lab = construct(key)
        assert verify(key.target(), lab, 1, 1) == [] and lab.span == expected_lambda(key)


def _desk_scale_keys():
    for fam, lo_n in (("PP", 2), ("PC", 3)):
        for m in range(2, 9):
            for n in range(lo_n, 16):
                key = InstanceKey(fam, m, n)
                biggest = max(c.graph.vertex_count for c in connected_components(key.graph()))
                if biggest <= 30:
                    yield key


@pytest.mark.parametrize("key", list(_desk_scale_keys()), ids=str)
def test_constructions_optimal_at_desk_scale(key):
    lab = construct(key)
    exact = max(solve_exact(c.graph).span for c in connected_components(key.graph()))
    assert lab.span == exact


def test_fallback_solver_for_uncovered():
    key = InstanceKey("CC", 3, 4)
    lab, method = construct_with_method(key)
    assert method == "solver" and verify(key.graph(), lab, 1, 1) == []
