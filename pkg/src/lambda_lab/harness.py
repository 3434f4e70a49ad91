"""Solve-and-record runs over instance keys, and the lambda table sweep."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Optional, Union

from .constructions import construct_with_method
from .errors import LambdaLabError, ResourceLimitError
from .graphs import connected_components
from .keys import UNRESOLVED, InstanceKey, claims_conflict, expected_lambda, published_claims
from .labeling import Labeling, lambda_of_union
from .solver import SearchConfig, solve_exact
from .store import ResultRecord, ResultStore

CSV_COLUMNS = ("m", "n", "claimed", "constructed", "exact", "status")
FAMILY_MIN = {"PP": (2, 2), "PC": (2, 3), "CC": (3, 3)}


def status_of(key: InstanceKey, exact: Optional[int], constructed: Optional[int] = None) -> str:
    """match | discrepancy | paper-discrepancy | unclaimed | bounds | construction-gap."""
    if claims_conflict(key):
        return "paper-discrepancy"
    if exact is None:
        return "bounds"
    claimed = expected_lambda(key)
    if claimed == UNRESOLVED:
        return "unclaimed"
    if exact != claimed:
        return "discrepancy"
    if constructed is not None and constructed != exact:
        return "construction-gap"
    return "match"


def solve_key(key: InstanceKey, cfg: Optional[SearchConfig] = None, store: Optional[ResultStore] = None,
              use_cache: bool = True) -> tuple[ResultRecord, bool]:
    """Exact span of ``key`` (per component, combined by max), persisted to ``store``.

    Returns ``(record, from_cache)``. Limits produce a bounds-only record.
    """
    if store is not None and use_cache:
        rec = store.get(key)
        if rec is not None and rec.exact:
            return rec, True
    cfg = cfg or SearchConfig()
    g = key.target()
    labels = [0] * g.vertex_count
    spans, lowers, uppers, nodes = [], [], [], 0
    exact = True
    for comp in connected_components(g):
        try:
            res = solve_exact(comp.graph, key.h, key.k, cfg, instance=str(key))
        except ResourceLimitError as e:
            exact = False
            lowers.append(e.lower)
            uppers.append(e.upper)
            nodes += e.nodes
            wit = e.witness
        else:
            spans.append(res.span)
            lowers.append(res.span)
            uppers.append(res.span)
            nodes += res.nodes_explored
            wit = res.witness
        if wit is not None:
            for v, x in zip(comp.vertices, wit.labels):
                labels[v] = x
    have_witness = all(u is not None for u in uppers)
    witness = Labeling(tuple(labels)) if have_witness else None
    computed = lambda_of_union(spans) if exact else None
    claimed = expected_lambda(key)
    rec = ResultRecord(
        key=str(key),
        claimed=claimed,
        computed=computed,
        lower=max(lowers),
        upper=max(uppers) if have_witness else None,
        method="backtrack",
        status=status_of(key, computed),
        nodes=nodes,
    )
    if store is not None:
        store.put(key, rec, witness)
    return rec, False


@dataclass
class TableRow:
    m: int
    n: int
    claimed: Union[int, str]
    constructed: Optional[int]
    exact: Optional[int]
    lower: Optional[int]
    upper: Optional[int]
    status: str

    def cells(self) -> list[str]:
        if self.exact is not None:
            exact = str(self.exact)
        else:
            exact = f"{self.lower}-{'' if self.upper is None else self.upper}"
        return [str(self.m), str(self.n), str(self.claimed),
                "" if self.constructed is None else str(self.constructed), exact, self.status]


@dataclass
class TableRun:
    family: str
    rows: list[TableRow]
    solver_calls: int = 0
    cache_hits: int = 0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(r.cells())
        return buf.getvalue()

    def discrepancies(self) -> list[TableRow]:
        return [r for r in self.rows if r.status in ("discrepancy", "paper-discrepancy", "construction-gap")]

    def discrepancy_groups(self) -> dict[str, list[TableRow]]:
        """Flagged rows grouped by the set of claims they contradict."""
        groups: dict[str, list[TableRow]] = {}
        for r in self.discrepancies():
            key = InstanceKey(self.family, r.m, r.n)
            claims = published_claims(key)
            wrong = [c for c in claims if c.value != r.exact] or claims
            label = "; ".join(f"{c.source} (={c.value})" for c in wrong) or "no claim"
            groups.setdefault(f"{r.status}: {label}", []).append(r)
        return groups

    def summary(self) -> str:
        groups = self.discrepancy_groups()
        lines = [f"{len(self.rows)} rows, {len(self.discrepancies())} flagged, {len(groups)} distinct discrepancies"]
        for label, rows in groups.items():
            cells = ", ".join(f"({r.m},{r.n})" for r in rows)
            exact = sorted({r.exact for r in rows if r.exact is not None})
            lines.append(f"  {label}; exact {exact}; rows {cells}")
        return "\n".join(lines) + "\n"

    def pretty(self) -> str:
        """m down, n across; exact values, '*' marks a flagged cell."""
        ms = sorted({r.m for r in self.rows})
        ns = sorted({r.n for r in self.rows})
        at = {(r.m, r.n): r for r in self.rows}
        out = ["m\\n " + " ".join(f"{n:>3}" for n in ns)]
        for m in ms:
            cells = []
            for n in ns:
                r = at.get((m, n))
                if r is None:
                    cells.append("   ")
                    continue
                val = r.cells()[4]
                mark = "*" if r in self.discrepancies() else ""
                cells.append(f"{val + mark:>3}")
            out.append(f"{m:>3} " + " ".join(cells))
        return "\n".join(out) + "\n"


def run_table(family: str, max_m: int, max_n: int, store: Optional[ResultStore] = None,
              cfg: Optional[SearchConfig] = None, min_m: Optional[int] = None,
              min_n: Optional[int] = None) -> TableRun:
    family = family.upper()
    lo_m, lo_n = FAMILY_MIN[family]
    lo_m = lo_m if min_m is None else max(lo_m, min_m)
    lo_n = lo_n if min_n is None else max(lo_n, min_n)
    run = TableRun(family, [])
    for m in range(lo_m, max_m + 1):
        for n in range(lo_n, max_n + 1):
            key = InstanceKey(family, m, n)
            try:
                constructed = construct_with_method(key, cfg=cfg)[0].span
            except LambdaLabError:
                constructed = None
            rec, cached = solve_key(key, cfg, store)
            if cached:
                run.cache_hits += 1
            else:
                run.solver_calls += 1
            run.rows.append(TableRow(m, n, expected_lambda(key), constructed, rec.computed,
                                     rec.lower, rec.upper, status_of(key, rec.computed, constructed)))
    return run
