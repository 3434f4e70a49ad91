"""Instance keys and the published lambda_1^1 claims they are checked against."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Union

from .errors import KeyParseError
from .graphs import Graph, connected_components, product_of

GRAMMAR = "FAMILY:m×n:h,k:component  (FAMILY in PP|PC|CC, component in all|0|1; 'x' accepted for '×')"
_KEY_RE = re.compile(r"^(PP|PC|CC):(\d+)[×xX](\d+):(\d+),(\d+):(all|0|1)$")

UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class InstanceKey:
    family: str
    m: int
    n: int
    h: int = 1
    k: int = 1
    component: Union[str, int] = "all"

    def __post_init__(self):
        fam = self.family.upper()
        object.__setattr__(self, "family", fam)
        mins = {"PP": (2, 2), "PC": (2, 3), "CC": (3, 3)}
        if fam not in mins:
            raise ValueError(f"family must be PP, PC or CC, got {self.family!r}")
        lo_m, lo_n = mins[fam]
        if self.m < lo_m or self.n < lo_n:
            raise ValueError(f"{fam} needs m >= {lo_m} and n >= {lo_n} (got {self.m}, {self.n})")
        if self.h < 0 or self.k < 0:
            raise ValueError("h and k must be non-negative")
        comp = self.component
        if isinstance(comp, str) and comp != "all":
            comp = int(comp)
        if comp not in ("all", 0, 1):
            raise ValueError("component must be 'all', 0 or 1")
        object.__setattr__(self, "component", comp)

    def __str__(self):
        return f"{self.family}:{self.m}×{self.n}:{self.h},{self.k}:{self.component}"

    @classmethod
    def parse(cls, text: str) -> "InstanceKey":
        mt = _KEY_RE.match(text.strip())
        if not mt:
            raise KeyParseError(f"cannot parse instance key {text!r}; expected {GRAMMAR}")
        fam, m, n, h, k, comp = mt.groups()
        try:
            return cls(fam, int(m), int(n), int(h), int(k), comp)
        except ValueError as e:
            raise KeyParseError(f"invalid instance key {text!r}: {e}; expected {GRAMMAR}") from None

    @property
    def slug(self) -> str:
        """Filesystem-safe form of the key."""
        return f"{self.family}_{self.m}x{self.n}_h{self.h}k{self.k}_{self.component}"

    def with_component(self, component) -> "InstanceKey":
        return InstanceKey(self.family, self.m, self.n, self.h, self.k, component)

    def graph(self) -> Graph:
        """The whole product graph."""
        return product_of(self.family, self.m, self.n)

    def target(self) -> Graph:
        """The graph the key names: the whole product or one component."""
        g = self.graph()
        if self.component == "all":
            return g
        parts = connected_components(g)
        if self.component >= len(parts):
            raise ValueError(f"{self} : graph has only {len(parts)} component(s)")
        return parts[self.component].graph


class Claim(NamedTuple):
    value: int
    source: str


def published_claims(key: InstanceKey) -> list[Claim]:
    """Every published lambda_1^1 value that covers ``key``.

    More than one claim means independent statements cover the instance; they
    may disagree (P_m x C_14 is the known case).
    """
    if (key.h, key.k) != (1, 1):
        return []
    m, n = key.m, key.n
    out: list[Claim] = []
    if key.family == "PP":
        a, b = sorted((m, n))
        if a == 2 and b == 2:
            out.append(Claim(1, "table: P2 x P2"))
        elif a == 2:
            out.append(Claim(2, "table: P_m x P2, m >= 3"))
        else:
            out.append(Claim(4, "table: P_m x P_n, m, n >= 3"))
    elif key.family == "PC":
        if m == 2:
            out.append(Claim(2 if n % 3 == 0 else 3, "table: P2 x C_n"))
        else:
            if n in (3, 4, 6, 7, 8, 14):
                out.append(Claim(5, "table: m >= 3, n in {3,4,6,7,8,14}"))
            if n % 5 == 0:
                out.append(Claim(4, "table: m >= 3, n = 0 mod 5"))
            if m in (3, 4) and n >= 9 and n != 14 and n % 5:
                out.append(Claim(4, "table: m in {3,4}, n >= 9, n != 14"))
            if m >= 5 and n >= 9 and n % 5:
                out.append(Claim(5, "table: m >= 5, n >= 9, n != 0 mod 5"))
            if n == 14:
                out.append(Claim(4, "theorem: P_m x C_14 = 4 via the C_7 unrolling"))
    else:
        if m % 5 == 0 and n % 5 == 0:
            out.append(Claim(4, "corollary: C_m x C_n, m, n = 0 mod 5"))
        for a, b in ((m, n), (n, m)):
            if a % 10 == 0 and b >= 12 and b % 2 == 0 and (b % 10) in (2, 4, 6, 8):
                out.append(Claim(5, "theorem: C_10m' x C_(k+10n'), k in {12,14,16,18}"))
                break
    # duplicate statements collapse to one
    seen = {}
    for c in out:
        seen.setdefault(c.value, c)
    return list(seen.values()) if len(seen) > 1 else out[:1]


def expected_lambda(key: InstanceKey) -> Union[int, str]:
    """The published value for ``key``, or ``UNRESOLVED`` when none or conflicting."""
    claims = published_claims(key)
    values = {c.value for c in claims}
    if len(values) != 1:
        return UNRESOLVED
    return values.pop()


def claims_conflict(key: InstanceKey) -> bool:
    return len({c.value for c in published_claims(key)}) > 1
