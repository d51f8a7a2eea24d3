"""Exact linear algebra over the rationals for sparse integer-seeded systems.

Rows are dicts {column: value}. The eliminator keeps a fully reduced pivot
set (reduced row echelon form over Z, each row normalized by its gcd), so
ranks and nullspaces are exact. Floating-point rank is unreliable near the
large kernels that show up in the GKM computations; this module is the
load-bearing replacement.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

Row = dict[int, int]


def _normalize(row: Row) -> Row:
    """Divide by the gcd and make the leading (smallest-column) entry positive."""
    row = {c: v for c, v in row.items() if v != 0}
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, abs(v))
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g not in (0, 1):
        row = {c: v // g for c, v in row.items()}
    return row


def _row_to_int(row: Mapping[int, int | Fraction]) -> Row:
    """Clear denominators of a rational row."""
    lcm = 1
    for v in row.values():
        if isinstance(v, Fraction):
            d = v.denominator
            lcm = lcm * d // gcd(lcm, d)
    out: Row = {}
    for c, v in row.items():
        iv = int(v * lcm) if isinstance(v, Fraction) else int(v) * lcm
        if iv != 0:
            out[c] = iv
    return out


class SparseReducer:
    """Incremental exact RREF; add rows one at a time, query rank anytime."""

    def __init__(self) -> None:
        self.pivots: dict[int, Row] = {}  # pivot column -> reduced row

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _eliminate(self, row: Row) -> Row:
        # pivot rows contain no other pivot columns, so one pass suffices
        for c in sorted(row):
            piv = self.pivots.get(c)
            if piv is None:
                continue
            a, b = piv[c], row.get(c, 0)
            if b == 0:
                continue
            row = {cc: vv * a for cc, vv in row.items()}
            for pc, pv in piv.items():
                row[pc] = row.get(pc, 0) - pv * b
            row = {cc: vv for cc, vv in row.items() if vv != 0}
        return _normalize(row)

    def add_row(self, row: Mapping[int, int | Fraction]) -> bool:
        """Reduce a row against the pivot set; returns True if it added rank."""
        r = self._eliminate(_row_to_int(row))
        if not r:
            return False
        pcol = min(r)
        # keep RREF: remove the new pivot column from every existing row
        for c, piv in list(self.pivots.items()):
            b = piv.get(pcol, 0)
            if b == 0:
                continue
            a = r[pcol]
            merged = {cc: vv * a for cc, vv in piv.items()}
            for cc, vv in r.items():
                merged[cc] = merged.get(cc, 0) - vv * b
            self.pivots[c] = _normalize(merged)
        self.pivots[pcol] = r
        return True


def rank(rows: Iterable[Mapping[int, int | Fraction]]) -> int:
    red = SparseReducer()
    for row in rows:
        red.add_row(row)
    return red.rank


def nullspace(rows: Iterable[Mapping[int, int | Fraction]],
              ncols: int) -> list[dict[int, Fraction]]:
    """Basis of the solution space of the homogeneous system, one vector per
    free column (the free column's coordinate is 1)."""
    red = SparseReducer()
    for row in rows:
        red.add_row(row)
    free = [c for c in range(ncols) if c not in red.pivots]
    basis = []
    for f in free:
        vec: dict[int, Fraction] = {f: Fraction(1)}
        for pc, piv in red.pivots.items():
            v = piv.get(f, 0)
            if v:
                vec[pc] = Fraction(-v, piv[pc])
        basis.append(vec)
    return basis
