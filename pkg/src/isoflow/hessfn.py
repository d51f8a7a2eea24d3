"""Hessenberg-function combinatorics.

Validation, the dual function, dimension counting, the sparsity graph,
enumeration, pattern inversion statistics, and Betti / Poincare tables.
Everything here is exact integer combinatorics; decomposable functions are
accepted throughout.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import NotHessenberg, ResourceLimit

# n! sized loops are refused above this bound unless the caller raises it.
DEFAULT_MAX_FACTORIAL_N = 8
# enumeration bound (C_14 = 2674440 is already unwieldy for downstream use)
DEFAULT_MAX_ENUM_N = 14


@dataclass(frozen=True)
class HessenbergFunction:
    """A nondecreasing function h:[n]->[n] with h(i) >= i, stored 1-based."""

    values: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.values)

    def __call__(self, i: int) -> int:
        """Value h(i) for 1 <= i <= n."""
        return self.values[i - 1]

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.values) + ")"


@dataclass(frozen=True)
class SparsityGraph:
    """Simple graph on vertices 1..n; for Gamma_h the edges are the
    off-diagonal staircase pairs {i,j}, i < j <= h(i)."""

    n: int
    edges: frozenset[tuple[int, int]]

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        adj: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        seen = {1}
        stack = [1]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def to_dot(self) -> str:
        lines = ["graph sparsity {"]
        for v in range(1, self.n + 1):
            lines.append(f"  {v};")
        for i, j in sorted(self.edges):
            lines.append(f"  {i} -- {j};")
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class BettiTable:
    """Even Betti numbers beta_{2k}, k = 0..d(h)."""

    h: HessenbergFunction
    betti: tuple[int, ...]

    def total(self) -> int:
        return sum(self.betti)

    def poincare_polynomial(self) -> list[int]:
        """Coefficients of sum_k beta_{2k} t^{2k} at t^0, t^2, ..."""
        return list(self.betti)

    def to_json(self) -> str:
        return json.dumps(
            {"h": list(self.h.values), "betti_even": list(self.betti),
             "total": self.total()})

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["degree", "betti"])
        for k, b in enumerate(self.betti):
            w.writerow([2 * k, b])
        return buf.getvalue()


def validate(values: Sequence[int]) -> HessenbergFunction:
    """Check a value sequence and wrap it; raises NotHessenberg otherwise."""
    vals = tuple(int(v) for v in values)
    if not vals:
        raise NotHessenberg("empty sequence")
    n = len(vals)
    for i, v in enumerate(vals, start=1):
        if not (i <= v <= n):
            raise NotHessenberg(f"h({i}) = {v} outside [{i}, {n}]")
    for i in range(n - 1):
        if vals[i + 1] < vals[i]:
            raise NotHessenberg(
                f"h({i + 2}) = {vals[i + 1]} < h({i + 1}) = {vals[i]}")
    return HessenbergFunction(vals)


def h_min(n: int) -> HessenbergFunction:
    """The tridiagonal pattern h(i) = i + 1 (and h(n) = n)."""
    return HessenbergFunction(tuple(min(i + 1, n) for i in range(1, n + 1)))


def h_max(n: int) -> HessenbergFunction:
    """The full pattern h(i) = n."""
    return HessenbergFunction((n,) * n)


def dual(h: HessenbergFunction) -> tuple[int, ...]:
    """g(i) = min{j | h(j) >= i}; satisfies h(i) >= j <=> i >= g(j)."""
    return tuple(
        min(j for j in range(1, h.n + 1) if h(j) >= i)
        for i in range(1, h.n + 1))


def complex_dimension(h: HessenbergFunction) -> int:
    """d(h) = sum_i (h(i) - i); the real dimension of X_h is 2 d(h)."""
    return sum(h(i) - i for i in range(1, h.n + 1))


def is_indecomposable(h: HessenbergFunction) -> bool:
    """h(i) > i for all i < n, equivalently Gamma_h connected."""
    return all(h(i) > i for i in range(1, h.n))


def sparsity_graph(h: HessenbergFunction) -> SparsityGraph:
    edges = frozenset(
        (i, j)
        for i in range(1, h.n + 1)
        for j in range(i + 1, h(i) + 1))
    return SparsityGraph(h.n, edges)


def pattern_pairs(h: HessenbergFunction) -> list[tuple[int, int]]:
    """The staircase pairs (i, j) with i < j <= h(i), in row order."""
    return [(i, j) for i in range(1, h.n + 1) for j in range(i + 1, h(i) + 1)]


def enumerate_all(n: int, max_n: int = DEFAULT_MAX_ENUM_N
                  ) -> Iterator[HessenbergFunction]:
    """All Hessenberg functions on [n] in lexicographic order."""
    if n < 1:
        raise NotHessenberg("n must be positive")
    if n > max_n:
        raise ResourceLimit(f"n = {n} exceeds enumeration bound {max_n}")

    def rec(prefix: list[int]) -> Iterator[tuple[int, ...]]:
        i = len(prefix) + 1
        if i > n:
            yield tuple(prefix)
            return
        lo = max(i, prefix[-1] if prefix else 1)
        for v in range(lo, n + 1):
            prefix.append(v)
            yield from rec(prefix)
            prefix.pop()

    for vals in rec([]):
        yield HessenbergFunction(vals)


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def count_functions(n: int, max_n: int = DEFAULT_MAX_ENUM_N
                    ) -> tuple[int, int]:
    """(total, indecomposable) counts of Hessenberg functions on [n].

    Brute force gives total = C_n and indecomposable = C_{n-1}; both are
    reported so callers can compare against either reading of the Catalan
    remark.
    """
    total = 0
    indec = 0
    for h in enumerate_all(n, max_n=max_n):
        total += 1
        if is_indecomposable(h):
            indec += 1
    return total, indec


def hess_inversions(h: HessenbergFunction, sigma: Sequence[int]) -> int:
    """#{i < j <= h(i) | sigma(i) > sigma(j)}; one-line notation sigma."""
    if sorted(sigma) != list(range(1, h.n + 1)):
        raise ValueError(f"{sigma!r} is not a permutation of [{h.n}]")
    return sum(1 for i, j in pattern_pairs(h) if sigma[i - 1] > sigma[j - 1])


def _permutations(n: int) -> Iterator[tuple[int, ...]]:
    import itertools
    return itertools.permutations(range(1, n + 1))


def betti_table(h: HessenbergFunction,
                max_n: int = DEFAULT_MAX_FACTORIAL_N) -> BettiTable:
    """beta_{2k} = #{sigma | hess_inversions(h, sigma) = k}."""
    if h.n > max_n:
        raise ResourceLimit(f"n = {h.n} exceeds factorial bound {max_n}")
    d = complex_dimension(h)
    counts = [0] * (d + 1)
    for sigma in _permutations(h.n):
        counts[hess_inversions(h, sigma)] += 1
    return BettiTable(h, tuple(counts))


def equivariant_series(h: HessenbergFunction, cutoff: int,
                       max_n: int = DEFAULT_MAX_FACTORIAL_N) -> list[int]:
    """Coefficients at t^0, t^2, ..., t^cutoff of the formal series
    (sum_k beta_{2k} t^{2k}) / (1 - t^2)^n.

    These are the graded equivariant ranks predicted by equivariant
    formality; exact integers.
    """
    if cutoff < 0 or cutoff % 2 != 0:
        raise ValueError("cutoff must be even and nonnegative")
    betti = betti_table(h, max_n=max_n).betti
    kmax = cutoff // 2
    n = h.n
    # 1/(1-t^2)^n has coefficient C(n-1+k, k) at t^{2k}
    out = []
    for k in range(kmax + 1):
        c = sum(
            betti[j] * math.comb(n - 1 + (k - j), k - j)
            for j in range(min(k, len(betti) - 1) + 1))
        out.append(c)
    return out


def enumeration_to_json(n: int, **kw) -> str:
    rows = []
    for h in enumerate_all(n, **kw):
        rows.append({
            "h": list(h.values),
            "d": complex_dimension(h),
            "indecomposable": is_indecomposable(h),
        })
    total, indec = len(rows), sum(r["indecomposable"] for r in rows)
    return json.dumps({
        "n": n,
        "count": total,
        "indecomposable_count": indec,
        "catalan_n": catalan(n),
        "functions": rows,
    })
