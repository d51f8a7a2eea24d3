"""GKM graphs on permutation vertices and exact-rational cohomology ranks.

Vertices are all permutations of [n]; an edge joins sigma and
sigma.(i, j) for every staircase pair i < j <= h(i). The X-labeling uses
e_i - e_j, the Y-labeling e_{sigma(i)} - e_{sigma(j)}. Divisibility of
phi(sigma) - phi(tau) by a linear-form label is encoded as the variable
substitution that the label's vanishing defines, which is exactly linear in
the unknown coefficients; all ranks are computed over the rationals.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import Decomposable, ResourceLimit, SourceConstraintViolation
from .hessfn import (HessenbergFunction, betti_table, complex_dimension,
                     equivariant_series, is_indecomposable, pattern_pairs)
from .ratlin import SparseReducer, nullspace, rank

MAX_N_GRAPH = 5   # graph construction bound
MAX_N_RANK = 4    # exact rank computation bound

Poly = dict[tuple[int, ...], Fraction]  # exponent tuple -> coefficient


@dataclass(frozen=True)
class GkmGraph:
    h: HessenbergFunction
    mode: str                            # "X" or "Y"
    vertices: tuple[tuple[int, ...], ...]
    # (source index, target index, transposition (i, j), label (p, q))
    edges: tuple[tuple[int, int, tuple[int, int], tuple[int, int]], ...]

    @property
    def n(self) -> int:
        return self.h.n

    def degree(self, vi: int) -> int:
        return sum(1 for e in self.edges if vi in e[:2])

    def to_dot(self) -> str:
        lines = [f'graph gkm_{self.mode} {{']
        for vi, v in enumerate(self.vertices):
            lines.append(f'  {vi} [label="{"".join(map(str, v))}"];')
        for si, ti, _ij, (p, q) in self.edges:
            lines.append(f'  {si} -- {ti} [label="e{p}-e{q}"];')
        lines.append("}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps({
            "h": list(self.h.values),
            "mode": self.mode,
            "vertices": [list(v) for v in self.vertices],
            "edges": [{"source": si, "target": ti,
                       "transposition": list(ij), "label": list(pq)}
                      for si, ti, ij, pq in self.edges],
        })


def build_graph(h: HessenbergFunction, mode: str = "X",
                max_n: int = MAX_N_GRAPH) -> GkmGraph:
    if mode not in ("X", "Y"):
        raise ValueError(f"mode must be 'X' or 'Y', got {mode!r}")
    if not is_indecomposable(h):
        raise Decomposable(f"h = {h} is decomposable")
    if h.n > max_n:
        raise ResourceLimit(f"n = {h.n} exceeds graph bound {max_n}")
    vertices = tuple(itertools.permutations(range(1, h.n + 1)))
    index = {v: i for i, v in enumerate(vertices)}
    pairs = pattern_pairs(h)
    edges = []
    for vi, sigma in enumerate(vertices):
        for i, j in pairs:
            tau = list(sigma)
            tau[i - 1], tau[j - 1] = tau[j - 1], tau[i - 1]
            ti = index[tuple(tau)]
            if vi < ti:
                label = (i, j) if mode == "X" else (sigma[i - 1], sigma[j - 1])
                edges.append((vi, ti, (i, j), label))
    return GkmGraph(h, mode, vertices, tuple(edges))


def pairwise_noncollinear(h_or_weights) -> bool:
    """Check that tangent weights are pairwise non-proportional.

    Accepts a HessenbergFunction (weights e_i - e_j over the staircase
    pairs) or an explicit list of integer vectors.
    """
    if isinstance(h_or_weights, HessenbergFunction):
        h = h_or_weights
        weights = []
        for i, j in pattern_pairs(h):
            w = [0] * h.n
            w[i - 1], w[j - 1] = 1, -1
            weights.append(tuple(w))
    else:
        weights = [tuple(w) for w in h_or_weights]
    for a, b in itertools.combinations(weights, 2):
        # proportional integer vectors: cross terms all vanish
        if all(a[i] * b[j] == a[j] * b[i]
               for i in range(len(a)) for j in range(i + 1, len(a))):
            return False
    return True


def monomials(n: int, k: int) -> list[tuple[int, ...]]:
    """Exponent tuples of total degree k in n variables, sorted."""
    if k == 0:
        return [(0,) * n]
    out = set()
    for combo in itertools.combinations_with_replacement(range(n), k):
        e = [0] * n
        for c in combo:
            e[c] += 1
        out.add(tuple(e))
    return sorted(out)


def _substitute(exps: tuple[int, ...], p: int, q: int) -> tuple[int, ...]:
    """Monomial image under eps_p -> eps_q (1-based variable indices)."""
    if exps[p - 1] == 0:
        return exps
    e = list(exps)
    e[q - 1] += e[p - 1]
    e[p - 1] = 0
    return tuple(e)


def _constraint_rows(graph: GkmGraph, k: int,
                     mons: list[tuple[int, ...]]) -> list[dict[int, int]]:
    """Linear constraints on coefficients c[(vertex, monomial)] expressing
    phi(sigma) - phi(tau) == 0 after the label substitution, per edge."""
    M = len(mons)
    rows = []
    for si, ti, _ij, (p, q) in graph.edges:
        buckets: dict[tuple[int, ...], dict[int, int]] = {}
        for mi, m in enumerate(mons):
            tgt = _substitute(m, p, q)
            row = buckets.setdefault(tgt, {})
            row[si * M + mi] = row.get(si * M + mi, 0) + 1
            row[ti * M + mi] = row.get(ti * M + mi, 0) - 1
        rows.extend(r for r in buckets.values() if r)
    return rows


def _check_rank_bound(graph: GkmGraph) -> None:
    if graph.n > MAX_N_RANK:
        raise ResourceLimit(
            f"rank computation bounded at n = {MAX_N_RANK}, got {graph.n}")


def equivariant_rank(graph: GkmGraph, k: int) -> int:
    """Rank of the degree-2k part of the GKM solution space, exact."""
    _check_rank_bound(graph)
    mons = monomials(graph.n, k)
    ncols = len(graph.vertices) * len(mons)
    return ncols - rank(_constraint_rows(graph, k, mons))


@dataclass
class EquivariantClass:
    """Assignment of a homogeneous degree-k polynomial to every vertex."""

    degree: int
    assignment: dict[tuple[int, ...], Poly]  # permutation -> polynomial

    def poly(self, sigma: tuple[int, ...]) -> Poly:
        return self.assignment.get(sigma, {})


def _poly_sub(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, Fraction(0)) - c
        if out[e] == 0:
            del out[e]
    return out


def _poly_substitute(p: Poly, a: int, b: int) -> Poly:
    out: Poly = {}
    for e, c in p.items():
        t = _substitute(e, a, b)
        out[t] = out.get(t, Fraction(0)) + c
        if out[t] == 0:
            del out[t]
    return out


def poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, Fraction(0)) + c1 * c2
            if out[e] == 0:
                del out[e]
    return out


def satisfies_congruences(cls: EquivariantClass, graph: GkmGraph) -> bool:
    for si, ti, _ij, (p, q) in graph.edges:
        diff = _poly_sub(cls.poly(graph.vertices[si]),
                         cls.poly(graph.vertices[ti]))
        if _poly_substitute(diff, p, q):
            return False
    return True


def equivariant_basis(graph: GkmGraph, k: int) -> list[EquivariantClass]:
    """Basis of the degree-2k solution space as explicit classes."""
    _check_rank_bound(graph)
    mons = monomials(graph.n, k)
    M = len(mons)
    ncols = len(graph.vertices) * M
    vecs = nullspace(_constraint_rows(graph, k, mons), ncols)
    basis = []
    for vec in vecs:
        assignment: dict[tuple[int, ...], Poly] = {}
        for col, c in vec.items():
            sigma = graph.vertices[col // M]
            assignment.setdefault(sigma, {})[mons[col % M]] = c
        basis.append(EquivariantClass(k, assignment))
    return basis


def xi_transform(cls: EquivariantClass, source: GkmGraph) -> EquivariantClass:
    """The twin isomorphism: at vertex sigma substitute generators by sigma
    (X to Y) or by its inverse (Y to X). Raises if the class fails its
    source-mode congruences."""
    if not satisfies_congruences(cls, source):
        raise SourceConstraintViolation(
            "class does not satisfy source-mode congruences")
    out: dict[tuple[int, ...], Poly] = {}
    for sigma, poly in cls.assignment.items():
        if source.mode == "X":
            perm = sigma                      # eps_i -> eps_{sigma(i)}
        else:
            inv = [0] * len(sigma)            # eps_i -> eps_{sigma^{-1}(i)}
            for pos, v in enumerate(sigma, start=1):
                inv[v - 1] = pos
            perm = tuple(inv)
        new_poly: Poly = {}
        for e, c in poly.items():
            ne = [0] * len(e)
            for i, exp in enumerate(e):
                ne[perm[i] - 1] += exp
            t = tuple(ne)
            new_poly[t] = new_poly.get(t, Fraction(0)) + c
        out[sigma] = {e: c for e, c in new_poly.items() if c != 0}
    return EquivariantClass(cls.degree, out)


def _class_to_vec(cls: EquivariantClass, graph: GkmGraph,
                  mons: list[tuple[int, ...]]) -> dict[int, Fraction]:
    midx = {m: i for i, m in enumerate(mons)}
    vindex = {v: i for i, v in enumerate(graph.vertices)}
    M = len(mons)
    vec: dict[int, Fraction] = {}
    for sigma, poly in cls.assignment.items():
        base = vindex[sigma] * M
        for e, c in poly.items():
            if c != 0:
                vec[base + midx[e]] = c
    return vec


def _scale_by_variable(cls: EquivariantClass, var: int) -> EquivariantClass:
    """Pointwise product with the global class eps_var."""
    out: dict[tuple[int, ...], Poly] = {}
    for sigma, poly in cls.assignment.items():
        new_poly: Poly = {}
        for e, c in poly.items():
            ne = list(e)
            ne[var - 1] += 1
            new_poly[tuple(ne)] = c
        out[sigma] = new_poly
    return EquivariantClass(cls.degree + 1, out)


def _ideal_vectors(graph: GkmGraph, k: int,
                   lower_basis: list[EquivariantClass],
                   mons: list[tuple[int, ...]]) -> list[dict[int, Fraction]]:
    """Degree-2k part of the ideal generated by the positive-degree global
    classes: eps_i times the degree-2(k-1) solutions."""
    vecs = []
    for cls in lower_basis:
        for var in range(1, graph.n + 1):
            vecs.append(_class_to_vec(_scale_by_variable(cls, var),
                                      graph, mons))
    return vecs


@dataclass(frozen=True)
class RankTable:
    h: HessenbergFunction
    mode: str
    # degree 2k -> rank
    equivariant: dict[int, int]
    ordinary: dict[int, int] | None = None

    def to_json(self) -> str:
        return json.dumps({
            "h": list(self.h.values),
            "mode": self.mode,
            "equivariant": {str(k): v for k, v in self.equivariant.items()},
            "ordinary": None if self.ordinary is None else
            {str(k): v for k, v in self.ordinary.items()},
        })

    def to_csv(self) -> str:
        import csv
        import io
        buf = io.StringIO()
        w = csv.writer(buf)
        head = ["degree", "equivariant_rank"]
        if self.ordinary is not None:
            head.append("ordinary_rank")
        w.writerow(head)
        for deg in sorted(self.equivariant):
            row = [deg, self.equivariant[deg]]
            if self.ordinary is not None:
                row.append(self.ordinary.get(deg, ""))
            w.writerow(row)
        return buf.getvalue()


def ordinary_ranks(graph: GkmGraph, cutoff: int | None = None) -> RankTable:
    """Graded ranks of the quotient by the ideal of positive-degree global
    classes; reproduces the Betti numbers and vanishes above 2 d(h)."""
    _check_rank_bound(graph)
    d = complex_dimension(graph.h)
    if cutoff is None:
        cutoff = 2 * d
    equi: dict[int, int] = {}
    ordin: dict[int, int] = {}
    lower_basis: list[EquivariantClass] = []
    for k in range(cutoff // 2 + 1):
        basis = equivariant_basis(graph, k)
        equi[2 * k] = len(basis)
        if k == 0:
            ordin[0] = len(basis)
        else:
            mons = monomials(graph.n, k)
            ideal = _ideal_vectors(graph, k, lower_basis, mons)
            ordin[2 * k] = len(basis) - rank(ideal)
        lower_basis = basis
    return RankTable(graph.h, graph.mode, equi, ordin)


def poincare_consistency(h: HessenbergFunction, cutoff: int,
                         mode: str = "X") -> dict:
    """Compare GKM equivariant ranks against the Poincare-series prediction
    (sum_k beta_{2k} t^{2k}) / (1 - t^2)^n, degree by degree."""
    graph = build_graph(h, mode)
    series = equivariant_series(h, cutoff)
    report = {"h": list(h.values), "mode": mode, "rows": [], "pass": True}
    for k in range(cutoff // 2 + 1):
        r = equivariant_rank(graph, k)
        ok = (r == series[k])
        report["rows"].append(
            {"degree": 2 * k, "gkm_rank": r, "series": series[k], "pass": ok})
        report["pass"] = report["pass"] and ok
    return report


def degree2_generation(graph: GkmGraph, up_to: int | None = None
                       ) -> int | None:
    """First degree at which products of degree-2 classes fail to span the
    ordinary cohomology, or None if they span through up_to."""
    _check_rank_bound(graph)
    d = complex_dimension(graph.h)
    if up_to is None:
        up_to = 2 * d
    table = ordinary_ranks(graph, cutoff=up_to)
    deg1_basis = equivariant_basis(graph, 1)
    gen_basis: list[EquivariantClass] = list(deg1_basis)
    lower_basis = deg1_basis
    for k in range(2, up_to // 2 + 1):
        mons = monomials(graph.n, k)
        ideal = _ideal_vectors(graph, k, equivariant_basis(graph, k - 1),
                               mons)
        red = SparseReducer()
        for vec in ideal:
            red.add_row(vec)
        ideal_rank = red.rank
        new_gen: list[EquivariantClass] = []
        for g in gen_basis:
            for v in deg1_basis:
                prod = EquivariantClass(
                    k, {sigma: poly_mul(g.poly(sigma), v.poly(sigma))
                        for sigma in set(g.assignment) | set(v.assignment)})
                if red.add_row(_class_to_vec(prod, graph, mons)):
                    new_gen.append(prod)
        generated = red.rank - ideal_rank
        if generated < table.ordinary[2 * k]:
            return 2 * k
        gen_basis = new_gen
    return None
