import math
from fractions import Fraction

import pytest

from isoflow import gkm, hessfn
from isoflow.errors import (Decomposable, ResourceLimit,
                            SourceConstraintViolation)


def graph(vals, mode="X"):
    return gkm.build_graph(hessfn.validate(vals), mode)


class TestBuildGraph:
    def test_vertex_count(self):
        assert len(graph((3, 3, 3)).vertices) == 6

    def test_edge_count_regular(self):
        # every vertex has one edge per staircase pair
        g = graph((2, 3, 3))
        d = hessfn.complex_dimension(g.h)
        assert len(g.edges) == math.factorial(3) * d // 2
        for vi in range(len(g.vertices)):
            assert g.degree(vi) == d

    def test_x_labels_constant_on_transposition(self):
        g = graph((3, 3, 3))
        for _si, _ti, ij, label in g.edges:
            assert label == ij

    def test_y_labels_follow_sigma(self):
        g = graph((3, 3, 3), mode="Y")
        for si, _ti, (i, j), (p, q) in g.edges:
            sigma = g.vertices[si]
            assert (p, q) == (sigma[i - 1], sigma[j - 1])

    def test_decomposable_rejected(self):
        with pytest.raises(Decomposable):
            graph((1, 2, 3))

    def test_bad_mode_rejected(self):
        with pytest.raises(ValueError):
            graph((2, 2), mode="Z")

    def test_resource_limit(self):
        with pytest.raises(ResourceLimit):
            gkm.build_graph(hessfn.h_max(7))

    def test_dot_and_json(self):
        g = graph((2, 2))
        assert "e1-e2" in g.to_dot()
        assert '"edges"' in g.to_json()


class TestNoncollinear:
    def test_staircase_weights_pass(self):
        assert gkm.pairwise_noncollinear(hessfn.h_max(4))

    def test_explicit_collinear_fails(self):
        assert not gkm.pairwise_noncollinear([(1, -1, 0), (2, -2, 0)])

    def test_explicit_independent_pass(self):
        assert gkm.pairwise_noncollinear([(1, -1, 0), (0, 1, -1)])


class TestMonomials:
    def test_degree0(self):
        assert gkm.monomials(3, 0) == [(0, 0, 0)]

    def test_degree2_count(self):
        # multichoose(n, k)
        assert len(gkm.monomials(3, 2)) == 6
        assert len(gkm.monomials(4, 3)) == 20

    def test_all_degree_k(self):
        assert all(sum(m) == 3 for m in gkm.monomials(4, 3))


class TestEquivariantRanks:
    def test_h_max3_matches_series(self):
        g = graph((3, 3, 3))
        series = hessfn.equivariant_series(g.h, 8)
        for k in range(5):
            assert gkm.equivariant_rank(g, k) == series[k]

    def test_h_min3_matches_series(self):
        g = graph((2, 3, 3))
        series = hessfn.equivariant_series(g.h, 8)
        assert series[:3] == [1, 7, 19]
        for k in range(5):
            assert gkm.equivariant_rank(g, k) == series[k]

    def test_x_and_y_agree(self):
        for vals in ((2, 3, 3), (3, 3, 3)):
            gx, gy = graph(vals, "X"), graph(vals, "Y")
            for k in range(4):
                assert gkm.equivariant_rank(gx, k) == \
                    gkm.equivariant_rank(gy, k)

    def test_degree0_rank_one(self):
        assert gkm.equivariant_rank(graph((2, 3, 3)), 0) == 1

    def test_rank_bound(self):
        with pytest.raises(ResourceLimit):
            gkm.equivariant_rank(gkm.build_graph(hessfn.h_max(5)), 1)

    def test_poincare_consistency_report(self):
        rep = gkm.poincare_consistency(hessfn.h_min(3), 6)
        assert rep["pass"]
        assert [r["gkm_rank"] for r in rep["rows"]] == [1, 7, 19, 37]


class TestBasisAndCongruences:
    def test_basis_size_matches_rank(self):
        g = graph((2, 3, 3))
        for k in range(3):
            assert len(gkm.equivariant_basis(g, k)) == \
                gkm.equivariant_rank(g, k)

    def test_basis_classes_satisfy_congruences(self):
        for mode in ("X", "Y"):
            g = graph((2, 3, 3), mode)
            for cls in gkm.equivariant_basis(g, 2):
                assert gkm.satisfies_congruences(cls, g)

    def test_random_assignment_fails(self):
        g = graph((2, 3, 3))
        bad = gkm.EquivariantClass(1, {
            g.vertices[0]: {(1, 0, 0): Fraction(1)}})
        assert not gkm.satisfies_congruences(bad, g)

    def test_constant_class_satisfies(self):
        g = graph((3, 3, 3))
        const = gkm.EquivariantClass(0, {
            v: {(0, 0, 0): Fraction(5)} for v in g.vertices})
        assert gkm.satisfies_congruences(const, g)


class TestXiTransform:
    def test_maps_x_basis_into_y_solutions(self):
        gx, gy = graph((2, 3, 3), "X"), graph((2, 3, 3), "Y")
        for k in (1, 2):
            images = [gkm.xi_transform(c, gx)
                      for c in gkm.equivariant_basis(gx, k)]
            for img in images:
                assert gkm.satisfies_congruences(img, gy)
            # images stay independent: the map is injective degree by degree
            mons = gkm.monomials(3, k)
            vecs = [gkm._class_to_vec(img, gy, mons) for img in images]
            from isoflow.ratlin import rank
            assert rank(vecs) == len(images)

    def test_roundtrip_identity(self):
        gx, gy = graph((3, 3, 3), "X"), graph((3, 3, 3), "Y")
        for cls in gkm.equivariant_basis(gx, 1):
            back = gkm.xi_transform(gkm.xi_transform(cls, gx), gy)
            assert back.assignment == cls.assignment

    def test_rejects_invalid_source(self):
        g = graph((2, 3, 3))
        bad = gkm.EquivariantClass(1, {
            g.vertices[0]: {(1, 0, 0): Fraction(1)}})
        with pytest.raises(SourceConstraintViolation):
            gkm.xi_transform(bad, g)


class TestOrdinaryRanks:
    def test_h_min3_matches_betti(self):
        g = graph((2, 3, 3))
        table = gkm.ordinary_ranks(g, cutoff=8)
        betti = hessfn.betti_table(g.h).betti
        for k, b in enumerate(betti):
            assert table.ordinary[2 * k] == b
        assert table.ordinary.get(6, 0) == 0
        assert table.ordinary.get(8, 0) == 0

    def test_h_max3_matches_betti(self):
        g = graph((3, 3, 3))
        table = gkm.ordinary_ranks(g)
        betti = hessfn.betti_table(g.h).betti
        assert [table.ordinary[2 * k] for k in range(len(betti))] == \
            list(betti)

    def test_serialization(self):
        table = gkm.ordinary_ranks(graph((2, 2)))
        assert '"ordinary"' in table.to_json()
        assert table.to_csv().splitlines()[0] == \
            "degree,equivariant_rank,ordinary_rank"


class TestDegree2Generation:
    def test_h_max3_generated(self):
        assert gkm.degree2_generation(graph((3, 3, 3))) is None

    def test_h_min3_generated(self):
        assert gkm.degree2_generation(graph((2, 3, 3))) is None

    def test_known_failure_case(self):
        assert gkm.degree2_generation(graph((3, 4, 4, 4))) == 4
