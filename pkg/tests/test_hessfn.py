import math

import pytest
from hypothesis import given, strategies as st

from isoflow import hessfn
from isoflow.errors import NotHessenberg, ResourceLimit


def hess_values(max_n=7):
    """Strategy: valid Hessenberg value sequences."""
    def build(n, rnd):
        vals = []
        prev = 1
        for i in range(1, n + 1):
            lo = max(i, prev)
            v = rnd.randint(lo, n)
            vals.append(v)
            prev = v
        return tuple(vals)
    return st.integers(1, max_n).flatmap(
        lambda n: st.randoms(use_true_random=False).map(
            lambda rnd: build(n, rnd)))


class TestValidate:
    def test_running_example(self):
        h = hessfn.validate((3, 3, 5, 6, 6, 6))
        assert h.n == 6

    def test_identity_valid(self):
        for n in range(1, 6):
            h = hessfn.validate(tuple(range(1, n + 1)))
            assert not hessfn.is_indecomposable(h) or n == 1

    def test_below_index_rejected(self):
        with pytest.raises(NotHessenberg):
            hessfn.validate((2, 2, 2))

    def test_nonmonotone_rejected(self):
        with pytest.raises(NotHessenberg):
            hessfn.validate((3, 2, 3))

    def test_out_of_range_rejected(self):
        with pytest.raises(NotHessenberg):
            hessfn.validate((2, 3, 4))

    def test_empty_rejected(self):
        with pytest.raises(NotHessenberg):
            hessfn.validate(())


class TestDual:
    def test_running_example(self):
        h = hessfn.validate((3, 3, 5, 6, 6, 6))
        assert hessfn.dual(h) == (1, 1, 1, 3, 3, 4)

    def test_h_max(self):
        assert hessfn.dual(hessfn.h_max(5)) == (1,) * 5

    def test_h_min(self):
        assert hessfn.dual(hessfn.h_min(4)) == (1, 1, 2, 3)

    @given(hess_values())
    def test_interchange_equivalence(self, vals):
        h = hessfn.validate(vals)
        g = hessfn.dual(h)
        for i in range(1, h.n + 1):
            assert g[i - 1] <= i
            for j in range(1, h.n + 1):
                assert (h(i) >= j) == (i >= g[j - 1])

    @given(hess_values())
    def test_dual_nondecreasing(self, vals):
        g = hessfn.dual(hessfn.validate(vals))
        assert all(g[i] <= g[i + 1] for i in range(len(g) - 1))


class TestDimension:
    def test_h_min_n3(self):
        assert hessfn.complex_dimension(hessfn.h_min(3)) == 2

    def test_h_max(self):
        for n in range(1, 7):
            assert hessfn.complex_dimension(hessfn.h_max(n)) == n * (n - 1) // 2

    def test_running_example(self):
        assert hessfn.complex_dimension(hessfn.validate((3, 3, 5, 6, 6, 6))) == 8

    @given(hess_values())
    def test_equals_edge_count(self, vals):
        h = hessfn.validate(vals)
        assert len(hessfn.sparsity_graph(h).edges) == hessfn.complex_dimension(h)


class TestSparsityGraph:
    def test_h_min_path(self):
        g = hessfn.sparsity_graph(hessfn.h_min(3))
        assert g.edges == frozenset({(1, 2), (2, 3)})

    def test_h_max_complete(self):
        g = hessfn.sparsity_graph(hessfn.h_max(3))
        assert g.edges == frozenset({(1, 2), (1, 3), (2, 3)})

    def test_running_example_count(self):
        g = hessfn.sparsity_graph(hessfn.validate((3, 3, 5, 6, 6, 6)))
        assert len(g.edges) == 8

    @given(hess_values())
    def test_connected_iff_indecomposable(self, vals):
        h = hessfn.validate(vals)
        assert hessfn.sparsity_graph(h).is_connected() == \
            hessfn.is_indecomposable(h)

    def test_decomposable_components(self):
        h = hessfn.validate((2, 2, 4, 4))
        assert not hessfn.is_indecomposable(h)
        g = hessfn.sparsity_graph(h)
        assert g.edges == frozenset({(1, 2), (3, 4)})

    def test_dot_export(self):
        dot = hessfn.sparsity_graph(hessfn.h_min(3)).to_dot()
        assert "1 -- 2" in dot and "2 -- 3" in dot


class TestEnumerate:
    def test_n1(self):
        assert [h.values for h in hessfn.enumerate_all(1)] == [(1,)]

    def test_n2(self):
        assert [h.values for h in hessfn.enumerate_all(2)] == [(1, 2), (2, 2)]

    def test_n3_counts(self):
        hs = list(hessfn.enumerate_all(3))
        assert len(hs) == 5
        indec = [h.values for h in hs if hessfn.is_indecomposable(h)]
        assert indec == [(2, 3, 3), (3, 3, 3)]

    def test_lexicographic_and_unique(self):
        vals = [h.values for h in hessfn.enumerate_all(5)]
        assert vals == sorted(set(vals))

    def test_catalan_counts(self):
        # brute-force cross-check against the recursive Catalan recurrence
        cat = [1]
        for n in range(1, 9):
            cat.append(sum(cat[i] * cat[n - 1 - i] for i in range(n)))
        for n in range(1, 9):
            total, indec = hessfn.count_functions(n)
            assert total == cat[n] == hessfn.catalan(n)
            assert indec == cat[n - 1]

    def test_resource_limit(self):
        with pytest.raises(ResourceLimit):
            list(hessfn.enumerate_all(30))


class TestInversions:
    def test_identity_zero(self):
        h = hessfn.h_min(3)
        assert hessfn.hess_inversions(h, (1, 2, 3)) == 0

    def test_reversal_h_min(self):
        assert hessfn.hess_inversions(hessfn.h_min(3), (3, 2, 1)) == 2

    def test_h_max_ordinary_inversions(self):
        assert hessfn.hess_inversions(hessfn.h_max(3), (2, 3, 1)) == 2

    def test_brute_force_oracle(self):
        import itertools
        h = hessfn.validate((3, 3, 4, 4))
        for sigma in itertools.permutations((1, 2, 3, 4)):
            expect = sum(
                1 for i in range(1, 5) for j in range(i + 1, h(i) + 1)
                if sigma[i - 1] > sigma[j - 1])
            assert hessfn.hess_inversions(h, sigma) == expect

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            hessfn.hess_inversions(hessfn.h_min(3), (1, 1, 3))


class TestBetti:
    def test_h_min_n3(self):
        assert hessfn.betti_table(hessfn.h_min(3)).betti == (1, 4, 1)

    def test_h_max_n3(self):
        assert hessfn.betti_table(hessfn.h_max(3)).betti == (1, 2, 2, 1)

    def test_n1(self):
        assert hessfn.betti_table(hessfn.validate((1,))).betti == (1,)

    def test_sum_and_symmetry(self):
        for h in hessfn.enumerate_all(4):
            t = hessfn.betti_table(h)
            assert t.total() == math.factorial(4)
            if hessfn.is_indecomposable(h):
                assert t.betti == t.betti[::-1]
                assert t.betti[0] == 1 and t.betti[-1] == 1

    def test_unique_extremes_indecomposable(self):
        import itertools
        h = hessfn.validate((2, 3, 4, 4))
        d = hessfn.complex_dimension(h)
        zeros = [s for s in itertools.permutations((1, 2, 3, 4))
                 if hessfn.hess_inversions(h, s) == 0]
        tops = [s for s in itertools.permutations((1, 2, 3, 4))
                if hessfn.hess_inversions(h, s) == d]
        assert zeros == [(1, 2, 3, 4)]
        assert tops == [(4, 3, 2, 1)]

    def test_resource_limit(self):
        with pytest.raises(ResourceLimit):
            hessfn.betti_table(hessfn.h_max(9))

    def test_serialization(self):
        t = hessfn.betti_table(hessfn.h_min(3))
        assert "betti" in t.to_json()
        assert t.to_csv().splitlines()[1] == "0,1"


class TestSeries:
    def test_cutoff_zero(self):
        assert hessfn.equivariant_series(hessfn.h_min(3), 0) == [1]

    def test_h_min_n3(self):
        assert hessfn.equivariant_series(hessfn.h_min(3), 2) == [1, 7]

    def test_h_max_n2(self):
        # (1 + t^2) / (1 - t^2)^2 = 1 + 3 t^2 + 5 t^4 + ...
        assert hessfn.equivariant_series(hessfn.h_max(2), 4) == [1, 3, 5]

    def test_odd_cutoff_rejected(self):
        with pytest.raises(ValueError):
            hessfn.equivariant_series(hessfn.h_min(3), 3)
