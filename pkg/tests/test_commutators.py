import itertools

import pytest
from hypothesis import given, settings, strategies as st

from nilkit.commutators import (
    CommutatorForm,
    CommutatorOrder,
    all_forms,
    bracket,
    compare,
    components,
    enumerate_basic,
    weight_vector,
    x,
)
from nilkit.errors import InvalidParameterError, MalformedCommutatorError
from oracles import witt


def trees(r, max_weight):
    """All trees with leaves in 1..r, up to a weight."""
    by_w = {1: [x(i) for i in range(1, r + 1)]}
    for n in range(2, max_weight + 1):
        by_w[n] = [bracket(a, b) for k in range(1, n) for a in by_w[k] for b in by_w[n - k]]
    return [c for n in by_w for c in by_w[n]]


def leaf_count(c):
    return 1 if c.is_leaf else leaf_count(c.left) + leaf_count(c.right)


def tree_strategy(r):
    return st.recursive(
        st.integers(1, r).map(x),
        lambda inner: st.tuples(inner, inner).map(lambda ab: bracket(*ab)),
        max_leaves=6,
    )


class TestWeightVector:
    def test_leaf(self):
        w = weight_vector(x(1), 2)
        assert w.counts == (1, 0) and w.total == 1

    def test_bracket(self):
        w = weight_vector(bracket(x(2), x(1)), 2)
        assert w.counts == (1, 1) and w.total == 2

    def test_nested_against_leaf_counts(self):
        c = bracket(bracket(x(2), x(1)), x(2))
        w = weight_vector(c, 2)
        leaves = c.leaves()
        assert w.counts == (leaves.count(1), leaves.count(2)) == (1, 2)
        assert w.total == 3

    def test_out_of_range(self):
        with pytest.raises(MalformedCommutatorError):
            weight_vector(bracket(x(3), x(1)), 2)

    @given(tree_strategy(3))
    def test_recursion(self, c):
        w = weight_vector(c, 3)
        assert w.total == sum(w.counts) == leaf_count(c)
        if not c.is_leaf:
            a, b = weight_vector(c.left, 3), weight_vector(c.right, 3)
            assert w.counts == tuple(u + v for u, v in zip(a.counts, b.counts))

    def test_bad_leaf(self):
        with pytest.raises(MalformedCommutatorError):
            x(0)


class TestOrder:
    def test_letters(self):
        assert compare(x(1), x(2)) == -1

    def test_weight_first(self):
        assert compare(bracket(x(2), x(1)), x(2)) == 1

    def test_reflexive(self):
        c = bracket(x(2), x(1))
        assert compare(c, c) == 0

    def test_order_object_checks_bounds(self):
        order = CommutatorOrder(2, 2)
        assert order.compare(x(1), x(2)) == -1
        with pytest.raises(MalformedCommutatorError):
            order.compare(bracket(bracket(x(2), x(1)), x(1)), x(1))

    def test_total_and_constraints(self):
        ts = trees(3, 3)
        for a, b in itertools.combinations(ts, 2):
            ab, ba = compare(a, b), compare(b, a)
            assert ab == -ba != 0
            if a.weight < b.weight:
                assert ab == -1
        # equal weight vectors are consecutive
        srt = sorted(ts)
        seen, last = set(), None
        for c in srt:
            wv = weight_vector(c, 3).counts
            if wv != last:
                assert wv not in seen
                seen.add(wv)
                last = wv

    def test_deterministic(self):
        assert [str(c) for c in enumerate_basic(3, 3)] == [str(c) for c in enumerate_basic(3, 3)]


class TestBasic:
    def test_rank2_step2(self):
        t = enumerate_basic(2, 2)
        assert list(t) == [x(1), x(2), bracket(x(2), x(1))]

    def test_rank1(self):
        assert list(enumerate_basic(1, 3)) == [x(1)]

    def test_rank2_step3(self):
        assert len(enumerate_basic(2, 3)) == 5

    @pytest.mark.parametrize("r,s", [(0, 2), (2, 0)])
    def test_bad(self, r, s):
        with pytest.raises(InvalidParameterError):
            enumerate_basic(r, s)

    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    @pytest.mark.parametrize("s", [1, 2, 3, 4, 5])
    def test_witt_counts(self, r, s):
        t = enumerate_basic(r, s)
        for n in range(1, s + 1):
            assert sum(1 for c in t if c.weight == n) == witt(r, n)

    def test_table_invariants(self):
        t = enumerate_basic(3, 4)
        assert list(t)[:3] == [x(1), x(2), x(3)]
        assert all(c.weight <= 4 for c in t)
        assert list(t) == sorted(t)
        assert all(a < b for a, b in zip(t, list(t)[1:]))

    def test_hall_rule(self):
        t = enumerate_basic(2, 4)
        basic = set(t)
        for c in t:
            if c.is_leaf:
                continue
            assert c.left in basic and c.right in basic and c.right < c.left
            if not c.left.is_leaf:
                assert not c.right < c.left.right

    def test_basic_are_exactly_collected_support(self):
        from nilkit.collection import Word, collect

        seen = set()
        letters = [1, -1, 2, -2]
        for n in range(1, 5):
            for w in itertools.product(letters, repeat=n):
                form, _ = collect(Word.from_letters(w, 2, 2), trace=False)
                seen |= {c for c, e in form.items()}
        assert seen == set(enumerate_basic(2, 2))

    def test_bounds(self):
        t = enumerate_basic(2, 2)
        assert t.bounds((2, 3)) == [2, 3, 6]


class TestComponents:
    def test_example(self):
        c = bracket(x(1), bracket(x(2), x(3)))
        assert components(c) == {x(1), x(2), x(3), bracket(x(2), x(3)), c}

    def test_leaf(self):
        assert components(x(1)) == {x(1)}

    def test_dedup(self):
        assert components(bracket(x(1), x(1))) == {x(1), bracket(x(1), x(1))}

    @given(tree_strategy(3))
    def test_size_bound(self, c):
        assert len(components(c)) <= 2 * c.weight - 1


class TestForms:
    def test_identity(self):
        f = CommutatorForm.identity()
        assert f.weight == 1 and f(x(5)) == x(5)

    def test_permutation(self):
        f = CommutatorForm(bracket(bracket(x(1), x(3)), x(2)))
        assert f.permutation == (1, 3, 2)
        assert f(x(7), x(8), x(9)) == bracket(bracket(x(7), x(9)), x(8))

    def test_bad_slots(self):
        with pytest.raises(MalformedCommutatorError):
            CommutatorForm(bracket(x(1), x(1)))

    @pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 12)])
    def test_all_forms_count(self, n, count):
        # n! orderings times Catalan(n-1) shapes, each bracket ordered
        assert len(all_forms(n)) == count
        assert len(set(all_forms(n))) == count

    @settings(max_examples=20)
    @given(st.integers(1, 4))
    def test_simple(self, n):
        assert CommutatorForm.simple(n).weight == n
