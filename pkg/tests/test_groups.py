import itertools
import random

import numpy as np
import pytest

from nilkit.backends import CyclicBackend, ProductBackend, TableGroup, UnitriangularBackend, heisenberg, symmetric_group
from nilkit.collection import Word, collect
from nilkit.commutators import bracket, enumerate_basic, x
from nilkit.errors import InvalidParameterError, MissingAssignmentError, PreconditionError, UnsupportedBackendError
from nilkit.groups import (
    commutator_set,
    evaluate_word,
    is_normal,
    lower_central_series,
    lower_central_series_naive,
    nilpotency_step,
    simple_commutator,
    subgroup_closure,
    sylow_decomposition,
)
from nilkit.parsing import parse_occurrences
from oracles import closure, mat_comm, ut_entries, ut_matrix


class TestEvaluate:
    def test_heisenberg_commutator(self, H):
        a, b = H.elementary(1, 2), H.elementary(2, 3)
        got = evaluate_word(H, [a, b], parse_occurrences("[x1,x2]"))
        want = ut_entries(mat_comm(ut_matrix(3, [1, 0, 0]), ut_matrix(3, [0, 0, 1])))
        assert got == want == H.elementary(1, 3)

    def test_empty(self, H):
        assert evaluate_word(H, {}, []) == H.identity()

    def test_cancel(self, H):
        a = H.elementary(1, 2)
        assert evaluate_word(H, [a], parse_occurrences("x1 x1^-1")) == H.identity()

    def test_missing(self, H):
        with pytest.raises(MissingAssignmentError):
            evaluate_word(H, [H.elementary(1, 2)], parse_occurrences("x2"))

    def test_collect_agreement_finite(self):
        rng = random.Random(5)
        G = UnitriangularBackend(4, 5)
        for _ in range(30):
            letters = [rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(8)]
            w = Word.from_letters(letters, 3, 3)
            vals = [rng.choice(G.elements()) for _ in range(3)]
            form, _ = collect(w, trace=False)
            assert evaluate_word(G, vals, w) == evaluate_word(G, vals, form.items())


class TestCommutators:
    def test_simple(self, H):
        a, b = H.elementary(1, 2), H.elementary(2, 3)
        assert simple_commutator(H, [a, b]) == H.elementary(1, 3)
        assert simple_commutator(H, [a, b, b]) == H.identity()
        assert simple_commutator(H, [a, H.identity()]) == H.identity()
        with pytest.raises(InvalidParameterError):
            simple_commutator(H, [a])

    def test_commutator_set(self, H3):
        xx = H3.elementary(1, 2)
        y = H3.elementary(2, 3)
        S = commutator_set(H3, [{xx, H3.mul(xx, xx)}, {y}])
        assert S.elements == {H3.elementary(1, 3), H3.elementary(1, 3, 2)}
        assert commutator_set(H3, [{xx, y}, {H3.identity()}]).elements == {H3.identity()}

    def test_commutator_set_ut2(self):
        G = heisenberg(2)
        es = G.elements()
        want = {G.comm(a, b) for a in es for b in es}
        assert commutator_set(G, [es, es]).elements == want == {G.identity(), G.elementary(1, 3)}


class TestSeries:
    def test_ut3_mod2(self):
        G = heisenberg(2)
        chain = lower_central_series(G)
        assert chain.sizes() == [8, 2, 1] and chain.step == 2
        assert chain[2] == {G.identity(), G.elementary(1, 3)}

    def test_abelian(self):
        chain = lower_central_series(CyclicBackend(6))
        assert chain.sizes() == [6, 1] and chain.step == 1

    def test_ut4_mod2(self):
        chain = lower_central_series(UnitriangularBackend(4, 2))
        assert chain.step == 3 and chain.sizes() == [64, 8, 2, 1]

    def test_matches_naive_and_oracle(self):
        for G in (heisenberg(3), UnitriangularBackend(4, 2), symmetric_group(3)):
            fast, naive = lower_central_series(G), lower_central_series_naive(G)
            assert fast.terms == naive.terms
            es = G.elements()
            # independent oracle: closure of all commutators
            g2 = closure(G.mul, G.identity(), {G.comm(a, b) for a in es for b in es})
            assert fast[2] == g2
            for term in fast.terms:
                assert is_normal(G, term)

    def test_gamma_n_containment(self):
        G = UnitriangularBackend(4, 2)
        chain = lower_central_series(G)
        rng = random.Random(1)
        es = G.elements()
        t = enumerate_basic(3, 4)
        from nilkit.groups import evaluate_commutator

        for _ in range(20):
            vals = {i: rng.choice(es) for i in range(1, 4)}
            for c in t:
                assert evaluate_commutator(G, vals, c) in chain[c.weight]

    def test_not_nilpotent(self):
        chain = lower_central_series(symmetric_group(3))
        assert chain.step is None and chain.sizes() == [6, 3]

    def test_infinite(self, H):
        with pytest.raises(UnsupportedBackendError):
            lower_central_series(H)


class TestNilpotencyStep:
    def test_heisenberg(self, H):
        assert nilpotency_step(H, [H.elementary(1, 2), H.elementary(2, 3)]) == 2

    def test_single(self, H):
        assert nilpotency_step(H, [H.elementary(1, 2)]) == 1

    def test_s3(self):
        S3 = symmetric_group(3)
        assert nilpotency_step(S3, S3.elements()) is None

    def test_ut5(self):
        G = UnitriangularBackend(5)
        assert nilpotency_step(G, G.generators()) == 4


class TestSylow:
    def test_z6(self):
        assert sylow_decomposition(CyclicBackend(6)) == [(2, {0, 3}), (3, {0, 2, 4})]

    def test_z4_z3(self):
        G = ProductBackend([CyclicBackend(4), CyclicBackend(3)])
        parts = dict(sylow_decomposition(G))
        assert parts[2] == {(a, 0) for a in range(4)}
        assert parts[3] == {(0, b) for b in range(3)}

    def test_ut_times_z3(self):
        G = ProductBackend([heisenberg(2), CyclicBackend(3)])
        parts = dict(sylow_decomposition(G))
        assert len(parts[2]) == 8 and len(parts[3]) == 3
        # oracle: element orders
        for g in G.elements():
            o = G.element_order(g)
            assert (g in parts[2]) == (o in (1, 2, 4, 8))

    def test_non_nilpotent(self):
        with pytest.raises(PreconditionError):
            sylow_decomposition(symmetric_group(3))


def test_closure_matches_oracle():
    G = UnitriangularBackend(4, 3)
    gens = G.generators()[:2]
    assert subgroup_closure(G, gens) == closure(G.mul, G.identity(), gens)
