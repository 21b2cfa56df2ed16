import itertools

import pytest

from nilkit.backends import CyclicBackend, ProductBackend, SubgroupBackend, TableGroup, UnitriangularBackend, heisenberg, symmetric_group
from nilkit.errors import InvalidParameterError, PreconditionError
from nilkit.groups import lower_central_series, subgroup_closure
from nilkit.pgroups import (
    AbelianPGroup,
    MultiHom,
    abelian_rank,
    burnside_basis,
    commutator_multihom,
    frattini,
    frattini_rank,
    induced_multihom,
    invariant_factors,
    is_union_of_subgroups,
    multihom_image_span,
    prime_of,
    rank_by_search,
    span_verdict,
    spans_frattini_quotient,
    union_subgroups_span,
    verify_multihom_factoring,
    verify_subgroup_rank,
)
from oracles import closure, min_generators


def prod(*ns):
    return ProductBackend([CyclicBackend(n) for n in ns])


class TestRank:
    def test_z4_z2(self):
        G = prod(4, 2)
        assert abelian_rank(G) == 2 == rank_by_search(G) == min_generators(G.elements(), G.mul, G.identity())

    def test_cyclic(self):
        assert abelian_rank(CyclicBackend(9)) == 1

    def test_elementary(self):
        assert abelian_rank(prod(3, 3, 3)) == 3

    @pytest.mark.parametrize("ns", [(2,), (6,), (2, 2), (4, 6), (3, 9), (2, 2, 2), (12, 18)])
    def test_against_search(self, ns):
        G = prod(*ns)
        assert abelian_rank(G) == min_generators(G.elements(), G.mul, G.identity())

    def test_invariant_factors(self):
        assert invariant_factors(prod(12, 18)) == [4, 2, 9, 3]
        assert invariant_factors(prod(8, 2, 4)) == [8, 4, 2]

    def test_abelian_pgroup(self):
        G = AbelianPGroup(2, [1, 2])
        assert G.moduli == (4, 2) and G.rank == 2 and abelian_rank(G) == 2
        assert rank_by_search(G) == 2
        with pytest.raises(InvalidParameterError):
            AbelianPGroup(4, [1])

    def test_non_abelian(self):
        with pytest.raises(PreconditionError):
            abelian_rank(heisenberg(2))

    def test_subgroup_rank(self):
        G = prod(4, 2)
        assert verify_subgroup_rank(G, {(0, 0), (2, 0), (0, 1), (2, 1)})
        assert verify_subgroup_rank(G, {(0, 0)})
        assert verify_subgroup_rank(G, G.elements())
        H = SubgroupBackend(G, {(0, 0), (2, 0), (0, 1), (2, 1)})
        assert rank_by_search(H) == 2

    def test_subgroup_rank_all(self):
        from nilkit.approximate import _all_subgroups

        G = prod(4, 4)
        for H in _all_subgroups(G):
            assert verify_subgroup_rank(G, H)


class TestFrattini:
    def test_z4_z2(self):
        assert frattini(prod(4, 2)) == {(0, 0), (2, 0)}

    def test_elementary(self):
        G = prod(3, 3)
        assert frattini(G) == {(0, 0)} and frattini_rank(G) == 2

    def test_ut3_mod2(self):
        G = heisenberg(2)
        es = G.elements()
        oracle = closure(G.mul, G.identity(), {G.mul(a, a) for a in es} | {G.comm(a, b) for a in es for b in es})
        assert frattini(G) == oracle == {G.identity(), G.elementary(1, 3)}

    def test_quotient_elementary(self):
        for G in (heisenberg(3), prod(8, 2), UnitriangularBackend(4, 2)):
            Phi = frattini(G)
            p = prime_of(G)
            assert all(G.pow(g, p) in Phi for g in G.elements())

    def test_not_pgroup(self):
        with pytest.raises(PreconditionError):
            frattini(CyclicBackend(6))


def generates(G, S):
    return len(closure(G.mul, G.identity(), list(S))) == G.order()


class TestBurnside:
    def test_example(self):
        G = prod(4, 2)
        assert burnside_basis(G, [(1, 0), (1, 1), (0, 1)]) == [(0, 1), (1, 0)]
        assert generates(G, [(0, 1), (1, 0)])

    def test_already_minimal(self):
        G = prod(4, 2)
        S = [(1, 0), (0, 1)]
        assert sorted(burnside_basis(G, S)) == sorted(S)

    def test_not_pgroup(self):
        with pytest.raises(PreconditionError):
            burnside_basis(CyclicBackend(6), [2, 3])

    def test_not_generating(self):
        with pytest.raises(PreconditionError):
            burnside_basis(prod(4, 2), [(1, 0)])

    @pytest.mark.parametrize(
        "G",
        [heisenberg(2), prod(2, 2, 2), prod(8, 2), heisenberg(3), TableGroup.from_backend(UnitriangularBackend(3, 2))[0]],
        ids=repr,
    )
    def test_theorem_exhaustive(self, G):
        es = [g for g in G.elements() if g != G.identity()]
        gens = sorted(es)[: min(len(es), 7)]
        gens = gens if generates(G, gens) else es[:7] + G.generators()
        for k in range(1, 5):
            for S in itertools.combinations(gens, k):
                assert spans_frattini_quotient(G, S) == generates(G, S)
        basis = burnside_basis(G, G.elements())
        assert len(basis) == frattini_rank(G) and generates(G, basis)


class TestUnionSpan:
    def test_axes(self):
        G = prod(3, 3)
        X = {(a, 0) for a in range(3)} | {(0, b) for b in range(3)}
        rep = union_subgroups_span(G, X)
        assert rep.holds and rep.r == 2 and rep.span == set(G.elements()) == rep.power

    def test_single_subgroup(self):
        G = prod(4, 2)
        X = {(0, 0), (2, 0)}
        for r in (1, 2, 3):
            assert span_verdict(G, X, r).holds
        assert union_subgroups_span(G, X).holds

    def test_z6_counterexample(self):
        G = CyclicBackend(6)
        X = {0, 2, 4, 3}
        with pytest.raises(PreconditionError):
            union_subgroups_span(G, X)
        rep = span_verdict(G, X, 1)
        assert not rep.holds and 1 not in rep.power and rep.span == set(range(6))

    def test_not_union(self):
        G = CyclicBackend(8)
        assert not is_union_of_subgroups(G, {0, 2})
        with pytest.raises(PreconditionError):
            union_subgroups_span(G, {0, 2})

    def test_random_unions(self):
        import random

        rng = random.Random(8)
        G = prod(4, 2, 2)
        es = G.elements()
        for _ in range(30):
            picks = rng.sample(es, 3)
            X = set().union(*(subgroup_closure(G, [g]) for g in picks))
            assert union_subgroups_span(G, X).holds


class TestMultiHom:
    def test_commutator_heisenberg(self):
        G = heisenberg(3)
        phi = commutator_multihom(G)
        rep = multihom_image_span(phi)
        center = lower_central_series(G)[2]
        assert phi.image() == center == rep.span and rep.holds and rep.r == 1

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_ut3_p(self, p):
        assert multihom_image_span(commutator_multihom(heisenberg(p))).holds

    def test_trivial_image(self):
        G = CyclicBackend(4)
        phi = MultiHom([G, G], CyclicBackend(3), lambda a, b: 0)
        assert multihom_image_span(phi).holds

    def test_declared_rank_too_small(self):
        G = prod(2, 2)
        T = prod(2, 2)
        phi = MultiHom([G], T, lambda a: a)
        with pytest.raises(PreconditionError):
            multihom_image_span(phi, r=1)

    def test_not_multiplicative(self):
        G = CyclicBackend(4)
        with pytest.raises(PreconditionError, match="slot 2"):
            MultiHom([G, G], CyclicBackend(4), lambda a, b: (a * b * b) % 4)

    def test_non_nilpotent_source(self):
        S3 = symmetric_group(3)
        phi = MultiHom([S3], CyclicBackend(1), lambda a: 0)
        with pytest.raises(PreconditionError):
            multihom_image_span(phi)

    def test_factoring_z2_z3(self):
        G1, G2, T = CyclicBackend(2), CyclicBackend(3), CyclicBackend(6)
        phi = MultiHom([G1, G2], T, lambda a, b: 0)
        assert verify_multihom_factoring(phi).ok
        G = CyclicBackend(6)
        phi = MultiHom([G, G], T, lambda a, b: (a * b) % 6)
        rep = verify_multihom_factoring(phi)
        assert rep.ok and rep.primes == (2, 3) and rep.tuples_checked == 36


class TestInduced:
    def test_heisenberg(self):
        G = heisenberg(3)
        phi = commutator_multihom(G)
        g2 = lower_central_series(G)[2]
        psi = induced_multihom(phi, [g2, g2])
        assert len(psi.table) == 81
        assert all(Q.order() == 9 for Q in psi.quotients)
        for a, b in itertools.product(G.elements(), repeat=2):
            key = (psi.quotients[0].label(a), psi.quotients[1].label(b))
            assert psi.table[key] == G.comm(a, b)
        V = [G.elementary(1, 2), G.elementary(2, 3)]
        assert psi.image_equality([V, V])

    def test_constant(self):
        G = CyclicBackend(4)
        phi = MultiHom([G, G], CyclicBackend(2), lambda a, b: 0)
        psi = induced_multihom(phi, [{0, 2}, {0}])
        assert set(psi.table.values()) == {0}

    def test_hypothesis_fails(self):
        G = CyclicBackend(4)
        phi = MultiHom([G, G], CyclicBackend(4), lambda a, b: (a * b) % 4)
        with pytest.raises(PreconditionError, match="slot 1: phi is not trivial at element 2"):
            induced_multihom(phi, [{0, 2}, {0}])
