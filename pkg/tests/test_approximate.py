import itertools
from fractions import Fraction

import pytest

from nilkit.approximate import (
    ApproximateGroupWitness,
    brute_coset_progression,
    build_splitting,
    chang_bound,
    chang_cover,
    doubling_constant,
    intersection_cover,
    minimal_witness,
    phi_product_size_holds,
    pullback_witness,
    size_of_B_holds,
    verify_growth,
    verify_splitting_converse,
    verify_tripling,
)
from nilkit.backends import CyclicBackend, GroupHomomorphism, NormalSubgroup, ProductBackend, Subset, TableGroup, heisenberg
from nilkit.errors import PreconditionError
from nilkit.groups import lower_central_series
from nilkit.progressions import ProgressionSpec, enumerate_ordered
from oracles import sumset


def interval(Z, n):
    return Subset(Z, range(-n, n + 1))


def two_z(Z):
    rho = GroupHomomorphism(Z, CyclicBackend(2), lambda a: a % 2, check=False)
    return NormalSubgroup.kernel_of(rho)


def sym_pord(H):
    P = enumerate_ordered(ProgressionSpec(H, [H.elementary(1, 2), H.elementary(2, 3)], (1, 1)))
    return Subset(H, P.elements) | P.inverse()


def brute_min_witness(A):
    """Exhaustive search over symmetric subsets of A^3 (oracle)."""
    G = A.backend
    A3 = A.power(3).elements
    units = []
    seen = set()
    for a in sorted(A3, key=G.canonical_key):
        if a not in seen:
            u = frozenset({a, G.inv(a)})
            seen |= u
            units.append(u)
    A2 = {G.mul(a, b) for a in A.elements for b in A.elements}
    for k in range(0, len(units) + 1):
        for pick in itertools.combinations(units, k):
            X = frozenset().union(*pick)
            if A2 <= {G.mul(x, a) for x in X for a in A.elements}:
                return len(X)
    raise AssertionError


class TestDoubling:
    def test_interval(self, Z):
        assert doubling_constant(interval(Z, 1)) == Fraction(5, 3)

    def test_subgroup(self):
        G = CyclicBackend(12)
        assert doubling_constant(Subset(G, {0, 3, 6, 9})) == 1

    def test_heisenberg_pord(self, H):
        P = enumerate_ordered(ProgressionSpec(H, [H.elementary(1, 2), H.elementary(2, 3)], (1, 1)))
        assert doubling_constant(P) == Fraction(55, 9)

    def test_abelian_oracle(self):
        G = CyclicBackend(31)
        A = {0, 1, 5, 30, 26}
        assert doubling_constant(Subset(G, A)) == Fraction(len(sumset(A, A, 31)), 5)


class TestWitness:
    def test_interval(self, Z):
        w = minimal_witness(interval(Z, 1))
        assert w.X == {-1, 1} and w.K == 2 and w.exact and w.verify()
        assert brute_min_witness(interval(Z, 1)) == 2

    def test_subgroup(self):
        G = CyclicBackend(12)
        w = minimal_witness(Subset(G, {0, 4, 8}))
        assert w.X == {0} and w.K == 1

    def test_heisenberg(self, H3):
        A = sym_pord(H3)
        w = minimal_witness(A)
        assert w.verify() and w.in_cube()
        if w.exact:
            assert w.K == brute_min_witness(A)
        else:
            assert w.lower_bound <= w.K

    @pytest.mark.parametrize("n,A", [(7, {0, 1, 6}), (10, {0, 2, 8, 5}), (12, {0, 1, 11, 3, 9}), (9, {0, 3, 6, 1, 8})])
    def test_minimal_matches_brute(self, n, A):
        S = Subset(CyclicBackend(n), A)
        w = minimal_witness(S)
        assert w.verify() and w.exact and w.K == brute_min_witness(S)

    def test_precondition(self, Z):
        with pytest.raises(PreconditionError):
            minimal_witness(Subset(Z, {0, 1}))
        with pytest.raises(PreconditionError):
            minimal_witness(Subset(Z, {-1, 1}))

    def test_verify_detects_bad(self, Z):
        w = ApproximateGroupWitness(interval(Z, 1), 1, frozenset({0}))
        assert not w.verify()


class TestGrowth:
    def test_interval(self, Z):
        w = minimal_witness(interval(Z, 1))
        assert verify_growth(w, 3)
        assert len(interval(Z, 1).power(3)) == 7 <= 12

    def test_subgroup_equality(self):
        G = CyclicBackend(12)
        A = Subset(G, {0, 4, 8})
        w = minimal_witness(A)
        for n in range(1, 5):
            assert verify_growth(w, n) and len(A.power(n)) == len(A)

    def test_heisenberg(self, H3):
        w = minimal_witness(sym_pord(H3))
        assert verify_growth(w, 2) and verify_growth(w, 3)


class TestChang:
    def test_subgroup(self):
        G = CyclicBackend(12)
        A = Subset(G, {0, 4, 8})
        res = chang_cover(A, minimal_witness(A), A, 1, 1)
        assert res.t == 1 and len(res.S[0]) == 1 and res.verify()

    def test_interval(self, Z):
        A = interval(Z, 1)
        res = chang_cover(A, minimal_witness(A), A, 1, 1)
        assert res.t == 1 and len(res.S[0]) == 1
        s = res.S[0][0]
        assert res.covering_set() == {v + s for v in range(-2, 3)}
        assert res.verify() and res.within_bound()

    def test_heisenberg(self, H3):
        A = sym_pord(H3)
        w = minimal_witness(A)
        res = chang_cover(A, w, A, 1, 1)
        assert res.verify() and res.within_bound()

    def test_small_b(self, Z):
        A = interval(Z, 4)
        w = minimal_witness(A)
        res = chang_cover(A, w, Subset(Z, {0}), 1, 9)
        assert res.verify() and res.t <= chang_bound(1, 9, w.K)

    def test_preconditions(self, Z):
        A = interval(Z, 1)
        w = minimal_witness(A)
        with pytest.raises(PreconditionError, match="A\\^1"):
            chang_cover(A, w, Subset(Z, {5}), 1, 3)
        with pytest.raises(PreconditionError, match="below"):
            chang_cover(A, w, Subset(Z, {0}), 1, 1)


class TestIntersection:
    def test_m2(self, Z):
        A = interval(Z, 1)
        w = minimal_witness(A)
        ic = intersection_cover(A, w, two_z(Z), 2)
        assert ic.base == {-2, 0, 2} and ic.target == {-2, 0, 2}
        assert len(ic.translates) == 1 <= w.K and ic.verify()

    def test_inside_h(self):
        G = CyclicBackend(12)
        A = Subset(G, {0, 4, 8})
        ic = intersection_cover(A, minimal_witness(A), {0, 2, 4, 6, 8, 10}, 2)
        assert len(ic.translates) == 1 and ic.target == ic.base and ic.verify()

    def test_m3(self, Z):
        A = interval(Z, 1)
        w = minimal_witness(A)
        ic = intersection_cover(A, w, two_z(Z), 3)
        assert ic.target == {-2, 0, 2}
        assert len(ic.translates) <= w.K**2 and ic.verify()

    def test_heisenberg_center(self, H3):
        A = sym_pord(H3)
        w = minimal_witness(A)
        g2 = lower_central_series(H3)[2]
        for m in (2, 3):
            ic = intersection_cover(A, w, g2, m)
            assert ic.verify()

    def test_not_subgroup(self, Z):
        A = interval(Z, 1)
        with pytest.raises(PreconditionError):
            intersection_cover(A, minimal_witness(A), {0, 1}, 2)


class TestSplitting:
    def test_z_2z(self, Z):
        A = interval(Z, 1)
        N = two_z(Z)
        phi = build_splitting(Z, N, A)
        assert phi(0) == 0 and phi(1) in (1, -1)
        assert phi(1) == 1  # canonical order puts 1 before -1
        assert all(phi.verify().values())
        assert {0, 1, -1} <= {p + b for p in (0, 1) for b in (-2, 0, 2)}

    def test_a_inside_n(self):
        G = CyclicBackend(12)
        N = NormalSubgroup.from_elements(G, {0, 3, 6, 9})
        phi = build_splitting(G, N, Subset(G, {0, 3, 9}))
        assert phi.table == {0: 0}
        assert all(phi.verify().values())

    def test_heisenberg(self, H3):
        A = sym_pord(H3)
        N = NormalSubgroup.from_elements(H3, lower_central_series(H3)[2])
        phi = build_splitting(H3, N, A)
        assert all(phi.verify().values())
        assert size_of_B_holds(A, N)
        C = list(phi.layers[0])
        B = sorted(N.elements)
        assert phi_product_size_holds(phi, C, B)

    def test_not_normal(self, H3):
        bad = NormalSubgroup(H3, CyclicBackend(1), lambda g: 0, {H3.identity(), H3.elementary(1, 2), H3.elementary(1, 2, 2)})
        with pytest.raises(PreconditionError):
            build_splitting(H3, bad, sym_pord(H3))

    def test_size_of_B_random(self):
        import random

        rng = random.Random(2)
        G = CyclicBackend(24)
        N = NormalSubgroup.from_elements(G, {0, 6, 12, 18})
        for _ in range(30):
            raw = {rng.randrange(24) for _ in range(4)} | {0}
            A = Subset(G, raw | {(-a) % 24 for a in raw})
            assert size_of_B_holds(A, N)


class TestConverse:
    def test_trivial(self):
        G = CyclicBackend(12)
        Hs = frozenset({0, 4, 8})
        N = NormalSubgroup.from_elements(G, Hs)
        phi = build_splitting(G, N, Subset(G, Hs))
        rep = verify_splitting_converse(phi, {phi.normal.quotient.identity()}, [Hs] * 4, 1, 1, 1)
        assert rep.all_hypotheses and rep.conclusion and rep.lhs == rep.rhs

    def test_z(self, Z):
        N = two_z(Z)
        phi = build_splitting(Z, N, interval(Z, 1), r_max=4)
        Bs = [frozenset(range(-2 * i, 2 * i + 1, 2)) for i in range(1, 5)]
        rep = verify_splitting_converse(phi, {0, 1}, Bs, 1, 4, 4)
        assert rep.well_formed and rep.consistent

    def test_failing_h4(self, Z):
        N = two_z(Z)
        phi = build_splitting(Z, N, interval(Z, 1), r_max=4)
        Bs = [frozenset({0})] * 4
        rep = verify_splitting_converse(phi, {0, 1}, Bs, 100, 100, 100)
        assert not rep.all_hypotheses and rep.consistent

    def test_corpus(self):
        from nilkit.acceptance import converse_corpus

        corpus = converse_corpus()
        assert len(corpus) == 20
        assert all(verify_splitting_converse(*inst).consistent for inst in corpus)


class TestPullback:
    def test_z4_to_z2(self):
        rho = GroupHomomorphism(CyclicBackend(4), CyclicBackend(2), lambda a: a % 2)
        w = minimal_witness(Subset(CyclicBackend(2), {0, 1}))
        pw = pullback_witness(rho, w)
        assert pw.A.elements == {0, 1, 2, 3} and len(pw.X) <= 2 and pw.verify()

    def test_trivial_kernel(self):
        G = CyclicBackend(7)
        rho = GroupHomomorphism(G, G, lambda a: a)
        A = Subset(G, {0, 1, 6})
        w = minimal_witness(A)
        pw = pullback_witness(rho, w)
        assert pw.A == A and len(pw.X) <= 2 * w.K and pw.verify()

    def test_abelianization(self):
        U = heisenberg(2)
        V = ProductBackend([CyclicBackend(2), CyclicBackend(2)])
        rho = GroupHomomorphism(U, V, lambda g: (g[0], g[2]))
        P = enumerate_ordered(ProgressionSpec(U, [U.elementary(1, 2), U.elementary(2, 3)], (1, 1)))
        A = rho.image(P.elements)
        w = minimal_witness(A)
        pw = pullback_witness(rho, w)
        assert len(pw.X) <= 2 * w.K and pw.verify()

    def test_infinite_source(self, Z):
        from nilkit.errors import UnsupportedBackendError

        rho = GroupHomomorphism(Z, CyclicBackend(2), lambda a: a % 2, check=False)
        w = minimal_witness(Subset(CyclicBackend(2), {0, 1}))
        with pytest.raises(UnsupportedBackendError):
            pullback_witness(rho, w)


class TestTripling:
    def test_subgroup(self):
        G = CyclicBackend(12)
        rep = verify_tripling(Subset(G, {0, 4, 8}), 1)
        assert rep.precondition and rep.cube_size == 3 and rep.witness_size == 1

    def test_interval(self, Z):
        rep = verify_tripling(interval(Z, 1), 3)
        assert rep.precondition and rep.cube_size == 7
        assert rep.witness.X == {-3, 3}
        assert rep.witness_size == brute_min_witness(interval(Z, 3))

    def test_heisenberg(self, H3):
        rep = verify_tripling(sym_pord(H3), 10)
        assert rep.witness.verify()


class TestFreiman:
    def test_subgroup(self):
        G = CyclicBackend(12)
        res = brute_coset_progression(Subset(G, {0, 4, 8}))
        assert res.found and res.rank == 0 and res.ratio == 1

    def test_interval_z12(self):
        G = CyclicBackend(12)
        A = Subset(G, {0, 1, 2, 3})
        res = brute_coset_progression(A, rank_cap=1)
        assert res.found and res.ratio <= Fraction(7, 4)
        # oracle: the best rank-1 progression with trivial H
        best = min(
            len(enumerate_ordered(ProgressionSpec(G, [g], [L])).elements)
            for g in range(1, 12)
            for L in range(1, 7)
            if A.elements <= enumerate_ordered(ProgressionSpec(G, [g], [L])).elements
        )
        assert res.size <= best

    def test_z6(self):
        G = CyclicBackend(6)
        A = Subset(G, {0, 3, 2, 4})
        res = brute_coset_progression(A)
        assert res.found and res.ratio == Fraction(6, 4)

    def test_non_abelian(self, H3):
        with pytest.raises(PreconditionError):
            brute_coset_progression(Subset(H3, {H3.identity()}))
