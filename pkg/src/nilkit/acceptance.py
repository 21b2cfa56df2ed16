"""The acceptance suite: nine exact, property-based checks across the library.

Each criterion is a function returning a :class:`CriterionResult`.  Suites
group criteria for ``nilkit accept <suite>``.  Independent oracles used here
(Witt's formula, matrix evaluation, brute-force closures) do not share code
with the routines under test beyond the backends.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .approximate import (
    CHANG_CONSTANT,
    build_splitting,
    chang_cover,
    intersection_cover,
    minimal_witness,
    phi_product_size_holds,
    size_of_B_holds,
    verify_growth,
    verify_splitting_converse,
)
from .backends import CyclicBackend, GroupHomomorphism, NormalSubgroup, ProductBackend, Subset, TableGroup, UnitriangularBackend, heisenberg
from .collection import Word, collect, copy_counts, letter_budget, quantitative_bound
from .commutators import all_forms, enumerate_basic, weight_vector
from .decomposition import decompose_power_commutator, decompose_product_commutator
from .errors import PreconditionError
from .groups import evaluate_word, lower_central_series, subgroup_closure
from .pgroups import (
    MultiHom,
    burnside_basis,
    commutator_multihom,
    frattini_coordinates,
    frattini_rank,
    induced_multihom,
    multihom_image_span,
    spans_frattini_quotient,
    union_subgroups_span,
    verify_multihom_factoring,
)
from .progressions import ProgressionSpec, check_chain, enumerate_nilprogression, enumerate_ordered, power_set

__all__ = ["CriterionResult", "CRITERIA", "SUITES", "run_suite", "witt_count", "HEISENBERG_GOLDEN"]

SEED = 20240611

# (|P_ord|, |P*|, |P|) and the least m with P ⊆ P_ord^m for the Heisenberg group over Z, L = (1, 1)
HEISENBERG_GOLDEN = {"sizes": (9, 13, 27), "m": 3}


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number}. {self.name}: {self.detail} ({self.seconds:.1f}s)"


def witt_count(r: int, n: int) -> int:
    """Number of basic commutators of weight exactly ``n`` on ``r`` letters."""
    total = sum(sympy.mobius(d) * r ** (n // d) for d in sympy.divisors(n))
    return int(total) // n


def _all_words(letters, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(letters, repeat=n)


def _ut4_assignments():
    U = UnitriangularBackend(4)
    return U, [
        [U.from_entries((1, 2, -1, 1, 3, 2)), U.from_entries((2, -1, 1, 1, 0, -3))],
        [U.from_entries((1, 0, 0, 1, 0, 1)), U.from_entries((0, 1, 2, 1, -1, 1))],
    ]


def criterion_1() -> tuple[bool, str]:
    U, assignments = _ut4_assignments()
    n = bad = 0
    for letters in _all_words((1, -1, 2, -2), 6):
        w = Word.from_letters(letters, 2, 3)
        cf, _ = collect(w, trace=False)
        n += 1
        for a in assignments:
            if evaluate_word(U, a, w) != evaluate_word(U, a, cf.items()):
                bad += 1
                break
    return bad == 0, f"{n} words, {bad} mismatches in UT(4,Z)"


def criterion_2() -> tuple[bool, str]:
    L = (3, 3)
    n = bound_bad = exp_bad = 0
    for letters in _all_words((1, -1, 2, -2), 6):
        w = Word.from_letters(letters, 2, 3)
        p, q = letter_budget(w)
        if any(p[i] + q[i] > L[i] for i in range(2)):
            continue
        n += 1
        cf, trace = collect(w)
        counts = copy_counts(trace, w)
        if any(k > quantitative_bound(c, L) for c, k in counts.items()):
            bound_bad += 1
        for i in range(2):
            if cf.exponents[i] != p[i] - q[i]:
                exp_bad += 1
    ok = bound_bad == 0 and exp_bad == 0
    return ok, f"{n} words within L=(3,3); {bound_bad} bound violations, {exp_bad} exponent mismatches"


def criterion_3() -> tuple[bool, str]:
    bad = []
    for r in range(1, 5):
        for s in range(1, 6):
            want = sum(witt_count(r, n) for n in range(1, s + 1))
            got = len(enumerate_basic(r, s))
            if got != want:
                bad.append((r, s, got, want))
    t25 = len(enumerate_basic(2, 3))
    return not bad and t25 == 5, f"20 (r,s) pairs, mismatches={bad}, t(2,3)={t25}"


def criterion_4() -> tuple[bool, str]:
    H = heisenberg()
    x, y = H.generators()
    rep = check_chain(ProgressionSpec(H, (x, y), (1, 1)))
    golden = rep.ok and rep.sizes == HEISENBERG_GOLDEN["sizes"] and rep.m == HEISENBERG_GOLDEN["m"]
    rng = random.Random(SEED)
    n = bad = 0
    ms = []
    for s in (1, 2, 3):
        U = UnitriangularBackend(s + 1, 3)
        elems = U.elements()
        for r in (1, 2, 3):
            for Ls in itertools.product((1, 2), repeat=r):
                for _ in range(2):
                    gens = tuple(rng.choice(elems) for _ in range(r))
                    rr = check_chain(ProgressionSpec(U, gens, Ls))
                    n += 1
                    if not rr.ok or rr.m is None:
                        bad += 1
                    else:
                        ms.append(rr.m)
    detail = f"Heisenberg sizes={rep.sizes} m={rep.m}; corpus {n} specs, {bad} failures, max m={max(ms) if ms else None}"
    return golden and bad == 0, detail


def _ut_assignment(U, k, rng):
    return {i: U.from_entries([rng.randint(-3, 3) for _ in range(len(U.identity()))]) for i in range(1, k + 1)}


def criterion_5() -> tuple[bool, str]:
    rng = random.Random(SEED)
    n = bad = bound_bad = 0
    for s in (2, 3):
        U = UnitriangularBackend(s + 1)
        for k in (1, 2, 3):
            for form in all_forms(k):
                comm = lambda a, b: U.comm(a, b)
                for lens in itertools.product((1, 2, 3), repeat=k):
                    lists, nxt = [], 1
                    for l in lens:
                        lists.append(list(range(nxt, nxt + l)))
                        nxt += l
                    a = _ut_assignment(U, nxt - 1, rng)
                    res = decompose_product_commutator(form, lists, s)
                    prods = []
                    for L in lists:
                        g = U.identity()
                        for i in L:
                            g = U.mul(g, a[i])
                        prods.append(g)
                    n += 1
                    if form.apply(prods, comm) != evaluate_word(U, a, res.factors):
                        bad += 1
                    # powers with exponents lens
                    pres = decompose_power_commutator(form, list(lens), s)
                    b = _ut_assignment(U, k, rng)
                    args = [U.pow(b[i], l) for i, l in enumerate(lens, start=1)]
                    n += 1
                    if form.apply(args, comm) != evaluate_word(U, b, pres.factors):
                        bad += 1
                    for zeta, m in pres.corrections:
                        if abs(m) > weight_vector(zeta, k).power(lens):
                            bound_bad += 1
    return bad == 0 and bound_bad == 0, f"{n} decompositions re-evaluated; {bad} mismatches, {bound_bad} exponent-bound violations"


def _random_symmetric(G, rng, size):
    elems = G.elements()
    A = {G.identity()}
    while len(A) < size:
        g = rng.choice(elems)
        A |= {g, G.inv(g)}
    return Subset(G, A)


def _approx_corpus():
    rng = random.Random(SEED)
    out = []
    for _ in range(50):
        n = rng.randint(5, 60)
        G = CyclicBackend(n)
        out.append(_random_symmetric(G, rng, rng.randint(2, min(9, n))))
    H = heisenberg(3)
    x, y = H.generators()
    P = enumerate_ordered(ProgressionSpec(H, (x, y), (1, 1)))
    out.append(Subset(H, P.elements) | P.inverse())
    for _ in range(3):
        out.append(_random_symmetric(H, rng, 5))
    return out


def criterion_6() -> tuple[bool, str]:
    corpus = _approx_corpus()
    counts = dict(witness=0, growth=0, chang=0, inter=0, split=0)
    bad = []
    worst = 0.0
    for A in corpus:
        G = A.backend
        w = minimal_witness(A)
        counts["witness"] += 1
        if not w.verify():
            bad.append(("witness", A))
            continue
        for n in range(1, 5):
            counts["growth"] += 1
            if not verify_growth(w, n):
                bad.append(("growth", A, n))
        for B, M, Mp in ((A, 1, 1), (Subset(G, [G.identity()]), 1, len(A))):
            cov = chang_cover(A, w, B, M, Mp)
            counts["chang"] += 1
            if not cov.verify():
                bad.append(("chang", A))
            if not cov.within_bound(CHANG_CONSTANT):
                bad.append(("chang-bound", A))
            bound = CHANG_CONSTANT * (math.log(Mp) + M * math.log(max(w.K, 2)))
            worst = max(worst, cov.t / bound)
        if G.is_abelian():
            Ns = [subgroup_closure(G, [d]) for d in sympy.divisors(G.order()) if d not in (1, G.order())][:2]
        else:
            Ns = [lower_central_series(G)[2]]
        for Hs in Ns:
            for m in (2, 3):
                ic = intersection_cover(A, w, Hs, m)
                counts["inter"] += 1
                if not ic.verify():
                    bad.append(("intersection", A, m))
            N = NormalSubgroup.from_elements(G, Hs)
            phi = build_splitting(G, N, A, r_max=2)
            C = phi.layers[0]
            B1 = frozenset(b for b in phi.power(2) if N.contains(b))
            counts["split"] += 1
            if not phi_product_size_holds(phi, C, B1) or not size_of_B_holds(A, N):
                bad.append(("splitting", A))
    detail = ", ".join(f"{k}={v}" for k, v in counts.items()) + f", C={CHANG_CONSTANT:.3f}, max t/bound={worst:.2f}, failures={len(bad)}"
    return not bad, detail


def _z_mod_2():
    Z = CyclicBackend(0)
    rho = GroupHomomorphism(Z, CyclicBackend(2), lambda a: a % 2, check=False)
    return Z, NormalSubgroup.kernel_of(rho)


def _heisenberg_splitting():
    H = heisenberg(3)
    x, y = H.generators()
    P = enumerate_ordered(ProgressionSpec(H, (x, y), (1, 1)))
    A = Subset(H, P.elements) | P.inverse()
    N = NormalSubgroup.from_elements(H, lower_central_series(H)[2])
    return H, N, A


def converse_corpus():
    """Twenty ``(phi, C, Bs, K1, K2, K3)`` instances over ``(Z, 2Z)`` and the Heisenberg group mod 3."""
    out = []
    Z, N = _z_mod_2()
    for k in (1, 2):
        A = Subset(Z, range(-k, k + 1))
        phi = build_splitting(Z, N, A, r_max=3)
        C = frozenset({0, 1})
        for j in (1, 2, 3, 4):
            Bs = [frozenset(range(-2 * i * j, 2 * i * j + 1, 2)) for i in (1, 2, 3, 4)]
            K1 = 1
            K2 = math.ceil(Fraction(len(Bs[3]), len(Bs[0])))
            B4_4 = len(power_set(Subset(Z, Bs[3]), 4))
            K3 = math.ceil(Fraction(B4_4, len(Bs[3])))
            out.append((phi, C, Bs, K1, K2, K3))
            out.append((phi, C, Bs, K1, K2, 2))
    H, N, A = _heisenberg_splitting()
    phi = build_splitting(H, N, A, r_max=3)
    Q = N.quotient
    C = frozenset(Q.label(a) for a in A.elements)
    C3 = power_set(Subset(Q, C), 3).elements
    K1 = math.ceil(Fraction(len(C3), len(C)))
    Bfull = N.elements
    Bsmall = frozenset([H.identity()])
    for Bs, K2, K3 in (
        ([Bfull] * 4, 1, 1),
        ([Bsmall, Bfull, Bfull, Bfull], 3, 1),
        ([Bfull] * 4, 1, 2),
        ([Bsmall] * 4, 1, 1),
    ):
        out.append((phi, C, Bs, K1, K2, K3))
    return out


def criterion_7() -> tuple[bool, str]:
    Z, N = _z_mod_2()
    phi_z = build_splitting(Z, N, Subset(Z, (-1, 0, 1)), r_max=3)
    H, NH, A = _heisenberg_splitting()
    phi_h = build_splitting(H, NH, A, r_max=3)
    checks = {"Z": phi_z.verify(), "H3": phi_h.verify()}
    split_ok = all(all(v.values()) for v in checks.values())
    corpus = converse_corpus()
    reps = [verify_splitting_converse(*inst) for inst in corpus]
    held = sum(r.all_hypotheses for r in reps)
    inconsistent = sum(not r.consistent for r in reps)
    detail = f"splitting checks {'all true' if split_ok else checks}; converse corpus {len(reps)}, hypotheses held on {held}, violations {inconsistent}"
    return split_ok and inconsistent == 0 and len(reps) == 20, detail


def _quaternion_table():
    # units ±1, ±i, ±j, ±k as (sign, idx) with idx 0=1,1=i,2=j,3=k
    mult = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    elems = [(s, i) for s in (1, -1) for i in range(4)]
    index = {e: n for n, e in enumerate(elems)}
    table = []
    for s1, i1 in elems:
        row = []
        for s2, i2 in elems:
            s, i = mult[(i1, i2)]
            row.append(index[(s1 * s2 * s, i)])
        table.append(row)
    return TableGroup(table)


def p_group_corpus():
    """Table groups of prime-power order at most 32."""
    C = CyclicBackend
    backends = [C(n) for n in (2, 4, 8, 16, 32, 3, 9, 27, 5, 25, 7)]
    products = [
        (2, 2), (4, 2), (2, 2, 2), (8, 2), (4, 4), (4, 2, 2), (2, 2, 2, 2), (16, 2), (8, 4), (4, 4, 2),
        (8, 2, 2), (4, 2, 2, 2), (2, 2, 2, 2, 2), (3, 3), (9, 3), (3, 3, 3), (5, 5),
    ]
    backends += [ProductBackend([C(n) for n in ns]) for ns in products]
    backends += [UnitriangularBackend(3, 2), UnitriangularBackend(3, 3), ProductBackend([UnitriangularBackend(3, 2), C(2)]),
                 ProductBackend([UnitriangularBackend(3, 2), C(4)])]
    groups = [TableGroup.from_backend(b)[0] for b in backends]
    Q8 = _quaternion_table()
    groups += [Q8, TableGroup.from_backend(ProductBackend([Q8, C(2)]))[0]]
    return groups


def criterion_8() -> tuple[bool, str]:
    rng = random.Random(SEED)
    groups = p_group_corpus()
    subsets = mism = basis_bad = 0
    for G in groups:
        coords = frattini_coordinates(G)
        d = frattini_rank(G)
        elems = G.elements()
        for _ in range(3):
            while True:
                S = rng.sample(elems, min(len(elems), d + 3))
                if len(subgroup_closure(G, S)) == G.order():
                    break
            for k in range(len(S) + 1):
                for T in itertools.combinations(S, k):
                    subsets += 1
                    gen = len(subgroup_closure(G, T)) == G.order()
                    if gen != spans_frattini_quotient(G, T, coords):
                        mism += 1
            Sb = burnside_basis(G, S)
            if len(Sb) != d or len(subgroup_closure(G, Sb)) != G.order():
                basis_bad += 1
    # union of subgroups
    span_ok = 0
    abelian = [G for G in groups if G.is_abelian()]
    for i in range(30):
        G = abelian[i % len(abelian)]
        elems = G.elements()
        X = set()
        for _ in range(rng.randint(1, 3)):
            X |= subgroup_closure(G, [rng.choice(elems)])
        if union_subgroups_span(G, X).holds:
            span_ok += 1
    try:
        union_subgroups_span(CyclicBackend(6), {0, 2, 4, 3})
        z6 = False
    except PreconditionError:
        z6 = True
    # multi-homomorphisms
    img_ok = all(multihom_image_span(commutator_multihom(UnitriangularBackend(3, p))).holds for p in (2, 3, 5))
    H3 = heisenberg(3)
    psi = induced_multihom(commutator_multihom(H3), [lower_central_series(H3)[2]] * 2)
    img_ok = img_ok and multihom_image_span(psi).holds
    C = CyclicBackend
    S23 = ProductBackend([C(2), C(3)])
    facts = [
        MultiHom((S23, S23), C(6), lambda a, b: (3 * a[0] * b[0] + 2 * a[1] * b[1]) % 6),
        MultiHom((C(12), C(6)), C(6), lambda a, b: (a * b) % 6),
        MultiHom((C(6), C(6), C(6)), C(6), lambda a, b, c: (a * b * c) % 6),
        commutator_multihom(UnitriangularBackend(3, 2)),
    ]
    fact_ok = all(verify_multihom_factoring(f).ok for f in facts)
    ok = mism == 0 and basis_bad == 0 and span_ok == 30 and z6 and img_ok and fact_ok
    detail = (
        f"{len(groups)} p-groups, {subsets} subsets, {mism} Burnside mismatches, {basis_bad} bad bases; "
        f"union-span {span_ok}/30; Z/6 rejected={z6}; image-span={img_ok}; factoring={fact_ok}"
    )
    return ok, detail


def criterion_9(c_cap: int = 8) -> tuple[bool, str]:
    H = heisenberg()
    x, y = H.generators()
    A = enumerate_ordered(ProgressionSpec(H, (x, y), (1, 1)))
    powers = {1: A.elements}
    for c in range(2, c_cap + 1):
        powers[c] = power_set(A, c).elements
    cands = [g for g in A.sorted() if g != H.identity()]
    best = None
    for gens in itertools.combinations(cands, 2):
        for Ls in itertools.product((1, 2), repeat=2):
            P = enumerate_nilprogression(ProgressionSpec(H, gens, Ls)).elements
            if not A.elements <= P:
                continue
            c = next((c for c in range(1, c_cap + 1) if P <= powers[c]), None)
            if c is not None and (best is None or (c, len(P)) < best[0]):
                best = ((c, len(P)), gens, Ls)
    if best is None:
        return False, f"no nilprogression between A and A^{c_cap}"
    (c, size), gens, Ls = best
    shown = ", ".join(H.format_element(g) for g in gens)
    return True, f"measured c={c} with |P*|={size}, L={Ls}, generators [{shown}]"


CRITERIA = {
    1: ("collection soundness", criterion_1),
    2: ("quantitative collection bound", criterion_2),
    3: ("basic commutator counts", criterion_3),
    4: ("progression chain", criterion_4),
    5: ("product and power decompositions", criterion_5),
    6: ("approximate-group suite", criterion_6),
    7: ("splitting round trip", criterion_7),
    8: ("p-group suite", criterion_8),
    9: ("nilprogression spot-check", criterion_9),
}

SUITES = {
    "all": tuple(CRITERIA),
    "collection": (1, 2, 3),
    "progressions": (4, 9),
    "decomposition": (5,),
    "approximate": (6, 7),
    "pgroups": (8,),
}


def run_criterion(n: int) -> CriterionResult:
    name, fn = CRITERIA[n]
    t0 = time.perf_counter()
    ok, detail = fn()
    return CriterionResult(n, name, bool(ok), detail, time.perf_counter() - t0)


def run_suite(name: str = "all") -> list[CriterionResult]:
    if name not in SUITES:
        raise KeyError(name)
    return [run_criterion(n) for n in SUITES[name]]
