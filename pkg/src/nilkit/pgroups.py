"""Ranks, Frattini subgroups, Burnside bases and multi-variable homomorphisms.

Everything here works on finite backends by exact enumeration.  Ranks of
finite abelian groups come from counting ``p``-torsion (the number of cyclic
``p``-factors of ``G`` is ``log_p |{g : g^p = 1}|``); an exhaustive minimal
generating set search is kept as an independent check.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import sympy
from sympy.ntheory.modular import crt
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from .backends import CosetQuotient, GroupBackend, NormalSubgroup, SubgroupBackend, Subset
from .errors import InconsistencyError, InvalidParameterError, PreconditionError, ResourceLimitError, UnsupportedBackendError
from .groups import generating_set, is_nilpotent, is_subgroup, lower_central_series, subgroup_closure, sylow_decomposition
from .progressions import power_set

__all__ = [
    "AbelianPGroup",
    "prime_of",
    "is_abelian_group",
    "invariant_factors",
    "abelian_rank",
    "rank_by_search",
    "verify_subgroup_rank",
    "frattini",
    "frattini_rank",
    "frattini_coordinates",
    "spans_frattini_quotient",
    "burnside_basis",
    "SpanReport",
    "span_verdict",
    "is_union_of_subgroups",
    "union_subgroups_span",
    "MultiHom",
    "commutator_multihom",
    "multihom_image_span",
    "FactoringReport",
    "verify_multihom_factoring",
    "InducedMultiHom",
    "induced_multihom",
]

SEARCH_LIMIT = 256


class AbelianPGroup(GroupBackend):
    """``Z/p^e1 x ... x Z/p^er`` with ``e1 >= ... >= er``; elements are exponent vectors."""

    step = 1

    def __init__(self, p: int, exponents: Sequence[int]):
        if not sympy.isprime(p):
            raise InvalidParameterError(f"{p} is not prime")
        exps = tuple(sorted((int(e) for e in exponents), reverse=True))
        if any(e < 1 for e in exps):
            raise InvalidParameterError("invariant-factor exponents must be positive")
        self.p = p
        self.exponents = exps
        self.moduli = tuple(p**e for e in exps)

    def _ident(self):
        return (self.p, self.exponents)

    def __repr__(self):
        if not self.moduli:
            return "1"
        return " x ".join(f"Z/{m}" for m in self.moduli)

    @property
    def rank(self) -> int:
        return len(self.exponents)

    def identity(self):
        return (0,) * len(self.moduli)

    def mul(self, a, b):
        return tuple((u + v) % m for u, v, m in zip(a, b, self.moduli))

    def inv(self, a):
        return tuple((-u) % m for u, m in zip(a, self.moduli))

    def pow(self, a, k):
        return tuple((u * k) % m for u, m in zip(a, self.moduli))

    def is_finite(self):
        return True

    def order(self):
        return math.prod(self.moduli)

    def elements(self):
        return [tuple(t) for t in itertools.product(*(range(m) for m in self.moduli))]

    def generators(self):
        out = []
        for i in range(len(self.moduli)):
            g = [0] * len(self.moduli)
            g[i] = 1
            out.append(tuple(g))
        return out

    def is_abelian(self):
        return True

    def format_element(self, a):
        return " ".join(str(u) for u in a)

    def parse_element(self, text):
        vals = [int(t) for t in text.replace(",", " ").split()]
        if len(vals) != len(self.moduli):
            raise InvalidParameterError(f"expected {len(self.moduli)} coordinates")
        return tuple(v % m for v, m in zip(vals, self.moduli))


def _require_finite(G):
    if not G.is_finite():
        raise UnsupportedBackendError(f"{G!r} is not enumerable")


def is_abelian_group(G: GroupBackend) -> bool:
    flag = G.is_abelian()
    if flag is not None:
        return flag
    _require_finite(G)
    es = G.elements()
    gens = generating_set(G, es)
    return all(G.mul(a, b) == G.mul(b, a) for a in gens for b in gens)


def prime_of(G: GroupBackend) -> int | None:
    """The prime ``p`` with ``|G|`` a power of ``p``; ``None`` for the trivial group.

    Raises :class:`PreconditionError` when ``|G|`` is not a prime power.
    """
    _require_finite(G)
    N = G.order()
    if N == 1:
        return None
    ps = sympy.primefactors(N)
    if len(ps) != 1:
        raise PreconditionError(f"{G!r} has order {N}, which is not a prime power")
    return ps[0]


def _require_abelian(G):
    _require_finite(G)
    if not is_abelian_group(G):
        raise PreconditionError(f"{G!r} is not abelian")


def _torsion_count(G, k):
    e = G.identity()
    return sum(1 for g in G.elements() if G.pow(g, k) == e)


def invariant_factors(G: GroupBackend) -> list[int]:
    """Elementary divisors ``p^e`` of a finite abelian group, largest first per prime.

    For each prime ``p`` the counts ``|G[p^k]| = p^(sum_i min(e_i, k))`` pin
    down the exponents ``e_i`` of the ``p``-primary part.
    """
    _require_abelian(G)
    out = []
    for p in sympy.primefactors(G.order()):
        prev, k, cols = 0, 0, []
        while True:
            k += 1
            c = round(math.log(_torsion_count(G, p**k), p))
            if c == prev:
                break
            cols.append(c - prev)  # number of factors with e_i >= k
            prev = c
        # cols[k-1] = #{i : e_i >= k}
        n = cols[0]
        exps = [sum(1 for m in cols if m > i) for i in range(n)]
        out.extend(p**e for e in exps)
    return out


def abelian_rank(G: GroupBackend) -> int:
    """Minimum size of a generating set of a finite abelian group."""
    _require_abelian(G)
    if isinstance(G, AbelianPGroup):
        return G.rank
    if G.order() == 1:
        return 0
    return max(round(math.log(_torsion_count(G, p), p)) for p in sympy.primefactors(G.order()))


def rank_by_search(G: GroupBackend, limit: int = SEARCH_LIMIT) -> int:
    """Minimum generating set size by exhaustive search over subsets (any finite group)."""
    _require_finite(G)
    N = G.order()
    if N > limit:
        raise ResourceLimitError(f"exhaustive rank search is limited to order {limit}, got {N}")
    if N == 1:
        return 0
    elems = [g for g in G.elements() if g != G.identity()]
    for k in range(1, N):
        for S in itertools.combinations(elems, k):
            if len(subgroup_closure(G, S)) == N:
                return k
    raise InconsistencyError("no generating set found")


def verify_subgroup_rank(G: GroupBackend, H: Iterable) -> bool:
    """``rank(H) <= rank(G)`` for a subgroup ``H`` of a finite abelian group."""
    _require_abelian(G)
    H = frozenset(H.elements if isinstance(H, Subset) else H)
    if not is_subgroup(G, H):
        raise PreconditionError("H is not a subgroup of G")
    return abelian_rank(SubgroupBackend(G, H, check=False)) <= abelian_rank(G)


def frattini(G: GroupBackend) -> frozenset:
    """``Phi(G) = G^p [G, G]`` for a finite ``p``-group."""
    p = prime_of(G)
    e = G.identity()
    if p is None:
        return frozenset([e])
    es = G.elements()
    gens = {G.pow(g, p) for g in es}
    if not is_abelian_group(G):
        gens |= {G.comm(a, b) for a in es for b in es}
    gens.discard(e)
    return subgroup_closure(G, gens)


def frattini_rank(G: GroupBackend, Phi: frozenset | None = None) -> int:
    """``dim G/Phi`` over the field with ``p`` elements."""
    p = prime_of(G)
    if p is None:
        return 0
    Phi = frattini(G) if Phi is None else Phi
    return round(math.log(G.order() // len(Phi), p))


def frattini_coordinates(G: GroupBackend, Phi: frozenset | None = None):
    """Coordinates on ``G/Phi`` as a vector space over ``F_p``.

    Returns ``(p, coords)`` where ``coords(g)`` is the coordinate vector of
    the coset ``g Phi`` in a basis picked greedily in canonical order.
    """
    p = prime_of(G)
    if p is None:
        return 1, lambda g: ()
    Phi = frattini(G) if Phi is None else Phi
    Q = CosetQuotient(G, Phi)
    span = {Q.identity(): ()}
    for g in sorted(Q.elements(), key=G.canonical_key):
        if g in span:
            continue
        new = {}
        for c in range(p):
            gc = Q.pow(g, c)
            for lab, vec in span.items():
                new[Q.mul(lab, gc)] = vec + (c,)
        span = new
    return p, lambda g: span[Q.label(g)]


def spans_frattini_quotient(G: GroupBackend, S: Iterable, coords=None) -> bool:
    """Whether the image of ``S`` spans ``G/Phi``, by Gaussian elimination over ``F_p``."""
    p, vec = frattini_coordinates(G) if coords is None else coords
    d = len(vec(G.identity()))
    if d == 0:
        return True
    F = GF(p)
    rows = [[F(v) for v in vec(s)] for s in S]
    if len(rows) < d:
        return False
    return DomainMatrix(rows, (len(rows), d), F).rank() == d


def burnside_basis(G: GroupBackend, S: Iterable) -> list:
    """A subset of ``S`` of size ``rank(G)`` that still generates the ``p``-group ``G``.

    Scans ``S`` in canonical order and keeps an element iff it enlarges the
    span of the kept elements modulo ``Phi(G)``.
    """
    S = sorted(set(S.elements if isinstance(S, Subset) else S), key=G.canonical_key)
    p = prime_of(G)
    if len(subgroup_closure(G, S)) != G.order():
        raise PreconditionError("S does not generate G")
    if p is None:
        return []
    Phi = frattini(G)
    kept: list = []
    span = Phi
    for s in S:
        if s not in span:
            kept.append(s)
            span = subgroup_closure(G, list(Phi) + kept)
    d = frattini_rank(G, Phi)
    if len(kept) != d or len(subgroup_closure(G, kept)) != G.order():
        raise InconsistencyError(f"Burnside basis of size {len(kept)} does not generate (expected rank {d})")
    return kept


@dataclass(frozen=True)
class SpanReport:
    """``<X> ⊆ X^r`` verdict with the sets that decided it."""

    holds: bool
    r: int
    span: frozenset
    power: frozenset

    def lines(self) -> list[str]:
        return [
            f"holds={str(self.holds).lower()}",
            f"r={self.r}",
            f"span_size={len(self.span)}",
            f"power_size={len(self.power)}",
        ]


def span_verdict(G: GroupBackend, X: Iterable, r: int) -> SpanReport:
    """Compute ``<X>`` and ``X^r`` exactly with no hypothesis checks."""
    X = frozenset(X.elements if isinstance(X, Subset) else X)
    if not X:
        raise InvalidParameterError("X must be non-empty")
    span = subgroup_closure(G, X)
    if r <= 0:
        power = frozenset([G.identity()])
    else:
        power = power_set(Subset(G, X), r).elements
    return SpanReport(span <= power, r, span, power)


def is_union_of_subgroups(G: GroupBackend, X: Iterable) -> bool:
    """``X`` is a union of subgroups iff ``<x> ⊆ X`` for every ``x`` in ``X``."""
    X = frozenset(X)
    if G.identity() not in X:
        return False
    for x in X:
        cur = x
        while cur != G.identity():
            if cur not in X:
                return False
            cur = G.mul(cur, x)
    return True


def union_subgroups_span(G: GroupBackend, X: Iterable) -> SpanReport:
    """``<X> ⊆ X^r`` for a union of subgroups ``X`` of an abelian ``p``-group of rank ``r``."""
    X = frozenset(X.elements if isinstance(X, Subset) else X)
    _require_abelian(G)
    prime_of(G)
    if not is_union_of_subgroups(G, X):
        raise PreconditionError("X is not a union of subgroups")
    return span_verdict(G, X, abelian_rank(G))


class MultiHom:
    """A map ``G1 x ... x Gk -> T`` that is a homomorphism in each variable.

    With ``check=True`` (finite sources) multiplicativity is verified slot by
    slot against a generating set of that slot, for every choice of the
    remaining arguments.
    """

    def __init__(self, sources: Sequence[GroupBackend], target: GroupBackend, func: Callable, check: bool = True):
        if not sources:
            raise InvalidParameterError("a multi-homomorphism needs at least one source")
        self.sources = tuple(sources)
        self.target = target
        self.func = func
        for G in self.sources:
            _require_finite(G)
        if check:
            if not is_abelian_group(target):
                raise PreconditionError("target is not abelian")
            self._check()

    @property
    def k(self) -> int:
        return len(self.sources)

    def __call__(self, *args):
        return self.func(*args)

    def _check(self):
        T = self.target
        for i, G in enumerate(self.sources):
            others = [S.elements() for S in self.sources]
            gens = generating_set(G, G.elements())
            for rest in itertools.product(*(others[:i] + others[i + 1 :])):
                for a in G.elements():
                    for g in gens:
                        args = rest[:i] + (a,) + rest[i:]
                        args_g = rest[:i] + (G.mul(a, g),) + rest[i:]
                        args_1 = rest[:i] + (g,) + rest[i:]
                        if self.func(*args_g) != T.mul(self.func(*args), self.func(*args_1)):
                            raise PreconditionError(
                                f"slot {i + 1} is not multiplicative at {G.format_element(a)} * {G.format_element(g)}"
                            )

    def tuples(self):
        return itertools.product(*(G.elements() for G in self.sources))

    def image(self) -> frozenset:
        return frozenset(self.func(*t) for t in self.tuples())

    def image_of(self, sets: Sequence[Iterable]) -> frozenset:
        return frozenset(self.func(*t) for t in itertools.product(*(list(S) for S in sets)))


def commutator_multihom(G: GroupBackend, k: int = 2) -> MultiHom:
    """``(x1, ..., xk) -> [x1, ..., xk]`` on a group of step exactly ``k``, into ``Gamma_k``."""
    from .groups import simple_commutator

    if k < 2:
        raise InvalidParameterError("need k >= 2")
    lcs = lower_central_series(G)
    if lcs.step != k:
        raise PreconditionError(f"group has step {lcs.step}, expected {k}")
    T = SubgroupBackend(G, lcs[k], check=False)
    return MultiHom((G,) * k, T, lambda *xs: simple_commutator(G, xs))


def multihom_image_span(phi: MultiHom, r: int | None = None) -> SpanReport:
    """``<phi(G1, ..., Gk)> ⊆ phi(G1, ..., Gk)^r`` for nilpotent sources.

    ``r`` defaults to the measured rank of the target; a declared ``r``
    smaller than that is rejected.
    """
    for i, G in enumerate(phi.sources):
        if not is_nilpotent(G):
            raise PreconditionError(f"source {i + 1} is not nilpotent")
    T = phi.target
    if not is_abelian_group(T):
        raise PreconditionError("target is not abelian")
    img = phi.image()
    if T.is_finite():
        measured = abelian_rank(T)
    else:
        measured = abelian_rank(SubgroupBackend(T, subgroup_closure(T, img), check=False))
    if r is None:
        r = measured
    elif r < measured:
        raise PreconditionError(f"target has rank {measured} > {r}")
    return span_verdict(T, img, r)


def _primary_exponents(N: int) -> dict[int, int]:
    """For each ``p | N`` an integer ``m`` with ``g -> g^m`` the projection onto the ``p``-part."""
    fac = sympy.factorint(N)
    out = {}
    for p, a in fac.items():
        q = p**a
        m, _ = crt([q, N // q], [1, 0])
        out[p] = int(m) % N
    return out


@dataclass(frozen=True)
class FactoringReport:
    """Checks of the primary-component factoring of a multi-homomorphism."""

    parts_land: bool  # phi(u1(p), ..., uk(p)) lies in T(p)
    expansion: bool  # phi(prod_p u1(p), ...) = prod_p phi(u1(p), ...)
    tuples_checked: int
    primes: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.parts_land and self.expansion


def verify_multihom_factoring(phi: MultiHom) -> FactoringReport:
    """Exhaustive check of the factoring identities over all argument tuples."""
    T = phi.target
    _require_finite(T)
    parts = [dict(sylow_decomposition(G)) for G in phi.sources]
    tparts = dict(sylow_decomposition(T)) if T.order() > 1 else {}
    proj = [_primary_exponents(G.order()) if G.order() > 1 else {} for G in phi.sources]
    primes = sorted(set().union(*(set(P) for P in parts)))
    e = T.identity()

    land = True
    for p in primes:
        slots = [sorted(P.get(p, [G.identity()])) for P, G in zip(parts, phi.sources)]
        for t in itertools.product(*slots):
            v = phi(*t)
            if v != e and v not in tparts.get(p, ()):
                land = False

    expand = True
    n = 0
    for t in phi.tuples():
        n += 1
        total = e
        for p in primes:
            comps = tuple(G.pow(g, pr[p]) if p in pr else G.identity() for G, g, pr in zip(phi.sources, t, proj))
            total = T.mul(total, phi(*comps))
        if total != phi(*t):
            expand = False
    return FactoringReport(land, expand, n, tuple(primes))


class InducedMultiHom(MultiHom):
    """``psi`` on ``G1/G1' x ... x Gk/Gk'`` induced from ``phi``; values are tabulated."""

    def __init__(self, parent: MultiHom, quotients: Sequence[CosetQuotient], table: dict):
        self.parent = parent
        self.table = table
        super().__init__(quotients, parent.target, lambda *xs: table[xs], check=True)

    @property
    def quotients(self):
        return self.sources

    def image_equality(self, Vs: Sequence[Iterable]) -> bool:
        """``phi(V1, ..., Vk) == psi(rho1(V1), ..., rhok(Vk))``."""
        lhs = self.parent.image_of(Vs)
        Hs = [{Q.label(v) for v in V} for Q, V in zip(self.quotients, Vs)]
        return lhs == self.image_of(Hs)


def induced_multihom(phi: MultiHom, normals: Sequence) -> InducedMultiHom:
    """Pass ``phi`` to the quotients ``Gi/Gi'``.

    Requires ``phi(x1, ..., xk) = 1`` whenever some ``xi`` lies in ``Gi'``;
    the first violation is reported with its slot and element.
    """
    if len(normals) != phi.k:
        raise InvalidParameterError(f"expected {phi.k} normal subgroups, got {len(normals)}")
    Ns = []
    for G, N in zip(phi.sources, normals):
        if isinstance(N, NormalSubgroup):
            Ns.append(NormalSubgroup.from_elements(G, N.elements) if N.elements is not None else None)
        else:
            Ns.append(NormalSubgroup.from_elements(G, N))
    if any(N is None for N in Ns):
        raise UnsupportedBackendError("normal subgroups must be given by their elements")
    e = phi.target.identity()
    for i, (G, N) in enumerate(zip(phi.sources, Ns)):
        rest_sets = [S.elements() for j, S in enumerate(phi.sources) if j != i]
        for n in sorted(N.elements, key=G.canonical_key):
            for rest in itertools.product(*rest_sets):
                if phi(*(rest[:i] + (n,) + rest[i:])) != e:
                    raise PreconditionError(f"slot {i + 1}: phi is not trivial at element {G.format_element(n)}")
    quotients = [N.quotient for N in Ns]
    table: dict = {}
    for t in phi.tuples():
        key = tuple(Q.label(g) for Q, g in zip(quotients, t))
        v = phi(*t)
        old = table.setdefault(key, v)
        if old != v:
            raise InconsistencyError(f"induced map is not well defined at {key}")
    return InducedMultiHom(phi, quotients, table)
