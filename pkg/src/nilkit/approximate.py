"""Approximate groups: doubling, witnesses, Chang covering, intersections, splitting.

A ``K``-approximate group is a finite symmetric set ``A`` containing the
identity for which some symmetric ``X`` with ``|X| <= K`` satisfies
``A^2 ⊆ XA``.  Every routine here works on exact finite sets, and each
result has a ``verify`` method that re-checks its defining property by
enumeration.

Subgroups ``H`` may be given as finite element sets or as a
:class:`~nilkit.backends.NormalSubgroup`, which covers infinite subgroups
such as ``2Z`` in ``Z`` through a membership test.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .backends import GroupBackend, GroupHomomorphism, NormalSubgroup, Subset
from .errors import InvalidParameterError, InconsistencyError, PreconditionError, UnsupportedBackendError
from .groups import is_subgroup, subgroup_closure
from .progressions import ProgressionSpec, enumerate_ordered, power_set

__all__ = [
    "ApproximateGroupWitness",
    "doubling_constant",
    "minimal_witness",
    "verify_growth",
    "CoveringResult",
    "chang_cover",
    "chang_bound",
    "CHANG_CONSTANT",
    "IntersectionCover",
    "intersection_cover",
    "SplittingMap",
    "build_splitting",
    "ConverseReport",
    "verify_splitting_converse",
    "pullback_witness",
    "TriplingReport",
    "verify_tripling",
    "CosetProgressionResult",
    "brute_coset_progression",
    "phi_product_size_holds",
    "size_of_B_holds",
    "EXACT_WITNESS_LIMIT",
]

EXACT_WITNESS_LIMIT = 24

# From the covering proof, with K >= 2: (t - 1) log 2 <= log M' + (M - 1) log K,
# hence t <= (2 / log 2) (log M' + M log K).
CHANG_CONSTANT = 2 / math.log(2)


def _elems(S) -> frozenset:
    if isinstance(S, Subset):
        return S.elements
    return frozenset(S)


def _require_approx_shape(A: Subset):
    if not A.elements:
        raise PreconditionError("A is empty")
    if not A.is_symmetric:
        raise PreconditionError("A is not symmetric")
    if not A.has_identity:
        raise PreconditionError("A does not contain the identity")


@dataclass(frozen=True)
class ApproximateGroupWitness:
    """``A`` together with a symmetric ``X`` such that ``A^2 ⊆ XA``.

    ``exact`` says whether ``|X|`` is known to be minimal; otherwise
    ``lower_bound`` is a proven lower bound on the minimum.
    """

    A: Subset
    K: int
    X: frozenset
    exact: bool = True
    lower_bound: int = 1

    def verify(self) -> bool:
        B = self.A.backend
        if len(self.X) > self.K:
            return False
        if any(B.inv(x) not in self.X for x in self.X):
            return False
        A = self.A.elements
        XA = {B.mul(x, a) for x in self.X for a in A}
        return all(B.mul(a, b) in XA for a in A for b in A)

    def in_cube(self) -> bool:
        """Whether ``X ⊆ A^3``."""
        return self.X <= power_set(self.A, 3).elements

    @property
    def gap(self) -> int:
        return self.K - self.lower_bound


def doubling_constant(A: Subset) -> Fraction:
    """``|A^2| / |A|`` as an exact fraction."""
    if not A.elements:
        raise InvalidParameterError("doubling constant of an empty set")
    return Fraction(len(power_set(A, 2)), len(A))


def _units(backend, candidates):
    """Split ``candidates`` into inverse-closed units ``{x, x^-1}`` in canonical order."""
    key = backend.canonical_key
    seen = set()
    units = []
    for x in sorted(candidates, key=key):
        if x in seen:
            continue
        xi = backend.inv(x)
        u = (x,) if xi == x else tuple(sorted((x, xi), key=key))
        seen.update(u)
        units.append(u)
    return units


def minimal_witness(A: Subset, exact_limit: int = EXACT_WITNESS_LIMIT) -> ApproximateGroupWitness:
    """A smallest symmetric ``X ⊆ A^3`` with ``A^2 ⊆ XA``.

    Exact (and lexicographically least among optimal sets) when
    ``|A^3| <= exact_limit``; otherwise a greedy cover with the bound
    ``|X| >= |A^2| / |A|`` reported as ``lower_bound``.
    """
    _require_approx_shape(A)
    B = A.backend
    key = B.canonical_key
    A2 = sorted(power_set(A, 2).elements, key=key)
    A3 = power_set(A, 3).elements
    index = {p: i for i, p in enumerate(A2)}
    full = (1 << len(A2)) - 1

    def cover(x):
        m = 0
        for a in A.elements:
            i = index.get(B.mul(x, a))
            if i is not None:
                m |= 1 << i
        return m

    units = []
    for u in _units(B, A3):
        m = 0
        for x in u:
            m |= cover(x)
        if m:
            units.append((u, m))
    lower = max(1, math.ceil(len(A2) / len(A)))

    if len(A3) <= exact_limit:
        best = _exact_cover(units, full, key)
        X = frozenset(best)
        return ApproximateGroupWitness(A, len(X), X, True, len(X))

    chosen: list = []
    covered = 0
    while covered != full:
        # most newly covered products, then fewer elements, then canonical order
        u, m = max(units, key=lambda um: (bin(um[1] & ~covered).count("1") / len(um[0]), -len(um[0])))
        if not m & ~covered:
            raise InconsistencyError("greedy witness search stalled")
        chosen.extend(u)
        covered |= m
    X = frozenset(chosen)
    return ApproximateGroupWitness(A, len(X), X, False, min(lower, len(X)))


def _exact_cover(units, full, key):
    n = len(units)
    sizes = [len(u) for u, _ in units]
    # suffix unions for pruning
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] | units[i][1]
    if suffix[0] != full:
        raise InconsistencyError("A^3 translates do not cover A^2")
    total = sum(sizes)
    for target in range(1, total + 1):
        found = []

        def dfs(i, size, mask, picked):
            if size == target:
                if mask == full:
                    found.append(tuple(sorted(itertools.chain.from_iterable(units[j][0] for j in picked), key=key)))
                return
            if i == n or (mask | suffix[i]) != full:
                return
            if size + sizes[i] <= target:
                picked.append(i)
                dfs(i + 1, size + sizes[i], mask | units[i][1], picked)
                picked.pop()
            dfs(i + 1, size, mask, picked)

        dfs(0, 0, 0, [])
        if found:
            return min(found, key=lambda t: [key(x) for x in t])
    raise InconsistencyError("no witness found")


def verify_growth(w: ApproximateGroupWitness, n: int, cap: int | None = None) -> bool:
    """Check ``|A^n| <= K^(n-1) |A|``."""
    if n < 1:
        raise InvalidParameterError("n must be positive")
    return len(power_set(w.A, n, cap=cap)) <= w.K ** (n - 1) * len(w.A)


def chang_bound(M: int, M_prime: int, K: int, C: float = CHANG_CONSTANT) -> float:
    """``C (log M' + M log K)`` with ``K`` raised to at least 2."""
    return C * (math.log(M_prime) + M * math.log(max(K, 2)))


@dataclass(frozen=True)
class CoveringResult:
    """Sets ``S_1..S_t ⊆ A`` with ``A ⊆ S_(t-1)^-1 ... S_1^-1 B^-1 B S_1 ... S_t``."""

    A: Subset
    B: Subset
    S: tuple[tuple, ...]
    K: int
    M: int
    M_prime: int

    @property
    def t(self) -> int:
        return len(self.S)

    def covering_set(self) -> frozenset:
        G = self.A.backend
        Bt = self.B.elements
        for S in self.S[:-1]:
            Bt = frozenset(G.mul(b, s) for b in Bt for s in S)
        inv = {G.inv(b) for b in Bt}
        core = {G.mul(u, v) for u in inv for v in Bt}
        return frozenset(G.mul(c, s) for c in core for s in self.S[-1])

    def verify(self) -> bool:
        """Covering of A by enumeration, plus ``|S_i| <= 2K`` and ``S_i ⊆ A``."""
        if any(len(S) > 2 * self.K or not set(S) <= self.A.elements for S in self.S):
            return False
        return self.A.elements <= self.covering_set()

    def within_bound(self, C: float = CHANG_CONSTANT) -> bool:
        return self.t <= chang_bound(self.M, self.M_prime, self.K, C)


def chang_cover(A: Subset, w: ApproximateGroupWitness, B: Subset, M: int, M_prime: int) -> CoveringResult:
    """Chang's covering argument, with each ``R_i`` built greedily in canonical order."""
    if M < 1 or M_prime < 1:
        raise InvalidParameterError("M and M' must be positive")
    if not B.elements:
        raise PreconditionError("B is empty")
    if not B.elements <= power_set(A, M).elements:
        raise PreconditionError(f"B is not contained in A^{M}")
    if len(B) * M_prime < len(A):
        raise PreconditionError(f"|B| = {len(B)} is below |A|/M' = {len(A)}/{M_prime}")
    G = A.backend
    K = w.K
    order = A.sorted()
    Bi = B.elements
    S_list = []
    while True:
        R = []
        used: set = set()
        for x in order:
            tr = {G.mul(b, x) for b in Bi}
            if used.isdisjoint(tr):
                R.append(x)
                used |= tr
        if len(R) > 2 * K:
            S = tuple(R[: 2 * K])
            S_list.append(S)
            Bi = frozenset(G.mul(b, s) for b in Bi for s in S)
        else:
            S_list.append(tuple(R))
            break
    return CoveringResult(A, B, tuple(S_list), K, M, M_prime)


def _membership(H) -> Callable:
    if isinstance(H, NormalSubgroup):
        return H.contains
    Hs = _elems(H)
    return Hs.__contains__


@dataclass(frozen=True)
class IntersectionCover:
    """Cover of ``A^m ∩ H`` by left translates ``nu(y)(A^2 ∩ H)``, and a witness for ``A^m ∩ H``."""

    m: int
    K: int
    target: frozenset  # A^m ∩ H
    base: frozenset  # A^2 ∩ H
    translates: tuple  # the nu(y)
    witness: frozenset  # symmetric X with (A^m ∩ H)^2 ⊆ X (A^m ∩ H)
    backend: GroupBackend = field(repr=False, default=None)

    @property
    def translate_bound(self) -> int:
        return self.K ** (self.m - 1)

    @property
    def witness_bound(self) -> int:
        return 2 * self.K ** (2 * self.m - 1)

    def verify(self) -> bool:
        G = self.backend
        covered = {G.mul(v, b) for v in self.translates for b in self.base}
        if not self.target <= covered:
            return False
        if len(self.translates) > self.translate_bound or len(self.witness) > self.witness_bound:
            return False
        if any(G.inv(x) not in self.witness for x in self.witness):
            return False
        XT = {G.mul(x, a) for x in self.witness for a in self.target}
        return all(G.mul(a, b) in XT for a in self.target for b in self.target)


def _slice_cover(A: Subset, X: frozenset, inH, m: int):
    """``nu(Y)`` for a minimal ``Y ⊆ X^(m-1)`` with ``A^m ∩ H ⊆ YA``, pruned to a minimal cover."""
    G = A.backend
    key = G.canonical_key
    target = frozenset(a for a in power_set(A, m).elements if inH(a))
    base = frozenset(a for a in power_set(A, 2).elements if inH(a))
    Y = {G.identity()}
    for _ in range(m - 1):
        Y = {G.mul(y, x) for y in Y for x in X}
    Y = sorted(Y, key=key)
    A_el = A.sorted()

    def covers(ys, pts):
        cov = {G.mul(y, a) for y in ys for a in A_el}
        return pts <= cov

    if not covers(Y, target):
        raise InconsistencyError(f"A^{m} is not covered by X^{m - 1} A; the witness is invalid")
    kept = list(Y)
    for y in Y:
        trial = [z for z in kept if z != y]
        if covers(trial, target):
            kept = trial
    nus = []
    for y in kept:
        slice_ = [G.mul(y, a) for a in A_el if inH(G.mul(y, a))]
        if not slice_:
            raise InconsistencyError("empty slice H ∩ yA for a minimal Y")
        nus.append(min(slice_, key=key))
    nus = sorted(set(nus), key=key)
    # drop translates that are not needed
    final = list(nus)
    for v in nus:
        trial = [u for u in final if u != v]
        if trial and target <= {G.mul(u, b) for u in trial for b in base}:
            final = trial
    return target, base, tuple(final)


def intersection_cover(A: Subset, w: ApproximateGroupWitness, H, m: int) -> IntersectionCover:
    """Cover ``A^m ∩ H`` by at most ``K^(m-1)`` translates of ``A^2 ∩ H`` and build a ``2K^(2m-1)`` witness."""
    if m < 2:
        raise InvalidParameterError("m must be at least 2")
    _require_approx_shape(A)
    inH = _membership(H)
    if not isinstance(H, NormalSubgroup):
        Hs = _elems(H)
        if not is_subgroup(A.backend, Hs):
            raise PreconditionError("H is not a subgroup")
    G = A.backend
    target, base, translates = _slice_cover(A, w.X, inH, m)
    # (A^m ∩ H)^2 ⊆ A^2m ∩ H ⊆ Z (A^2 ∩ H) ⊆ Z (A^m ∩ H)
    _, _, Z = _slice_cover(A, w.X, inH, 2 * m)
    witness = frozenset(Z) | {G.inv(z) for z in Z}
    return IntersectionCover(m, w.K, target, base, translates, witness, G)


@dataclass
class SplittingMap:
    """A right inverse ``phi`` of ``pi: G -> G/N`` on ``pi(A^r_max)``.

    ``layers[r-1]`` is ``pi(A^r)``; ``phi(c)`` is the canonically least
    element of ``A^r`` over ``c`` for the least such ``r``.
    """

    backend: GroupBackend
    normal: NormalSubgroup
    A: Subset
    r_max: int
    table: dict
    layers: list
    powers: list = field(repr=False, default_factory=list)

    def __call__(self, c):
        try:
            return self.table[c]
        except KeyError:
            raise InvalidParameterError(f"phi is not defined at {c!r}") from None

    def domain(self) -> frozenset:
        return frozenset(self.table)

    def image(self, C: Iterable) -> frozenset:
        return frozenset(self(c) for c in C)

    def power(self, r: int) -> frozenset:
        while len(self.powers) < r:
            self.powers.append(power_set(self.A, len(self.powers) + 1).elements)
        return self.powers[r - 1]

    def check_right_inverse(self) -> bool:
        return all(self.normal.project(g) == c for c, g in self.table.items())

    def check_i(self) -> bool:
        return all(self.image(self.layers[r - 1]) <= self.power(r) for r in range(1, self.r_max + 1))

    def check_ii(self) -> bool:
        Q = self.normal.quotient
        return self.table.get(Q.identity()) == self.backend.identity()

    def check_iii(self, n_max: int = 3, samples: int = 200, seed: int = 0) -> bool:
        """Random tuples ``x1..xn`` in ``pi(A^r)`` with product 1 and random signs."""
        rng = random.Random(seed)
        G, Q = self.backend, self.normal.quotient
        for r in range(1, self.r_max + 1):
            layer = sorted(self.layers[r - 1], key=Q.canonical_key)
            layer_set = set(layer)
            for n in range(1, n_max + 1):
                if r * n > 4 * self.r_max:
                    continue
                target = self.power(r * n)
                for _ in range(samples):
                    xs = [rng.choice(layer) for _ in range(n - 1)]
                    prod = Q.identity()
                    for x in xs:
                        prod = Q.mul(prod, x)
                    last = Q.inv(prod)
                    if last not in layer_set:
                        continue
                    xs.append(last)
                    g = G.identity()
                    for x in xs:
                        eps = rng.choice((1, -1))
                        y = self(x if eps == 1 else Q.inv(x))
                        g = G.mul(g, y if eps == 1 else G.inv(y))
                    if g not in target or not self.normal.contains(g):
                        return False
        return True

    def check_iv(self) -> bool:
        G = self.backend
        B1 = [b for b in self.power(2) if self.normal.contains(b)]
        cover = {G.mul(p, b) for p in self.image(self.layers[0]) for b in B1}
        return self.A.elements <= cover

    def verify(self) -> dict:
        return {
            "right_inverse": self.check_right_inverse(),
            "i": self.check_i(),
            "ii": self.check_ii(),
            "iii": self.check_iii(),
            "iv": self.check_iv(),
        }


def build_splitting(backend: GroupBackend, N: NormalSubgroup, A: Subset, r_max: int = 3) -> SplittingMap:
    """Canonical right inverse with ``phi(pi(A^r)) ⊆ A^r`` for ``r <= r_max`` and ``phi(1) = 1``."""
    if r_max < 1:
        raise InvalidParameterError("r_max must be positive")
    if N.elements is not None:
        from .groups import is_normal

        if not is_normal(backend, N.elements):
            raise PreconditionError("N is not normal")
    _require_approx_shape(A)
    Q = N.quotient
    table: dict = {}
    layers = []
    powers = []
    for r in range(1, r_max + 1):
        Ar = power_set(A, r).elements
        powers.append(Ar)
        fibres: dict = {}
        for g in Ar:
            fibres.setdefault(N.project(g), []).append(g)
        layers.append(frozenset(fibres))
        for c, gs in fibres.items():
            if c not in table:
                table[c] = min(gs, key=backend.canonical_key)
    e = backend.identity()
    table[Q.identity()] = e  # identity is in A, so this is still in A^r
    return SplittingMap(backend, N, A, r_max, table, layers, powers)


def phi_product_size_holds(phi: SplittingMap, C: Iterable, B: Iterable) -> bool:
    """``|phi(C) B| = |C| |B|`` for ``B ⊆ N``."""
    G = phi.backend
    C, B = frozenset(C), frozenset(B)
    if not all(phi.normal.contains(b) for b in B):
        raise PreconditionError("B is not contained in N")
    return len({G.mul(phi(c), b) for c in C for b in B}) == len(C) * len(B)


def size_of_B_holds(A: Subset, N: NormalSubgroup) -> bool:
    """``|pi(A)| |A^2 ∩ N| >= |A|``."""
    piA = {N.project(a) for a in A.elements}
    B1 = [b for b in power_set(A, 2).elements if N.contains(b)]
    return len(piA) * len(B1) >= len(A)


@dataclass(frozen=True)
class ConverseReport:
    hypotheses: tuple[bool, bool, bool, bool, bool]
    conclusion: bool
    well_formed: bool
    lhs: int  # |Y^3|
    rhs: int  # K1 K2 K3 |Y|

    @property
    def all_hypotheses(self) -> bool:
        return self.well_formed and all(self.hypotheses)

    @property
    def consistent(self) -> bool:
        """The lemma holds on this instance: hypotheses imply the conclusion."""
        return (not self.all_hypotheses) or self.conclusion


def verify_splitting_converse(
    phi: SplittingMap, C: Iterable, Bs: Sequence[Iterable], K1: int, K2: int, K3: int
) -> ConverseReport:
    """Evaluate the five hypotheses and the conclusion of the splitting converse by enumeration."""
    G = phi.backend
    N = phi.normal
    Q = N.quotient
    C = frozenset(C)
    Bs = [frozenset(B) for B in Bs]
    if len(Bs) != 4:
        raise InvalidParameterError("need exactly four sets B1 ⊆ B2 ⊆ B3 ⊆ B4")
    e, qe = G.identity(), Q.identity()

    def sym_id(S, inv, one):
        return one in S and all(inv(s) in S for s in S)

    C3 = power_set(Subset(Q, C), 3).elements
    well_formed = (
        sym_id(C, Q.inv, qe)
        and all(sym_id(B, G.inv, e) for B in Bs)
        and all(Bs[i] <= Bs[i + 1] for i in range(3))
        and all(N.contains(b) for b in Bs[3])
        and C3 <= phi.domain()
    )
    h1 = len(C3) <= K1 * len(C)
    h2 = len(Bs[3]) <= K2 * len(Bs[0])
    h3 = len(power_set(Subset(G, Bs[3]), 4)) <= K3 * len(Bs[3])
    h4 = True
    for x in C:
        if not h4:
            break
        p = phi(x) if x in phi.table else None
        if p is None:
            h4 = False
            break
        pi = G.inv(p)
        for i in range(3):
            if not all(G.mul(G.mul(p, b), pi) in Bs[i + 1] and G.mul(G.mul(pi, b), p) in Bs[i + 1] for b in Bs[i]):
                h4 = False
                break
    h5 = well_formed and _check_h5(phi, sorted(C3, key=Q.canonical_key), Bs[3])
    phiC = [phi(c) for c in C if c in phi.table]
    Y = {G.mul(p, b) for p in phiC for b in Bs[0]} | {G.mul(b, G.inv(p)) for p in phiC for b in Bs[0]}
    Ys = Subset(G, Y)
    lhs = len(power_set(Ys, 3)) if Y else 0
    rhs = K1 * K2 * K3 * len(Y)
    return ConverseReport((well_formed and h1, well_formed and h2, well_formed and h3, well_formed and h4, h5), lhs <= rhs, well_formed, lhs, rhs)


def _check_h5(phi: SplittingMap, C3: list, B4: frozenset) -> bool:
    G, Q = phi.backend, phi.normal.quotient
    signed = {}
    for x in C3:
        for eps in (1, -1):
            y = phi(x if eps == 1 else Q.inv(x))
            signed[(x, eps)] = y if eps == 1 else G.inv(y)
    for x1, x2, x3 in itertools.product(C3, repeat=3):
        x4 = Q.inv(Q.mul(Q.mul(x1, x2), x3))
        if (x4, 1) not in signed:  # x4 must lie in C^3 as well
            continue
        for eps in itertools.product((1, -1), repeat=4):
            g = G.mul(G.mul(signed[(x1, eps[0])], signed[(x2, eps[1])]), G.mul(signed[(x3, eps[2])], signed[(x4, eps[3])]))
            if g not in B4:
                return False
    return True


def pullback_witness(rho: GroupHomomorphism, w: ApproximateGroupWitness) -> ApproximateGroupWitness:
    """Witness of size at most ``2K`` for ``rho^-1(A)``, built as in the pullback argument."""
    src = rho.source
    if not src.is_finite():
        raise UnsupportedBackendError("pullback enumeration needs a finite source (finite kernel and preimage)")
    key = src.canonical_key
    fibres: dict = {}
    for g in sorted(src.elements(), key=key):
        fibres.setdefault(rho(g), g)  # first in canonical order
    pre = Subset(src, (g for g in src.elements() if rho(g) in w.A.elements))
    Xt = set()
    for x in w.X:
        if x in fibres:  # elements outside the image never occur in A^2 ⊆ XA for pulled back products
            om = fibres[x]
            Xt.add(om)
            Xt.add(src.inv(om))
    return ApproximateGroupWitness(pre, 2 * w.K, frozenset(Xt), exact=False, lower_bound=1)


@dataclass(frozen=True)
class TriplingReport:
    precondition: bool  # |A^3| <= K |A|
    cube_size: int
    witness: ApproximateGroupWitness

    @property
    def witness_size(self) -> int:
        return len(self.witness.X)


def verify_tripling(A: Subset, K: int, exact_limit: int = EXACT_WITNESS_LIMIT) -> TriplingReport:
    """Minimal witness for ``A^3`` when ``A`` has small tripling."""
    _require_approx_shape(A)
    A3 = power_set(A, 3)
    cube = Subset(A.backend, A3.elements)
    if not (cube.is_symmetric and cube.has_identity):
        raise InconsistencyError("A^3 of a symmetric set with identity must be symmetric with identity")
    return TriplingReport(len(A3) <= K * len(A), len(A3), minimal_witness(cube, exact_limit))


@dataclass(frozen=True)
class CosetProgressionResult:
    found: bool
    complete: bool
    H: frozenset | None
    generators: tuple
    lengths: tuple
    size: int | None
    ratio: Fraction | None

    @property
    def rank(self) -> int:
        return len(self.generators)


def _all_subgroups(G: GroupBackend) -> list[frozenset]:
    elems = sorted(G.elements(), key=G.canonical_key)
    cyclic = {subgroup_closure(G, [g]) for g in elems}
    subs = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        new = set()
        for H in frontier:
            for Z in cyclic:
                if Z <= H:
                    continue
                J = subgroup_closure(G, set(H) | Z)
                if J not in subs:
                    new.add(J)
        subs |= new
        frontier = new
    return sorted(subs, key=lambda H: (-len(H), sorted(G.canonical_key(h) for h in H)))


def brute_coset_progression(A: Subset, rank_cap: int = 2, size_cap: int | None = None, work_cap: int = 200_000) -> CosetProgressionResult:
    """Smallest ``H + P ⊇ A`` with ``rank(P) <= rank_cap``, by exhaustive search.

    Subgroups are tried by ascending index, then generator tuples drawn from
    ``4A``, then side lengths by ascending ``prod(2 Li + 1)``.  Ties in
    ``|H + P|`` go to lower rank, then smaller index.
    """
    G = A.backend
    if not G.is_finite() or G.is_abelian() is False:
        raise PreconditionError("coset progression search needs a finite abelian backend")
    if not A.elements:
        raise InvalidParameterError("A is empty")
    key = G.canonical_key
    A_el = A.elements
    fourA = sorted(power_set(A, 4).elements, key=key) if A.has_identity else sorted(
        power_set(Subset(G, A_el | {G.identity()}), 4).elements, key=key
    )
    best = None
    work = 0
    complete = True
    for H in _all_subgroups(G):
        index = G.order() // len(H)
        label = {}
        for g in G.elements():
            label[g] = min((G.mul(g, h) for h in H), key=key)
        if A_el <= H:
            cand = (Fraction(len(H), len(A_el)), 0, index)
            if best is None or cand < best[0]:
                best = (cand, H, (), ())
            continue
        reps = []
        seen = set()
        for g in fourA:
            c = label[g]
            if c in seen or c == label[G.identity()]:
                continue
            seen.add(c)
            seen.add(label[G.inv(g)])
            reps.append(g)
        for k in range(1, rank_cap + 1):
            for gens in itertools.combinations(reps, k):
                orders = [_order_mod(G, g, H) for g in gens]
                ranges = [range(1, max(1, o // 2) + 1) for o in orders]
                for Ls in sorted(itertools.product(*ranges), key=lambda L: (math.prod(2 * l + 1 for l in L), L)):
                    work += 1
                    if work > work_cap:
                        complete = False
                        break
                    P = enumerate_ordered(ProgressionSpec(G, gens, Ls)).elements
                    HP = {G.mul(h, p) for h in H for p in P}
                    if size_cap is not None and len(HP) > size_cap:
                        continue
                    if A_el <= HP:
                        cand = (Fraction(len(HP), len(A_el)), k, index)
                        if best is None or cand < best[0]:
                            best = (cand, frozenset(H), tuple(gens), tuple(Ls))
                if not complete:
                    break
            if not complete:
                break
        if not complete:
            break
    if best is None:
        return CosetProgressionResult(False, complete, None, (), (), None, None)
    (ratio, _, _), H, gens, Ls = best
    size = ratio * len(A_el)
    return CosetProgressionResult(True, complete, frozenset(H), gens, Ls, int(size), ratio)


def _order_mod(G, g, H) -> int:
    n, cur = 1, g
    while cur not in H:
        cur = G.mul(cur, g)
        n += 1
    return n
