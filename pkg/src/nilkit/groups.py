"""Word evaluation and group-theoretic primitives on top of the backends.

Subgroups of finite backends are plain ``frozenset`` objects of canonical
elements; closures are computed breadth first.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import sympy

from .backends import GroupBackend, Subset
from .collection import Word
from .commutators import Commutator
from .errors import InvalidParameterError, MissingAssignmentError, PreconditionError, ResourceLimitError, UnsupportedBackendError

__all__ = [
    "evaluate_commutator",
    "evaluate_word",
    "simple_commutator",
    "commutator_set",
    "subgroup_closure",
    "normal_closure",
    "is_subgroup",
    "is_normal",
    "generating_set",
    "SeriesChain",
    "lower_central_series",
    "lower_central_series_naive",
    "nilpotency_step",
    "is_nilpotent",
    "sylow_decomposition",
    "DEFAULT_NILPOTENCY_CAP",
]

DEFAULT_NILPOTENCY_CAP = 10
DEFAULT_CLOSURE_CAP = 1_000_000


def _lookup(assignment, i):
    try:
        return assignment[i]
    except (KeyError, IndexError):
        raise MissingAssignmentError(f"no element assigned to x{i}") from None


def evaluate_commutator(backend: GroupBackend, assignment, c: Commutator, _cache=None):
    """Interpret ``c`` with ``[u, v] = u^-1 v^-1 u v``; ``assignment`` maps letter -> element."""
    if _cache is not None and c in _cache:
        return _cache[c]
    if c.letter is not None:
        v = _lookup(assignment, c.letter)
    else:
        v = backend.comm(
            evaluate_commutator(backend, assignment, c.left, _cache),
            evaluate_commutator(backend, assignment, c.right, _cache),
        )
    if _cache is not None:
        _cache[c] = v
    return v


def _as_mapping(assignment):
    if isinstance(assignment, Mapping):
        return assignment
    return {i: g for i, g in enumerate(assignment, start=1)}


def evaluate_word(backend: GroupBackend, assignment, w: Word | Iterable):
    """Left-to-right product of the interpreted occurrences of ``w``.

    Occurrences are ``(commutator, exponent)`` pairs; exponents other than
    ``+1``/``-1`` are allowed, so decomposition factors evaluate directly.

    ``assignment`` is a mapping ``letter -> element`` or a sequence whose
    first entry is the image of ``x1``.
    """
    assignment = _as_mapping(assignment)
    cache: dict = {}
    out = backend.identity()
    for c, e in w:
        v = evaluate_commutator(backend, assignment, c, cache)
        if e != 1:
            v = backend.inv(v) if e == -1 else backend.pow(v, e)
        out = backend.mul(out, v)
    return out


def simple_commutator(backend: GroupBackend, elements: Sequence):
    """``[g1, ..., gk] = [[g1, ..., g(k-1)], gk]``."""
    if len(elements) < 2:
        raise InvalidParameterError(f"a simple commutator needs at least 2 arguments, got {len(elements)}")
    out = elements[0]
    for g in elements[1:]:
        out = backend.comm(out, g)
    return out


def commutator_set(backend: GroupBackend, sets: Sequence[Iterable]) -> Subset:
    """``[X1, ..., Xs] = {[x1, ..., xs] : xi in Xi}``, computed level by level."""
    sets = [frozenset(X.elements if isinstance(X, Subset) else X) for X in sets]
    if len(sets) < 2:
        raise InvalidParameterError("need at least two sets")
    if any(not X for X in sets):
        raise InvalidParameterError("commutator sets need non-empty inputs")
    cur = sets[0]
    for X in sets[1:]:
        cur = frozenset(backend.comm(a, b) for a in cur for b in X)
    return Subset(backend, cur)


def subgroup_closure(backend: GroupBackend, gens: Iterable, cap: int = DEFAULT_CLOSURE_CAP) -> frozenset:
    """The subgroup generated by ``gens``; raises if it grows past ``cap`` elements."""
    gens = list(dict.fromkeys(gens))
    gens = gens + [backend.inv(g) for g in gens]
    e = backend.identity()
    seen = {e}
    queue = deque([e])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = backend.mul(a, g)
            if b not in seen:
                seen.add(b)
                if len(seen) > cap:
                    raise ResourceLimitError(f"subgroup closure exceeded {cap} elements")
                queue.append(b)
    return frozenset(seen)


def _group_gens(backend: GroupBackend):
    if backend.is_finite():
        return generating_set(backend, backend.elements())
    return backend.generators()


def normal_closure(backend: GroupBackend, gens: Iterable, cap: int = DEFAULT_CLOSURE_CAP) -> frozenset:
    """Smallest normal subgroup containing ``gens``."""
    G_gens = _group_gens(backend)
    current = set(gens)
    while True:
        H = subgroup_closure(backend, current, cap)
        extra = {backend.conj(h, g) for h in current for g in G_gens} - H
        if not extra:
            return H
        current |= extra


def is_subgroup(backend: GroupBackend, elems: Iterable) -> bool:
    """A finite non-empty set closed under products is a subgroup."""
    H = frozenset(elems)
    if backend.identity() not in H:
        return False
    return all(backend.mul(a, b) in H for a in H for b in H)


def is_normal(backend: GroupBackend, H: Iterable) -> bool:
    H = frozenset(H)
    return all(backend.conj(h, g) in H for h in H for g in _group_gens(backend))


def generating_set(backend: GroupBackend, elems: Sequence) -> list:
    """Greedy generating set of ``<elems>``: keep an element iff it enlarges the span."""
    kept: list = []
    span = frozenset([backend.identity()])
    for a in sorted(elems):
        if a not in span:
            kept.append(a)
            span = subgroup_closure(backend, kept)
    return kept


@dataclass(frozen=True)
class SeriesChain:
    """``Gamma_1 ⊇ Gamma_2 ⊇ ...`` until the chain stabilises."""

    terms: tuple[frozenset, ...]

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, i):
        """1-based access: ``chain[1]`` is the whole group."""
        if i < 1:
            raise IndexError("lower central series is indexed from 1")
        if i > len(self.terms):
            return self.terms[-1]
        return self.terms[i - 1]

    @property
    def reaches_trivial(self) -> bool:
        return len(self.terms[-1]) == 1

    @property
    def step(self) -> int | None:
        """Largest ``i`` with ``Gamma_i`` non-trivial, or ``None`` if not nilpotent."""
        if not self.reaches_trivial:
            return None
        return len(self.terms) - 1

    def sizes(self) -> list[int]:
        return [len(t) for t in self.terms]


def _require_finite(backend):
    if not backend.is_finite():
        raise UnsupportedBackendError(f"{backend!r} is not enumerable")


def lower_central_series(backend: GroupBackend) -> SeriesChain:
    """Lower central series of a finite backend.

    ``Gamma_(i+1)`` is the normal closure of ``[a, g]`` with ``a`` running over
    generators of ``Gamma_i`` and ``g`` over generators of ``G``.
    """
    _require_finite(backend)
    G = frozenset(backend.elements())
    G_gens = generating_set(backend, sorted(G))
    terms = [G]
    cur_gens = G_gens
    while True:
        comms = {backend.comm(a, g) for a in cur_gens for g in G_gens}
        nxt = normal_closure(backend, comms)
        if nxt == terms[-1]:
            break
        terms.append(nxt)
        if len(nxt) == 1:
            break
        cur_gens = generating_set(backend, sorted(nxt))
    return SeriesChain(tuple(terms))


def lower_central_series_naive(backend: GroupBackend) -> SeriesChain:
    """Straight from the definition: ``Gamma_(i+1) = <[a, b] : a in Gamma_i, b in G>``."""
    _require_finite(backend)
    G = frozenset(backend.elements())
    terms = [G]
    while True:
        nxt = subgroup_closure(backend, {backend.comm(a, b) for a in terms[-1] for b in G})
        if nxt == terms[-1]:
            break
        terms.append(nxt)
        if len(nxt) == 1:
            break
    return SeriesChain(tuple(terms))


def nilpotency_step(backend: GroupBackend, X: Iterable, cap: int = DEFAULT_NILPOTENCY_CAP) -> int | None:
    """Least ``s`` with ``[X, ..., X]`` (``s + 1`` copies) equal to ``{1}``.

    Returns ``None`` when that does not happen for any ``s <= cap``.
    """
    X = frozenset(X.elements if isinstance(X, Subset) else X)
    if not X:
        raise InvalidParameterError("X must be non-empty")
    e = backend.identity()
    if X == {e}:
        return 0
    cur = X
    for s in range(1, cap + 1):
        cur = frozenset(backend.comm(a, b) for a in cur for b in X)
        if cur == {e}:
            return s
    return None


def is_nilpotent(backend: GroupBackend) -> bool:
    return lower_central_series(backend).step is not None


def sylow_decomposition(backend: GroupBackend) -> list[tuple[int, frozenset]]:
    """Primary decomposition of a finite nilpotent group.

    For each prime ``p`` dividing ``|G|`` returns the elements of ``p``-power
    order, and checks that these are subgroups whose internal direct product
    is ``G``.
    """
    _require_finite(backend)
    if not is_nilpotent(backend):
        raise PreconditionError("sylow_decomposition needs a nilpotent group")
    elems = backend.elements()
    N = len(elems)
    primes = sorted(sympy.primefactors(N))
    orders = {g: backend.element_order(g) for g in elems}
    parts = []
    for p in primes:
        P = frozenset(g for g in elems if _is_power_of(orders[g], p))
        if not is_subgroup(backend, P):
            raise PreconditionError(f"elements of {p}-power order do not form a subgroup")
        parts.append((p, P))
    # internal direct product: orders multiply to |G|, parts commute, product covers G
    total = 1
    for _, P in parts:
        total *= len(P)
    if total != N:
        raise PreconditionError("primary parts do not multiply to the group order")
    for i, (_, P) in enumerate(parts):
        for _, Q in parts[i + 1 :]:
            if any(backend.mul(a, b) != backend.mul(b, a) for a in P for b in Q):
                raise PreconditionError("primary parts do not commute")
    return parts


def _is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1
