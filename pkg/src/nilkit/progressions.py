"""Ordered progressions, nilprogressions, nilpotent progressions, balls and coset progressions.

All constructions return exact element sets.  For a spec ``(x1..xr; L)``:

* ``P_ord``  : ``{x1^l1 ... xr^lr : |li| <= Li}``
* ``P*``     : values of words in which ``xi`` and ``xi^-1`` occur at most ``Li`` times between them
* ``P``      : ``{c1^l1 ... ct^lt : |li| <= L^chi(ci)}`` over the basic commutators ``ci``
* ``B``      : ``union of {xi^l : |l| <= Li}``
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .backends import GroupBackend, Subset
from .commutators import BasicCommutatorTable, enumerate_basic, weight_vector
from .errors import InvalidParameterError, PreconditionError, ResourceLimitError, UnsupportedBackendError
from .groups import evaluate_commutator, is_subgroup, lower_central_series

__all__ = [
    "ProgressionSpec",
    "EnumeratedSet",
    "enumerate_ordered",
    "enumerate_nilprogression",
    "enumerate_nilpotent_progression",
    "enumerate_ball",
    "enumerate_coset_progression",
    "power_set",
    "ChainReport",
    "check_chain",
    "DEFAULT_LETTER_BUDGET",
    "DEFAULT_CHAIN_CAP",
]

DEFAULT_LETTER_BUDGET = 12
DEFAULT_CHAIN_CAP = 8
DEFAULT_SET_CAP = 2_000_000

KINDS = ("ordered", "nilprogression", "nilpotent", "ball", "coset-progression", "power")


@dataclass(frozen=True)
class ProgressionSpec:
    """Generators ``x1..xr`` in ``backend`` with side lengths ``L1..Lr``.

    A side length of 0 is accepted and simply removes that generator.
    """

    backend: GroupBackend
    generators: tuple
    lengths: tuple[int, ...]

    def __init__(self, backend, generators: Sequence, lengths: Sequence[int]):
        gens, lens = tuple(generators), tuple(int(L) for L in lengths)
        if not gens:
            raise InvalidParameterError("a progression needs at least one generator")
        if len(gens) != len(lens):
            raise InvalidParameterError(f"{len(gens)} generators but {len(lens)} side lengths")
        if any(L < 0 for L in lens):
            raise InvalidParameterError(f"side lengths must be non-negative, got {lens}")
        object.__setattr__(self, "backend", backend)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "lengths", lens)

    @property
    def rank(self) -> int:
        return len(self.generators)


class EnumeratedSet(Subset):
    """A :class:`Subset` tagged with the construction that produced it."""

    __slots__ = ("kind",)

    def __init__(self, backend, elements, kind: str):
        if kind not in KINDS:
            raise InvalidParameterError(f"unknown set kind {kind!r}")
        super().__init__(backend, elements)
        self.kind = kind


def _segment(backend, g, L):
    """``{g^l : |l| <= L}``."""
    out = {backend.identity()}
    up = down = backend.identity()
    ginv = backend.inv(g)
    for _ in range(L):
        up = backend.mul(up, g)
        down = backend.mul(down, ginv)
        out.add(up)
        out.add(down)
    return out


def _product_with_segment(backend, S, g, L):
    seg = _segment(backend, g, L)
    mul = backend.mul
    return {mul(a, b) for a in S for b in seg}


def enumerate_ordered(spec: ProgressionSpec) -> EnumeratedSet:
    B = spec.backend
    S = {B.identity()}
    for g, L in zip(spec.generators, spec.lengths):
        S = _product_with_segment(B, S, g, L)
    return EnumeratedSet(B, S, "ordered")


def _dominated(v, others) -> bool:
    return any(all(a >= b for a, b in zip(o, v)) for o in others)


def enumerate_nilprogression(spec: ProgressionSpec, budget: int = DEFAULT_LETTER_BUDGET) -> EnumeratedSet:
    """Values of all words using ``xi^{+-1}`` at most ``Li`` times in total.

    Breadth-first search over ``(element, remaining budget)``; a state is
    dropped when the same element was already reached with at least as much
    budget left in every coordinate.
    """
    if sum(spec.lengths) > budget:
        raise ResourceLimitError(f"total letter budget {sum(spec.lengths)} exceeds {budget}")
    B = spec.backend
    steps = []
    for i, g in enumerate(spec.generators):
        steps.append((i, g))
        steps.append((i, B.inv(g)))
    start = (B.identity(), spec.lengths)
    best: dict = {start[0]: [spec.lengths]}
    queue = deque([start])
    while queue:
        a, rem = queue.popleft()
        if not any(rem == v for v in best.get(a, ())):
            continue  # superseded by a dominating state
        for i, g in steps:
            if rem[i] == 0:
                continue
            b = B.mul(a, g)
            nrem = rem[:i] + (rem[i] - 1,) + rem[i + 1 :]
            kept = best.setdefault(b, [])
            if _dominated(nrem, kept):
                continue
            kept[:] = [v for v in kept if not all(x >= y for x, y in zip(nrem, v))]
            kept.append(nrem)
            queue.append((b, nrem))
    return EnumeratedSet(B, best.keys(), "nilprogression")


def _backend_step(backend: GroupBackend) -> int:
    if backend.step is not None:
        return backend.step
    if backend.is_finite():
        s = lower_central_series(backend).step
        if s is None:
            raise PreconditionError(f"{backend!r} is not nilpotent")
        return max(s, 1)
    raise UnsupportedBackendError(f"{backend!r} has no declared nilpotency step")


def enumerate_nilpotent_progression(spec: ProgressionSpec, table: BasicCommutatorTable | None = None) -> EnumeratedSet:
    """Ordered products ``c1^l1 ... ct^lt`` with ``|li| <= L^chi(ci)``."""
    B = spec.backend
    if table is None:
        table = enumerate_basic(spec.rank, _backend_step(B))
    if table.rank != spec.rank:
        raise InvalidParameterError(f"table has rank {table.rank} but the spec has {spec.rank} generators")
    assignment = dict(enumerate(spec.generators, start=1))
    cache: dict = {}
    S = {B.identity()}
    for c in table:
        g = evaluate_commutator(B, assignment, c, cache)
        bound = weight_vector(c, spec.rank).power(spec.lengths)
        S = _product_with_segment(B, S, g, bound)
    return EnumeratedSet(B, S, "nilpotent")


def enumerate_ball(spec: ProgressionSpec) -> EnumeratedSet:
    B = spec.backend
    S = set()
    for g, L in zip(spec.generators, spec.lengths):
        S |= _segment(B, g, L)
    S.add(B.identity())
    return EnumeratedSet(B, S, "ball")


def enumerate_coset_progression(backend: GroupBackend, H, spec: ProgressionSpec) -> EnumeratedSet:
    """``H + P`` for a subgroup ``H`` of a finite abelian backend."""
    if backend.is_abelian() is False:
        raise PreconditionError("coset progressions need an abelian backend")
    Hs = frozenset(H.elements if isinstance(H, Subset) else H)
    if not is_subgroup(backend, Hs):
        raise PreconditionError("H is not a subgroup")
    P = enumerate_ordered(spec)
    return EnumeratedSet(backend, {backend.mul(h, p) for h in Hs for p in P.elements}, "coset-progression")


def power_set(A: Subset, n: int, cap: int | None = None) -> EnumeratedSet:
    """``A^n = A A ... A`` (``n`` factors)."""
    if n < 1:
        raise InvalidParameterError(f"power must be at least 1, got {n}")
    if not A.elements:
        raise InvalidParameterError("power of an empty set")
    cap = DEFAULT_SET_CAP if cap is None else cap
    B = A.backend
    mul = B.mul
    base = A.sorted()
    cur = set(A.elements)
    if B.identity() in A.elements:
        # A^k grows monotonically; only the newest layer needs extending
        frontier = set(cur)
        for _ in range(n - 1):
            new = {mul(a, b) for a in frontier for b in base} - cur
            cur |= new
            frontier = new
            if len(cur) > cap:
                raise ResourceLimitError(f"product set exceeded {cap} elements")
            if not new:
                break
    else:
        for _ in range(n - 1):
            cur = {mul(a, b) for a in cur for b in base}
            if len(cur) > cap:
                raise ResourceLimitError(f"product set exceeded {cap} elements")
    return EnumeratedSet(B, cur, "power")


@dataclass(frozen=True)
class ChainReport:
    """Outcome of checking ``P_ord ⊆ P* ⊆ P ⊆ P_ord^m``."""

    ord_in_star: bool
    star_in_nilpotent: bool
    sizes: tuple[int, int, int]
    m: int | None  # None when no m <= cap works
    cap: int
    power_sizes: tuple[int, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.ord_in_star and self.star_in_nilpotent

    def lines(self) -> list[str]:
        return [
            f"ord_in_star={str(self.ord_in_star).lower()}",
            f"star_in_nilpotent={str(self.star_in_nilpotent).lower()}",
            f"size_ordered={self.sizes[0]}",
            f"size_star={self.sizes[1]}",
            f"size_nilpotent={self.sizes[2]}",
            f"m={self.m if self.m is not None else 'cap-exceeded'}",
            f"cap={self.cap}",
        ]


def check_chain(spec: ProgressionSpec, cap: int = DEFAULT_CHAIN_CAP, budget: int = DEFAULT_LETTER_BUDGET) -> ChainReport:
    P_ord = enumerate_ordered(spec)
    P_star = enumerate_nilprogression(spec, budget)
    P = enumerate_nilpotent_progression(spec)
    m = None
    sizes = []
    cur = P_ord
    for k in range(1, cap + 1):
        if k > 1:
            cur = power_set(P_ord, k)
        sizes.append(len(cur))
        if P.elements <= cur.elements:
            m = k
            break
    return ChainReport(
        P_ord.elements <= P_star.elements,
        P_star.elements <= P.elements,
        (len(P_ord), len(P_star), len(P)),
        m,
        cap,
        tuple(sizes),
    )
