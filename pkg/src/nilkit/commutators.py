"""Formal commutators, weight vectors, the commutator order and basic commutators.

A formal commutator is a binary tree whose leaves are generator letters
``x1, x2, ...``.  Trees are immutable and hashable; formal inverses are never
stored inside a tree (a :class:`~nilkit.collection.Word` carries them as
signs on occurrences).

The total order used throughout the package sorts commutators by

1. total weight (number of leaves),
2. weight vector, a larger count of ``x1`` first, then of ``x2``, ...,
3. recursively by ``(left subtree, right subtree)``.

so that ``x1 < x2 < ... < xr``, commutators of equal weight vector are
consecutive and lighter commutators precede heavier ones.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import total_ordering
from typing import Callable, Iterable, Iterator, Sequence

from .errors import InvalidParameterError, MalformedCommutatorError

__all__ = [
    "Commutator",
    "x",
    "bracket",
    "WeightVector",
    "weight_vector",
    "CommutatorOrder",
    "compare",
    "BasicCommutatorTable",
    "enumerate_basic",
    "components",
    "CommutatorForm",
    "all_forms",
    "left_normed",
]


@total_ordering
class Commutator:
    """A formal commutator tree.  Build with :func:`x` and :func:`bracket`."""

    __slots__ = ("left", "right", "letter", "weight", "counts", "key", "_hash")

    def __init__(self, letter=None, left=None, right=None):
        if letter is not None:
            if not isinstance(letter, int) or letter < 1:
                raise MalformedCommutatorError(f"letter index must be a positive integer, got {letter!r}")
            self.letter = letter
            self.left = self.right = None
            self.weight = 1
            self.counts = ((letter, 1),)
            struct = (letter,)
        else:
            if not (isinstance(left, Commutator) and isinstance(right, Commutator)):
                raise MalformedCommutatorError("a bracket needs two commutator operands")
            self.letter = None
            self.left = left
            self.right = right
            self.weight = left.weight + right.weight
            merged = dict(left.counts)
            for i, n in right.counts:
                merged[i] = merged.get(i, 0) + n
            self.counts = tuple(sorted(merged.items()))
            struct = (left.key, right.key)
        top = self.counts[-1][0]
        dense = [0] * top
        for i, n in self.counts:
            dense[i - 1] = -n
        self.key = (self.weight, tuple(dense), struct)
        self._hash = hash(self.key)

    @property
    def is_leaf(self) -> bool:
        return self.letter is not None

    @property
    def max_letter(self) -> int:
        return self.counts[-1][0]

    def degree(self, letter_weights=None) -> int:
        """Total weight, with each letter optionally counted at a custom weight."""
        if letter_weights is None:
            return self.weight
        return sum(letter_weights[i - 1] * n for i, n in self.counts)

    def fold(self, leaf: Callable, node: Callable):
        """Evaluate the tree bottom-up: ``leaf(letter)`` and ``node(l, r)``."""
        if self.letter is not None:
            return leaf(self.letter)
        return node(self.left.fold(leaf, node), self.right.fold(leaf, node))

    def substitute(self, mapping) -> "Commutator":
        """Replace each letter ``i`` by ``mapping[i]`` (a commutator or letter)."""

        def leaf(i):
            v = mapping[i]
            return v if isinstance(v, Commutator) else Commutator(v)

        return self.fold(leaf, lambda a, b: Commutator(left=a, right=b))

    def leaves(self) -> list[int]:
        if self.letter is not None:
            return [self.letter]
        return self.left.leaves() + self.right.leaves()

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Commutator):
            return NotImplemented
        return self._hash == other._hash and self.key == other.key

    def __lt__(self, other):
        if not isinstance(other, Commutator):
            return NotImplemented
        return self.key < other.key

    def __hash__(self):
        return self._hash

    def __str__(self):
        if self.letter is not None:
            return f"x{self.letter}"
        return f"[{self.left},{self.right}]"

    def __repr__(self):
        return f"Commutator({self})"


def x(i: int) -> Commutator:
    """The generator leaf ``x_i``."""
    return Commutator(i)


def bracket(a, b) -> Commutator:
    """The formal commutator ``[a, b]``; integer operands are read as letters."""
    if isinstance(a, int):
        a = Commutator(a)
    if isinstance(b, int):
        b = Commutator(b)
    return Commutator(left=a, right=b)


def left_normed(*items) -> Commutator:
    """``[a1, a2, ..., ak] = [[a1, ..., a(k-1)], ak]``."""
    if not items:
        raise InvalidParameterError("need at least one operand")
    out = items[0] if isinstance(items[0], Commutator) else Commutator(items[0])
    for b in items[1:]:
        out = bracket(out, b)
    return out


@dataclass(frozen=True)
class WeightVector:
    counts: tuple[int, ...]
    total: int

    def power(self, lengths: Sequence[int]) -> int:
        """``L^chi = L1^chi1 * ... * Lr^chir``."""
        out = 1
        for L, c in zip(lengths, self.counts):
            out *= L**c
        return out


def _check_rank(c: Commutator, r: int):
    if c.max_letter > r:
        raise MalformedCommutatorError(f"{c} uses letter x{c.max_letter} but the rank is {r}")


def weight_vector(c: Commutator, r: int) -> WeightVector:
    _check_rank(c, r)
    dense = [0] * r
    for i, n in c.counts:
        dense[i - 1] = n
    return WeightVector(tuple(dense), c.weight)


class CommutatorOrder:
    """The fixed total order on commutators of rank ``r`` and weight at most ``s``."""

    def __init__(self, r: int, s: int):
        if r < 1 or s < 1:
            raise InvalidParameterError("rank and step must be positive")
        self.rank = r
        self.step = s

    def key(self, c: Commutator):
        _check_rank(c, self.rank)
        if c.weight > self.step:
            raise MalformedCommutatorError(f"{c} has weight above the step {self.step}")
        return c.key

    def compare(self, a: Commutator, b: Commutator) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def __repr__(self):
        return f"CommutatorOrder(r={self.rank}, s={self.step})"


def compare(a: Commutator, b: Commutator, order: CommutatorOrder | None = None) -> int:
    """Three-way comparison: -1 if ``a`` precedes ``b``, 0 if equal, 1 otherwise."""
    if order is not None:
        return order.compare(a, b)
    return (a.key > b.key) - (a.key < b.key)


@dataclass(frozen=True)
class BasicCommutatorTable:
    rank: int
    step: int
    entries: tuple[Commutator, ...]
    letter_weights: tuple[int, ...] | None = None

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[Commutator]:
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def index(self, c: Commutator) -> int:
        return self._positions[c]

    def __contains__(self, c):
        return c in self._positions

    @property
    def _positions(self):
        pos = self.__dict__.get("_pos")
        if pos is None:
            pos = {c: i for i, c in enumerate(self.entries)}
            object.__setattr__(self, "_pos", pos)
        return pos

    def weight_vectors(self) -> list[WeightVector]:
        return [weight_vector(c, self.rank) for c in self.entries]

    def bounds(self, lengths: Sequence[int]) -> list[int]:
        """Side lengths ``L^chi(c_i)`` of the nilpotent progression."""
        return [weight_vector(c, self.rank).power(lengths) for c in self.entries]


def enumerate_basic(r: int, s: int, letter_weights: Sequence[int] | None = None) -> BasicCommutatorTable:
    """Basic commutators on ``r`` letters of weight at most ``s``, in order.

    Uses Hall's recursive rule: ``[c_j, c_i]`` is basic when both parts are
    basic, ``c_j`` follows ``c_i``, and if ``c_j = [c_a, c_b]`` then ``c_i``
    does not precede ``c_b``.  With ``letter_weights`` the weight cut-off is
    applied to the weighted degree instead of the leaf count.
    """
    if r < 1 or s < 1:
        raise InvalidParameterError(f"need r >= 1 and s >= 1, got r={r}, s={s}")
    lw = tuple(letter_weights) if letter_weights is not None else None
    if lw is not None and (len(lw) != r or min(lw) < 1):
        raise InvalidParameterError("letter_weights must give a positive weight per letter")

    def deg(c):
        return c.degree(lw)

    by_weight: dict[int, list[Commutator]] = {1: [Commutator(i) for i in range(1, r + 1) if deg(Commutator(i)) <= s]}
    for n in range(2, s + 1):
        found = []
        for wj in range(1, n):
            wi = n - wj
            for cj in by_weight.get(wj, ()):
                for ci in by_weight.get(wi, ()):
                    if not cj.key > ci.key:
                        continue
                    if cj.letter is None and ci.key < cj.right.key:
                        continue
                    c = Commutator(left=cj, right=ci)
                    if deg(c) <= s:
                        found.append(c)
        by_weight[n] = found
    entries = sorted(itertools.chain.from_iterable(by_weight.values()), key=lambda c: c.key)
    return BasicCommutatorTable(r, s, tuple(entries), lw)


def components(c: Commutator) -> frozenset:
    """The set of subtrees of ``c`` (including ``c`` itself)."""
    if c.letter is not None:
        return frozenset((c,))
    return components(c.left) | components(c.right) | {c}


class CommutatorForm:
    """A commutator shape whose leaves are argument slots ``1..n``, each used once.

    The slot labels play the role of the argument permutation: the form
    ``[[1,3],2]`` sends ``(a, b, c)`` to ``[[a, c], b]``.
    """

    __slots__ = ("tree", "weight")

    def __init__(self, tree: Commutator):
        slots = tree.leaves()
        if sorted(slots) != list(range(1, len(slots) + 1)):
            raise MalformedCommutatorError(f"form leaves must be a permutation of 1..n, got {slots}")
        self.tree = tree
        self.weight = len(slots)

    @classmethod
    def identity(cls) -> "CommutatorForm":
        return cls(Commutator(1))

    @classmethod
    def simple(cls, n: int) -> "CommutatorForm":
        """The left-normed form ``[1, 2, ..., n]``."""
        return cls(left_normed(*range(1, n + 1)))

    @property
    def permutation(self) -> tuple[int, ...]:
        """Slots in the left-to-right order they appear in the tree."""
        return tuple(self.tree.leaves())

    def __call__(self, *args) -> Commutator:
        if len(args) != self.weight:
            raise InvalidParameterError(f"form of weight {self.weight} got {len(args)} arguments")
        return self.tree.substitute(dict(enumerate(args, start=1)))

    def apply(self, args: Sequence, commutator: Callable):
        """Evaluate the form on arbitrary values, using ``commutator(a, b)``."""
        if len(args) != self.weight:
            raise InvalidParameterError(f"form of weight {self.weight} got {len(args)} arguments")
        return self.tree.fold(lambda i: args[i - 1], commutator)

    def split(self):
        """For weight > 1, the two sub-forms and the slots each one consumes."""
        if self.tree.letter is not None:
            raise InvalidParameterError("the identity form has no split")
        parts = []
        for sub in (self.tree.left, self.tree.right):
            slots = sorted(sub.leaves())
            relabel = {old: new for new, old in enumerate(slots, start=1)}
            parts.append((CommutatorForm(sub.substitute(relabel)), tuple(slots)))
        return parts

    def __eq__(self, other):
        return isinstance(other, CommutatorForm) and self.tree == other.tree

    def __hash__(self):
        return hash(("form", self.tree))

    def __str__(self):
        return str(self.tree).replace("x", "#")

    def __repr__(self):
        return f"CommutatorForm({self})"


def all_forms(n: int) -> list[CommutatorForm]:
    """Every commutator form of weight ``n``."""

    def trees(slots: tuple[int, ...]) -> Iterable[Commutator]:
        if len(slots) == 1:
            yield Commutator(slots[0])
            return
        for k in range(1, len(slots)):
            for left_slots in itertools.combinations(slots, k):
                right_slots = tuple(i for i in slots if i not in left_slots)
                for a in trees(left_slots):
                    for b in trees(right_slots):
                        yield Commutator(left=a, right=b)

    return [CommutatorForm(t) for t in trees(tuple(range(1, n + 1)))]
