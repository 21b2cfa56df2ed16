"""Commutators of products and of powers, expanded into commutators of the factors.

``decompose_product_commutator`` writes ``alpha(prod X1, ..., prod Xr)`` as a
product of distinct formal commutators in the individual factors, following
the recursion

    [X, y1 Y'] = [X, Y'] [X, y1] [[X, y1], Y']          (split the right side)
    [x1 X', Y] = [X', [Y, x1]] [x1, Y] [X', Y]          (split the left side)

which are rearrangements of the identities ``[w,v][w,u] = [w,uv][v,[w,u]]``
and ``[u,w][v,w] = [[w,u],v][uv,w]``.  Everything of weight above the step is
dropped, which is exact in any group of that step.

``decompose_power_commutator`` then gives ``alpha(x1^l1, ..., xr^lr)`` as
``alpha(x)^(l1...lr)`` times powers of heavier commutators, and
``power_in_ball`` writes ``alpha(x)^m`` as a product of powers ``xi^l`` with
``|l| <= Li``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .collection import Word, collect
from .commutators import Commutator, CommutatorForm, weight_vector
from .errors import InconsistencyError, InvalidParameterError

__all__ = [
    "DecompositionResult",
    "BallWord",
    "decompose_product_commutator",
    "decompose_power_commutator",
    "power_in_ball",
    "ball_factor_bound",
    "mixed_radix_terms",
]


@dataclass(frozen=True)
class DecompositionResult:
    """``factors`` multiply, in order, to the decomposed element.

    For a power decomposition ``leading`` is ``alpha(x1, ..., xr)`` and
    ``leading_exponent`` is ``l1 * ... * lr``; the remaining factors are the
    corrections ``(zeta_i, m_i)``.
    """

    factors: tuple
    leading: Commutator | None = None
    leading_exponent: int | None = None
    step: int = 0

    @property
    def corrections(self):
        if self.leading is None:
            return self.factors
        return self.factors[1:]

    def commutators(self):
        return [c for c, _ in self.factors]

    def to_word(self, rank: int) -> Word:
        occ = []
        for c, e in self.factors:
            occ.extend([(c, 1 if e > 0 else -1)] * abs(e))
        return Word(occ, rank, self.step)

    def __len__(self):
        return len(self.factors)


def _decomp(X: tuple, Y: tuple, s: int, deg) -> list:
    """Distinct commutators whose product is ``[prod X, prod Y]`` modulo weight > s."""
    if not X or not Y:
        return []
    if min(deg(a) for a in X) + min(deg(b) for b in Y) > s:
        return []
    if len(X) == 1 and len(Y) == 1:
        return [Commutator(left=X[0], right=Y[0])]
    if len(Y) >= 2:
        y1, rest = Y[:1], Y[1:]
        xi = tuple(_decomp(X, y1, s, deg))
        return _decomp(X, rest, s, deg) + list(xi) + _decomp(xi, rest, s, deg)
    x1, rest = X[:1], X[1:]
    zeta = tuple(_decomp(Y, x1, s, deg))
    return _decomp(rest, zeta, s, deg) + _decomp(x1, Y, s, deg) + _decomp(rest, Y, s, deg)


def _decomp_form(tree: Commutator, lists: dict, s: int, deg) -> list:
    """``tree`` has slot labels as leaves; ``lists[slot]`` is that slot's factor list."""
    if tree.letter is not None:
        return [c for c in lists[tree.letter] if deg(c) <= s]
    xi = tuple(_decomp_form(tree.left, lists, s, deg))
    zeta = tuple(_decomp_form(tree.right, lists, s, deg))
    return _decomp(xi, zeta, s, deg)


def _as_commutator(c):
    if isinstance(c, Commutator):
        return c
    if isinstance(c, int):
        return Commutator(c)
    raise InvalidParameterError(f"factor must be a letter index or a commutator, got {c!r}")


def decompose_product_commutator(form: CommutatorForm, factor_lists: Sequence[Sequence], s: int, letter_weights=None) -> DecompositionResult:
    """Expand ``form(prod factor_lists[0], ..., prod factor_lists[r-1])``.

    Factors are letter indices (or commutators); each slot must use its own
    letters.  Every returned commutator has exponent ``+1``; all are distinct
    and every tuple term ``form(a1, ..., ar)`` is among them.
    """
    if s < 1:
        raise InvalidParameterError("step must be positive")
    if len(factor_lists) != form.weight:
        raise InvalidParameterError(f"form of weight {form.weight} needs {form.weight} factor lists, got {len(factor_lists)}")
    lists = {}
    seen_letters: dict[int, int] = {}
    for slot, L in enumerate(factor_lists, start=1):
        if len(L) == 0:
            raise InvalidParameterError(f"factor list for slot {slot} is empty")
        cs = [_as_commutator(c) for c in L]
        for c in cs:
            for letter in set(c.leaves()):
                if seen_letters.setdefault(letter, slot) != slot:
                    raise InvalidParameterError(f"letter x{letter} appears in slots {seen_letters[letter]} and {slot}")
        lists[slot] = cs
    lw = tuple(letter_weights) if letter_weights is not None else None
    etas = _decomp_form(form.tree, lists, s, lambda c: c.degree(lw))
    return DecompositionResult(tuple((c, 1) for c in etas), step=s)


def decompose_power_commutator(form: CommutatorForm, exponents: Sequence[int], s: int) -> DecompositionResult:
    """``form(x1^l1, ..., xr^lr) = form(x)^(l1...lr) * zeta_1^m1 * ... * zeta_t^mt``.

    The ``zeta_i`` are commutators in ``x1..xr`` of weight above ``r`` with
    ``|m_i| <= l^chi(zeta_i)``.  They come from collecting the product
    expansion, treating ``form(x)`` and each distinct heavier commutator as a
    letter of its own.
    """
    r = form.weight
    if s < 1:
        raise InvalidParameterError("step must be positive")
    if len(exponents) != r:
        raise InvalidParameterError(f"form of weight {r} needs {r} exponents, got {len(exponents)}")
    if any((not isinstance(l, int)) or l < 1 for l in exponents):
        raise InvalidParameterError(f"exponents must be positive integers, got {tuple(exponents)}")
    return _power_decomp(form.tree, tuple(exponents), s)


@lru_cache(maxsize=4096)
def _power_decomp(tree: Commutator, ls: tuple, s: int) -> DecompositionResult:
    r = len(ls)
    lead = tree
    total = math.prod(ls)
    if r > s:
        return DecompositionResult((), lead, total, s)
    # copy letters: slot j gets letters owner[...] == j
    owner: dict[int, int] = {}
    lists = []
    nxt = 1
    for j, l in enumerate(ls, start=1):
        lists.append(list(range(nxt, nxt + l)))
        for c in range(nxt, nxt + l):
            owner[c] = j
        nxt += l
    etas = decompose_product_commutator(CommutatorForm(tree), lists, s).commutators()
    back = {c: Commutator(j) for c, j in owner.items()}
    in_x = [e.substitute(back) for e in etas]
    heavier = sorted({c for c in in_x if c != lead}, key=lambda c: c.key)
    if any(c.weight <= r for c in heavier):
        raise InconsistencyError("a non-leading term of weight <= r appeared in the expansion")
    ys = [lead] + heavier
    ypos = {c: i for i, c in enumerate(ys, start=1)}
    weights = [c.weight for c in ys]
    w = Word([(Commutator(ypos[c]), 1) for c in in_x], len(ys), s, weights)
    collected, _ = collect(w, trace=False)
    yback = {i: c for c, i in ypos.items()}
    factors = []
    lead_exp = 0
    for zeta, m in collected.items():
        if zeta == Commutator(1):
            lead_exp = m
            continue
        factors.append((zeta.substitute(yback), m))
    if lead_exp != total:
        raise InconsistencyError(f"leading exponent {lead_exp} differs from {total}")
    return DecompositionResult(((lead, total), *factors), lead, total, s)


def mixed_radix_terms(m: int, L: Sequence[int]) -> list[tuple[int, ...]]:
    """Write ``0 <= m <= prod L`` as a sum of at most ``len(L)`` products ``l1*...*lr`` with ``0 <= li <= Li``.

    Greedy: the k-th term is ``(1, ..., 1, q_k, L_(k+1), ..., L_r)``.
    """
    if m < 0 or m > math.prod(L):
        raise InvalidParameterError(f"need 0 <= m <= {math.prod(L)}, got {m}")
    terms = []
    rem = m
    r = len(L)
    for k in range(r):
        tail = math.prod(L[k + 1 :])
        q = rem // tail
        if q:
            terms.append((1,) * k + (q,) + tuple(L[k + 1 :]))
            rem -= q * tail
    return terms


@dataclass(frozen=True)
class BallWord:
    """A product of ball elements ``x_letter^exponent``, each ``|exponent| <= L_letter``."""

    factors: tuple[tuple[int, int], ...]
    lengths: tuple[int, ...]
    step: int = 0

    def __len__(self):
        return len(self.factors)

    @property
    def count(self) -> int:
        return len(self.factors)

    def to_word(self) -> Word:
        occ = []
        for i, e in self.factors:
            occ.extend([(Commutator(i), 1 if e > 0 else -1)] * abs(e))
        return Word(occ, len(self.lengths), max(self.step, 1))

    def __str__(self):
        return " ".join(f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in self.factors)


def _expand(tree: Commutator, exps: dict, sign: int) -> list:
    """Ball factors of ``tree`` with each leaf letter ``k`` raised to ``exps[k]``, inverted if ``sign < 0``."""
    if tree.letter is not None:
        return [(tree.letter, sign * exps[tree.letter])]
    u, v = tree.left, tree.right
    if sign > 0:  # [u,v] = u^-1 v^-1 u v
        return _expand(u, exps, -1) + _expand(v, exps, -1) + _expand(u, exps, 1) + _expand(v, exps, 1)
    # [u,v]^-1 = v^-1 u^-1 v u
    return _expand(v, exps, -1) + _expand(u, exps, -1) + _expand(v, exps, 1) + _expand(u, exps, 1)


def _power_word(tree: Commutator, args: tuple, lengths: dict, m: int, s: int) -> list:
    """Ball factors for ``tree(args)^m``; ``tree`` is over slots ``1..n`` and ``args[k-1]`` is slot k's letter."""
    n = tree.weight
    if m == 0 or n > s:
        return []
    if m < 0:
        return [(i, -e) for i, e in reversed(_power_word(tree, args, lengths, -m, s))]
    L = tuple(lengths[a] for a in args)
    out = []
    for ls in mixed_radix_terms(m, L):
        res = _power_decomp(tree, ls, s)
        slot_exps = dict(enumerate(ls, start=1))
        out.extend((args[k - 1], e) for k, e in _expand(tree, slot_exps, 1))
        # alpha(x)^(prod l) = alpha(x^l) * zeta_t^-m_t ... zeta_1^-m_1
        for zeta, mz in reversed(res.corrections):
            # each leaf occurrence of zeta becomes its own slot
            slots: list = []
            sub_tree = _relabel_leaves(zeta, itertools.count(1), slots)
            sub_args = tuple(args[k - 1] for k in slots)
            out.extend(_power_word(sub_tree, sub_args, lengths, -mz, s))
    return out


def _relabel_leaves(c: Commutator, counter, record: list) -> Commutator:
    if c.letter is not None:
        record.append(c.letter)
        return Commutator(next(counter))
    left = _relabel_leaves(c.left, counter, record)
    right = _relabel_leaves(c.right, counter, record)
    return Commutator(left=left, right=right)


def power_in_ball(form: CommutatorForm, L: Sequence[int], m: int, s: int) -> BallWord:
    """``form(x1, ..., xr)^m`` as a product of elements of ``B(x; L)``.

    Valid in every group of step at most ``s``; requires ``|m| <= L1 * ... * Lr``.
    """
    r = form.weight
    if len(L) != r:
        raise InvalidParameterError(f"form of weight {r} needs {r} side lengths, got {len(L)}")
    if any(l < 1 for l in L):
        raise InvalidParameterError("side lengths must be positive")
    if abs(m) > math.prod(L):
        raise InvalidParameterError(f"|m| = {abs(m)} exceeds L1*...*Lr = {math.prod(L)}")
    if s < 1:
        raise InvalidParameterError("step must be positive")
    lengths = dict(enumerate(L, start=1))
    factors = _power_word(form.tree, tuple(range(1, r + 1)), lengths, m, s)
    return BallWord(tuple(factors), tuple(L), s)


def ball_factor_bound(form: CommutatorForm, L: Sequence[int], s: int) -> int:
    """Largest factor count of :func:`power_in_ball` over all admissible ``m``."""
    P = math.prod(L)
    return max(len(power_in_ball(form, L, m, s)) for m in range(-P, P + 1))
