"""Hall's collecting process on strings of signed commutators.

A :class:`Word` is a string ``a1 a2 ... an`` of commutators and formal
inverses.  One collecting step locates the earliest commutator ``beta`` in
the uncollected part, takes its leftmost copy and swaps it with the
occurrence ``alpha`` to its left using one of the four rewriting rules::

    1:  alpha      beta      ->  beta  alpha [alpha,beta]
    2:  alpha^-1   beta      ->  beta  [alpha,beta]^-1 alpha^-1
    3:  alpha      beta^-1   ->  beta^-1 alpha a2 a4 ... a5^-1 a3^-1 a1^-1
    4:  alpha^-1   beta^-1   ->  beta^-1 a1 a3 a5 ... a4^-1 a2^-1 alpha^-1

where ``a1 = [alpha, beta]`` and ``a(i+1) = [ai, beta]``.  Anything of weight
above the step is dropped as soon as it is created.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .commutators import BasicCommutatorTable, Commutator, enumerate_basic, weight_vector
from .errors import InconsistencyError, InvalidParameterError, MalformedCommutatorError, ResourceLimitError

__all__ = [
    "Word",
    "TraceStep",
    "TransformTrace",
    "CollectedForm",
    "collect_step",
    "collect",
    "copy_counts",
    "DEFAULT_STEP_BUDGET",
]

DEFAULT_STEP_BUDGET = 1_000_000

Occurrence = tuple  # (Commutator, +1 | -1)


class Word:
    """A string of signed commutator occurrences for rank ``rank`` and step ``step``.

    ``letter_weights`` lets letters stand for elements deeper in the lower
    central series; the step cut-off then applies to the weighted degree.
    """

    __slots__ = ("occurrences", "rank", "step", "letter_weights")

    def __init__(self, occurrences: Sequence[Occurrence], rank: int, step: int, letter_weights=None):
        if rank < 1 or step < 1:
            raise InvalidParameterError("rank and step must be positive")
        self.rank = rank
        self.step = step
        self.letter_weights = tuple(letter_weights) if letter_weights is not None else None
        kept = []
        for c, sign in occurrences:
            if isinstance(c, int):
                c = Commutator(c)
            if sign not in (1, -1):
                raise InvalidParameterError(f"occurrence sign must be +1 or -1, got {sign!r}")
            if c.max_letter > rank:
                raise MalformedCommutatorError(f"{c} uses letter x{c.max_letter} but the rank is {rank}")
            if c.degree(self.letter_weights) <= step:
                kept.append((c, sign))
        self.occurrences = tuple(kept)

    @classmethod
    def from_letters(cls, letters: Sequence[int], rank: int, step: int) -> "Word":
        """Word over generators; a negative entry ``-i`` stands for ``x_i^-1``."""
        occ = [(Commutator(abs(i)), 1 if i > 0 else -1) for i in letters]
        return cls(occ, rank, step)

    def with_occurrences(self, occurrences) -> "Word":
        return Word(occurrences, self.rank, self.step, self.letter_weights)

    def __len__(self):
        return len(self.occurrences)

    def __iter__(self):
        return iter(self.occurrences)

    def __eq__(self, other):
        return (
            isinstance(other, Word)
            and self.occurrences == other.occurrences
            and (self.rank, self.step, self.letter_weights) == (other.rank, other.step, other.letter_weights)
        )

    def __hash__(self):
        return hash((self.occurrences, self.rank, self.step))

    def inverse(self) -> "Word":
        return self.with_occurrences([(c, -e) for c, e in reversed(self.occurrences)])

    def __str__(self):
        return " ".join(f"{c}" if e == 1 else f"{c}^-1" for c, e in self.occurrences)

    def __repr__(self):
        return f"Word({str(self)!r}, rank={self.rank}, step={self.step})"

    def is_collected(self) -> bool:
        occ = self.occurrences
        return all(occ[i][0].key <= occ[i + 1][0].key for i in range(len(occ) - 1))


@dataclass(frozen=True)
class TraceStep:
    """One transformation: ``kind`` in 1..4 applied at ``position`` (0-based index of beta)."""

    kind: int
    position: int
    alpha: Commutator
    beta: Commutator
    created: tuple  # signed commutators created by the step, in output order

    def replacement(self) -> list:
        a, b = self.alpha, self.beta
        if self.kind == 1:
            return [(b, 1), (a, 1), *self.created]
        if self.kind == 2:
            return [(b, 1), *self.created, (a, -1)]
        if self.kind == 3:
            return [(b, -1), (a, 1), *self.created]
        return [(b, -1), *self.created, (a, -1)]

    def __str__(self):
        made = " ".join(f"{c}" if e == 1 else f"{c}^-1" for c, e in self.created) or "-"
        return f"type={self.kind}\tpos={self.position}\talpha={self.alpha}\tbeta={self.beta}\tcreated={made}"


@dataclass
class TransformTrace:
    steps: list = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    def replay(self, initial: Word):
        """Yield every intermediate word, starting with ``initial``."""
        occ = list(initial.occurrences)
        yield initial
        for st in self.steps:
            j = st.position
            if j < 1 or j >= len(occ):
                raise InconsistencyError(f"trace step at position {j} does not fit a word of length {len(occ)}")
            prev, cur = occ[j - 1], occ[j]
            expect_prev = (st.alpha, 1 if st.kind in (1, 3) else -1)
            expect_cur = (st.beta, 1 if st.kind in (1, 2) else -1)
            if prev != expect_prev or cur != expect_cur:
                raise InconsistencyError(f"trace step {st} does not match the word")
            occ[j - 1 : j + 1] = st.replacement()
            yield initial.with_occurrences(occ)


@dataclass(frozen=True)
class CollectedForm:
    """Exponents ``l_i`` of ``c_1^l_1 ... c_t^l_t`` over a basic commutator table.

    ``extra`` holds nonzero exponents of non-basic commutators, which can only
    occur when the input word already contained non-basic commutators.
    """

    table: BasicCommutatorTable
    exponents: tuple[int, ...]
    extra: tuple = ()

    def items(self):
        """Nonzero ``(commutator, exponent)`` pairs in increasing order."""
        pairs = [(c, e) for c, e in zip(self.table.entries, self.exponents) if e]
        pairs.extend(self.extra)
        pairs.sort(key=lambda ce: ce[0].key)
        return pairs

    def exponent(self, c: Commutator) -> int:
        if c in self.table:
            return self.exponents[self.table.index(c)]
        return dict(self.extra).get(c, 0)

    def to_word(self) -> Word:
        occ = []
        for c, e in self.items():
            occ.extend([(c, 1 if e > 0 else -1)] * abs(e))
        return Word(occ, self.table.rank, self.table.step, self.table.letter_weights)


def _find_swap(occ):
    """Index ``j`` of beta for the next transformation, or ``None`` if collected."""
    n = len(occ)
    if n < 2:
        return None
    keys = [c.key for c, _ in occ]
    run = 1
    while run < n and keys[run - 1] <= keys[run]:
        run += 1
    if run == n:
        return None
    sufmin = [None] * (n + 1)
    best = None
    for i in range(n - 1, -1, -1):
        if best is None or keys[i] < best:
            best = keys[i]
        sufmin[i] = best
    # longest sorted prefix whose last entry precedes everything after it
    m = 0
    for k in range(1, run + 1):
        if keys[k - 1] <= sufmin[k]:
            m = k
    beta_key = sufmin[m]
    j = next(i for i in range(m, n) if keys[i] == beta_key)
    return j


def _transform(occ: list, j: int, w: Word) -> TraceStep:
    """Rewrite ``occ[j-1:j+1]`` in place and return the step taken."""
    (alpha, ea), (beta, eb) = occ[j - 1], occ[j]
    desc = []
    cur = alpha
    while True:
        cur = Commutator(left=cur, right=beta)
        if cur.degree(w.letter_weights) > w.step:
            break
        desc.append(cur)
    if eb == 1:
        kind = 1 if ea == 1 else 2
        created = tuple((c, ea) for c in desc[:1])
    else:
        kind = 3 if ea == 1 else 4
        # type 3 keeps a2, a4, ... then the odd ones inverted in descending order
        first = 1 if kind == 3 else 0
        evens = [(desc[i], 1) for i in range(first, len(desc), 2)]
        odds = [(desc[i], -1) for i in range(1 - first, len(desc), 2)]
        created = tuple(evens + odds[::-1])
    st = TraceStep(kind, j, alpha, beta, created)
    occ[j - 1 : j + 1] = st.replacement()
    return st


def collect_step(w: Word):
    """Apply one collecting transformation.

    Returns ``(new_word, step)``; ``step`` is ``None`` when ``w`` is already
    collected, in which case ``w`` itself is returned.
    """
    occ = list(w.occurrences)
    j = _find_swap(occ)
    if j is None:
        return w, None
    st = _transform(occ, j, w)
    return w.with_occurrences(occ), st


def collect(w: Word, *, budget: int = DEFAULT_STEP_BUDGET, trace: bool = True, table: BasicCommutatorTable | None = None):
    """Run the collecting process to its fixed point.

    Returns ``(CollectedForm, TransformTrace)``; the trace is empty when
    ``trace=False``.
    """
    steps = TransformTrace()
    occ = list(w.occurrences)
    n_steps = 0
    while True:
        j = _find_swap(occ)
        if j is None:
            break
        n_steps += 1
        if n_steps > budget:
            raise ResourceLimitError(f"collection exceeded {budget} steps")
        st = _transform(occ, j, w)
        if trace:
            steps.steps.append(st)
    return _tally(occ, w, table), steps


def _tally(occ, w: Word, table=None) -> CollectedForm:
    if table is None:
        table = _table_for(w.rank, w.step, w.letter_weights)
    exps = [0] * len(table)
    extra = Counter()
    for c, e in occ:
        if c in table:
            exps[table.index(c)] += e
        else:
            extra[c] += e
    extra_items = tuple(sorted(((c, e) for c, e in extra.items() if e), key=lambda ce: ce[0].key))
    return CollectedForm(table, tuple(exps), extra_items)


_TABLES: dict = {}


def _table_for(r, s, lw):
    key = (r, s, lw)
    if key not in _TABLES:
        _TABLES[key] = enumerate_basic(r, s, lw)
    return _TABLES[key]


def final_word(trace: TransformTrace, initial: Word) -> Word:
    last = initial
    for last in trace.replay(initial):
        pass
    return last


def copy_counts(trace: TransformTrace, initial: Word) -> dict:
    """Combined number of copies of each basic commutator and its inverse at the end.

    The trace is replayed from ``initial``; a mismatch raises
    :class:`InconsistencyError`.
    """
    end = final_word(trace, initial)
    if not end.is_collected():
        raise InconsistencyError("trace does not end in a collected word")
    table = _table_for(initial.rank, initial.step, initial.letter_weights)
    counts = {c: 0 for c in table}
    for c, _ in end.occurrences:
        counts[c] = counts.get(c, 0) + 1
    return counts


def letter_budget(w: Word) -> tuple[list[int], list[int]]:
    """``(p, n)``: positive and negative occurrence counts of each generator letter."""
    p = [0] * w.rank
    n = [0] * w.rank
    for c, e in w.occurrences:
        if c.letter is None:
            raise InvalidParameterError("letter budgets are defined for words over generators only")
        (p if e > 0 else n)[c.letter - 1] += 1
    return p, n


def quantitative_bound(c: Commutator, lengths: Sequence[int]) -> int:
    """``L^chi(c)`` for side lengths ``lengths``."""
    return weight_vector(c, len(lengths)).power(lengths)
