"""Exact group backends and the set/subgroup/homomorphism types built on them.

Every backend element is a canonical hashable Python value (an ``int`` or a
tuple), so ``==`` and ``hash`` are exact set membership.  Unitriangular
matrices are stored as the tuple of their strictly upper entries, row by
row, reduced modulo the modulus when there is one.
"""
from __future__ import annotations

import itertools
import math
from abc import ABC, abstractmethod
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import InvalidParameterError, PreconditionError, UnsupportedBackendError

__all__ = [
    "GroupBackend",
    "UnitriangularBackend",
    "CyclicBackend",
    "ProductBackend",
    "TableGroup",
    "SubgroupBackend",
    "CosetQuotient",
    "Subset",
    "GroupHomomorphism",
    "NormalSubgroup",
    "heisenberg",
    "symmetric_group",
]


class GroupBackend(ABC):
    """Abstract exact group.  Subclasses define the group law on canonical values."""

    step: int | None = None  # declared nilpotency step, if known

    @abstractmethod
    def identity(self): ...

    @abstractmethod
    def mul(self, a, b): ...

    @abstractmethod
    def inv(self, a): ...

    def is_finite(self) -> bool:
        return False

    def order(self) -> int:
        raise UnsupportedBackendError(f"{self} is not enumerable")

    def elements(self) -> list:
        raise UnsupportedBackendError(f"{self} is not enumerable")

    def generators(self) -> list:
        """Standard generators, used as the letters of words typed at the CLI."""
        raise UnsupportedBackendError(f"{self} has no standard generators")

    def is_abelian(self) -> bool | None:
        return None

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        out = self.identity()
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def comm(self, a, b):
        """``[a, b] = a^-1 b^-1 a b``."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def conj(self, a, g):
        """``g^-1 a g``."""
        return self.mul(self.mul(self.inv(g), a), g)

    def element_order(self, a, cap: int | None = None) -> int:
        e = self.identity()
        cur, n = a, 1
        while cur != e:
            cur = self.mul(cur, a)
            n += 1
            if cap is not None and n > cap:
                raise UnsupportedBackendError(f"element order exceeds {cap}")
        return n

    def sort_key(self, a):
        """Key of the fixed canonical element order (the natural order of the encoding)."""
        return a

    def canonical_key(self, a):
        """Canonical order with the identity placed first."""
        return (a != self.identity(), self.sort_key(a))

    def format_element(self, a) -> str:
        return str(a)

    def parse_element(self, text: str):
        raise UnsupportedBackendError(f"{self} has no element text encoding")

    def __eq__(self, other):
        return type(self) is type(other) and self._ident() == other._ident()

    def __hash__(self):
        return hash((type(self).__name__, self._ident()))

    def _ident(self):
        return id(self)


class UnitriangularBackend(GroupBackend):
    """Upper unitriangular ``n x n`` matrices over the integers or ``Z/modulus``."""

    def __init__(self, n: int, modulus: int | None = None):
        if n < 2:
            raise InvalidParameterError("dimension must be at least 2")
        if modulus is not None and modulus < 2:
            raise InvalidParameterError("modulus must be at least 2")
        self.n = n
        self.modulus = modulus
        self.step = n - 1
        self._pos = {}
        for i in range(n):
            for j in range(i + 1, n):
                self._pos[(i, j)] = len(self._pos)
        # entry (i,j) of a product gets a_ij + b_ij + sum_k a_ik b_kj
        self._terms = [
            (p, [(self._pos[(i, k)], self._pos[(k, j)]) for k in range(i + 1, j)])
            for (i, j), p in self._pos.items()
        ]
        self._by_span = sorted(self._pos.items(), key=lambda kv: kv[0][1] - kv[0][0])

    def _ident(self):
        return (self.n, self.modulus)

    def __repr__(self):
        return f"UT({self.n}, {'Z' if self.modulus is None else f'Z/{self.modulus}'})"

    def identity(self):
        return (0,) * len(self._pos)

    def mul(self, a, b):
        out = []
        for p, pairs in self._terms:
            v = a[p] + b[p]
            for u, w in pairs:
                v += a[u] * b[w]
            out.append(v)
        if self.modulus is not None:
            m = self.modulus
            return tuple(v % m for v in out)
        return tuple(out)

    def inv(self, a):
        out = [0] * len(a)
        for (i, j), p in self._by_span:
            v = a[p]
            for k in range(i + 1, j):
                v += a[self._pos[(i, k)]] * out[self._pos[(k, j)]]
            out[p] = -v
        if self.modulus is not None:
            m = self.modulus
            return tuple(v % m for v in out)
        return tuple(out)

    def elementary(self, i: int, j: int, k: int = 1):
        """``I + k E_ij`` with 1-based indices."""
        e = [0] * len(self._pos)
        e[self._pos[(i - 1, j - 1)]] = k
        return self.from_entries(e)

    def from_entries(self, entries: Sequence[int]):
        if self.modulus is not None:
            return tuple(int(v) % self.modulus for v in entries)
        return tuple(int(v) for v in entries)

    def from_matrix(self, rows) -> tuple:
        rows = [list(r) for r in rows]
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise InvalidParameterError(f"expected a {self.n}x{self.n} matrix")
        for i in range(self.n):
            for j in range(self.n):
                want = 1 if i == j else 0
                v = rows[i][j] % self.modulus if self.modulus else rows[i][j]
                if j <= i and v != want:
                    raise InvalidParameterError("matrix is not upper unitriangular")
        return self.from_entries([rows[i][j] for (i, j) in self._pos])

    def matrix(self, a) -> list[list[int]]:
        m = [[1 if i == j else 0 for j in range(self.n)] for i in range(self.n)]
        for (i, j), p in self._pos.items():
            m[i][j] = a[p]
        return m

    def is_finite(self):
        return self.modulus is not None

    def order(self):
        if self.modulus is None:
            return super().order()
        return self.modulus ** len(self._pos)

    def elements(self):
        if self.modulus is None:
            return super().elements()
        return [tuple(t) for t in itertools.product(range(self.modulus), repeat=len(self._pos))]

    def generators(self):
        return [self.elementary(i, i + 1) for i in range(1, self.n)]

    def is_abelian(self):
        return self.n == 2

    def format_element(self, a):
        return " ".join(str(v) for row in self.matrix(a) for v in row)

    def parse_element(self, text):
        vals = [int(t) for t in text.replace(",", " ").split()]
        if len(vals) != self.n * self.n:
            raise InvalidParameterError(f"expected {self.n * self.n} integers, got {len(vals)}")
        return self.from_matrix([vals[i * self.n : (i + 1) * self.n] for i in range(self.n)])


def heisenberg(modulus: int | None = None) -> UnitriangularBackend:
    """The Heisenberg group ``UT(3)`` over the integers or ``Z/modulus``."""
    return UnitriangularBackend(3, modulus)


class CyclicBackend(GroupBackend):
    """``Z/n`` written additively; ``n = 0`` gives the integers."""

    step = 1

    def __init__(self, n: int):
        if n < 0:
            raise InvalidParameterError("cyclic order must be non-negative")
        self.n = n

    def _ident(self):
        return self.n

    def __repr__(self):
        return "Z" if self.n == 0 else f"Z/{self.n}"

    def identity(self):
        return 0

    def mul(self, a, b):
        return (a + b) % self.n if self.n else a + b

    def inv(self, a):
        return (-a) % self.n if self.n else -a

    def pow(self, a, k):
        return (a * k) % self.n if self.n else a * k

    def sort_key(self, a):
        # shortlex on the integers: 0, 1, -1, 2, -2, ...
        return (abs(a), a < 0) if self.n == 0 else a

    def is_finite(self):
        return self.n > 0

    def order(self):
        return self.n if self.n else super().order()

    def elements(self):
        return list(range(self.n)) if self.n else super().elements()

    def generators(self):
        return [1 % self.n] if self.n else [1]

    def is_abelian(self):
        return True

    def parse_element(self, text):
        v = int(text.strip())
        return v % self.n if self.n else v


class ProductBackend(GroupBackend):
    """Direct product; elements are tuples of component elements."""

    def __init__(self, factors: Sequence[GroupBackend]):
        if not factors:
            raise InvalidParameterError("a product needs at least one factor")
        self.factors = tuple(factors)
        steps = [f.step for f in self.factors]
        self.step = None if any(s is None for s in steps) else max(steps)

    def _ident(self):
        return tuple(f._ident() for f in self.factors) + tuple(type(f).__name__ for f in self.factors)

    def __repr__(self):
        return " x ".join(repr(f) for f in self.factors)

    def identity(self):
        return tuple(f.identity() for f in self.factors)

    def mul(self, a, b):
        return tuple(f.mul(u, v) for f, u, v in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(f.inv(u) for f, u in zip(self.factors, a))

    def pow(self, a, k):
        return tuple(f.pow(u, k) for f, u in zip(self.factors, a))

    def sort_key(self, a):
        return tuple(f.sort_key(u) for f, u in zip(self.factors, a))

    def is_finite(self):
        return all(f.is_finite() for f in self.factors)

    def order(self):
        return math.prod(f.order() for f in self.factors)

    def elements(self):
        return [tuple(t) for t in itertools.product(*(f.elements() for f in self.factors))]

    def generators(self):
        out = []
        for k, f in enumerate(self.factors):
            for g in f.generators():
                e = list(self.identity())
                e[k] = g
                out.append(tuple(e))
        return out

    def is_abelian(self):
        vals = [f.is_abelian() for f in self.factors]
        if all(v is True for v in vals):
            return True
        if any(v is False for v in vals):
            return False
        return None

    def format_element(self, a):
        return " ; ".join(f.format_element(u) for f, u in zip(self.factors, a))

    def parse_element(self, text):
        parts = text.split(";")
        if len(parts) != len(self.factors):
            raise InvalidParameterError(f"expected {len(self.factors)} ';'-separated components")
        return tuple(f.parse_element(p) for f, p in zip(self.factors, parts))


class TableGroup(GroupBackend):
    """A finite group given by its multiplication table on ``0..N-1``."""

    def __init__(self, table, check: bool = True):
        t = np.asarray(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise InvalidParameterError("multiplication table must be a non-empty square array")
        N = t.shape[0]
        if t.min() < 0 or t.max() >= N:
            raise InvalidParameterError("table entries must lie in 0..N-1")
        ids = [e for e in range(N) if np.array_equal(t[e], np.arange(N)) and np.array_equal(t[:, e], np.arange(N))]
        if not ids:
            raise InvalidParameterError("table has no two-sided identity")
        self.table = t
        self.N = N
        self.identity_index = ids[0]
        rows_perm = np.all(np.sort(t, axis=1) == np.arange(N), axis=1)
        if not rows_perm.all():
            raise InvalidParameterError("some element has no inverse (a table row is not a permutation)")
        self._inverse = [int(np.nonzero(t[a] == self.identity_index)[0][0]) for a in range(N)]
        self._rows = t.tolist()
        if check and N <= 64:
            lhs = t[t[:, :, None], np.arange(N)[None, None, :]]  # (ab)c
            rhs = t[np.arange(N)[:, None, None], t[None, :, :]]  # a(bc)
            if not np.array_equal(lhs, rhs):
                raise InvalidParameterError("table is not associative")
        ab = t == t.T
        self._abelian = bool(ab.all())
        self.step = 1 if self._abelian else None

    @classmethod
    def from_backend(cls, backend: GroupBackend):
        """Tabulate a finite backend; returns ``(table_group, elements)``."""
        elems = sorted(backend.elements())
        index = {e: i for i, e in enumerate(elems)}
        table = [[index[backend.mul(a, b)] for b in elems] for a in elems]
        tg = cls(table)
        return tg, elems

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            tokens = fh.read().split()
        if not tokens:
            raise InvalidParameterError(f"{path}: empty table file")
        N = int(tokens[0])
        vals = [int(v) for v in tokens[1:]]
        if len(vals) != N * N:
            raise InvalidParameterError(f"{path}: expected {N * N} entries after N, got {len(vals)}")
        return cls(np.array(vals).reshape(N, N))

    def _ident(self):
        return self.table.tobytes()

    def __repr__(self):
        return f"TableGroup(N={self.N})"

    def identity(self):
        return self.identity_index

    def mul(self, a, b):
        return self._rows[a][b]

    def inv(self, a):
        return self._inverse[a]

    def is_finite(self):
        return True

    def order(self):
        return self.N

    def elements(self):
        return list(range(self.N))

    def generators(self):
        return list(range(self.N))

    def is_abelian(self):
        return self._abelian

    def parse_element(self, text):
        v = int(text.strip())
        if not 0 <= v < self.N:
            raise InvalidParameterError(f"table element {v} out of range")
        return v


def symmetric_group(n: int) -> TableGroup:
    """``S_n`` as a table group (elements indexed by sorted permutations)."""
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return TableGroup(table)


class SubgroupBackend(GroupBackend):
    """A finite subgroup of another backend, viewed as a group on its own."""

    def __init__(self, parent: GroupBackend, elements: Iterable, check: bool = True):
        self.parent = parent
        self._elems = frozenset(elements)
        if check:
            from .groups import is_subgroup

            if not is_subgroup(parent, self._elems):
                raise PreconditionError("elements do not form a subgroup")
        self.step = None

    def _ident(self):
        return (self.parent._ident(), self._elems)

    def __repr__(self):
        return f"Subgroup(order {len(self._elems)} of {self.parent!r})"

    def identity(self):
        return self.parent.identity()

    def mul(self, a, b):
        return self.parent.mul(a, b)

    def inv(self, a):
        return self.parent.inv(a)

    def pow(self, a, k):
        return self.parent.pow(a, k)

    def is_finite(self):
        return True

    def order(self):
        return len(self._elems)

    def elements(self):
        return sorted(self._elems)

    def generators(self):
        from .groups import generating_set

        return generating_set(self, self.elements())

    def is_abelian(self):
        es = self.elements()
        return all(self.mul(a, b) == self.mul(b, a) for a in es for b in es)

    def sort_key(self, a):
        return self.parent.sort_key(a)

    def format_element(self, a):
        return self.parent.format_element(a)

    def parse_element(self, text):
        a = self.parent.parse_element(text)
        if a not in self._elems:
            raise InvalidParameterError("element is not in the subgroup")
        return a


class CosetQuotient(GroupBackend):
    """``G/N`` for a finite normal subgroup ``N``; a coset is named by its least element."""

    def __init__(self, parent: GroupBackend, normal: Iterable):
        self.parent = parent
        self.normal = frozenset(normal)
        self._cache = {}

    def _ident(self):
        return (self.parent._ident(), self.normal)

    def __repr__(self):
        return f"{self.parent!r} / N(order {len(self.normal)})"

    def label(self, g):
        lab = self._cache.get(g)
        if lab is None:
            lab = min((self.parent.mul(g, n) for n in self.normal), key=self.parent.canonical_key)
            self._cache[g] = lab
        return lab

    def identity(self):
        return self.label(self.parent.identity())

    def mul(self, a, b):
        return self.label(self.parent.mul(a, b))

    def inv(self, a):
        return self.label(self.parent.inv(a))

    def is_finite(self):
        return self.parent.is_finite()

    def order(self):
        return self.parent.order() // len(self.normal)

    def elements(self):
        return sorted({self.label(g) for g in self.parent.elements()})

    def generators(self):
        return sorted({self.label(g) for g in self.parent.generators()})

    def format_element(self, a):
        return self.parent.format_element(a)

    def parse_element(self, text):
        return self.label(self.parent.parse_element(text))


class Subset:
    """A finite set of elements of a backend.

    Supports product sets (``A * B``), inversion and powers; iteration is in
    the canonical sorted order, so everything derived from a ``Subset`` is
    deterministic.
    """

    __slots__ = ("backend", "elements")

    def __init__(self, backend: GroupBackend, elements: Iterable):
        self.backend = backend
        self.elements = frozenset(elements)

    @property
    def is_symmetric(self) -> bool:
        inv = self.backend.inv
        return all(inv(a) in self.elements for a in self.elements)

    @property
    def has_identity(self) -> bool:
        return self.backend.identity() in self.elements

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.sorted())

    def sorted(self) -> list:
        """Elements in the canonical order of the backend (identity first)."""
        return sorted(self.elements, key=self.backend.canonical_key)

    def canonical_min(self):
        return min(self.elements, key=self.backend.canonical_key)

    def __contains__(self, a):
        return a in self.elements

    def __eq__(self, other):
        if isinstance(other, Subset):
            return self.elements == other.elements
        if isinstance(other, (set, frozenset)):
            return self.elements == other
        return NotImplemented

    def __hash__(self):
        return hash(self.elements)

    def __le__(self, other):
        return self.elements <= _elems(other)

    def __ge__(self, other):
        return self.elements >= _elems(other)

    def __or__(self, other):
        return Subset(self.backend, self.elements | _elems(other))

    def __and__(self, other):
        return Subset(self.backend, self.elements & _elems(other))

    def __mul__(self, other) -> "Subset":
        mul = self.backend.mul
        B = _elems(other)
        return Subset(self.backend, {mul(a, b) for a in self.elements for b in B})

    def inverse(self) -> "Subset":
        inv = self.backend.inv
        return Subset(self.backend, {inv(a) for a in self.elements})

    def translate(self, g, left: bool = True) -> "Subset":
        mul = self.backend.mul
        if left:
            return Subset(self.backend, {mul(g, a) for a in self.elements})
        return Subset(self.backend, {mul(a, g) for a in self.elements})

    def power(self, n: int, cap: int | None = None) -> "Subset":
        from .progressions import power_set

        return power_set(self, n, cap=cap)

    def __repr__(self):
        shown = ", ".join(self.backend.format_element(a) for a in self.sorted()[:6])
        more = ", ..." if len(self.elements) > 6 else ""
        return f"Subset({len(self.elements)} in {self.backend!r}: {{{shown}{more}}})"


def _elems(x):
    if isinstance(x, Subset):
        return x.elements
    return frozenset(x)


class GroupHomomorphism:
    """A homomorphism given by a Python function on canonical elements."""

    def __init__(self, source: GroupBackend, target: GroupBackend, func: Callable, check: bool = True):
        self.source = source
        self.target = target
        self.func = func
        if check and source.is_finite():
            from .groups import generating_set

            elems = source.elements()
            gens = generating_set(source, elems)
            for a in elems:
                for g in gens:
                    if func(source.mul(a, g)) != target.mul(func(a), func(g)):
                        raise PreconditionError("map is not multiplicative")

    def __call__(self, g):
        return self.func(g)

    def image(self, A: Iterable) -> Subset:
        return Subset(self.target, {self.func(a) for a in _elems(A)})

    def kernel(self) -> frozenset:
        if not self.source.is_finite():
            raise UnsupportedBackendError("kernel enumeration needs a finite source")
        e = self.target.identity()
        return frozenset(g for g in self.source.elements() if self.func(g) == e)

    def preimage(self, A: Iterable) -> Subset:
        if not self.source.is_finite():
            raise UnsupportedBackendError("preimage enumeration needs a finite source")
        want = _elems(A)
        return Subset(self.source, {g for g in self.source.elements() if self.func(g) in want})


class NormalSubgroup:
    """A normal subgroup ``N`` of ``G`` together with the projection ``G -> G/N``.

    Build it from the element set of a finite normal subgroup, or as the
    kernel of a homomorphism onto an explicit quotient (which also covers
    infinite groups such as ``2Z`` inside ``Z``).
    """

    def __init__(self, backend: GroupBackend, quotient: GroupBackend, project: Callable, elements=None):
        self.backend = backend
        self.quotient = quotient
        self.project = project
        self.elements = frozenset(elements) if elements is not None else None

    @classmethod
    def from_elements(cls, backend: GroupBackend, elements: Iterable) -> "NormalSubgroup":
        from .groups import is_normal, is_subgroup

        N = frozenset(elements)
        if not is_subgroup(backend, N):
            raise PreconditionError("elements do not form a subgroup")
        if not is_normal(backend, N):
            raise PreconditionError("subgroup is not normal")
        Q = CosetQuotient(backend, N)
        return cls(backend, Q, Q.label, N)

    @classmethod
    def kernel_of(cls, hom: GroupHomomorphism) -> "NormalSubgroup":
        elems = hom.kernel() if hom.source.is_finite() else None
        return cls(hom.source, hom.target, hom.func, elems)

    def contains(self, g) -> bool:
        return self.project(g) == self.quotient.identity()

    def __contains__(self, g):
        return self.contains(g)

    def index(self) -> int:
        return self.quotient.order()
