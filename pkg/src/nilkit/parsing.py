"""Text formats: the word grammar, group spec strings and set files.

Word grammar::

    commutator := letter | "[" commutator "," commutator "]"
    letter     := "x" integer
    occurrence := commutator ["^-1"]
    word       := occurrence { whitespace occurrence }

Group specs: ``ut:N``, ``ut:N:mod=M``, ``cyclic:N`` (``cyclic:0`` is the
integers), ``product:<spec>,<spec>,...`` (parenthesise nested products) and
``table:<file>``.
"""
from __future__ import annotations

import re
from pathlib import Path

from .backends import CyclicBackend, GroupBackend, ProductBackend, TableGroup, UnitriangularBackend
from .collection import Word
from .commutators import Commutator
from .errors import InvalidParameterError, WordSyntaxError

__all__ = [
    "parse_commutator",
    "parse_occurrences",
    "parse_word",
    "render_word",
    "parse_group",
    "parse_set_lines",
    "read_set_file",
    "parse_generator_words",
    "parse_lengths",
]


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def pos(self, i=None):
        i = self.i if i is None else i
        before = self.text[:i]
        line = before.count("\n") + 1
        col = i - (before.rfind("\n") + 1) + 1
        return line, col

    def error(self, msg, i=None):
        line, col = self.pos(i)
        return WordSyntaxError(msg, line, col)

    def skip_ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self):
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch, opened=None):
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            hint = ""
            if opened is not None and not self.peek():
                hint = f" (bracket opened at column {self.pos(opened)[1]} is not closed)"
            raise self.error(f"expected {ch!r}, found {found}{hint}")
        self.i += 1

    def commutator(self) -> Commutator:
        self.skip_ws()
        ch = self.peek()
        if ch == "x":
            start = self.i
            self.i += 1
            m = re.match(r"\d+", self.text[self.i :])
            if not m:
                raise self.error("expected a letter index after 'x'")
            self.i += m.end()
            n = int(m.group())
            if n < 1:
                raise self.error("letter indices start at 1", start + 1)
            return Commutator(n)
        if ch == "[":
            opened = self.i
            self.i += 1
            left = self.commutator()
            self.skip_ws()
            self.expect(",", opened)
            right = self.commutator()
            self.skip_ws()
            self.expect("]", opened)
            return Commutator(left=left, right=right)
        if not ch:
            raise self.error("unexpected end of input")
        if ch == "]":
            raise self.error("unmatched ']'")
        raise self.error(f"unexpected character {ch!r}")


def parse_commutator(text: str) -> Commutator:
    sc = _Scanner(text)
    c = sc.commutator()
    sc.skip_ws()
    if sc.peek():
        raise sc.error(f"trailing input {sc.peek()!r}")
    return c


def parse_occurrences(text: str) -> list[tuple[Commutator, int]]:
    if not text.strip():
        raise WordSyntaxError("empty word", 1, 1)
    sc = _Scanner(text)
    out = []
    while True:
        sc.skip_ws()
        if not sc.peek():
            break
        c = sc.commutator()
        sign = 1
        if sc.peek() == "^":
            if sc.text.startswith("^-1", sc.i) and not sc.text[sc.i + 3 : sc.i + 4].isdigit():
                sc.i += 3
                sign = -1
            else:
                raise sc.error("only the exponent ^-1 is allowed")
        if sc.peek() and not sc.peek().isspace():
            raise sc.error("occurrences must be separated by whitespace")
        out.append((c, sign))
    return out


def parse_word(text: str, rank: int | None = None, step: int | None = None) -> Word:
    """Parse a word; ``rank`` and ``step`` default to the largest letter and weight present."""
    occ = parse_occurrences(text)
    if rank is None:
        rank = max(c.max_letter for c, _ in occ)
    if step is None:
        step = max(c.weight for c, _ in occ)
    return Word(occ, rank, step)


def render_word(w) -> str:
    return str(w)


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise InvalidParameterError(f"unbalanced ')' in group spec {text!r}")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise InvalidParameterError(f"unbalanced '(' in group spec {text!r}")
    parts.append("".join(cur))
    return parts


def _int(text, what):
    try:
        return int(text)
    except ValueError:
        raise InvalidParameterError(f"{what} must be an integer, got {text!r}") from None


def parse_group(spec: str, base_dir: str | Path | None = None) -> GroupBackend:
    spec = spec.strip()
    if spec.startswith("(") and spec.endswith(")"):
        return parse_group(spec[1:-1], base_dir)
    kind, _, rest = spec.partition(":")
    if kind == "ut":
        fields = rest.split(":")
        n = _int(fields[0], "ut dimension")
        mod = None
        for f in fields[1:]:
            key, _, val = f.partition("=")
            if key != "mod":
                raise InvalidParameterError(f"unknown ut option {key!r}")
            mod = _int(val, "modulus")
        return UnitriangularBackend(n, mod)
    if kind == "cyclic":
        return CyclicBackend(_int(rest, "cyclic order"))
    if kind == "product":
        parts = [p for p in _split_top(rest) if p.strip()]
        if not parts:
            raise InvalidParameterError("product needs at least one factor")
        return ProductBackend([parse_group(p, base_dir) for p in parts])
    if kind == "table":
        path = Path(rest)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return TableGroup.from_file(path)
    raise InvalidParameterError(f"unknown group spec {spec!r}")


def parse_set_lines(backend: GroupBackend, lines) -> frozenset:
    out = set()
    for n, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.add(backend.parse_element(line))
        except (ValueError, InvalidParameterError) as exc:
            raise InvalidParameterError(f"line {n}: {exc}") from None
    return frozenset(out)


def read_set_file(backend: GroupBackend, path) -> frozenset:
    with open(path) as fh:
        return parse_set_lines(backend, fh)


def parse_generator_words(backend: GroupBackend, text: str) -> list:
    """``"w1;w2;..."`` with each ``wi`` a word over the backend's standard generators."""
    from .groups import evaluate_word

    gens = backend.generators()
    out = []
    for piece in text.split(";"):
        if not piece.strip():
            raise InvalidParameterError(f"empty generator word in {text!r}")
        occ = parse_occurrences(piece)
        for c, _ in occ:
            if c.max_letter > len(gens):
                raise InvalidParameterError(f"{c} uses x{c.max_letter} but {backend!r} has {len(gens)} generators")
        out.append(evaluate_word(backend, gens, occ))
    return out


def parse_lengths(text: str) -> list[int]:
    return [_int(t.strip(), "side length") for t in text.split(",")]
