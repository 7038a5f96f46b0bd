"""Generators, words and the two families of monoid presentations.

A word is a plain tuple of :class:`Generator` values.  Generators are
ordered ``alpha_1 < ... < alpha_{n-1} < beta_1 < ... < beta_{n-1}`` (and
``h_1 < ... < h_{n-1}`` for Jones words), so the shortlex order on words is
just ``(len(w), w)`` on the tuples themselves.

The engines in :mod:`.rewrite` and :mod:`.congruence` work on integer codes;
:meth:`Presentation.encode` and :meth:`Presentation.decode` translate.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence


class Kind(enum.IntEnum):
    ALPHA = 0
    BETA = 1
    H = 2


_PREFIX = {Kind.ALPHA: "a", Kind.BETA: "b", Kind.H: "h"}
_KIND_OF_PREFIX = {v: k for k, v in _PREFIX.items()}


class Generator(NamedTuple):
    kind: Kind
    index: int

    def __str__(self) -> str:
        return f"{_PREFIX[self.kind]}{self.index}"

    __repr__ = __str__


Word = tuple  # tuple[Generator, ...]


def a(i: int) -> Generator:
    return Generator(Kind.ALPHA, i)


def b(i: int) -> Generator:
    return Generator(Kind.BETA, i)


def h(i: int) -> Generator:
    return Generator(Kind.H, i)


class WordError(ValueError):
    """Raised for malformed words: bad tokens, wrong kinds, bad indices."""


class RankError(ValueError):
    """Raised when a rank is too small for the requested construction."""


# ---------------------------------------------------------------------------
# text form

_TOKEN = re.compile(r"^([abh])(\d+)$")


def parse_word(text: str) -> Word:
    """Parse ``"a1 b2 a1"`` (or ``"1"`` for the empty word)."""
    tokens = text.split()
    if tokens == ["1"]:
        return ()
    out = []
    for tok in tokens:
        m = _TOKEN.match(tok)
        if m is None:
            raise WordError(f"bad generator token {tok!r}")
        out.append(Generator(_KIND_OF_PREFIX[m.group(1)], int(m.group(2))))
    return tuple(out)


def format_word(w: Sequence[Generator]) -> str:
    if not w:
        return "1"
    return " ".join(str(g) for g in w)


def pretty_word(w: Sequence[Generator]) -> str:
    """Compact label such as ``a1a3b1``; ``e`` for the identity."""
    if not w:
        return "e"
    return "".join(str(g) for g in w)


# ---------------------------------------------------------------------------
# word operations

def bar(w: Sequence[Generator]) -> Word:
    """Swap alpha_i <-> beta_i letterwise."""
    out = []
    for g in w:
        if g.kind == Kind.H:
            raise WordError(f"bar is undefined on Jones generator {g}")
        out.append(Generator(Kind.BETA if g.kind == Kind.ALPHA else Kind.ALPHA, g.index))
    return tuple(out)


def reverse(w: Sequence[Generator]) -> Word:
    return tuple(reversed(w))


def shortlex_key(w: Sequence[Generator]) -> tuple:
    return (len(w), tuple(w))


def shortlex_compare(u: Sequence[Generator], v: Sequence[Generator]) -> int:
    """Return -1, 0 or 1 as ``u`` is shortlex-less, equal or greater than ``v``."""
    ku, kv = shortlex_key(u), shortlex_key(v)
    return (ku > kv) - (ku < kv)


def jones_to_kind(w: Sequence[Generator], kind: Kind) -> Word:
    """Relabel the letters of ``w`` (any kind) to ``kind`` keeping indices."""
    return tuple(Generator(kind, g.index) for g in w)


# ---------------------------------------------------------------------------
# presentations

@dataclass(frozen=True)
class Presentation:
    """A finite monoid presentation.

    ``relations`` holds unordered pairs, each stored with the shortlex-larger
    side first, deduplicated and sorted so that equal presentations compare
    equal.
    """

    rank: int
    kinds: frozenset
    relations: tuple
    family: str = "custom"
    alphabet: tuple = field(init=False, repr=False, compare=False)
    _codes: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.rank < 2:
            raise RankError(f"rank must be at least 2, got {self.rank}")
        alphabet = tuple(
            Generator(k, i) for k in sorted(self.kinds) for i in range(1, self.rank)
        )
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "_codes", {g: c for c, g in enumerate(alphabet)})
        seen = set()
        for u, v in self.relations:
            for g in (*u, *v):
                self._check(g)
            seen.add(_orient(tuple(u), tuple(v)))
        rels = tuple(sorted(seen, key=lambda p: (shortlex_key(p[0]), shortlex_key(p[1]))))
        object.__setattr__(self, "relations", rels)

    def _check(self, g: Generator) -> None:
        if g not in self._codes:
            raise WordError(f"generator {g} not valid for this presentation (rank {self.rank})")

    @property
    def num_generators(self) -> int:
        return len(self.alphabet)

    def code(self, g: Generator) -> int:
        self._check(g)
        return self._codes[g]

    def encode(self, w: Iterable[Generator]) -> tuple[int, ...]:
        return tuple(self.code(g) for g in w)

    def decode(self, codes: Iterable[int]) -> Word:
        alphabet = self.alphabet
        return tuple(alphabet[c] for c in codes)

    def encoded_relations(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        return [(self.encode(u), self.encode(v)) for u, v in self.relations]

    def to_text(self, arrow: str = "=") -> str:
        return "".join(
            f"{format_word(u)} {arrow} {format_word(v)}\n" for u, v in self.relations
        )

    @classmethod
    def from_text(cls, text: str, rank: int | None = None, family: str = "custom") -> "Presentation":
        """Parse one ``lhs = rhs`` relation per line; blank lines and ``#`` comments skipped.

        The rank is inferred from the largest index when not given.
        """
        pairs = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            sep = "->" if "->" in line else "="
            lhs, _, rhs = line.partition(sep)
            if not _:
                raise WordError(f"relation line without '=': {raw!r}")
            pairs.append((parse_word(lhs), parse_word(rhs)))
        letters = [g for p in pairs for side in p for g in side]
        kinds = frozenset(g.kind for g in letters) or frozenset({Kind.H})
        if rank is None:
            rank = max((g.index for g in letters), default=1) + 1
        return cls(rank, kinds, tuple(pairs), family)


def _orient(u: Word, v: Word) -> tuple[Word, Word]:
    return (u, v) if shortlex_key(u) >= shortlex_key(v) else (v, u)


def build_jones_presentation(n: int) -> Presentation:
    if n < 2:
        raise RankError(f"rank must be at least 2, got {n}")
    rels = []
    idx = range(1, n)
    for i in idx:
        rels.append(((h(i), h(i)), (h(i),)))
        for j in idx:
            if abs(i - j) == 1:
                rels.append(((h(i), h(j), h(i)), (h(i),)))
            elif abs(i - j) >= 2:
                rels.append(((h(i), h(j)), (h(j), h(i))))
    return Presentation(n, frozenset({Kind.H}), tuple(rels), "jones")


def origami_rule_instances(n: int, include_redundant: bool = True) -> dict[str, list[tuple[Word, Word]]]:
    """All instances of each defining rule of the origami monoid, keyed by rule name."""
    if n < 2:
        raise RankError(f"rank must be at least 2, got {n}")
    idx = range(1, n)
    rules: dict[str, list] = {
        name: [] for name in ("1", "2", "3", "4", "5", "1a", "2a", "3a", "2b", "3b")
    }
    for mk in (a, b):
        def gb(i, mk=mk):
            return bar((mk(i),))[0]

        for i in idx:
            g, gbar = mk(i), gb(i)
            rules["1"].append(((g, g), (g,)))
            rules["1a"].append(((g, gbar, g, gbar), (g, gbar)))
            for j, up in ((i + 1, "2"), (i - 1, "3")):
                if j not in idx:
                    continue
                rules[up].append(((g, mk(j), g), (g,)))
                rules[up + "a"].append(((g, gbar, mk(j), gb(j), g, gbar), (g, gbar)))
                if include_redundant:
                    rules[up + "b"].append((
                        (g, gbar, g, mk(j), gb(j), mk(j), g, gbar, g),
                        (g, gbar, g),
                    ))
            for j in idx:
                if j != i:
                    rules["4"].append(((g, gb(j)), (gb(j), g)))
                if abs(i - j) >= 2:
                    rules["5"].append(((g, mk(j)), (mk(j), g)))
    return rules


def build_origami_presentation(n: int, include_redundant: bool = True) -> Presentation:
    rules = origami_rule_instances(n, include_redundant)
    pairs = tuple(p for insts in rules.values() for p in insts)
    return Presentation(n, frozenset({Kind.ALPHA, Kind.BETA}), pairs, "origami")
