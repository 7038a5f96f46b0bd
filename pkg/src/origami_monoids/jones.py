"""Planar diagrams for the Jones monoid J_n.

Endpoints are numbered ``0..2n-1`` around the boundary: top points
``T1..Tn`` are ``0..n-1`` left to right, then bottom points ``Bn..B1`` are
``n..2n-1``.  A diagram is the fixed-point-free involution ``match`` on these
numbers; with this numbering a matching is non-crossing exactly when it is a
balanced bracket sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple, Sequence

from .words import Generator, Kind, Word, WordError, h


class DiagramError(ValueError):
    pass


def _top(n: int, j: int) -> int:
    return j - 1


def _bottom(n: int, j: int) -> int:
    return 2 * n - j


def endpoint_label(n: int, p: int) -> str:
    return f"T{p + 1}" if p < n else f"B{2 * n - p}"


def is_noncrossing_matching(match: Sequence[int]) -> bool:
    size = len(match)
    if any(not (0 <= match[i] < size) or match[i] == i or match[match[i]] != i for i in range(size)):
        return False
    stack = []
    for i in range(size):
        if i < match[i]:
            stack.append(match[i])
        elif not stack or stack.pop() != i:
            return False
    return True


@dataclass(frozen=True)
class JonesDiagram:
    rank: int
    match: tuple

    def __post_init__(self) -> None:
        if len(self.match) != 2 * self.rank or not is_noncrossing_matching(self.match):
            raise DiagramError(f"not a planar perfect matching on 2*{self.rank} points: {self.match}")

    def pairs(self) -> list[tuple[int, int]]:
        return [(p, q) for p, q in enumerate(self.match) if p < q]

    def __str__(self) -> str:
        n = self.rank

        def key(p: int) -> tuple[int, int]:
            # T before B, then by index
            return (0, p + 1) if p < n else (1, 2 * n - p)

        pairs = sorted(tuple(sorted(pq, key=key)) for pq in self.pairs())
        pairs.sort(key=lambda pq: key(pq[0]))
        body = ",".join(f"({endpoint_label(n, p)},{endpoint_label(n, q)})" for p, q in pairs)
        return f"[{body}]"


class Product(NamedTuple):
    diagram: JonesDiagram
    loops: int


def identity_diagram(n: int) -> JonesDiagram:
    if n < 1:
        raise DiagramError("rank must be positive")
    match = [0] * (2 * n)
    for j in range(1, n + 1):
        t, b = _top(n, j), _bottom(n, j)
        match[t], match[b] = b, t
    return JonesDiagram(n, tuple(match))


def generator_diagram(i: int, n: int) -> JonesDiagram:
    if not 1 <= i <= n - 1:
        raise DiagramError(f"generator index {i} out of range for rank {n}")
    match = list(identity_diagram(n).match)
    for row in (_top, _bottom):
        p, q = row(n, i), row(n, i + 1)
        match[p], match[q] = q, p
    return JonesDiagram(n, tuple(match))


def diagram_mul(x: JonesDiagram, y: JonesDiagram) -> Product:
    """Stack ``x`` on top of ``y`` and trace strands through the middle row."""
    n = x.rank
    if y.rank != n:
        raise DiagramError(f"rank mismatch: {n} vs {y.rank}")
    mx, my = x.match, y.match
    # outer points: x's top (0..n-1) and y's bottom (n..2n-1); the middle
    # row is x's bottom == y's top, indexed by column j.
    out = [-1] * (2 * n)
    seen_mid = [False] * (n + 1)

    def col_of_bottom(p: int) -> int:
        return 2 * n - p

    def trace(start_in_x: bool, p: int) -> int:
        in_x = start_in_x
        while True:
            q = (mx if in_x else my)[p]
            if in_x and q < n:
                return q
            if not in_x and q >= n:
                return q
            # q sits on the middle row
            j = col_of_bottom(q) if in_x else q + 1
            seen_mid[j] = True
            if in_x:
                p, in_x = _top(n, j), False
            else:
                p, in_x = _bottom(n, j), True

    for p in range(n):
        if out[p] == -1:
            q = trace(True, p)
            out[p], out[q] = q, p
    for p in range(n, 2 * n):
        if out[p] == -1:
            q = trace(False, p)
            out[p], out[q] = q, p

    loops = 0
    for j in range(1, n + 1):
        if seen_mid[j]:
            continue
        loops += 1
        # walk the closed cycle through the middle row
        k = j
        while not seen_mid[k]:
            seen_mid[k] = True
            q = mx[_bottom(n, k)]
            k2 = 2 * n - q
            seen_mid[k2] = True
            q = my[_top(n, k2)]
            k = q + 1
    return Product(JonesDiagram(n, tuple(out)), loops)


def diagram_of_word(w: Sequence[Generator], n: int) -> JonesDiagram:
    d = identity_diagram(n)
    for g in w:
        if g.kind != Kind.H:
            raise WordError(f"expected a Jones word, got letter {g}")
        d = diagram_mul(d, generator_diagram(g.index, n)).diagram
    return d


def cap_count(d: JonesDiagram) -> int:
    n = d.rank
    return sum(1 for p, q in d.pairs() if p < n and q < n)


def all_diagrams(n: int) -> Iterator[JonesDiagram]:
    """Every planar perfect matching on 2n boundary points."""

    def fill(points: list[int]) -> Iterator[list[tuple[int, int]]]:
        if not points:
            yield []
            return
        first = points[0]
        # partner must leave an even number of points on each side
        for k in range(1, len(points), 2):
            inside, outside = points[1:k], points[k + 1:]
            for a_ in fill(inside):
                for b_ in fill(outside):
                    yield [(first, points[k]), *a_, *b_]

    for pairs in fill(list(range(2 * n))):
        match = [0] * (2 * n)
        for p, q in pairs:
            match[p], match[q] = q, p
        yield JonesDiagram(n, tuple(match))


def catalan(n: int) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    return math.comb(2 * n, n) // (n + 1)


# ---------------------------------------------------------------------------
# Jones normal form

@dataclass(frozen=True, order=True)
class JnfWord:
    """Blocks ``(j, i)`` spelling ``h_j h_{j-1} ... h_i``, tops and bottoms
    strictly increasing."""

    blocks: tuple = ()

    def __post_init__(self) -> None:
        for j, i in self.blocks:
            if j < i:
                raise ValueError(f"block ({j},{i}) has top below bottom")
        for (j1, i1), (j2, i2) in zip(self.blocks, self.blocks[1:]):
            if not (j1 < j2 and i1 < i2):
                raise ValueError(f"blocks not increasing: {self.blocks}")

    @property
    def tops(self) -> tuple:
        return tuple(j for j, _ in self.blocks)

    @property
    def bottoms(self) -> tuple:
        return tuple(i for _, i in self.blocks)

    def indices(self) -> tuple:
        return tuple(k for j, i in self.blocks for k in range(j, i - 1, -1))

    def word(self, kind: Kind = Kind.H) -> Word:
        return tuple(Generator(kind, k) for k in self.indices())

    def __len__(self) -> int:
        return sum(j - i + 1 for j, i in self.blocks)


@lru_cache(maxsize=None)
def enumerate_jnf(n: int) -> tuple:
    """All Jones normal forms for rank n, shortlex-sorted by spelled word."""
    if n < 2:
        raise ValueError("rank must be at least 2")
    out = []

    def extend(blocks: list, min_top: int, min_bottom: int) -> None:
        out.append(JnfWord(tuple(blocks)))
        for j in range(min_top, n):
            for i in range(min_bottom, j + 1):
                blocks.append((j, i))
                extend(blocks, j + 1, i + 1)
                blocks.pop()

    extend([], 1, 1)
    out.sort(key=lambda f: (len(f), f.indices()))
    return tuple(out)


@lru_cache(maxsize=None)
def jnf_by_diagram(n: int) -> dict:
    """Map each J_n diagram to its Jones normal form."""
    table = {}
    for f in enumerate_jnf(n):
        d = diagram_of_word(f.word(), n)
        if d in table:
            raise AssertionError(f"normal forms {table[d]} and {f} share a diagram")
        table[d] = f
    return table


def jnf_of_word(w: Sequence[Generator], n: int) -> JnfWord:
    """Jones normal form of any word; letters are read by index only."""
    return jnf_by_diagram(n)[diagram_of_word(tuple(h(g.index) for g in w), n)]
