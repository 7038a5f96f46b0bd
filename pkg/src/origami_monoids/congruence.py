"""Enumeration of finitely presented finite monoids.

:func:`tc_enumerate` runs a two-sided Todd-Coxeter enumeration (see
:mod:`._tc_kernel`) and returns a :class:`MonoidTable`: dense element ids in
shortlex order of their least representative word, with id 0 the identity,
and the right and left Cayley tables.  :func:`table_from_rewriting` builds
the same table from a complete rewriting system instead.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _tc_kernel
from .words import Generator, Presentation, Word, format_word, parse_word

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
DEFAULT_ELEMENT_CAP = 2_000_000


class MemoryBudgetExceeded(RuntimeError):
    pass


@dataclass(eq=False)
class MonoidTable:
    """An enumerated monoid.

    ``tree_parent[e]`` / ``tree_gen[e]`` give the shortlex-least word of
    ``e`` as ``rep(tree_parent[e]) + (tree_gen[e],)``; everything word-shaped
    is derived from that tree.
    """

    presentation: Presentation
    right: np.ndarray
    tree_parent: np.ndarray
    tree_gen: np.ndarray
    stats: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.right.shape[0]

    @property
    def rank(self) -> int:
        return self.presentation.rank

    @property
    def family(self) -> str:
        return self.presentation.family

    @property
    def num_generators(self) -> int:
        return self.right.shape[1]

    @cached_property
    def left(self) -> np.ndarray:
        """``left[e, g]`` is the element of ``g . rep(e)``."""
        right, parent, gen = self.right, self.tree_parent, self.tree_gen
        left = np.empty_like(right)
        left[0] = right[0]
        # parents precede children in shortlex order
        for e in range(1, self.size):
            left[e] = right[left[parent[e]], gen[e]]
        return left

    @cached_property
    def rep_lengths(self) -> np.ndarray:
        lengths = np.zeros(self.size, dtype=np.int64)
        for e in range(1, self.size):
            lengths[e] = lengths[self.tree_parent[e]] + 1
        return lengths

    @cached_property
    def rep_codes(self) -> np.ndarray:
        """Padded ``size x maxlen`` array of representative letters (-1 pad)."""
        lengths = self.rep_lengths
        width = int(lengths.max()) if self.size else 0
        codes = np.full((self.size, max(width, 1)), -1, dtype=np.int64)
        for e in range(1, self.size):
            p = self.tree_parent[e]
            k = lengths[p]
            codes[e, :k] = codes[p, :k]
            codes[e, k] = self.tree_gen[e]
        return codes

    def rep_code_tuple(self, e: int) -> tuple:
        return tuple(int(c) for c in self.rep_codes[e, : self.rep_lengths[e]])

    @cached_property
    def reps(self) -> list:
        decode = self.presentation.decode
        return [decode(self.rep_code_tuple(e)) for e in range(self.size)]

    def rep(self, e: int) -> Word:
        return self.reps[e]

    def element_of_codes(self, codes: Sequence[int], start: int = 0) -> int:
        e = start
        right = self.right
        for c in codes:
            e = right[e, c]
        return int(e)

    def element_of(self, w: Sequence[Generator]) -> int:
        return self.element_of_codes(self.presentation.encode(w))

    def product(self, x: int, y: int) -> int:
        return self.element_of_codes(self.rep_code_tuple(y), start=x)

    def fold(self, start: np.ndarray, codes: np.ndarray, lengths: np.ndarray | None = None) -> np.ndarray:
        """Vectorised right action: row k of ``codes`` applied to ``start[k]``.

        ``codes`` is padded with -1; ``lengths`` is optional.
        """
        cur = np.array(start, dtype=np.int64, copy=True)
        right = self.right
        for col in range(codes.shape[1]):
            letters = codes[:, col]
            mask = letters >= 0
            if not mask.any():
                break
            cur[mask] = right[cur[mask], letters[mask]]
        return cur

    def products(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Elementwise products ``xs[k] * ys[k]``."""
        return self.fold(np.asarray(xs), self.rep_codes[np.asarray(ys)])

    # -- serialisation ---------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "n": self.rank,
            "size": self.size,
            "reps": [format_word(w) for w in self.reps],
            "right_cayley": self.right.tolist(),
            "left_cayley": self.left.tolist(),
        }

    @classmethod
    def from_json_dict(cls, data: dict, presentation: Presentation) -> "MonoidTable":
        right = np.asarray(data["right_cayley"], dtype=np.int32)
        parent, gen = _tree_from_reps(presentation, [parse_word(s) for s in data["reps"]], right)
        table = cls(presentation, right, parent, gen)
        left = np.asarray(data["left_cayley"], dtype=np.int32)
        if not np.array_equal(left, table.left):
            raise ValueError("left Cayley table inconsistent with right table")
        return table

    def save_npz(self, path: Path) -> None:
        np.savez_compressed(
            path,
            version=np.int64(FORMAT_VERSION),
            relations=np.array(self.presentation.to_text()),
            right=self.right,
            tree_parent=self.tree_parent,
            tree_gen=self.tree_gen,
        )

    @classmethod
    def load_npz(cls, path: Path, presentation: Presentation) -> "MonoidTable":
        with np.load(path) as data:
            if int(data["version"]) != FORMAT_VERSION:
                raise CacheVersionError(f"{path}: format version {int(data['version'])}, expected {FORMAT_VERSION}")
            if str(data["relations"]) != presentation.to_text():
                raise CacheVersionError(f"{path}: cached table belongs to a different presentation")
            return cls(presentation, data["right"], data["tree_parent"], data["tree_gen"])


class CacheVersionError(RuntimeError):
    pass


def _tree_from_reps(presentation: Presentation, reps: list, right: np.ndarray):
    index = {presentation.encode(w): e for e, w in enumerate(reps)}
    parent = np.full(len(reps), -1, dtype=np.int64)
    gen = np.full(len(reps), -1, dtype=np.int64)
    for e, w in enumerate(reps):
        if e == 0:
            if w:
                raise ValueError("element 0 must be the identity")
            continue
        codes = presentation.encode(w)
        parent[e] = index[codes[:-1]]
        gen[e] = codes[-1]
        if right[parent[e], gen[e]] != e:
            raise ValueError(f"representative of {e} does not evaluate to it")
    return parent, gen


def _relation_arrays(presentation: Presentation):
    rels = presentation.encoded_relations()
    width = max([1] + [len(s) for pair in rels for s in pair])
    lhs = np.zeros((len(rels), width), dtype=np.int64)
    rhs = np.zeros((len(rels), width), dtype=np.int64)
    lhs_len = np.zeros(len(rels), dtype=np.int64)
    rhs_len = np.zeros(len(rels), dtype=np.int64)
    for k, (u, v) in enumerate(rels):
        lhs[k, : len(u)] = u
        rhs[k, : len(v)] = v
        lhs_len[k], rhs_len[k] = len(u), len(v)
    return lhs, lhs_len, rhs, rhs_len


def tc_enumerate(presentation: Presentation, max_elements: int = DEFAULT_ELEMENT_CAP) -> MonoidTable:
    """Enumerate the monoid presented by ``presentation``.

    ``max_elements`` caps the number of simultaneously live classes during
    the run; exceeding it raises :class:`MemoryBudgetExceeded`.
    """
    lhs, lhs_len, rhs, rhs_len = _relation_arrays(presentation)
    start = time.perf_counter()
    table, n, status, peak = _tc_kernel.hlt_enumerate(
        lhs, lhs_len, rhs, rhs_len, presentation.num_generators, max_elements, 1024
    )
    if status == _tc_kernel.STATUS_BUDGET:
        raise MemoryBudgetExceeded(
            f"{presentation.family} n={presentation.rank}: more than {max_elements} live classes"
        )
    right, parent, gen = _tc_kernel.standardize(table, n)
    elapsed = time.perf_counter() - start
    log.info("tc %s n=%d: %d elements (peak %d) in %.2fs", presentation.family, presentation.rank, len(right), peak, elapsed)
    return MonoidTable(presentation, right, parent, gen, {"engine": "tc", "peak_classes": int(peak)})


def table_from_rewriting(system) -> MonoidTable:
    """Build the table from a complete rewriting system: irreducible words are
    the shortlex-least representatives, and ``right[e, g]`` normalizes
    ``rep(e) g``."""
    from .rewrite import irreducible_words

    words = irreducible_words(system)
    index = {w: e for e, w in enumerate(words)}
    ngen = system.presentation.num_generators
    right = np.empty((len(words), ngen), dtype=np.int32)
    parent = np.full(len(words), -1, dtype=np.int64)
    gen = np.full(len(words), -1, dtype=np.int64)
    for e, w in enumerate(words):
        if w:
            parent[e] = index[w[:-1]]
            gen[e] = w[-1]
        for g in range(ngen):
            right[e, g] = index[system.normalize_codes(w + (g,))]
    return MonoidTable(system.presentation, right, parent, gen, {"engine": "kb", "rules": len(system.rules)})


def element_of(m: MonoidTable, w: Sequence[Generator]) -> int:
    return m.element_of(w)


def product(m: MonoidTable, x: int, y: int) -> int:
    return m.product(x, y)


def tables_agree(a: MonoidTable, b: MonoidTable) -> bool:
    """Same size, same representatives, same Cayley tables."""
    return (
        a.size == b.size
        and np.array_equal(a.right, b.right)
        and np.array_equal(a.tree_parent, b.tree_parent)
        and np.array_equal(a.tree_gen, b.tree_gen)
    )


def cache_path(cache_dir: Path, family: str, n: int, include_redundant: bool) -> Path:
    variant = "full" if include_redundant else "reduced"
    return Path(cache_dir) / f"{family}-n{n}-{variant}-v{FORMAT_VERSION}.npz"


def write_json(m: MonoidTable, path: Path) -> None:
    Path(path).write_text(json.dumps(m.to_json_dict(), separators=(",", ":")) + "\n")
