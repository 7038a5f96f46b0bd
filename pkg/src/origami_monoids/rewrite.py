"""Shortlex Knuth-Bendix completion and normalization.

Rules are kept strictly shortlex-decreasing, so rewriting always terminates.
Left-hand sides are indexed in a trie over their *reversed* letters: words
are normalized left to right on a stack, and after each push the trie is
walked backwards from the top of the stack to find an lhs ending there.

Completion can fail to finish within budget.  Callers then get a system with
``complete=False`` and must use :func:`origami_monoids.congruence.tc_enumerate`
for equality instead.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .words import Generator, Presentation, Word, format_word

log = logging.getLogger(__name__)

_TERM = -1


class RewriteRule(NamedTuple):
    lhs: Word
    rhs: Word

    def __str__(self) -> str:
        return f"{format_word(self.lhs)} -> {format_word(self.rhs)}"


class StepBudgetExceeded(RuntimeError):
    pass


class NotCompleteError(RuntimeError):
    pass


@dataclass(frozen=True)
class KBBudget:
    max_rules: int = 20_000
    max_pairs: int = 2_000_000


@dataclass
class KBStats:
    pairs_processed: int = 0
    rules_added: int = 0
    rules_removed: int = 0


def _key(w: tuple) -> tuple:
    return (len(w), w)


def _orient(u: tuple, v: tuple) -> tuple[tuple, tuple]:
    return (u, v) if _key(u) > _key(v) else (v, u)


class _RuleIndex:
    """Mutable rule store: lhs -> rhs, plus the reversed-lhs trie and
    prefix/suffix maps used for overlap search."""

    def __init__(self) -> None:
        self.rules: dict[tuple, tuple] = {}
        self.trie: dict = {}
        self.by_prefix: dict[tuple, set] = {}
        self.by_suffix: dict[tuple, set] = {}

    def add(self, lhs: tuple, rhs: tuple) -> None:
        self.rules[lhs] = rhs
        node = self.trie
        for g in reversed(lhs):
            node = node.setdefault(g, {})
        node[_TERM] = lhs
        for k in range(1, len(lhs)):
            self.by_prefix.setdefault(lhs[:k], set()).add(lhs)
            self.by_suffix.setdefault(lhs[-k:], set()).add(lhs)

    def remove(self, lhs: tuple) -> tuple:
        rhs = self.rules.pop(lhs)
        path = [self.trie]
        for g in reversed(lhs):
            path.append(path[-1][g])
        del path[-1][_TERM]
        for depth in range(len(lhs), 0, -1):
            if path[depth]:
                break
            del path[depth - 1][lhs[len(lhs) - depth]]
        for k in range(1, len(lhs)):
            for table, part in ((self.by_prefix, lhs[:k]), (self.by_suffix, lhs[-k:])):
                bucket = table[part]
                bucket.discard(lhs)
                if not bucket:
                    del table[part]
        return rhs

    def suffix_match(self, stack: list) -> tuple | None:
        """Return the lhs that is a suffix of ``stack``, if any."""
        node = self.trie
        for k in range(len(stack) - 1, -1, -1):
            node = node.get(stack[k])
            if node is None:
                return None
            lhs = node.get(_TERM)
            if lhs is not None:
                return lhs
        return None

    def contains_factor(self, w: tuple) -> bool:
        stack: list = []
        for g in w:
            stack.append(g)
            if self.suffix_match(stack) is not None:
                return True
        return False

    def normalize(self, w: Sequence[int], max_steps: int = 10_000_000) -> tuple:
        out: list = []
        pending = list(reversed(w))
        steps = 0
        rules = self.rules
        while pending:
            out.append(pending.pop())
            lhs = self.suffix_match(out)
            if lhs is None:
                continue
            steps += 1
            if steps > max_steps:
                raise StepBudgetExceeded(f"normalization exceeded {max_steps} rewrites")
            del out[len(out) - len(lhs):]
            pending.extend(reversed(rules[lhs]))
        return tuple(out)


@dataclass
class RewriteSystem:
    """Oriented rules over a presentation's integer-coded alphabet."""

    presentation: Presentation
    rules: tuple
    complete: bool
    stats: KBStats = field(default_factory=KBStats)
    max_steps: int = 10_000_000
    _index: _RuleIndex = field(init=False, repr=False, compare=False)
    _encoded: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        p = self.presentation
        encoded = []
        for rule in self.rules:
            lhs, rhs = p.encode(rule.lhs), p.encode(rule.rhs)
            if _key(lhs) <= _key(rhs):
                raise ValueError(f"rule {rule} is not shortlex-decreasing")
            encoded.append((lhs, rhs))
        self._encoded = tuple(encoded)
        self._index = _RuleIndex()
        for lhs, rhs in encoded:
            self._index.add(lhs, rhs)

    @classmethod
    def from_pairs(cls, presentation: Presentation, pairs, complete: bool = False) -> "RewriteSystem":
        rules = tuple(RewriteRule(tuple(l), tuple(r)) for l, r in pairs)
        return cls(presentation, rules, complete)

    def normalize_codes(self, w: Sequence[int]) -> tuple:
        return self._index.normalize(w, self.max_steps)

    def is_irreducible_codes(self, w: Sequence[int]) -> bool:
        return not self._index.contains_factor(tuple(w))

    def to_text(self) -> str:
        return "".join(f"{rule}\n" for rule in self.rules)


def rewrite_once(system: RewriteSystem, w: Sequence[Generator]) -> Word | None:
    """Apply one rule at the leftmost position; ties go to the lowest rule index."""
    w = tuple(w)
    for start in range(len(w)):
        for rule in system.rules:
            end = start + len(rule.lhs)
            if w[start:end] == rule.lhs:
                return w[:start] + rule.rhs + w[end:]
    return None


def normalize(system: RewriteSystem, w: Sequence[Generator]) -> Word:
    p = system.presentation
    return p.decode(system.normalize_codes(p.encode(w)))


def _overlaps(index: _RuleIndex, lhs: tuple):
    """Yield (overlap word, side1, side2) for proper overlaps of ``lhs`` with
    every rule in ``index`` (both orders, including self-overlaps)."""
    rhs = index.rules[lhs]
    n = len(lhs)
    for k in range(1, n):
        # suffix of lhs (length k) == proper prefix of other
        for other in index.by_prefix.get(lhs[n - k:], ()):
            tail = other[k:]
            yield lhs + tail, rhs + tail, lhs[: n - k] + index.rules[other]
        # suffix of other == prefix of lhs (length k); skip self, seen above
        for other in index.by_suffix.get(lhs[:k], ()):
            if other == lhs:
                continue
            head = other[: len(other) - k]
            yield head + lhs, index.rules[other] + lhs[k:], head + rhs


def kb_complete(presentation: Presentation, budget: KBBudget | None = None) -> RewriteSystem:
    """Shortlex Knuth-Bendix completion of ``presentation``.

    Critical pairs are resolved smallest overlap word first.  On budget
    exhaustion the partial (still sound, still terminating) system is
    returned with ``complete=False``.
    """
    budget = budget or KBBudget()
    stats = KBStats()
    index = _RuleIndex()
    queue: list = []

    def push(word, s1, s2):
        heapq.heappush(queue, (len(word), word, s1, s2))

    for u, v in presentation.encoded_relations():
        push(max(u, v, key=_key), u, v)

    complete = True
    while queue:
        if stats.pairs_processed >= budget.max_pairs or len(index.rules) > budget.max_rules:
            complete = False
            break
        _, _, s1, s2 = heapq.heappop(queue)
        stats.pairs_processed += 1
        s1, s2 = index.normalize(s1), index.normalize(s2)
        if s1 == s2:
            continue
        lhs, rhs = _orient(s1, s2)
        # collapse rules whose lhs contains the new lhs; compose right sides
        affected = [l for l in index.rules if _contains(l, lhs)]
        for l in affected:
            r = index.remove(l)
            stats.rules_removed += 1
            push(l, l, r)
        index.add(lhs, rhs)
        stats.rules_added += 1
        for l, r in list(index.rules.items()):
            if l != lhs and _contains(r, lhs):
                index.rules[l] = index.normalize(r)
        for word, a, b in _overlaps(index, lhs):
            push(word, a, b)

    if complete:
        complete = _certify(index)
    rules = tuple(
        RewriteRule(presentation.decode(l), presentation.decode(r))
        for l, r in sorted(index.rules.items(), key=lambda kv: _key(kv[0]))
    )
    log.info(
        "kb %s n=%d: %d rules, complete=%s, %d pairs",
        presentation.family, presentation.rank, len(rules), complete, stats.pairs_processed,
    )
    return RewriteSystem(presentation, rules, complete, stats)


def _contains(word: tuple, factor: tuple) -> bool:
    m = len(factor)
    first = factor[0]
    for start in range(len(word) - m + 1):
        if word[start] == first and word[start:start + m] == factor:
            return True
    return False


def _certify(index: _RuleIndex) -> bool:
    """Check every critical pair of the final system is joinable."""
    for lhs in list(index.rules):
        for _, a, b in _overlaps(index, lhs):
            if index.normalize(a) != index.normalize(b):
                return False
    return True


def irreducible_words(system: RewriteSystem, limit: int = 5_000_000) -> list[tuple]:
    """All irreducible words (as codes) in shortlex order.

    Breadth-first: a word is extended only if irreducible, and an extension
    can only be reducible at its suffix.
    """
    if not system.complete:
        raise NotCompleteError("irreducible words only enumerate the monoid for a complete system")
    ngen = system.presentation.num_generators
    index = system._index
    out = [()]
    head = 0
    while head < len(out):
        w = out[head]
        head += 1
        for g in range(ngen):
            cand = list(w)
            cand.append(g)
            if index.suffix_match(cand) is None:
                out.append(tuple(cand))
                if len(out) > limit:
                    raise StepBudgetExceeded(f"more than {limit} irreducible words")
    return out


def count_irreducible(system: RewriteSystem, rank: int | None = None) -> int:
    if rank is not None and rank != system.presentation.rank:
        raise ValueError(f"system has rank {system.presentation.rank}, not {rank}")
    return len(irreducible_words(system))
