"""Green's relations of an enumerated monoid, and structural checks.

R- and L-classes are strongly connected components of the right and left
Cayley graphs; J-classes are those of their union.  Class ids are assigned
in order of each class's least element, so class 0 always holds the
identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .congruence import MonoidTable
from .words import Word, format_word


def _canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Renumber so classes are ordered by their least member."""
    _, first, dense = np.unique(labels, return_index=True, return_inverse=True)
    remap = np.empty(len(first), dtype=np.int64)
    remap[np.argsort(first)] = np.arange(len(first))
    return remap[dense.reshape(-1)]


def _graph(size: int, *tables: np.ndarray):
    src = np.concatenate([np.repeat(np.arange(size), t.shape[1]) for t in tables])
    dst = np.concatenate([t.reshape(-1).astype(np.int64) for t in tables])
    return coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(size, size)).tocsr()


def _scc(size: int, *tables: np.ndarray) -> np.ndarray:
    _, labels = connected_components(_graph(size, *tables), directed=True, connection="strong")
    return _canonical_labels(labels)


def _members(labels: np.ndarray) -> list[np.ndarray]:
    order = np.argsort(labels, kind="stable")
    cuts = np.flatnonzero(np.diff(labels[order])) + 1
    return np.split(order, cuts)


@dataclass
class GreensStructure:
    r_class_of: np.ndarray
    l_class_of: np.ndarray
    h_class_of: np.ndarray
    d_class_of: np.ndarray
    j_class_of: np.ndarray
    # below[x] = set of D-classes strictly below class x
    below: list = field(repr=False)

    @cached_property
    def r_classes(self) -> list[np.ndarray]:
        return _members(self.r_class_of)

    @cached_property
    def l_classes(self) -> list[np.ndarray]:
        return _members(self.l_class_of)

    @cached_property
    def h_classes(self) -> list[np.ndarray]:
        return _members(self.h_class_of)

    @cached_property
    def d_classes(self) -> list[np.ndarray]:
        return _members(self.d_class_of)

    @property
    def num_d_classes(self) -> int:
        return len(self.d_classes)

    def d_leq(self, x: int, y: int) -> bool:
        """Whether D-class ``x`` lies in the two-sided ideal of class ``y``."""
        return x == y or x in self.below[y]

    @cached_property
    def hasse_edges(self) -> list[tuple[int, int]]:
        """Cover pairs ``(upper, lower)`` of the D-order, sorted."""
        edges = []
        for y, lower in enumerate(self.below):
            for x in lower:
                if not any(x in self.below[z] for z in lower if z != x):
                    edges.append((y, x))
        return sorted(edges)

    @property
    def d_equals_j(self) -> bool:
        return bool(np.array_equal(self.d_class_of, self.j_class_of))

    @property
    def h_trivial(self) -> bool:
        return len(self.h_classes) == len(self.h_class_of)

    def counts(self) -> dict:
        return {
            "R": len(self.r_classes),
            "L": len(self.l_classes),
            "H": len(self.h_classes),
            "D": len(self.d_classes),
            "J": int(self.j_class_of.max()) + 1,
        }


def compute_greens(m: MonoidTable) -> GreensStructure:
    size = m.size
    r = _scc(size, m.right)
    l_ = _scc(size, m.left)
    h = _canonical_labels(r * (int(l_.max()) + 1) + l_)

    # D: join of R and L, i.e. components of the graph linking each element
    # to the least member of its R-class and of its L-class
    r_rep = np.array([c[0] for c in _members(r)])[r]
    l_rep = np.array([c[0] for c in _members(l_)])[l_]
    ids = np.arange(size)
    link = coo_matrix(
        (np.ones(2 * size, dtype=np.int8), (np.r_[ids, ids], np.r_[r_rep, l_rep])), shape=(size, size)
    )
    _, d = connected_components(link, directed=False)
    d = _canonical_labels(d)
    j = _scc(size, m.right, m.left)

    # D-order on the condensation of the two-sided Cayley graph
    nd = int(d.max()) + 1
    succ: list[set] = [set() for _ in range(nd)]
    for table in (m.right, m.left):
        src = np.repeat(d, table.shape[1])
        dst = d[table.reshape(-1)]
        for x, y in set(zip(src.tolist(), dst.tolist())):
            if x != y:
                succ[x].add(y)
    below: list = [None] * nd
    # a class only reaches classes holding larger elements' ideals; resolve
    # by memoised DFS in any order
    def reach(x: int) -> frozenset:
        if below[x] is None:
            stack, seen = [x], set()
            while stack:
                y = stack.pop()
                for z in succ[y]:
                    if z not in seen:
                        seen.add(z)
                        if below[z] is not None:
                            seen |= below[z]
                        else:
                            stack.append(z)
            seen.discard(x)
            below[x] = frozenset(seen)
        return below[x]

    for x in range(nd):
        reach(x)
    return GreensStructure(r, l_, h, d, j, below)


def egg_box(g: GreensStructure, d: int) -> list[list[list[int]]]:
    """Rows are R-classes and columns L-classes inside D-class ``d``; each cell
    lists the members of that H-class (empty if none)."""
    members = g.d_classes[d]
    rows = sorted(set(g.r_class_of[members].tolist()))
    cols = sorted(set(g.l_class_of[members].tolist()))
    box = [[[] for _ in cols] for _ in rows]
    for e in members.tolist():
        box[rows.index(int(g.r_class_of[e]))][cols.index(int(g.l_class_of[e]))].append(e)
    return box


def is_aperiodic(m: MonoidTable) -> tuple[bool, int]:
    """Whether every ``a`` has ``a^k == a^(k-1)`` for some ``k``.

    Returns the flag and the largest such least ``k`` (2 for a monoid of
    idempotents).  An element whose powers enter a longer cycle is detected
    after at most ``size`` steps.
    """
    ids = np.arange(m.size)
    cur = ids.copy()
    pending = np.ones(m.size, dtype=bool)
    witness = 1
    for k in range(2, m.size + 2):
        nxt = cur.copy()
        nxt[pending] = m.products(cur[pending], ids[pending])
        settled = pending & (nxt == cur)
        if settled.any():
            witness = k
        pending &= ~settled
        cur = nxt
        if not pending.any():
            return True, witness
    return False, witness


def _reverse_codes(m: MonoidTable) -> np.ndarray:
    codes, lengths = m.rep_codes, m.rep_lengths
    width = codes.shape[1]
    idx = lengths[:, None] - 1 - np.arange(width)[None, :]
    out = np.take_along_axis(codes, np.clip(idx, 0, width - 1), axis=1)
    out[idx < 0] = -1
    return out


def reversal_map(m: MonoidTable) -> np.ndarray:
    """Element of ``reverse(rep(e))`` for every e."""
    return m.fold(np.zeros(m.size, dtype=np.int64), _reverse_codes(m))


def check_regular_R(m: MonoidTable, pair_limit: int = 100_000) -> dict:
    """``w w^R w == w`` for every element; ``w^R`` well defined and an
    involutive anti-automorphism on all pairs when the monoid is small."""
    ids = np.arange(m.size)
    rev = reversal_map(m)
    x = m.fold(ids, _reverse_codes(m))
    x = m.fold(x, m.rep_codes)
    failures = [{"check": "w w^R w = w", "element": format_word(m.rep(int(e)))} for e in np.flatnonzero(x != ids)]
    failures += [{"check": "(w^R)^R = w", "element": format_word(m.rep(int(e)))}
                 for e in np.flatnonzero(rev[rev] != ids)]
    checked = 2 * m.size
    pairs = m.size * m.size <= pair_limit
    if pairs:
        xs, ys = np.divmod(np.arange(m.size * m.size), m.size)
        lhs = rev[m.products(xs, ys)]
        rhs = m.products(rev[ys], rev[xs])
        checked += len(xs)
        for k in np.flatnonzero(lhs != rhs)[:20]:
            failures.append({"check": "(vw)^R = w^R v^R",
                             "v": format_word(m.rep(int(xs[k]))), "w": format_word(m.rep(int(ys[k])))})
    return {"instances_checked": checked, "pairs_checked": pairs, "failures": failures}


def check_core_d_related(m: MonoidTable, g: GreensStructure) -> dict:
    from .origami import core

    failures = []
    for e in range(m.size):
        c = m.element_of(core(m.rep(e)))
        if g.d_class_of[c] != g.d_class_of[e]:
            failures.append({"element": format_word(m.rep(e)), "core": format_word(m.rep(c))})
    return {"instances_checked": m.size, "failures": failures}


def d_class_label(m: MonoidTable, g: GreensStructure, d: int) -> Word:
    """Least representative word of the class."""
    return m.rep(int(g.d_classes[d][0]))


def check_theorem_main(m: MonoidTable, g: GreensStructure, jones: MonoidTable, jg: GreensStructure) -> dict:
    """D-classes of O_n against pairs of D-classes of J_n via the projections.

    Checks that the map is constant on classes, bijective onto pairs, an
    order isomorphism onto the product order, and that the class count is
    ``(n//2 + 1)**2``.
    """
    from .origami import projection_images

    pa, pb = projection_images(m, jones)
    da, db = jg.d_class_of[pa], jg.d_class_of[pb]
    failures = []
    image: dict[int, tuple[int, int]] = {}
    for d, members in enumerate(g.d_classes):
        pairs = set(zip(da[members].tolist(), db[members].tolist()))
        if len(pairs) != 1:
            failures.append({"check": "constant on class", "class": format_word(d_class_label(m, g, d))})
        image[d] = min(pairs)
    nj = jg.num_d_classes
    targets = set(image.values())
    if len(targets) != g.num_d_classes or len(targets) != nj * nj:
        failures.append({"check": "bijection onto pairs", "classes": g.num_d_classes, "pairs": nj * nj})
    expected = (m.rank // 2 + 1) ** 2
    if g.num_d_classes != expected:
        failures.append({"check": "class count", "got": g.num_d_classes, "expected": expected})
    for x in range(g.num_d_classes):
        for y in range(g.num_d_classes):
            (ax, bx), (ay, by_) = image[x], image[y]
            product_leq = jg.d_leq(ax, ay) and jg.d_leq(bx, by_)
            if g.d_leq(x, y) != product_leq:
                failures.append({"check": "order isomorphism",
                                 "lower": format_word(d_class_label(m, g, x)),
                                 "upper": format_word(d_class_label(m, g, y))})
    return {
        "instances_checked": m.size + g.num_d_classes ** 2,
        "d_classes": g.num_d_classes,
        "expected_d_classes": expected,
        "jones_d_classes": nj,
        "cover_edges": len(g.hasse_edges),
        "failures": failures,
    }


def ideal_oracle(m: MonoidTable) -> tuple[np.ndarray, np.ndarray]:
    """R and L class labels by comparing principal ideals directly.

    Quadratic in the monoid size; meant for cross-checking small cases.
    """
    ids = np.arange(m.size)
    right_sets, left_sets = {}, {}
    r, l_ = np.empty(m.size, dtype=np.int64), np.empty(m.size, dtype=np.int64)
    for a_ in range(m.size):
        aM = frozenset(m.products(np.full(m.size, a_), ids).tolist())
        Ma = frozenset(m.products(ids, np.full(m.size, a_)).tolist())
        r[a_] = right_sets.setdefault(aM, len(right_sets))
        l_[a_] = left_sets.setdefault(Ma, len(left_sets))
    return _canonical_labels(r), _canonical_labels(l_)
