"""Compiled core of the two-sided congruence enumeration.

Nodes are classes of the right congruence on the free monoid generated by
``{(x u, x v) : x any word, (u, v) a relation}``; for a monoid presentation
that is exactly the two-sided congruence.  The strategy is HLT: every
relation is traced (defining new nodes as needed) from every live node in
creation order, and rows are completed as they are passed.  Coincidences are
processed eagerly with union-find; table entries may point at dead nodes and
are always read through ``_find``.
"""

from __future__ import annotations

import numpy as np
from numba import njit

UNDEF = -1

STATUS_OK = 0
STATUS_BUDGET = 1


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def _coincide(table, parent, stack, a, b):
    """Merge the classes of ``a`` and ``b`` and everything that follows."""
    ngen = table.shape[1]
    top = 0
    stack[0, 0] = a
    stack[0, 1] = b
    top = 1
    merged = 0
    while top > 0:
        top -= 1
        x = _find(parent, stack[top, 0])
        y = _find(parent, stack[top, 1])
        if x == y:
            continue
        if y < x:
            x, y = y, x
        parent[y] = x
        merged += 1
        for g in range(ngen):
            ty = table[y, g]
            if ty == UNDEF:
                continue
            tx = table[x, g]
            if tx == UNDEF:
                table[x, g] = ty
            else:
                if top >= stack.shape[0]:
                    # grow by hand; numba has no resize
                    bigger = np.empty((stack.shape[0] * 2, 2), dtype=np.int64)
                    bigger[:top] = stack[:top]
                    stack = bigger
                stack[top, 0] = tx
                stack[top, 1] = ty
                top += 1
    return merged, stack


@njit(cache=True)
def _compact(table, parent, n, cursor):
    """Drop dead nodes, keeping creation order.  Returns (table, n, cursor)."""
    ngen = table.shape[1]
    newid = np.full(n, UNDEF, dtype=np.int64)
    k = 0
    new_cursor = 0
    for x in range(n):
        if parent[x] == x:
            newid[x] = k
            k += 1
        if x < cursor:
            new_cursor = k
    out = np.full((table.shape[0], ngen), UNDEF, dtype=table.dtype)
    for x in range(n):
        if parent[x] != x:
            continue
        for g in range(ngen):
            t = table[x, g]
            if t != UNDEF:
                out[newid[x], g] = newid[_find(parent, t)]
    for x in range(parent.shape[0]):
        parent[x] = x
    return out, k, new_cursor


@njit(cache=True)
def hlt_enumerate(lhs, lhs_len, rhs, rhs_len, ngen, max_live, init_cap):
    """Run HLT to completion.

    Returns ``(table, n, status, peak)`` where ``table[:n]`` is the complete,
    compacted right Cayley table (node 0 is the identity) and ``peak`` the
    largest number of live nodes seen.
    """
    nrel = lhs.shape[0]
    maxlen = 1
    for r in range(nrel):
        maxlen = max(maxlen, lhs_len[r] + rhs_len[r])
    cap = max(init_cap, 4 * (maxlen + ngen))
    table = np.full((cap, ngen), UNDEF, dtype=np.int32)
    parent = np.arange(cap, dtype=np.int64)
    stack = np.empty((1024, 2), dtype=np.int64)
    n = 1
    live = 1
    peak = 1
    c = 0
    while c < n:
        if parent[c] != c:
            c += 1
            continue
        for r in range(nrel + 1):
            if parent[c] != c:
                break
            if n + maxlen + ngen >= cap:
                if 2 * live < n:
                    table, n, c = _compact(table, parent, n, c)
                else:
                    newcap = cap * 2
                    bigger = np.full((newcap, ngen), UNDEF, dtype=np.int32)
                    bigger[:n] = table[:n]
                    table = bigger
                    bparent = np.arange(newcap, dtype=np.int64)
                    bparent[:n] = parent[:n]
                    parent = bparent
                    cap = newcap
            if r == nrel:
                # complete the row
                for g in range(ngen):
                    if table[c, g] == UNDEF:
                        table[c, g] = n
                        n += 1
                        live += 1
                break
            x = c
            for k in range(lhs_len[r]):
                g = lhs[r, k]
                y = table[x, g]
                if y == UNDEF:
                    y = n
                    table[x, g] = y
                    n += 1
                    live += 1
                else:
                    y = _find(parent, y)
                x = y
            end_u = x
            m = rhs_len[r]
            if m == 0:
                merged, stack = _coincide(table, parent, stack, c, end_u)
                live -= merged
            else:
                x = c
                for k in range(m - 1):
                    g = rhs[r, k]
                    y = table[x, g]
                    if y == UNDEF:
                        y = n
                        table[x, g] = y
                        n += 1
                        live += 1
                    else:
                        y = _find(parent, y)
                    x = y
                g = rhs[r, m - 1]
                y = table[x, g]
                if y == UNDEF:
                    table[x, g] = end_u
                else:
                    merged, stack = _coincide(table, parent, stack, y, end_u)
                    live -= merged
            if live > peak:
                peak = live
            if live > max_live:
                return table, n, STATUS_BUDGET, peak
        c += 1
    table, n, c = _compact(table, parent, n, 0)
    return table, n, STATUS_OK, peak


@njit(cache=True)
def standardize(table, n):
    """Relabel nodes in shortlex (BFS) order from node 0.

    Returns ``(new_table, parent_node, parent_gen)`` where ``parent_node`` and
    ``parent_gen`` describe the BFS tree, i.e. the last letter of each
    node's shortlex-least word.
    """
    ngen = table.shape[1]
    order = np.full(n, UNDEF, dtype=np.int64)
    newid = np.full(n, UNDEF, dtype=np.int64)
    pnode = np.full(n, UNDEF, dtype=np.int64)
    pgen = np.full(n, UNDEF, dtype=np.int64)
    order[0] = 0
    newid[0] = 0
    head = 0
    tail = 1
    while head < tail:
        x = order[head]
        for g in range(ngen):
            y = table[x, g]
            if newid[y] == UNDEF:
                newid[y] = tail
                order[tail] = y
                pnode[tail] = head
                pgen[tail] = g
                tail += 1
        head += 1
    out = np.empty((tail, ngen), dtype=np.int32)
    for k in range(tail):
        x = order[k]
        for g in range(ngen):
            out[k, g] = newid[table[x, g]]
    return out, pnode[:tail], pgen[:tail]
