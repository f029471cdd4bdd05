"""Resumable branch-and-bound kernel over rotation systems (numba).

Darts are integers; vertex v owns the out-darts ``off[v] .. off[v]+deg[v]-1``
in neighbour order.  ``succ[d]`` is the next out-dart around the tail of d
(-1 while the tail has no rotation yet) and the face map is
``d -> succ[rev[d]]``.  All mutable search state lives in arrays so the
kernel can stop after a node quota and be resumed.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from numba import njit

# state slots
LEVEL, FACES, UNDO_TOP, USED, NODES, STATUS = range(6)
RUNNING, FOUND, EXHAUSTED = 0, 1, 2


@njit(cache=True)
def _close_faces(v, off, deg, rev, succ, used, undo, st, ndarts):
    closed = 0
    for j in range(deg[v]):
        d0 = off[v] + j
        if used[d0]:
            continue
        d = d0
        ok = False
        for _ in range(ndarts):
            nd = succ[rev[d]]
            if nd < 0:
                break
            if nd == d0:
                ok = True
                break
            d = nd
        if ok:
            d = d0
            while True:
                used[d] = True
                undo[st[UNDO_TOP]] = d
                st[UNDO_TOP] += 1
                st[USED] += 1
                d = succ[rev[d]]
                if d == d0:
                    break
            closed += 1
    return closed


@njit(cache=True)
def _open_bound(off, deg, rev, succ, used, girth, ndarts):
    """Upper bound on the faces still to close.

    Unused darts split into maximal chains under the partial face map; a
    chain starts at a dart whose tail has no rotation yet.  Each future face
    is a union of chains of total length >= girth, so chains of length
    >= girth count once and shorter ones share the girth-divided pool.
    """
    long_chains = 0
    short_darts = 0
    for d in range(ndarts):
        if used[d] or succ[d] >= 0:
            continue
        length = 1
        x = d
        while True:
            nx = succ[rev[x]]
            if nx < 0:
                break
            length += 1
            x = nx
        if length >= girth:
            long_chains += 1
        else:
            short_darts += length
    return long_chains + short_darts // girth


@njit(cache=True)
def search(order, off, deg, rev, rot_start, rot_count, rots, target, girth,
           succ, used, undo, choice, mark, faces_at, st, quota):
    """Advance the DFS by at most ``quota`` nodes; returns ``st[STATUS]``."""
    n = order.shape[0]
    ndarts = rev.shape[0]
    budget = st[NODES] + quota
    level = st[LEVEL]
    while level >= 0:
        if st[NODES] >= budget:
            st[LEVEL] = level
            return RUNNING
        v = order[level]
        if choice[level] >= 0:
            while st[UNDO_TOP] > mark[level]:
                st[UNDO_TOP] -= 1
                used[undo[st[UNDO_TOP]]] = False
                st[USED] -= 1
            st[FACES] = faces_at[level]
        choice[level] += 1
        if choice[level] >= rot_count[level]:
            for j in range(deg[v]):
                succ[off[v] + j] = -1
            choice[level] = -1
            level -= 1
            continue
        base = rot_start[level] + choice[level] * deg[v]
        for j in range(deg[v]):
            a = rots[base + j]
            b = rots[base + (j + 1) % deg[v]]
            succ[off[v] + a] = off[v] + b
        mark[level] = st[UNDO_TOP]
        faces_at[level] = st[FACES]
        st[NODES] += 1
        st[FACES] += _close_faces(v, off, deg, rev, succ, used, undo, st, ndarts)
        if st[FACES] + (ndarts - st[USED]) // girth < target:
            continue
        if st[FACES] + _open_bound(off, deg, rev, succ, used, girth, ndarts) < target:
            continue
        if level == n - 1:
            st[LEVEL] = level
            st[STATUS] = FOUND
            return FOUND
        level += 1
        choice[level] = -1
    st[LEVEL] = -1
    st[STATUS] = EXHAUSTED
    return EXHAUSTED


class Search:
    """Decision search: does the block embed with at least ``target`` faces?"""

    def __init__(self, nbrs: list[list[int]], order: list[int], target: int, girth: int):
        n = len(nbrs)
        self.nbrs = nbrs
        self.order = np.array(order, dtype=np.int64)
        self.deg = np.array([len(x) for x in nbrs], dtype=np.int64)
        self.off = np.zeros(n, dtype=np.int64)
        self.off[1:] = np.cumsum(self.deg)[:-1]
        ndarts = int(self.deg.sum())
        index = {}
        for v in range(n):
            for j, u in enumerate(nbrs[v]):
                index[v, u] = self.off[v] + j
        self.rev = np.array([index[u, v] for v in range(n) for u in nbrs[v]], dtype=np.int64)
        starts, counts, flat = [], [], []
        for i, v in enumerate(order):
            d = len(nbrs[v])
            perms = [(0,) + p for p in itertools.permutations(range(1, d))]
            if i == 0 and d >= 3:
                # mirror images have the same face count
                perms = [p for p in perms if p[1] < p[-1]]
            starts.append(len(flat))
            counts.append(len(perms))
            for p in perms:
                flat.extend(p)
        self.rot_start = np.array(starts, dtype=np.int64)
        self.rot_count = np.array(counts, dtype=np.int64)
        self.rots = np.array(flat, dtype=np.int64)
        self.target = int(target)
        self.girth = int(girth)
        self.succ = np.full(ndarts, -1, dtype=np.int64)
        self.used = np.zeros(ndarts, dtype=np.bool_)
        self.undo = np.zeros(ndarts, dtype=np.int64)
        self.choice = np.full(n, -1, dtype=np.int64)
        self.mark = np.zeros(n, dtype=np.int64)
        self.faces_at = np.zeros(n, dtype=np.int64)
        self.st = np.zeros(6, dtype=np.int64)

    @property
    def nodes(self) -> int:
        return int(self.st[NODES])

    def step(self, quota: int = 200_000) -> int:
        return search(self.order, self.off, self.deg, self.rev, self.rot_start, self.rot_count,
                      self.rots, self.target, self.girth, self.succ, self.used, self.undo,
                      self.choice, self.mark, self.faces_at, self.st, quota)

    def rotation(self) -> list[tuple[int, ...]]:
        """Cyclic neighbour orders of the embedding found."""
        out = []
        for v, nb in enumerate(self.nbrs):
            o = int(self.off[v])
            j, cyc = 0, []
            for _ in nb:
                cyc.append(nb[j])
                j = int(self.succ[o + j]) - o
            out.append(tuple(cyc))
        return out


def max_supported_degree() -> int:
    return 10


def rotation_count(deg: int) -> int:
    return math.factorial(deg - 1)
