"""Canonical labelings and isomorphism keys for quivers and simple graphs.

The search is individualization-refinement: refine the vertex partition to
an equitable one using multisets of (neighbour cell, signed multiplicity),
branch on the first smallest non-singleton cell, and keep the leaf whose
relabeled signed adjacency matrix is lexicographically least.  Automorphisms
found at equal leaves prune sibling branches in the same orbit.
"""

from __future__ import annotations

import struct
from typing import Sequence

import numpy as np

from .quiver import Quiver, SimpleGraph

QUIVER = "quiver"
QUIVER_OP = "quiver-op"
GRAPH = "graph"
MODES = (QUIVER, QUIVER_OP, GRAPH)


class CanonicalKey(bytes):
    """Length-prefixed row-major serialization of a canonical adjacency.

    ``key.hex()`` / ``CanonicalKey.fromhex`` give the printable form.
    """


def _refine(rows: list[list[tuple[int, int]]], cells: list[list[int]]) -> list[list[int]]:
    """Refine an ordered partition until equitable.

    ``rows[v]`` lists ``(u, colour)`` for the nonzero entries of row v.
    New cells are ordered by (parent cell, sorted signature), which is
    independent of vertex names.
    """
    n = len(rows)
    cell_of = [0] * n
    for c, cell in enumerate(cells):
        for v in cell:
            cell_of[v] = c
    while True:
        new_cells = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                sig = tuple(sorted((cell_of[u], col) for u, col in rows[v]))
                groups.setdefault(sig, []).append(v)
            if len(groups) == 1:
                new_cells.append(cell)
                continue
            changed = True
            for sig in sorted(groups):
                new_cells.append(groups[sig])
        if not changed:
            return new_cells
        cells = new_cells
        for c, cell in enumerate(cells):
            for v in cell:
                cell_of[v] = c


def _in_explored_orbit(target: int, explored: list[int], autos: list[list[int]], fixed: Sequence[int]) -> bool:
    """True if some explored vertex maps to ``target`` under the group
    generated by the stored automorphisms that fix ``fixed`` pointwise."""
    gens = [a for a in autos if all(a[x] == x for x in fixed)]
    if not gens or not explored:
        return False
    seen = set(explored)
    stack = list(explored)
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if y == target:
                return True
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def canonical_labeling(matrix: np.ndarray) -> tuple[list[int], tuple[int, ...]]:
    """Return ``(order, certificate)`` for an integer adjacency matrix.

    ``order[p]`` is the original vertex placed at canonical position p and
    ``certificate`` is the row-major matrix under that order.
    """
    m = np.asarray(matrix)
    n = m.shape[0]
    if n == 0:
        return [], ()
    mat = m.tolist()
    rows = [[(u, mat[v][u]) for u in range(n) if mat[v][u] != 0] for v in range(n)]
    start = _refine(rows, [list(range(n))])

    best_cert = None
    best_order = None
    autos: list[list[int]] = []

    def leaf_order(cells):
        return [cell[0] for cell in cells]

    def cert_of(order):
        return tuple(mat[a][b] for a in order for b in order)

    def search(cells, path):
        nonlocal best_cert, best_order
        if len(cells) == n:
            order = leaf_order(cells)
            cert = cert_of(order)
            if best_cert is None or cert < best_cert:
                best_cert, best_order = cert, order
            elif cert == best_cert:
                # order -> best_order maps one labeling onto the other
                perm = [0] * n
                for a, b in zip(order, best_order):
                    perm[a] = b
                if any(perm[i] != i for i in range(n)):
                    autos.append(perm)
            return
        size = min(len(c) for c in cells if len(c) > 1)
        idx = next(i for i, c in enumerate(cells) if len(c) == size)
        target = cells[idx]
        explored: list[int] = []
        for v in sorted(target):
            if _in_explored_orbit(v, explored, autos, path):
                continue
            rest = [u for u in target if u != v]
            child = cells[:idx] + [[v], rest] + cells[idx + 1:]
            search(_refine(rows, child), path + [v])
            explored.append(v)

    search(start, [])
    return best_order, best_cert


def _pack(n: int, cert: tuple[int, ...]) -> CanonicalKey:
    return CanonicalKey(struct.pack(f">H{len(cert)}h", n, *cert))


def _graph_matrix(g: SimpleGraph) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=np.int64)
    for u, v in g.edges:
        a[u, v] = a[v, u] = 1
    return a


def canonical_quiver_key(q: Quiver, identify_opposite: bool = False) -> CanonicalKey:
    """Key equal for two quivers iff they are isomorphic as quivers.

    With ``identify_opposite`` a quiver and its opposite share a key.
    """
    _, cert = canonical_labeling(q.b)
    key = _pack(q.n, cert)
    if identify_opposite:
        _, cert_op = canonical_labeling(-q.b)
        key = min(key, _pack(q.n, cert_op))
    return key


def canonical_quiver(q: Quiver) -> Quiver:
    """The canonically relabeled copy of ``q``."""
    order, _ = canonical_labeling(q.b)
    return q.relabel(order)


def canonical_graph_key(g: SimpleGraph) -> CanonicalKey:
    _, cert = canonical_labeling(_graph_matrix(g))
    return _pack(g.n, cert)


def canonical_graph(g: SimpleGraph) -> SimpleGraph:
    order, _ = canonical_labeling(_graph_matrix(g))
    return g.relabel(order)


def key_for_mode(q: Quiver, mode: str) -> CanonicalKey:
    from .quiver import underlying_graph

    if mode == QUIVER:
        return canonical_quiver_key(q)
    if mode == QUIVER_OP:
        return canonical_quiver_key(q, identify_opposite=True)
    if mode == GRAPH:
        return canonical_graph_key(underlying_graph(q))
    raise ValueError(f"unknown isomorphism mode {mode!r}")


def is_isomorphic(a, b, identify_opposite: bool = False) -> bool:
    """Quiver or simple-graph isomorphism, via key equality."""
    if type(a) is not type(b):
        raise TypeError("cannot compare a quiver with a graph")
    if a.n != b.n:
        return False
    if isinstance(a, Quiver):
        if not np.array_equal(np.sort(a.b, axis=None), np.sort(b.b, axis=None)):
            return False
        return canonical_quiver_key(a, identify_opposite) == canonical_quiver_key(b, identify_opposite)
    if a.num_edges != b.num_edges:
        return False
    return canonical_graph_key(a) == canonical_graph_key(b)
