"""Planarity and exact minimum orientable genus of simple graphs.

Embeddings are rotation systems: for each vertex a cyclic order of its
neighbours.  Faces are the orbits of the dart map
``(u, v) -> (v, succ_v(u))``, and Euler's formula gives the genus.

``min_genus`` reduces the graph (pendant-vertex removal, degree-2
suppression, components, biconnected blocks; genus is additive over blocks)
and then brackets each block's genus between a lower bound (Euler/girth bound
and a planarity test) and the best embedding found by local search.  If the
bracket is not closed, a branch-and-bound search over rotation systems
decides, one genus value at a time, whether a better embedding exists.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import networkx as nx

from .quiver import SimpleGraph

EXACT = "exact"
BOUNDED = "bounded"


@dataclass(frozen=True)
class RotationSystem:
    """``order[v]`` is the cyclic order of the neighbours of vertex v."""

    order: tuple

    @classmethod
    def of(cls, order: Sequence[Sequence[int]]) -> "RotationSystem":
        return cls(tuple(tuple(o) for o in order))

    def successor_maps(self) -> list[dict[int, int]]:
        succ = []
        for cyc in self.order:
            d = len(cyc)
            succ.append({cyc[i]: cyc[(i + 1) % d] for i in range(d)})
        return succ


@dataclass(frozen=True)
class GenusResult:
    status: str
    lo: int
    hi: int
    faces: Optional[int]
    nodes_explored: int = 0

    @property
    def exact(self) -> bool:
        return self.status == EXACT

    @property
    def genus(self) -> Optional[int]:
        return self.lo if self.exact else None

    @property
    def bounds(self) -> tuple[int, int]:
        return self.lo, self.hi


class InvalidRotation(ValueError):
    pass


def check_rotation(g: SimpleGraph, rot: RotationSystem) -> None:
    adj = g.adjacency()
    if len(rot.order) != g.n:
        raise InvalidRotation("rotation system has wrong number of vertices")
    for v in range(g.n):
        if sorted(rot.order[v]) != sorted(adj[v]) or len(set(rot.order[v])) != len(rot.order[v]):
            raise InvalidRotation(f"rotation at vertex {v} is not a permutation of its neighbours")


def trace_faces(g: SimpleGraph, rot: RotationSystem) -> int:
    """Number of faces of the embedding given by ``rot``."""
    check_rotation(g, rot)
    return _count_faces(rot.successor_maps())


def _count_faces(succ: list[dict[int, int]]) -> int:
    seen = set()
    faces = 0
    for u, s in enumerate(succ):
        for v in s:
            if (u, v) in seen:
                continue
            faces += 1
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                a, b = b, succ[b][a]
    return faces


def embedding_genus(v: int, e: int, f: int, components: int = 1) -> int:
    """Genus from Euler's formula ``V - E + F = 2c - 2g``."""
    twice = 2 * components - v + e - f
    if twice < 0 or twice % 2:
        raise ValueError(f"inconsistent embedding data V={v} E={e} F={f} c={components}")
    return twice // 2


def connected_components(g: SimpleGraph) -> list[list[int]]:
    adj = g.adjacency()
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], []
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def girth(g: SimpleGraph) -> float:
    """Length of a shortest cycle (``inf`` for forests)."""
    adj = g.adjacency()
    best = math.inf
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = [s]
        for x in queue:
            if 2 * dist[x] + 1 >= best:
                break
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


def _component_lower_bound(nv: int, ne: int, h: float) -> int:
    if nv < 3 or h == math.inf:
        return 0
    # faces have length >= girth h, so F <= 2E/h
    num = ne * (h - 2) - h * (nv - 2)
    return max(0, -(-num // (2 * h)))


def genus_lower_bound(g: SimpleGraph) -> int:
    """Euler bound, girth-refined, summed over connected components."""
    total = 0
    for comp in connected_components(g):
        sub = _induced(g, comp)
        total += _component_lower_bound(sub.n, sub.num_edges, girth(sub))
    return total


def _induced(g: SimpleGraph, verts: Sequence[int]) -> SimpleGraph:
    idx = {v: i for i, v in enumerate(verts)}
    edges = frozenset((idx[u], idx[v]) for u, v in g.edges if u in idx and v in idx)
    return SimpleGraph(len(verts), edges)


def _to_nx(g: SimpleGraph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    return G


def is_planar(g: SimpleGraph) -> bool:
    """Left-right planarity test (networkx implementation)."""
    if g.n >= 3 and g.num_edges > 3 * g.n - 6:
        return False
    planar, _ = nx.check_planarity(_to_nx(g))
    return planar


# -- reduction ----------------------------------------------------------------

def _reduce(adj: dict[int, set]) -> dict[int, set]:
    """Strip degree <= 1 vertices and suppress degree-2 vertices in place.

    Both preserve genus: pendant trees embed in any face, and a subdivided
    or parallel edge embeds next to its twin.
    """
    stack = list(adj)
    while stack:
        v = stack.pop()
        if v not in adj:
            continue
        nb = adj[v]
        if len(nb) <= 1:
            for u in nb:
                adj[u].discard(v)
                stack.append(u)
            del adj[v]
        elif len(nb) == 2:
            a, b = nb
            adj[a].discard(v)
            adj[b].discard(v)
            del adj[v]
            adj[a].add(b)
            adj[b].add(a)
            stack += [a, b]
    return adj


def _blocks(adj: dict[int, set]) -> list[dict[int, set]]:
    G = nx.Graph()
    for v, nb in adj.items():
        G.add_node(v)
        for u in nb:
            G.add_edge(v, u)
    out = []
    for comp in nx.biconnected_components(G):
        if len(comp) < 3:
            continue
        sub = {v: {u for u in adj[v] if u in comp} for v in comp}
        before = sum(len(nb) for nb in sub.values())
        sub = _reduce(sub)
        if len(sub) < 3:
            continue
        if sum(len(nb) for nb in sub.values()) == before:
            out.append(sub)
        else:
            # reduction may expose new cut vertices
            out += _blocks(sub)
    return out


# -- embedding search -------------------------------------------------------

class _Block:
    """A reduced 2-connected block relabeled to 0..n-1."""

    def __init__(self, adj: dict[int, set]):
        names = sorted(adj)
        idx = {v: i for i, v in enumerate(names)}
        self.n = len(names)
        self.nbrs = [sorted(idx[u] for u in adj[v]) for v in names]
        self.e = sum(len(x) for x in self.nbrs) // 2
        edges = frozenset((i, j) for i in range(self.n) for j in self.nbrs[i] if i < j)
        self.graph = SimpleGraph(self.n, edges)
        self.girth = girth(self.graph)

    def faces_for_genus(self, g: int) -> int:
        return 2 - 2 * g - self.n + self.e

    def genus_for_faces(self, f: int) -> int:
        return embedding_genus(self.n, self.e, f)


def _local_search(block: _Block, rng: random.Random, target_faces: int, deadline: float,
                  max_restarts: int = 200) -> tuple[int, list[tuple]]:
    """Simulated annealing over rotation systems with random restarts.

    A move takes one neighbour out of a vertex's cyclic order and reinserts
    it elsewhere; the objective is the face count.
    """
    n = block.n
    movable = [v for v in range(n) if len(block.nbrs[v]) >= 3]
    steps = max(20_000, 4_000 * n)
    t_hot, t_cold = 2.0, 0.05

    def succ_of(c):
        return {c[i]: c[(i + 1) % len(c)] for i in range(len(c))}

    best_f, best_rot = -1, None
    for _ in range(max_restarts):
        rot = []
        for v in range(n):
            nb = list(block.nbrs[v])
            rng.shuffle(nb)
            rot.append(nb)
        succ = [succ_of(c) for c in rot]
        f = _count_faces(succ)
        if f > best_f:
            best_f, best_rot = f, [tuple(c) for c in rot]
        for step in range(steps if movable else 0):
            if best_f >= target_faces or (step & 1023 == 0 and time.monotonic() > deadline):
                break
            temp = t_hot * (t_cold / t_hot) ** (step / steps)
            v = rng.choice(movable)
            old = rot[v]
            c = list(old)
            x = c.pop(rng.randrange(len(c)))
            c.insert(rng.randrange(len(c) + 1), x)
            succ[v] = succ_of(c)
            fc = _count_faces(succ)
            if fc >= f or rng.random() < math.exp((fc - f) / temp):
                rot[v], f = c, fc
                if f > best_f:
                    best_f, best_rot = f, [tuple(r) for r in rot]
            else:
                succ[v] = succ_of(old)
        if best_f >= target_faces or time.monotonic() > deadline:
            break
    return best_f, best_rot


class _Timeout(Exception):
    def __init__(self, nodes: int):
        super().__init__(nodes)
        self.nodes = nodes


def _search_order(block: _Block) -> list[int]:
    """Decreasing degree; ties go to the vertex with most placed neighbours."""
    nbrs = block.nbrs
    placed = [False] * block.n
    order = []
    remaining = set(range(block.n))
    while remaining:
        v = max(remaining, key=lambda x: (len(nbrs[x]), sum(placed[u] for u in nbrs[x]), -x))
        order.append(v)
        placed[v] = True
        remaining.discard(v)
    return order


def _search_faces(block: _Block, target: int, deadline: float) -> tuple[Optional[list], int]:
    """Branch and bound: find a rotation system with >= ``target`` faces.

    After each vertex gets a rotation, faces whose darts all leave placed
    vertices are closed; the optimistic bound is closed faces plus unclosed
    darts divided by the girth.  The compiled kernel runs in slices so the
    deadline is checked between them.  Returns ``(rotation or None, nodes)``;
    raises ``_Timeout`` (carrying the node count) past the deadline.
    """
    from . import _bnb

    if max(len(x) for x in block.nbrs) > _bnb.max_supported_degree():
        raise _Timeout(0)
    h = block.girth if block.girth != math.inf else 3
    s = _bnb.Search(block.nbrs, _search_order(block), target, int(h))
    while True:
        status = s.step()
        if status == _bnb.FOUND:
            return s.rotation(), s.nodes
        if status == _bnb.EXHAUSTED:
            return None, s.nodes
        if time.monotonic() > deadline:
            raise _Timeout(s.nodes)


def _cycle_from_succ(s: dict, start) -> list:
    out = [start]
    x = s[start]
    while x != start:
        out.append(x)
        x = s[x]
    return out


def _solve_block(block: _Block, deadline: float, rng: random.Random) -> tuple[int, int, int]:
    """Return ``(lo, hi, nodes)`` for one block."""
    lo = _component_lower_bound(block.n, block.e, block.girth)
    if lo == 0:
        if is_planar(block.graph):
            return 0, 0, 0
        lo = 1
    now = time.monotonic()
    heuristic_deadline = now + min(20.0, 0.25 * max(deadline - now, 0.0))
    best_f, _ = _local_search(block, rng, block.faces_for_genus(lo), heuristic_deadline)
    hi = block.genus_for_faces(best_f)
    nodes = 0
    while lo < hi:
        if time.monotonic() > deadline:
            break
        try:
            rot, k = _search_faces(block, block.faces_for_genus(lo), deadline)
        except _Timeout as exc:
            nodes += exc.nodes
            break
        nodes += k
        if rot is not None:
            hi = lo
        else:
            lo += 1
    return lo, hi, nodes


def min_genus(g: SimpleGraph, budget: float = 60.0, seed: int = 0) -> GenusResult:
    """Minimum orientable genus of ``g``.

    Exact when the lower and upper bounds meet within ``budget`` seconds,
    otherwise ``status == "bounded"`` with certified ``[lo, hi]``.
    """
    deadline = time.monotonic() + budget
    rng = random.Random(seed)
    comps = connected_components(g)
    adj = {v: set(nb) for v, nb in enumerate(g.adjacency())}
    _reduce(adj)
    lo = hi = nodes = 0
    for blk in _blocks(adj):
        b_lo, b_hi, k = _solve_block(_Block(blk), deadline, rng)
        lo += b_lo
        hi += b_hi
        nodes += k
    faces = 2 * len(comps) - g.n + g.num_edges - 2 * hi if g.n else 0
    status = EXACT if lo == hi else BOUNDED
    return GenusResult(status, lo, hi, faces, nodes)


def best_rotation(g: SimpleGraph, target_genus: int, budget: float = 60.0, seed: int = 0) -> Optional[RotationSystem]:
    """Search a rotation system of ``g`` (connected) with genus <= target.

    Works on the unreduced graph, so the result is a genuine embedding of
    ``g``; used to cross-check ``min_genus`` and the planarity test.
    """
    block = _Block({v: set(nb) for v, nb in enumerate(g.adjacency())})
    if any(len(nb) == 0 for nb in block.nbrs):
        raise ValueError("best_rotation needs a graph without isolated vertices")
    deadline = time.monotonic() + budget
    target = block.faces_for_genus(target_genus)
    f, rot = _local_search(block, random.Random(seed), target, deadline)
    if f >= target:
        return RotationSystem.of(rot)
    try:
        rot, _ = _search_faces(block, target, deadline)
    except _Timeout:
        return None
    return RotationSystem.of(rot) if rot is not None else None
