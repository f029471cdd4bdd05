"""Brute-force reference implementations used only by the tests.

Each oracle avoids the library's algorithms: mutation is applied entry by
entry with Python integers, isomorphism tries every permutation, and genus
enumerates every rotation system with its own face tracer.
"""

import itertools
import random

import numpy as np


def mutate_entries(b, k):
    """Entry-wise mutation formula on a list-of-lists matrix (k 0-based)."""
    n = len(b)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == k or j == k:
                out[i][j] = -b[i][j]
            else:
                out[i][j] = b[i][j] + (abs(b[i][k]) * b[k][j] + b[i][k] * abs(b[k][j])) // 2
    return out


def brute_isomorphic(a, b):
    """Try every vertex permutation of two square integer matrices."""
    a, b = np.asarray(a), np.asarray(b)
    n = a.shape[0]
    if b.shape[0] != n:
        return False
    if sorted(a.flatten()) != sorted(b.flatten()):
        return False
    for perm in itertools.permutations(range(n)):
        p = list(perm)
        if np.array_equal(a[np.ix_(p, p)], b):
            return True
    return False


def brute_class_size(b):
    """Mutation class size up to isomorphism by pairwise brute-force tests."""
    seen = [np.asarray(b)]
    queue = [np.asarray(b)]
    while queue:
        cur = queue.pop()
        for k in range(cur.shape[0]):
            m = np.array(mutate_entries(cur.tolist(), k))
            if not any(brute_isomorphic(m, s) for s in seen):
                seen.append(m)
                queue.append(m)
    return len(seen)


def _faces(n, rot):
    succ = [{c[i]: c[(i + 1) % len(c)] for i in range(len(c))} for c in rot]
    seen = set()
    faces = 0
    for u in range(n):
        for v in rot[u]:
            if (u, v) in seen:
                continue
            faces += 1
            x, y = u, v
            while (x, y) not in seen:
                seen.add((x, y))
                x, y = y, succ[y][x]
    return faces


def _components(n, edges):
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    comps, seen = [], set()
    for s in range(n):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps, adj


def exhaustive_genus(n, edges):
    """Minimum genus over every rotation system, summed over components."""
    comps, adj = _components(n, edges)
    total = 0
    for comp in comps:
        idx = {v: i for i, v in enumerate(comp)}
        nbrs = [sorted(idx[u] for u in adj[v]) for v in comp]
        e = sum(len(x) for x in nbrs) // 2
        if e == 0:
            continue
        choices = []
        for nb in nbrs:
            if len(nb) <= 2:
                choices.append([tuple(nb)])
            else:
                choices.append([(nb[0],) + p for p in itertools.permutations(nb[1:])])
        best = 0
        for rot in itertools.product(*choices):
            best = max(best, _faces(len(comp), rot))
        total += (2 - len(comp) + e - best) // 2
    return total


def random_connected_graph(rng: random.Random, max_edges=10, max_vertices=8):
    """Random connected simple graph: a random tree plus extra edges."""
    n = rng.randint(1, max_vertices)
    edges = set()
    for v in range(1, n):
        u = rng.randrange(v)
        edges.add((u, v))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    rng.shuffle(pairs)
    extra = max(0, min(len(pairs), max_edges - len(edges)))
    edges |= set(pairs[:rng.randint(0, extra)])
    return n, sorted(edges)


def random_skew(rng: random.Random, n, bound=2, density=0.5):
    b = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                v = rng.randint(-bound, bound)
                b[i, j], b[j, i] = v, -v
    return b
