"""Exchange matrices, cluster quivers and mutation.

Vertices are 1-based at every public entry point (mutation indices, the text
format, ``multiplicity``); arrays are 0-based internally.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np

# |b_ij| above this could overflow int64 in the |b_ik| b_kj product.
_ENTRY_LIMIT = 2**31


class QuiverError(ValueError):
    """Raised for malformed matrices, quivers or quiver files."""


def _as_int_matrix(entries) -> np.ndarray:
    arr = np.array(entries, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise QuiverError("matrix must be square")
    return arr


def check_matrix(entries) -> Optional[str]:
    """Return a diagnostic for the first violated invariant, or None."""
    try:
        arr = _as_int_matrix(entries)
    except (QuiverError, ValueError, TypeError) as exc:
        return f"malformed matrix: {exc}"
    if arr.shape[0] == 0:
        return "empty matrix"
    n = arr.shape[0]
    for i in range(n):
        if arr[i, i] != 0:
            return f"not skew-symmetric: nonzero diagonal entry at ({i + 1},{i + 1})"
        for j in range(i + 1, n):
            if arr[i, j] != -arr[j, i]:
                return f"not skew-symmetric: b_{i + 1}{j + 1}={arr[i, j]}, b_{j + 1}{i + 1}={arr[j, i]}"
    return None


def check_arrows(n: int, arrows: Iterable[tuple[int, int, int]]) -> Optional[str]:
    """Diagnose a raw arrow list ``(i, j, m)`` (1-based) as a cluster quiver."""
    if n < 1:
        return "vertex count must be positive"
    mult: dict[tuple[int, int], int] = {}
    for i, j, m in arrows:
        if not (1 <= i <= n and 1 <= j <= n):
            return f"vertex out of range in arrow {i}->{j}"
        if m < 0:
            return f"negative multiplicity on {i}->{j}"
        if m == 0:
            continue
        if i == j:
            return f"loop at vertex {i}"
        mult[i, j] = mult.get((i, j), 0) + m
    for (i, j) in mult:
        if (j, i) in mult:
            return f"2-cycle between {min(i, j)} and {max(i, j)}"
    return None


@dataclass(frozen=True, eq=False)
class ExchangeMatrix:
    """A skew-symmetric integer matrix ``B = (b_ij)``."""

    entries: np.ndarray

    def __post_init__(self):
        diag = check_matrix(self.entries)
        if diag is not None:
            raise QuiverError(diag)
        arr = _as_int_matrix(self.entries)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, ij) -> int:
        i, j = ij
        return int(self.entries[i - 1, j - 1])

    def __eq__(self, other):
        if not isinstance(other, ExchangeMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.n, self.entries.tobytes()))

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def __repr__(self):
        return f"ExchangeMatrix({self.tolist()})"


def _mutate_array(b: np.ndarray, k0: int) -> np.ndarray:
    if np.abs(b).max(initial=0) >= _ENTRY_LIMIT:
        raise OverflowError("exchange matrix entries too large to mutate safely")
    col = b[:, k0]
    row = b[k0, :]
    out = b + (np.outer(np.abs(col), row) + np.outer(col, np.abs(row))) // 2
    out[k0, :] = -b[k0, :]
    out[:, k0] = -b[:, k0]
    return out


def _check_index(k: int, n: int) -> int:
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= n:
        raise IndexError(f"vertex {k} out of range 1..{n}")
    return int(k) - 1


def matrix_mutate(b: ExchangeMatrix, k: int) -> ExchangeMatrix:
    """Matrix mutation at direction ``k`` (1-based)."""
    k0 = _check_index(k, b.n)
    return ExchangeMatrix(_mutate_array(b.entries, k0))


class Quiver:
    """A cluster quiver: a directed multigraph without loops or 2-cycles.

    Stored as its exchange matrix; ``multiplicity(i, j)`` reads
    ``max(b_ij, 0)``.
    """

    __slots__ = ("_b", "_hash")

    def __init__(self, b):
        if isinstance(b, ExchangeMatrix):
            arr = b.entries
        else:
            diag = check_matrix(b)
            if diag is not None:
                raise QuiverError(diag)
            arr = _as_int_matrix(b)
            arr.setflags(write=False)
        self._b = arr
        self._hash = None

    @classmethod
    def _trusted(cls, arr: np.ndarray) -> "Quiver":
        q = cls.__new__(cls)
        arr.setflags(write=False)
        q._b = arr
        q._hash = None
        return q

    @classmethod
    def from_arrows(cls, n: int, arrows: Iterable[tuple[int, int]] | Iterable[tuple[int, int, int]]) -> "Quiver":
        """Build from 1-based ``(i, j)`` or ``(i, j, m)`` arrow records."""
        triples = []
        for a in arrows:
            triples.append((a[0], a[1], a[2] if len(a) > 2 else 1))
        diag = check_arrows(n, triples)
        if diag is not None:
            raise QuiverError(diag)
        b = np.zeros((n, n), dtype=np.int64)
        for i, j, m in triples:
            b[i - 1, j - 1] += m
            b[j - 1, i - 1] -= m
        return cls._trusted(b)

    @property
    def n(self) -> int:
        return self._b.shape[0]

    @property
    def b(self) -> np.ndarray:
        """Read-only exchange matrix array (0-based)."""
        return self._b

    def multiplicity(self, i: int, j: int) -> int:
        return max(int(self._b[i - 1, j - 1]), 0)

    def arrows(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(i, j, m)`` with m > 0, 1-based, in lexicographic order."""
        n = self.n
        for i in range(n):
            for j in range(n):
                m = int(self._b[i, j])
                if m > 0:
                    yield i + 1, j + 1, m

    def max_entry(self) -> int:
        return int(np.abs(self._b).max(initial=0))

    def relabel(self, perm) -> "Quiver":
        """Vertex ``v`` (0-based) of the result is vertex ``perm[v]`` of self."""
        p = np.asarray(perm, dtype=np.intp)
        return Quiver._trusted(self._b[np.ix_(p, p)].copy())

    def opposite(self) -> "Quiver":
        return Quiver._trusted(-self._b)

    def __eq__(self, other):
        if not isinstance(other, Quiver):
            return NotImplemented
        return np.array_equal(self._b, other._b)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self._b.tobytes()))
        return self._hash

    def __repr__(self):
        arrows = ", ".join(f"{i}->{j}" + (f"x{m}" if m > 1 else "") for i, j, m in self.arrows())
        return f"Quiver(n={self.n}, [{arrows}])"


def quiver_from_matrix(b: ExchangeMatrix) -> Quiver:
    return Quiver(b)


def matrix_from_quiver(q: Quiver) -> ExchangeMatrix:
    return ExchangeMatrix(q.b)


def quiver_mutate(q: Quiver, k: int) -> Quiver:
    """Quiver mutation at vertex ``k`` (1-based).

    Follows the three-step rule literally: compose paths through k, reverse
    arrows at k, then cancel 2-cycles. The result agrees with
    :func:`matrix_mutate` on the exchange matrix, which the tests check.
    """
    k0 = _check_index(k, q.n)
    b = q.b
    if np.abs(b).max(initial=0) >= _ENTRY_LIMIT:
        raise OverflowError("quiver multiplicities too large to mutate safely")
    arrows = np.maximum(b, 0)
    into_k = arrows[:, k0].copy()
    out_of_k = arrows[k0, :].copy()
    # step 1: one new arrow i->j per path i->k->j
    new = arrows + np.outer(into_k, out_of_k)
    # step 2: reverse arrows at k
    new[:, k0] = out_of_k
    new[k0, :] = into_k
    # step 3: cancel 2-cycles pairwise
    return Quiver._trusted(new - new.T)


def mutate_sequence(q: Quiver, seq: Iterable[int]) -> Quiver:
    """Apply mutations left to right."""
    for k in seq:
        q = quiver_mutate(q, k)
    return q


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset

    def __post_init__(self):
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise QuiverError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise QuiverError(f"edge {e} out of range")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges) -> "SimpleGraph":
        return cls(n, frozenset(tuple(e) for e in edges))

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v in sorted(self.edges):
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def relabel(self, perm) -> "SimpleGraph":
        """Vertex ``perm[v]`` of self becomes vertex ``v``."""
        inv = {old: new for new, old in enumerate(perm)}
        return SimpleGraph(self.n, frozenset((inv[u], inv[v]) for u, v in self.edges))

    def disjoint_union(self, other: "SimpleGraph") -> "SimpleGraph":
        shifted = ((u + self.n, v + self.n) for u, v in other.edges)
        return SimpleGraph(self.n + other.n, self.edges | frozenset(shifted))


def validate(obj) -> Optional[str]:
    """Diagnose a quiver, exchange matrix or raw square matrix; None if valid.

    An arrow list given as ``(n, arrows)`` is checked as a cluster quiver.
    Never raises.
    """
    try:
        if isinstance(obj, Quiver):
            return check_matrix(obj.b)
        if isinstance(obj, ExchangeMatrix):
            return check_matrix(obj.entries)
        if isinstance(obj, tuple) and len(obj) == 2 and isinstance(obj[0], int):
            n, arrows = obj
            return check_arrows(n, [(a[0], a[1], a[2] if len(a) > 2 else 1) for a in arrows])
        return check_matrix(obj)
    except Exception as exc:  # diagnostics only
        return f"malformed input: {exc}"


def underlying_graph(q: Quiver) -> SimpleGraph:
    """Drop orientation and multiplicity."""
    nz = np.argwhere(q.b > 0)
    return SimpleGraph(q.n, frozenset((int(i), int(j)) for i, j in nz))


# -- text format -------------------------------------------------------------

def dumps_quiver(q: Quiver) -> str:
    """Canonical text: ``quiver <n>`` then ``i j m`` lines sorted by (i, j)."""
    lines = [f"quiver {q.n}"]
    lines += [f"{i} {j} {m}" for i, j, m in q.arrows()]
    return "\n".join(lines) + "\n"


def loads_quiver(text: str) -> Quiver:
    header = None
    arrows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2 or parts[0] != "quiver":
                raise QuiverError(f"line {lineno}: expected 'quiver <n>'")
            try:
                header = int(parts[1])
            except ValueError:
                raise QuiverError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
            continue
        if len(parts) != 3:
            raise QuiverError(f"line {lineno}: expected 'i j m'")
        try:
            arrows.append(tuple(int(p) for p in parts))
        except ValueError:
            raise QuiverError(f"line {lineno}: non-integer field") from None
    if header is None:
        raise QuiverError("missing 'quiver <n>' header")
    return Quiver.from_arrows(header, arrows)


def read_quiver(path) -> Quiver:
    with open(path, encoding="utf-8") as fh:
        return loads_quiver(fh.read())


def write_quiver(q: Quiver, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_quiver(q))


def dumps_graph(g: SimpleGraph) -> str:
    """Text form: ``graph <n>`` then ``u v`` lines (1-based, u < v, sorted)."""
    lines = [f"graph {g.n}"] + [f"{u + 1} {v + 1}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def loads_graph(text: str) -> SimpleGraph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if header is None:
                if len(parts) != 2 or parts[0] != "graph":
                    raise QuiverError(f"line {lineno}: expected 'graph <n>'")
                header = int(parts[1])
                continue
            if len(parts) != 2:
                raise QuiverError(f"line {lineno}: expected 'u v'")
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            if isinstance(exc, QuiverError):
                raise
            raise QuiverError(f"line {lineno}: non-integer field") from None
        edges.append((u - 1, v - 1))
    if header is None:
        raise QuiverError("missing 'graph <n>' header")
    return SimpleGraph.from_edges(header, edges)
