"""Blocks with outlets, gluing, and the explicit block constructions.

Block shapes come from the bundled ``data/blocks.dat``.  A gluing is a list
of blocks plus a partial matching of their outlets; the glued quiver is the
sum of the blocks' exchange matrices after identifying matched outlets,
which cancels opposite arrow pairs.  Every block also carries its puzzle
piece, so a gluing can be realized as a triangulation and checked against
its signed adjacency matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Optional

import numpy as np

from .quiver import Quiver, SimpleGraph
from .surface import SurfaceSignature, Triangulation, topology

BOUNDARY = "~"


class BlockError(ValueError):
    """Malformed block data or an invalid outlet matching."""


@dataclass(frozen=True)
class Block:
    kind: str
    vertices: tuple
    outlets: frozenset
    arrows: tuple  # (source, target, multiplicity)
    pieces: tuple = ()

    def matrix(self) -> np.ndarray:
        idx = {v: i for i, v in enumerate(self.vertices)}
        b = np.zeros((len(self.vertices),) * 2, dtype=np.int64)
        for s, t, m in self.arrows:
            b[idx[s], idx[t]] += m
            b[idx[t], idx[s]] -= m
        return b

    def quiver(self) -> Quiver:
        return Quiver(self.matrix())


def parse_blocks(text: str) -> dict[str, Block]:
    """Parse the ``blocks.dat`` format (documented in the file header)."""
    blocks: dict[str, Block] = {}
    cur: Optional[dict] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, *rest = line.split()
        if head == "block":
            if cur is not None or len(rest) != 1:
                raise BlockError(f"line {lineno}: unexpected block header")
            cur = {"kind": rest[0], "vertices": (), "outlets": (), "arrows": [], "pieces": []}
        elif cur is None:
            raise BlockError(f"line {lineno}: record outside a block stanza")
        elif head == "vertices":
            cur["vertices"] = tuple(rest)
        elif head == "outlets":
            cur["outlets"] = tuple(rest)
        elif head == "arrow" and len(rest) in (2, 3):
            cur["arrows"].append((rest[0], rest[1], int(rest[2]) if len(rest) == 3 else 1))
        elif head == "piece" and len(rest) == 3:
            cur["pieces"].append(tuple(rest))
        elif head == "end":
            names = set(cur["vertices"])
            if not set(cur["outlets"]) <= names:
                raise BlockError(f"block {cur['kind']}: outlet is not a vertex")
            for s, t, m in cur["arrows"]:
                if s not in names or t not in names or s == t or m < 1:
                    raise BlockError(f"block {cur['kind']}: bad arrow {s}->{t}")
            for p in cur["pieces"]:
                if any(x != BOUNDARY and x not in names for x in p):
                    raise BlockError(f"block {cur['kind']}: piece names an unknown vertex")
            blk = Block(cur["kind"], cur["vertices"], frozenset(cur["outlets"]),
                        tuple(cur["arrows"]), tuple(cur["pieces"]))
            piece = _piece_matrix(blk)
            if piece is not None and not np.array_equal(piece, blk.matrix()):
                raise BlockError(f"block {blk.kind}: puzzle piece disagrees with arrows")
            blocks[blk.kind] = blk
            cur = None
        else:
            raise BlockError(f"line {lineno}: unrecognized record {head!r}")
    if cur is not None:
        raise BlockError("unterminated block stanza")
    return blocks


def _piece_matrix(blk: Block) -> Optional[np.ndarray]:
    """Signed adjacency of the block's puzzle piece, in vertex order."""
    if not blk.pieces:
        return None
    tri, ids = _realize([blk], OutletMatching(()), close=False)
    from .surface import signed_adjacency

    b = signed_adjacency(tri).entries
    order = [ids[0, v] - 1 for v in blk.vertices]
    return b[np.ix_(order, order)]


@lru_cache(maxsize=None)
def standard_blocks() -> dict[str, Block]:
    text = resources.files("qga").joinpath("data/blocks.dat").read_text(encoding="utf-8")
    return parse_blocks(text)


def block(kind: str) -> Block:
    try:
        return standard_blocks()[kind]
    except KeyError:
        raise BlockError(f"unknown block kind {kind!r}") from None


# -- matchings and gluing -----------------------------------------------------

@dataclass(frozen=True)
class OutletMatching:
    """Pairs ``((block index, outlet), (block index, outlet))``.

    Stored normalized: the end with the lower block index comes first and
    the pairs are sorted, so equal matchings compare equal.
    """

    pairs: tuple

    def __post_init__(self):
        norm = []
        for a, b in self.pairs:
            a, b = (int(a[0]), str(a[1])), (int(b[0]), str(b[1]))
            norm.append((a, b) if a <= b else (b, a))
        object.__setattr__(self, "pairs", tuple(sorted(norm)))

    def partner(self) -> dict:
        out = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out


def check_matching(blocks: list[Block], matching: OutletMatching) -> Optional[str]:
    seen = set()
    for a, b in matching.pairs:
        for bi, name in (a, b):
            if not 0 <= bi < len(blocks):
                return f"block index {bi} out of range"
            if name not in blocks[bi].outlets:
                return f"{name} is not an outlet of block {bi} ({blocks[bi].kind})"
            if (bi, name) in seen:
                return f"outlet {name} of block {bi} is matched twice"
            seen.add((bi, name))
        if a[0] == b[0]:
            return f"outlets {a[1]} and {b[1]} belong to the same block {a[0]}"
    return None


def vertex_ids(blocks: list[Block], matching: OutletMatching) -> dict:
    """Map ``(block index, vertex)`` to 1-based glued vertex ids.

    Ids follow first appearance, scanning blocks in order and each block's
    vertices in data order.
    """
    diag = check_matching(blocks, matching)
    if diag is not None:
        raise BlockError(diag)
    partner = matching.partner()
    ids: dict = {}
    nxt = 1
    for bi, blk in enumerate(blocks):
        for v in blk.vertices:
            key = (bi, v)
            other = partner.get(key)
            if other is not None and other in ids:
                ids[key] = ids[other]
            else:
                ids[key] = nxt
                nxt += 1
    return ids


def glue(blocks: list[Block], matching: OutletMatching) -> Quiver:
    """Glue matched outlets and cancel 2-cycles."""
    ids = vertex_ids(blocks, matching)
    n = max(ids.values(), default=0)
    b = np.zeros((n, n), dtype=np.int64)
    for bi, blk in enumerate(blocks):
        for s, t, m in blk.arrows:
            i, j = ids[bi, s] - 1, ids[bi, t] - 1
            b[i, j] += m
            b[j, i] -= m
    return Quiver(b)


def _realize(blocks: list[Block], matching: OutletMatching, close: bool = True):
    ids = vertex_ids(blocks, matching)
    n = max(ids.values(), default=0)
    tris = []
    boundary = 0

    def side(bi, x):
        nonlocal boundary
        if x == BOUNDARY:
            boundary += 1
            return -boundary
        return ids[bi, x]

    for bi, blk in enumerate(blocks):
        if not blk.pieces:
            raise BlockError(f"block {blk.kind} has no puzzle piece")
        for p in blk.pieces:
            tris.append(tuple(side(bi, x) for x in p))
    if close:
        partner = matching.partner()
        for bi, blk in enumerate(blocks):
            for v in sorted(blk.outlets):
                if (bi, v) not in partner:
                    # an unmatched outlet borders a triangle with two boundary sides
                    tris.append((ids[bi, v], side(bi, BOUNDARY), side(bi, BOUNDARY)))
    tris = [tuple(n - x if x < 0 else x for x in t) for t in tris]
    tri = Triangulation(SurfaceSignature(0, 0, 0, 0), n, tuple(tris))
    c = boundary
    topo = _loose_topology(tri, c)
    sig = SurfaceSignature(topo.genus or 0, topo.boundary_components, topo.punctures, topo.boundary_points)
    return Triangulation(sig, n, tuple(tris)), ids


def _loose_topology(tri: Triangulation, c: int):
    sig = SurfaceSignature(0, 1 if c else 0, 0, c)
    return topology(Triangulation(sig, tri.n, tri.triangles))


def realize(blocks: list[Block], matching: OutletMatching) -> Triangulation:
    """Triangulation whose puzzle pieces are the blocks' pieces.

    Matched outlets become shared arcs; an unmatched outlet gets a triangle
    with two boundary sides.  Arc labels are the glued vertex ids, so
    ``signed_adjacency(realize(...))`` is comparable with ``glue(...)``.
    """
    from .surface import check

    tri, _ = _realize(blocks, matching)
    return check(tri)


@dataclass(frozen=True)
class Gluing:
    blocks: tuple
    matching: OutletMatching
    names: dict = field(default_factory=dict)  # (block index, vertex) -> descriptive name

    def quiver(self) -> Quiver:
        return glue(list(self.blocks), self.matching)

    def triangulation(self) -> Triangulation:
        return realize(list(self.blocks), self.matching)

    def ids(self) -> dict:
        return vertex_ids(list(self.blocks), self.matching)


# -- R_n -------------------------------------------------------------------------

def _rn_index(n: int, i: int, j: int) -> int:
    """0-based index of v(i, j): cycle i in 1..n+1, position j mod 4n."""
    return (i - 1) * 4 * n + j % (4 * n)


def construct_rn(n: int) -> SimpleGraph:
    """n+1 concentric 4n-cycles, spokes between consecutive cycles, and 2n
    chords joining antipodal vertices of the outer cycle."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("R_n needs n >= 1")
    m = 4 * n
    edges = []
    for i in range(1, n + 2):
        for j in range(m):
            edges.append((_rn_index(n, i, j), _rn_index(n, i, j + 1)))
            if i <= n:
                edges.append((_rn_index(n, i, j), _rn_index(n, i + 1, j)))
    for j in range(2 * n):
        edges.append((_rn_index(n, n + 1, j), _rn_index(n, n + 1, j + 2 * n)))
    return SimpleGraph.from_edges(m * (n + 1), edges)


def rn_rectangles(n: int) -> list[tuple[str, tuple[int, int, int, int], bool]]:
    """``(name, corners, in_S)`` for the 4n^2 + 2n rectangles of R_n.

    Corners are listed cyclically.  ``Rect(i,j)`` lies between cycles i and
    i+1; ``Out(j)`` is bounded by two outer-cycle edges and two chords.  The
    mutually distant set S contains ``Rect(1,0)``: ``Rect(i,j)`` is in S iff
    ``i - 1 + j`` is even, and ``Out(j)`` is in S iff ``Rect(n,j)`` is not.
    """
    out = []
    for i in range(1, n + 1):
        for j in range(4 * n):
            corners = (_rn_index(n, i, j), _rn_index(n, i, j + 1),
                       _rn_index(n, i + 1, j + 1), _rn_index(n, i + 1, j))
            out.append((f"Rect({i},{j})", corners, (i - 1 + j) % 2 == 0))
    for j in range(2 * n):
        corners = (_rn_index(n, n + 1, j), _rn_index(n, n + 1, j + 1),
                   _rn_index(n, n + 1, j + 1 + 2 * n), _rn_index(n, n + 1, j + 2 * n))
        out.append((f"Out({j})", corners, (n - 1 + j) % 2 == 1))
    return out


# -- T_n -------------------------------------------------------------------------

@dataclass(frozen=True)
class TnConstruction:
    """T_n with its gluing data.

    Quiver vertices ``1..4n(n+1)`` are the R_n vertices (R_n index + 1), then
    the side vertices of the rectangle gadgets, then the inner vertices of
    the type-IV blocks.  ``subdivision`` maps each R_n edge to the quiver path
    (1-based vertex ids) that realizes it.
    """

    n: int
    gluing: Gluing
    quiver: Quiver
    relabel: dict          # glued vertex id -> final vertex id
    subdivision: dict      # (u, v) R_n edge, 0-based -> tuple of 1-based ids
    counts: dict

    def triangulation(self) -> Triangulation:
        tri = self.gluing.triangulation()
        mapping = self.relabel
        tris = tuple(tuple(mapping[x] if x <= tri.n else x for x in t) for t in tri.triangles)
        return Triangulation(tri.signature, tri.n, tris)


def tn_construction(n: int) -> TnConstruction:
    """Glue 8n^2 + 4n type-II blocks and 2n type-IV blocks into T_n.

    Each rectangle of S with cyclic corners c0..c3 gets side vertices
    s0..s3 (s_i on the side c_i c_{i+1}) and four type-II blocks
    ``(s_{i-1}, s_i, c_i)``; consecutive blocks share s_i, so the gadget is
    an oriented 4-cycle on the s_i with a triangle at each corner.  A corner
    of R_n lies in two rectangles of S (or one, plus one type-IV block on
    the innermost cycle) and is glued across them.  Every innermost-cycle
    edge outside S becomes a type-IV block with outlets at its endpoints.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("T_n needs n >= 1")
    II, IV = block("II"), block("IV")
    blocks: list[Block] = []
    pairs = []
    names: dict = {}
    corner_slots: dict[int, list] = {}
    side_name: dict = {}
    subdivision_sides: dict = {}
    n_rect = 0
    for rname, corners, in_s in rn_rectangles(n):
        if not in_s:
            continue
        n_rect += 1
        base = len(blocks)
        for i in range(4):
            blocks.append(II)
            names[base + i, "o1"] = f"{rname}.s{(i - 1) % 4}"
            names[base + i, "o2"] = f"{rname}.s{i}"
            names[base + i, "o3"] = f"R{corners[i]}"
            corner_slots.setdefault(corners[i], []).append((base + i, "o3"))
        for i in range(4):
            # s_i is o2 of block i and o1 of block i+1
            pairs.append(((base + i, "o2"), (base + (i + 1) % 4, "o1")))
            u, v = corners[i], corners[(i + 1) % 4]
            side_name[base + i] = (u, v)
            subdivision_sides[(min(u, v), max(u, v))] = (base + i, "o2")
    inner_edges = []
    for j in range(4 * n):
        u, v = _rn_index(n, 1, j), _rn_index(n, 1, j + 1)
        if (min(u, v), max(u, v)) not in subdivision_sides:
            bi = len(blocks)
            blocks.append(IV)
            names[bi, "o1"] = f"R{u}"
            names[bi, "o2"] = f"R{v}"
            names[bi, "l"] = f"IV{j}.l"
            names[bi, "r"] = f"IV{j}.r"
            corner_slots.setdefault(u, []).append((bi, "o1"))
            corner_slots.setdefault(v, []).append((bi, "o2"))
            inner_edges.append((u, v))
    for r, slots in sorted(corner_slots.items()):
        if len(slots) != 2:
            raise AssertionError(f"R_n vertex {r} lies in {len(slots)} blocks")
        pairs.append((slots[0], slots[1]))
    matching = OutletMatching(tuple(pairs))
    gluing = Gluing(tuple(blocks), matching, names)
    ids = gluing.ids()
    glued = gluing.quiver()

    # final order: R_n vertices, gadget side vertices, type-IV inner vertices
    rn_v = 4 * n * (n + 1)
    final: dict[int, int] = {}
    for r, slots in corner_slots.items():
        final[ids[slots[0]]] = r + 1
    rest_side = sorted({gid for key, gid in ids.items() if gid not in final and blocks[key[0]] is II})
    rest_iv = sorted({gid for gid in ids.values() if gid not in final and gid not in rest_side})
    for k, gid in enumerate(rest_side + rest_iv):
        final[gid] = rn_v + 1 + k
    perm = [0] * glued.n
    for gid, fid in final.items():
        perm[fid - 1] = gid - 1
    q = glued.relabel(perm)

    subdivision = {}
    for (u, v), key in subdivision_sides.items():
        subdivision[u, v] = (u + 1, final[ids[key]], v + 1)
    for u, v in inner_edges:
        subdivision[min(u, v), max(u, v)] = (min(u, v) + 1, max(u, v) + 1)
    counts = {"II": sum(1 for b_ in blocks if b_ is II), "IV": len(inner_edges),
              "S": n_rect, "vertices": q.n}
    return TnConstruction(n, gluing, q, final, subdivision, counts)


def construct_tn(n: int) -> Quiver:
    return tn_construction(n).quiver


def rn_embeds_as_subdivision(n: int, tn: Optional[TnConstruction] = None) -> bool:
    """Check that every R_n edge is realized in T_n's underlying graph by
    its subdivision path, with internally disjoint paths."""
    from .quiver import underlying_graph

    tn = tn or tn_construction(n)
    g = underlying_graph(tn.quiver)
    rn = construct_rn(n)
    used_inner: set = set()
    for u, v in rn.edges:
        path = tn.subdivision.get((u, v))
        if path is None or path[0] != u + 1 or path[-1] != v + 1:
            return False
        for a, b in zip(path, path[1:]):
            if not g.has_edge(a - 1, b - 1):
                return False
        inner = set(path[1:-1])
        if inner & used_inner or any(x <= rn.n for x in inner):
            return False
        used_inner |= inner
    return True


def rn_literal_subgraph(n: int, tn: Optional[TnConstruction] = None) -> bool:
    """Whether R_n's edges are edges of T_n on the shared vertex labels."""
    from .quiver import underlying_graph

    tn = tn or tn_construction(n)
    g = underlying_graph(tn.quiver)
    return all(g.has_edge(u, v) for u, v in construct_rn(n).edges)


def tn_expected_counts(n: int) -> dict:
    return {"II": 8 * n * n + 4 * n, "IV": 2 * n, "vertices": 12 * n * n + 12 * n,
            "punctures": 4 * n * n + 2 * n + 2}


# -- torus and sphere --------------------------------------------------------------

def torus_planar_gluing(p: int) -> Gluing:
    """p rectangles with a diagonal, glued cyclically.

    Rectangle i is two type-II blocks ``A_i = (d_i, v_{i+1}, h_i)`` and
    ``B_i = (v_i, h_i, d_i)``; A_i and B_i share d_i and h_i, and A_i's
    v_{i+1} is glued to B_{i+1}'s.
    """
    if not isinstance(p, int) or p < 1:
        raise ValueError("torus quiver needs p >= 1")
    II = block("II")
    blocks = [II] * (2 * p)
    pairs = []
    names = {}
    for i in range(p):
        a, b, b_next = 2 * i, 2 * i + 1, (2 * (i + 1) + 1) % (2 * p)
        pairs.append(((a, "o1"), (b, "o3")))  # d_i
        pairs.append(((a, "o3"), (b, "o2")))  # h_i
        pairs.append(((a, "o2"), (b_next, "o1")))  # v_{i+1}
        names.update({(a, "o1"): f"d{i}", (a, "o2"): f"v{(i + 1) % p}", (a, "o3"): f"h{i}",
                      (b, "o1"): f"v{i}", (b, "o2"): f"h{i}", (b, "o3"): f"d{i}"})
    return Gluing(tuple(blocks), OutletMatching(tuple(pairs)), names)


def torus_planar_quiver(p: int) -> Quiver:
    return torus_planar_gluing(p).quiver()


def sphere4_gluing() -> Gluing:
    """Four type-II blocks on vertices 1, 1', 2, 2', 3, 3'.

    Blocks ``(1,2,3)``, ``(1,2',3')``, ``(1',2,3')``, ``(1',2',3)``; every
    vertex is in exactly two of them.
    """
    II = block("II")
    spec = [("1", "2", "3"), ("1", "2'", "3'"), ("1'", "2", "3'"), ("1'", "2'", "3")]
    names = {}
    where: dict[str, list] = {}
    for bi, labels in enumerate(spec):
        for slot, lab in zip(("o1", "o2", "o3"), labels):
            names[bi, slot] = lab
            where.setdefault(lab, []).append((bi, slot))
    pairs = tuple((w[0], w[1]) for _, w in sorted(where.items()))
    return Gluing((II,) * 4, OutletMatching(pairs), names)


def sphere4_quiver() -> Quiver:
    return sphere4_gluing().quiver()
