"""Ideal triangulations of marked surfaces, flips and signed adjacency.

A triangulation is stored combinatorially: arcs are labelled ``1..n``,
boundary segments ``n+1..n+c``, and each triangle is a triple of side labels
in clockwise order.  A triple with a repeated label is a self-folded
triangle: the repeated label is the folded arc, the other one its enclosing
outer arc.

Topology is recovered by gluing triangle corners.  In a triangle, slot j
runs from corner j to corner j+1; two slots carrying the same arc are glued
with opposite orientation, which identifies ``corner(t, j)`` with
``corner(t', j'+1)`` and ``corner(t, j+1)`` with ``corner(t', j')``.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .quiver import ExchangeMatrix, Quiver


class SurfaceError(ValueError):
    """Invalid signature, triangulation or triangulation file."""


@dataclass(frozen=True)
class SurfaceSignature:
    """Genus g, boundary components b, punctures p, boundary marked points c."""

    g: int
    b: int
    p: int
    c: int

    def __post_init__(self):
        diag = check_signature(self.g, self.b, self.p, self.c)
        if diag is not None:
            raise SurfaceError(diag)

    @property
    def n(self) -> int:
        return 6 * self.g + 3 * self.b + 3 * self.p + self.c - 6


def check_signature(g: int, b: int, p: int, c: int) -> Optional[str]:
    if min(g, b, p, c) < 0:
        return "signature entries must be non-negative"
    if b == 0 and c != 0:
        return "marked boundary points without boundary"
    if b > 0 and c < b:
        return "each boundary component needs a marked point"
    return None


def arc_count(sig: SurfaceSignature) -> int:
    """Number of arcs in any ideal triangulation: ``6g + 3b + 3p + c - 6``."""
    n = sig.n
    if n < 1:
        raise SurfaceError("surface admits no triangulation in scope")
    return n


@dataclass(frozen=True)
class Topology:
    """Surface data recovered from the corner gluing of a triangle list."""

    vertices: int
    punctures: int
    boundary_components: int
    boundary_points: int
    genus: Optional[int]
    connected: bool


@dataclass(frozen=True)
class Triangulation:
    """Unchecked container; use :func:`validate_triangulation` on new data."""

    signature: SurfaceSignature
    n: int
    triangles: tuple

    def __post_init__(self):
        object.__setattr__(self, "triangles", tuple(tuple(int(x) for x in t) for t in self.triangles))

    @property
    def c(self) -> int:
        return self.signature.c

    @property
    def arcs(self) -> range:
        return range(1, self.n + 1)

    @property
    def boundary_segments(self) -> range:
        return range(self.n + 1, self.n + self.c + 1)

    def is_arc(self, x: int) -> bool:
        return 1 <= x <= self.n

    def folded_pairs(self) -> dict[int, int]:
        """Map folded arc -> outer arc over the self-folded triangles."""
        out = {}
        for t in self.triangles:
            folded = _folded_label(t)
            if folded is not None:
                out[folded] = next(x for x in t if x != folded)
        return out

    def normal_form(self) -> tuple:
        """Triangles rotated to their least cyclic form, then sorted."""
        return tuple(sorted(min(t[i:] + t[:i] for i in range(3)) for t in self.triangles))

    def self_folded(self, t: tuple) -> bool:
        return _folded_label(t) is not None


def _folded_label(t: tuple) -> Optional[int]:
    a, b, c = t
    if a == b or a == c:
        return a
    if b == c:
        return b
    return None


# -- validation and topology ----------------------------------------------------

def _slot_index(tri: Triangulation) -> dict[int, list[tuple[int, int]]]:
    slots: dict[int, list[tuple[int, int]]] = {}
    for ti, t in enumerate(tri.triangles):
        for j, x in enumerate(t):
            slots.setdefault(x, []).append((ti, j))
    return slots


def topology(tri: Triangulation) -> Topology:
    """Glue corners and count vertices, punctures, boundary and genus.

    Assumes the slot-count invariants hold (see :func:`validate_triangulation`).
    """
    nt = len(tri.triangles)
    parent = list(range(3 * nt))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    tri_parent = list(range(nt))

    def tfind(x):
        while tri_parent[x] != x:
            tri_parent[x] = tri_parent[tri_parent[x]]
            x = tri_parent[x]
        return x

    slots = _slot_index(tri)
    boundary_ends = []
    for label, places in slots.items():
        if len(places) == 2:
            (t, j), (u, k) = places
            union(3 * t + j, 3 * u + (k + 1) % 3)
            union(3 * t + (j + 1) % 3, 3 * u + k)
            rt, ru = tfind(t), tfind(u)
            if rt != ru:
                tri_parent[max(rt, ru)] = min(rt, ru)
        else:
            (t, j), = places
            boundary_ends.append((3 * t + j, 3 * t + (j + 1) % 3))
    connected = len({tfind(t) for t in range(nt)}) <= 1
    vertices = {find(x) for x in range(3 * nt)}
    bverts = set()
    # boundary segments form cycles through boundary vertices
    bparent = {}

    def bfind(x):
        while bparent[x] != x:
            bparent[x] = bparent[bparent[x]]
            x = bparent[x]
        return x

    for a, b in boundary_ends:
        va, vb = find(a), find(b)
        bverts.update((va, vb))
        bparent.setdefault(va, va)
        bparent.setdefault(vb, vb)
        ra, rb = bfind(va), bfind(vb)
        if ra != rb:
            bparent[ra] = rb
    b = len({bfind(v) for v in bverts})
    v = len(vertices)
    e = tri.n + len(boundary_ends)
    chi = v - e + nt
    twice_g = 2 - b - chi
    genus = twice_g // 2 if connected and twice_g >= 0 and twice_g % 2 == 0 else None
    return Topology(v, v - len(bverts), b, len(boundary_ends), genus, connected)


def validate_triangulation(tri: Triangulation) -> Optional[str]:
    """Return a diagnostic for the first violated invariant, or None."""
    sig = tri.signature
    if sig.n != tri.n:
        return f"arc count mismatch: expected {sig.n}"
    if tri.n < 1:
        return "surface admits no triangulation in scope"
    total = tri.n + tri.c
    for t in tri.triangles:
        if len(t) != 3:
            return f"triangle {t} does not have three sides"
        for x in t:
            if not 1 <= x <= total:
                return f"unknown side label {x}"
        if len(set(t)) == 1:
            return f"triangle {t} uses one label three times"
        folded = _folded_label(t)
        if folded is not None:
            outer = next(x for x in t if x != folded)
            if not tri.is_arc(folded) or not tri.is_arc(outer):
                return f"self-folded triangle {t} must consist of arcs"
    counts = Counter(x for t in tri.triangles for x in t)
    for x in tri.arcs:
        if counts[x] != 2:
            return f"arc {x} appears in {counts[x]} triangle sides, expected 2"
    for x in tri.boundary_segments:
        if counts[x] != 1:
            return f"boundary segment {x} appears in {counts[x]} triangle sides, expected 1"
    if 3 * len(tri.triangles) != 2 * tri.n + tri.c:
        return "side slot count differs from 2n + c"
    topo = topology(tri)
    if not topo.connected:
        return "triangles do not form a connected surface"
    got = (topo.genus, topo.boundary_components, topo.punctures, topo.boundary_points)
    want = (sig.g, sig.b, sig.p, sig.c)
    if got != want:
        return f"gluing gives surface (g,b,p,c)={got}, signature says {want}"
    return None


def check(tri: Triangulation) -> Triangulation:
    diag = validate_triangulation(tri)
    if diag is not None:
        raise SurfaceError(diag)
    return tri


# -- signed adjacency and flips ---------------------------------------------

def pi(tri: Triangulation, i: int) -> int:
    """The outer arc if ``i`` is folded inside a self-folded triangle, else ``i``."""
    if not tri.is_arc(i):
        raise SurfaceError(f"unknown arc {i}")
    return tri.folded_pairs().get(i, i)


def signed_adjacency(tri: Triangulation) -> ExchangeMatrix:
    """``B(T)``: sum of per-triangle clockwise contributions.

    Each non-self-folded triangle contributes, for every pair of consecutive
    side slots ``(x, y)`` in clockwise order and every pair of arcs i, j with
    ``pi(i) = x`` and ``pi(j) = y``, +1 to ``b_ij`` and -1 to ``b_ji``.
    Boundary segments have no rows.
    """
    n = tri.n
    folded = tri.folded_pairs()
    pre: dict[int, list[int]] = {x: [x] for x in tri.arcs}
    for f, outer in folded.items():
        pre[outer].append(f)
    b = np.zeros((n, n), dtype=np.int64)
    for t in tri.triangles:
        if _folded_label(t) is not None:
            continue
        for s in range(3):
            x, y = t[s], t[(s + 1) % 3]
            if not (tri.is_arc(x) and tri.is_arc(y)):
                continue
            for i in pre[x]:
                for j in pre[y]:
                    b[i - 1, j - 1] += 1
                    b[j - 1, i - 1] -= 1
    return ExchangeMatrix(b)


def triangulation_quiver(tri: Triangulation) -> Quiver:
    return Quiver(signed_adjacency(tri))


def _rotate_to(t: tuple, k: int) -> tuple:
    j = t.index(k)
    return t[j:] + t[:j]


def _rotate_from(t: tuple, j: int) -> tuple:
    """Rotate ``t`` (first entry k) so that k sits at position j."""
    return t[3 - j:] + t[:3 - j] if j else t


def flippable(tri: Triangulation, k: int) -> bool:
    return tri.is_arc(k) and k not in tri.folded_pairs()


def flip(tri: Triangulation, k: int) -> Triangulation:
    """Replace arc ``k`` by the other diagonal of its quadrilateral.

    With the two triangles rotated to ``(k, a, b)`` and ``(k, c, d)`` the
    result is ``(k, b, c)`` and ``(k, d, a)``; the new arc keeps label k
    and sits at the same position of each triple as before.  Flipping k twice
    restores the triangulation up to the order of the triangle list (see
    :meth:`Triangulation.normal_form`).
    Repeated sides need no special casing: if ``b == c`` or ``d == a`` the
    flip creates a self-folded triangle, and flipping the outer arc of a
    self-folded triangle (``a == b``) unfolds it.  A folded arc has both
    slots in one triangle and is rejected.
    """
    if not tri.is_arc(k):
        raise SurfaceError(f"unknown arc {k}")
    where = [ti for ti, t in enumerate(tri.triangles) for x in t if x == k]
    if len(where) != 2:
        raise SurfaceError(f"arc {k} is not in exactly two triangle sides")
    t1, t2 = where
    if t1 == t2:
        raise SurfaceError(f"arc {k} not flippable: it is folded inside a self-folded triangle")
    j1, j2 = tri.triangles[t1].index(k), tri.triangles[t2].index(k)
    _, a, b = _rotate_to(tri.triangles[t1], k)
    _, c, d = _rotate_to(tri.triangles[t2], k)
    tris = list(tri.triangles)
    # each new triangle keeps k at the position it had in the old one
    tris[t1] = _rotate_from((k, b, c), j1)
    tris[t2] = _rotate_from((k, d, a), j2)
    return Triangulation(tri.signature, tri.n, tuple(tris))


def random_flips(tri: Triangulation, steps: int, rng: random.Random) -> list[int]:
    """A random sequence of flippable arcs, applied in turn."""
    seq = []
    for _ in range(steps):
        choices = [k for k in tri.arcs if flippable(tri, k)]
        k = rng.choice(choices)
        seq.append(k)
        tri = flip(tri, k)
    return seq


# -- generators -------------------------------------------------------------

def polygon(m: int) -> Triangulation:
    """Fan triangulation of an unpunctured disc with ``m >= 4`` marked points.

    Polygon vertices ``0..m-1``; the diagonal from 0 to j is arc ``j-1`` and
    the boundary edge from j to j+1 is segment ``n+1+j``.
    """
    if m < 4:
        raise SurfaceError("surface admits no triangulation in scope")
    n = m - 3

    def side(u, v):
        u, v = min(u, v), max(u, v)
        if u == 0 and 2 <= v <= m - 2:
            return v - 1
        if v == u + 1:
            return n + 1 + u
        return n + m  # edge m-1 -> 0

    tris = [(side(0, j + 1), side(j, j + 1), side(0, j)) for j in range(1, m - 1)]
    return check(Triangulation(SurfaceSignature(0, 1, 0, m), n, tris))


def torus(p: int = 1) -> Triangulation:
    """Torus with ``p >= 1`` punctures cut into p rectangles with diagonals.

    Arcs ``v_i, h_i, d_i`` are ``3i+1, 3i+2, 3i+3``; rectangle i is the pair
    ``(d_i, v_{i+1}, h_i)``, ``(v_i, h_i, d_i)``.  For p = 1 both triangles
    read ``(1, 2, 3)`` and the quiver is the Markov quiver.
    """
    if p < 1:
        raise SurfaceError("surface admits no triangulation in scope")

    def v(i):
        return 3 * (i % p) + 1

    tris = []
    for i in range(p):
        h, d = 3 * i + 2, 3 * i + 3
        tris.append((d, v(i + 1), h))
        tris.append((v(i), h, d))
    return check(Triangulation(SurfaceSignature(1, 0, p, 0), 3 * p, tris))


def punctured_torus() -> Triangulation:
    return torus(1)


def four_punctured_sphere() -> Triangulation:
    """Ordinary triangle (1, 2, 3) with a self-folded triangle on each side.

    Arc i+3 is folded inside the self-folded triangle with outer arc i.
    """
    tris = [(1, 2, 3), (1, 4, 4), (2, 5, 5), (3, 6, 6)]
    return check(Triangulation(SurfaceSignature(0, 0, 4, 0), 6, tris))


def insert_puncture(tri: Triangulation, index: int) -> Triangulation:
    """Add a puncture inside triangle ``index`` joined to its three corners."""
    t = tri.triangles[index]
    if _folded_label(t) is not None:
        raise SurfaceError("cannot insert a puncture into a self-folded triangle")
    sig = tri.signature
    shift = 3
    n = tri.n

    def relabel(x):
        return x + shift if x > n else x

    x, y, z = (relabel(s) for s in t)
    a, b, c = n + 1, n + 2, n + 3
    tris = [tuple(relabel(s) for s in u) for u in tri.triangles]
    tris[index] = (x, b, a)
    tris += [(y, c, b), (z, a, c)]
    new_sig = SurfaceSignature(sig.g, sig.b, sig.p + 1, sig.c)
    return Triangulation(new_sig, n + 3, tuple(tris))


def _genus_polygon(g: int) -> Triangulation:
    """Closed genus-g surface (g >= 2) with one puncture from the 4g-gon
    ``a1 b1 a1^-1 b1^-1 ...``, fan-triangulated from polygon vertex 0."""
    m = 4 * g
    # polygon edge j joins polygon vertices j and j+1
    edge_label = []
    for i in range(g):
        a, b = 2 * i + 1, 2 * i + 2
        edge_label += [a, b, a, b]
    diag0 = 2 * g  # diagonal from 0 to j has label diag0 + j - 1

    def side(u, v):
        u, v = min(u, v), max(u, v)
        if u == 0 and 2 <= v <= m - 2:
            return diag0 + v - 1
        if v == u + 1:
            return edge_label[u]
        return edge_label[m - 1]

    tris = [(side(0, j + 1), side(j, j + 1), side(0, j)) for j in range(1, m - 1)]
    return Triangulation(SurfaceSignature(g, 0, 1, 0), 6 * g - 3, tris)


def closed_surface(g: int, p: int) -> Triangulation:
    """A triangulation of the closed genus-g surface with p punctures."""
    if g < 0 or p < 1 or (g == 0 and p < 3):
        raise SurfaceError("surface admits no triangulation in scope")
    if g == 0:
        tri = Triangulation(SurfaceSignature(0, 0, 3, 0), 3, ((1, 2, 3), (3, 2, 1)))
        have = 3
    elif g == 1:
        tri, have = torus(1), 1
    else:
        tri, have = _genus_polygon(g), 1
    for _ in range(p - have):
        tri = insert_puncture(tri, 0)
    return check(tri)


def punctured_polygon(m: int, p: int) -> Triangulation:
    """Disc with ``m`` boundary marks and ``p`` punctures (``m + 3p >= 4``)."""
    if m < 1 or p < 0:
        raise SurfaceError("surface admits no triangulation in scope")
    if p == 0:
        return polygon(m)
    if m >= 3:
        if m >= 4:
            base = polygon(m)
        else:
            # a triangle with three boundary sides; insertion fills it
            base = Triangulation(SurfaceSignature(0, 1, 0, 3), 0, ((1, 2, 3),))
        tri = insert_puncture(base, 0)
        for _ in range(p - 1):
            tri = insert_puncture(tri, 0)
        return check(tri)
    raise SurfaceError("punctured polygons need at least three boundary marks here")


# -- text format ---------------------------------------------------------------

def dumps_triangulation(tri: Triangulation) -> str:
    """Text form::

        surface <g> <b> <p> <c>
        arcs <n>
        boundary <c>
        triangle <x> <y> <z> [folded=<f> outer=<o>]

    Triangles keep their stored order and clockwise side order; a
    self-folded triangle carries the ``folded=``/``outer=`` annotation.
    """
    s = tri.signature
    lines = [f"surface {s.g} {s.b} {s.p} {s.c}", f"arcs {tri.n}", f"boundary {s.c}"]
    for t in tri.triangles:
        line = "triangle " + " ".join(str(x) for x in t)
        f = _folded_label(t)
        if f is not None:
            outer = next(x for x in t if x != f)
            line += f" folded={f} outer={outer}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def loads_triangulation(text: str) -> Triangulation:
    sig = n = c = None
    tris = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "surface" and len(parts) == 5:
                sig = SurfaceSignature(*(int(x) for x in parts[1:]))
            elif parts[0] == "arcs" and len(parts) == 2:
                n = int(parts[1])
            elif parts[0] == "boundary" and len(parts) == 2:
                c = int(parts[1])
            elif parts[0] == "triangle" and len(parts) in (4, 6):
                t = tuple(int(x) for x in parts[1:4])
                if len(parts) == 6:
                    opts = dict(p.split("=", 1) for p in parts[4:])
                    f = _folded_label(t)
                    if f is None or int(opts["folded"]) != f or int(opts["outer"]) not in t \
                            or int(opts["outer"]) == f:
                        raise SurfaceError(f"line {lineno}: folded/outer annotation disagrees with sides")
                elif _folded_label(t) is not None:
                    raise SurfaceError(f"line {lineno}: self-folded triangle needs folded=/outer=")
                tris.append(t)
            else:
                raise SurfaceError(f"line {lineno}: unrecognized record {parts[0]!r}")
        except (ValueError, KeyError) as exc:
            if isinstance(exc, SurfaceError):
                raise
            raise SurfaceError(f"line {lineno}: {exc}") from None
    if sig is None or n is None or c is None:
        raise SurfaceError("missing surface/arcs/boundary header")
    if c != sig.c:
        raise SurfaceError("boundary count disagrees with surface signature")
    return check(Triangulation(sig, n, tuple(tris)))


def read_triangulation(path) -> Triangulation:
    with open(path, encoding="utf-8") as fh:
        return loads_triangulation(fh.read())


def write_triangulation(tri: Triangulation, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_triangulation(tri))


def generated_family(rng: Optional[random.Random] = None) -> Iterable[tuple[str, Triangulation]]:
    """The triangulations used for flip/mutation property checks."""
    yield "punctured-torus", torus(1)
    yield "sphere4", four_punctured_sphere()
    for m in range(4, 11):
        yield f"polygon{m}", polygon(m)
    for p in range(1, 5):
        yield f"torus{p}", torus(p)
