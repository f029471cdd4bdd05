"""Breadth-first enumeration of mutation classes up to isomorphism."""

from __future__ import annotations

import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .canonical import (
    GRAPH,
    MODES,
    QUIVER,
    QUIVER_OP,
    CanonicalKey,
    _pack,
    canonical_graph_key,
    canonical_labeling,
)
from .quiver import Quiver, QuiverError, dumps_quiver, loads_quiver, quiver_mutate, underlying_graph

CACHE_VERSION = 1


@dataclass(frozen=True)
class ExplorationLimits:
    max_members: int = 100_000
    max_entry: int = 12
    time_budget: float = 600.0

    def __post_init__(self):
        if self.max_members <= 0 or self.max_entry <= 0 or self.time_budget <= 0:
            raise ValueError("exploration limits must be positive")


@dataclass
class ClassReport:
    """Result of a class enumeration.

    ``members`` maps each canonical key to one representative quiver (the
    canonically relabeled form, so reports do not depend on search order).
    """

    seed: Quiver
    mode: str
    members: dict[CanonicalKey, Quiver]
    truncated: bool = False
    reason: str = ""
    limits: ExplorationLimits = field(default_factory=ExplorationLimits)
    genus_histogram: Optional[dict] = None
    # graph keys whose genus search ran out of budget
    genus_unresolved: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def complete(self) -> bool:
        return not self.truncated

    def keys(self) -> list[CanonicalKey]:
        return sorted(self.members)


def _canonical_pair(q: Quiver, mode: str) -> tuple[CanonicalKey, Quiver]:
    order, cert = canonical_labeling(q.b)
    key, rep = _pack(q.n, cert), q.relabel(order)
    if mode == QUIVER_OP:
        op = q.opposite()
        order_op, cert_op = canonical_labeling(op.b)
        key_op = _pack(q.n, cert_op)
        if key_op < key:
            key, rep = key_op, op.relabel(order_op)
    return key, rep


def _expand(args):
    reps, mode, max_entry = args
    out = []
    for rep in reps:
        for k in range(1, rep.n + 1):
            m = quiver_mutate(rep, k)
            if m.max_entry() > max_entry:
                return out, True
            out.append(_canonical_pair(m, mode))
    return out, False


def _quiver_class(seed: Quiver, mode: str, limits: ExplorationLimits, workers: int) -> ClassReport:
    t0 = time.monotonic()
    if seed.max_entry() > limits.max_entry:
        return ClassReport(seed, mode, {}, True, "mutation-infinite suspected: seed exceeds entry cap", limits)
    key, rep = _canonical_pair(seed, mode)
    members = {key: rep}
    frontier = [key]
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        while frontier:
            reps = [members[k] for k in sorted(frontier)]
            if pool is None:
                results = [_expand((reps, mode, limits.max_entry))]
            else:
                chunk = max(1, len(reps) // (4 * workers))
                jobs = [(reps[i:i + chunk], mode, limits.max_entry) for i in range(0, len(reps), chunk)]
                results = list(pool.map(_expand, jobs))
            nxt = []
            for pairs, hit_cap in results:
                if hit_cap:
                    return ClassReport(seed, mode, members, True,
                                       f"mutation-infinite suspected: entry exceeded {limits.max_entry}", limits)
                for k, r in pairs:
                    if k not in members:
                        if len(members) >= limits.max_members:
                            return ClassReport(seed, mode, members, True,
                                               f"member cap {limits.max_members} exceeded", limits)
                        members[k] = r
                        nxt.append(k)
            if time.monotonic() - t0 > limits.time_budget:
                if nxt:
                    return ClassReport(seed, mode, members, True,
                                       f"time budget {limits.time_budget}s exhausted", limits)
            frontier = nxt
    finally:
        if pool is not None:
            pool.shutdown()
    return ClassReport(seed, mode, members, False, "", limits)


def enumerate_class(q: Quiver, mode: str = QUIVER, limits: Optional[ExplorationLimits] = None,
                    workers: int = 1) -> ClassReport:
    """Enumerate the mutation class of ``q`` up to isomorphism.

    ``mode`` is ``"quiver"`` (strict quiver isomorphism), ``"quiver-op"``
    (a quiver is also identified with its opposite) or ``"graph"``
    (isomorphism of underlying simple graphs).  Graph mode is computed by
    enumerating the quiver-isomorphism class and projecting each member to
    its underlying graph key, so it never loses members that a graph-level
    deduplication would skip.
    """
    if mode not in MODES:
        raise ValueError(f"unknown isomorphism mode {mode!r}")
    limits = limits or ExplorationLimits()
    if mode != GRAPH:
        return _quiver_class(q, mode, limits, workers)
    base = _quiver_class(q, QUIVER, limits, workers)
    projected: dict[CanonicalKey, Quiver] = {}
    for key in sorted(base.members):
        rep = base.members[key]
        gkey = canonical_graph_key(underlying_graph(rep))
        projected.setdefault(gkey, rep)
    return ClassReport(q, GRAPH, projected, base.truncated, base.reason, limits)


def are_mutation_equivalent(q1: Quiver, q2: Quiver, limits: Optional[ExplorationLimits] = None) -> str:
    """Return ``"yes"``, ``"no"`` or ``"unknown"`` (enumeration truncated)."""
    if q1.n != q2.n:
        return "no"
    target, _ = _canonical_pair(q2, QUIVER)
    report = enumerate_class(q1, QUIVER, limits)
    if target in report.members:
        return "yes"
    return "unknown" if report.truncated else "no"


def genus_distribution(report: ClassReport, genus_budget: float = 60.0) -> ClassReport:
    """Attach a histogram genus -> member count (in the report's own mode).

    Genus depends only on the underlying graph, so members sharing a graph
    key are solved once.  Members whose genus search is cut off by the budget
    are counted under the key ``"bounded"`` and listed in
    ``genus_unresolved``.
    """
    from .genus import min_genus

    if report.truncated:
        raise ValueError("genus distribution needs a complete class report")
    cache: dict[CanonicalKey, object] = {}
    hist: Counter = Counter()
    unresolved = []
    for key in sorted(report.members):
        g = underlying_graph(report.members[key])
        gkey = canonical_graph_key(g)
        if gkey not in cache:
            cache[gkey] = min_genus(g, budget=genus_budget)
        res = cache[gkey]
        if res.exact:
            hist[res.genus] += 1
        else:
            hist["bounded"] += 1
            unresolved.append(gkey)
    return replace(report, genus_histogram=dict(hist), genus_unresolved=unresolved)


def closure_violations(report: ClassReport) -> list[tuple[CanonicalKey, int]]:
    """(member, vertex) pairs whose mutation leaves the member set."""
    bad = []
    for key in sorted(report.members):
        rep = report.members[key]
        for k in range(1, rep.n + 1):
            m = quiver_mutate(rep, k)
            if report.mode == GRAPH:
                mk = canonical_graph_key(underlying_graph(m))
            else:
                mk, _ = _canonical_pair(m, report.mode)
            if mk not in report.members:
                bad.append((key, k))
    return bad


# -- cache -------------------------------------------------------------------

def default_cache_dir() -> Path:
    return Path(os.environ.get("QGA_CACHE_DIR", "cache"))


def cache_path(seed: Quiver, mode: str, cache_dir=None) -> Path:
    root = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    seed_key, _ = _canonical_pair(seed, QUIVER)
    return root / mode / f"{seed_key.hex()}.class"


def dumps_report(report: ClassReport) -> str:
    """Serialize a class report.

    Layout::

        # qga class cache v1
        mode <mode>
        limits <max_members> <max_entry> <time_budget>
        size <N>
        seed
        quiver <n> ... (seed in quiver text format)
        member <key hex>
        quiver <n> ... (representative)
        ...
    """
    lim = report.limits
    lines = [f"# qga class cache v{CACHE_VERSION}",
             f"mode {report.mode}",
             f"limits {lim.max_members} {lim.max_entry} {lim.time_budget:g}",
             f"size {report.size}",
             "seed",
             dumps_quiver(report.seed).rstrip("\n")]
    for key in sorted(report.members):
        lines.append(f"member {key.hex()}")
        lines.append(dumps_quiver(report.members[key]).rstrip("\n"))
    return "\n".join(lines) + "\n"


def loads_report(text: str) -> ClassReport:
    lines = text.splitlines()
    if not lines or lines[0] != f"# qga class cache v{CACHE_VERSION}":
        raise QuiverError("not a qga class cache file")
    header = {}
    i = 1
    while i < len(lines) and lines[i] != "seed":
        name, _, value = lines[i].partition(" ")
        header[name] = value
        i += 1
    blocks: list[tuple[str, list[str]]] = []
    for line in lines[i:]:
        if line == "seed" or line.startswith("member "):
            blocks.append((line, []))
        elif blocks:
            blocks[-1][1].append(line)
    seed = loads_quiver("\n".join(blocks[0][1]))
    members = {}
    for tag, body in blocks[1:]:
        members[CanonicalKey.fromhex(tag.split()[1])] = loads_quiver("\n".join(body))
    mm, me, tb = header["limits"].split()
    report = ClassReport(seed, header["mode"], members, False, "",
                         ExplorationLimits(int(mm), int(me), float(tb)))
    if report.size != int(header["size"]):
        raise QuiverError("cache file size header disagrees with member list")
    return report


def cached_enumerate(q: Quiver, mode: str = QUIVER, limits: Optional[ExplorationLimits] = None,
                     cache_dir=None, workers: int = 1) -> ClassReport:
    """``enumerate_class`` backed by the on-disk cache of complete reports."""
    path = cache_path(q, mode, cache_dir)
    if path.exists():
        report = loads_report(path.read_text(encoding="utf-8"))
        key, _ = _canonical_pair(q, QUIVER)
        # cache file is keyed by seed; a different class member never lands here
        if _canonical_pair(report.seed, QUIVER)[0] == key:
            return replace(report, seed=q)
    report = enumerate_class(q, mode, limits, workers)
    if report.complete:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps_report(report), encoding="utf-8", newline="\n")
    return report
