"""Named quivers: the exceptional mutation-finite types and relatives.

Shapes live in the bundled ``data/catalog.dat``.  ``figure5(i)`` builds the
four non-planar members of the X6 and X7 classes by mutating at labelled
vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Optional

from .quiver import Quiver, QuiverError, loads_quiver, mutate_sequence

EXCEPTIONAL = ("E6", "E7", "E8", "E6(1)", "E7(1)", "E8(1)",
               "E6(1,1)", "E7(1,1)", "E8(1,1)", "X6", "X7")

# class sizes and (planar, genus 1) splits listed for the exceptional types
REFERENCE_TABLE = {
    "E6": (21, 21, 0), "E7": (112, 112, 0), "E8": (391, 391, 0),
    "E6(1)": (52, 52, 0), "E7(1)": (338, 338, 0), "E8(1)": (1935, 1935, 0),
    "E6(1,1)": (27, 27, 0), "E7(1,1)": (217, 217, 0), "E8(1,1)": (1886, 1886, 0),
    "X6": (4, 1, 3), "X7": (2, 1, 1),
}

# (base quiver, labels of the mutation sequence)
FIGURE5 = {
    1: ("X6", ("x4", "x6")),
    2: ("X6", ("x4",)),
    3: ("X6", ("x4", "x3")),
    4: ("X7", ("y4",)),
}


@dataclass(frozen=True)
class NamedQuiver:
    name: str
    quiver: Quiver
    labels: Optional[tuple] = None

    def vertex(self, label: str) -> int:
        """1-based vertex carrying ``label``."""
        if self.labels is None or label not in self.labels:
            raise KeyError(f"{self.name} has no vertex labelled {label!r}")
        return self.labels.index(label) + 1


def parse_catalog(text: str) -> dict[str, NamedQuiver]:
    entries: dict[str, NamedQuiver] = {}
    name = labels = None
    body: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("name "):
            if name is not None:
                raise QuiverError(f"line {lineno}: missing 'end'")
            name, labels, body = line[5:].strip(), None, []
        elif name is None:
            raise QuiverError(f"line {lineno}: record outside a stanza")
        elif line.startswith("labels "):
            labels = tuple(line.split()[1:])
        elif line == "end":
            q = loads_quiver("\n".join(body))
            if labels is not None and len(labels) != q.n:
                raise QuiverError(f"{name}: {len(labels)} labels for {q.n} vertices")
            entries[name] = NamedQuiver(name, q, labels)
            name = None
        else:
            body.append(line)
    if name is not None:
        raise QuiverError("unterminated catalog stanza")
    return entries


@lru_cache(maxsize=None)
def _catalog() -> dict[str, NamedQuiver]:
    text = resources.files("qga").joinpath("data/catalog.dat").read_text(encoding="utf-8")
    return parse_catalog(text)


def names() -> list[str]:
    return list(_catalog()) + [f"Fig5-{i}" for i in FIGURE5]


def figure5(i: int) -> NamedQuiver:
    """The i-th non-planar quiver: X6 mutated at (x4, x6), (x4), (x4, x3),
    and X7 mutated at y4."""
    if i not in FIGURE5:
        raise ValueError(f"figure5 index must be 1..4, got {i}")
    base_name, seq = FIGURE5[i]
    base = _catalog()[base_name]
    q = mutate_sequence(base.quiver, [base.vertex(lab) for lab in seq])
    return NamedQuiver(f"Fig5-{i}", q, base.labels)


def named(name: str) -> NamedQuiver:
    if name.startswith("Fig5-"):
        try:
            return figure5(int(name[5:]))
        except ValueError:
            pass
    try:
        return _catalog()[name]
    except KeyError:
        raise KeyError(f"unknown quiver name {name!r}") from None
