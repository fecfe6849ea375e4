"""Finite-ordinal diagrams: binary relations and split equivalences.

Both carriers share the same boundary convention: an arrow from ordinal n to
ordinal m has source elements 0..n-1 and target elements 0..m-1, drawn with
indices descending left to right (position 0 rightmost), sources on top.
Diagrams may carry optional modality words labelling the two boundaries.

A split equivalence is a partition of the disjoint union of the source and
target ordinals.  Composition unions the two partitions over the shared
middle ordinal, closes transitively, and deletes the middle elements;
classes that end up entirely in the middle disappear.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .terms import TermError, word_to_str

# Partition elements are tagged pairs ("s", i) / ("t", j).
Elem = tuple[str, int]


class DiagramError(TermError):
    pass


def _check_labels(length: int, word: Optional[str], side: str) -> None:
    if word is not None and len(word) != length:
        raise DiagramError(
            f"{side} word {word_to_str(word)!r} has length {len(word)}, "
            f"expected {length}")


@dataclass(frozen=True)
class RelDiagram:
    src_len: int
    tgt_len: int
    pairs: frozenset[tuple[int, int]]
    src_word: Optional[str] = None
    tgt_word: Optional[str] = None

    def __post_init__(self):
        for i, j in self.pairs:
            if not (0 <= i < self.src_len and 0 <= j < self.tgt_len):
                raise DiagramError(f"pair ({i},{j}) out of range "
                                   f"{self.src_len}x{self.tgt_len}")
        _check_labels(self.src_len, self.src_word, "source")
        _check_labels(self.tgt_len, self.tgt_word, "target")

    def key(self) -> tuple:
        """Structural identity ignoring the optional word labels."""
        return (self.src_len, self.tgt_len, tuple(sorted(self.pairs)))

    def same_as(self, other: "RelDiagram") -> bool:
        return self.key() == other.key()


def rel(src_len: int, tgt_len: int, pairs: Iterable[tuple[int, int]],
        src_word: Optional[str] = None, tgt_word: Optional[str] = None) -> RelDiagram:
    return RelDiagram(src_len, tgt_len, frozenset(pairs), src_word, tgt_word)


def rel_identity(n: int, word: Optional[str] = None) -> RelDiagram:
    return rel(n, n, ((i, i) for i in range(n)), word, word)


def rel_compose(g: RelDiagram, f: RelDiagram) -> RelDiagram:
    """Relational composite of f followed by g."""
    if f.tgt_len != g.src_len:
        raise DiagramError(
            f"cannot compose: middle lengths {f.tgt_len} != {g.src_len}")
    by_mid: dict[int, list[int]] = {}
    for j, k in g.pairs:
        by_mid.setdefault(j, []).append(k)
    pairs = {(i, k) for i, j in f.pairs for k in by_mid.get(j, ())}
    return rel(f.src_len, g.tgt_len, pairs, f.src_word, g.tgt_word)


@dataclass(frozen=True)
class SplitEq:
    src_len: int
    tgt_len: int
    classes: tuple[tuple[Elem, ...], ...]
    src_word: Optional[str] = None
    tgt_word: Optional[str] = None

    def __post_init__(self):
        seen: set[Elem] = set()
        for cls in self.classes:
            if not cls:
                raise DiagramError("empty partition class")
            for elem in cls:
                if elem in seen:
                    raise DiagramError(f"element {elem} in two classes")
                seen.add(elem)
        expected = {("s", i) for i in range(self.src_len)}
        expected |= {("t", j) for j in range(self.tgt_len)}
        if seen != expected:
            raise DiagramError("partition does not cover the boundary "
                               f"{self.src_len}+{self.tgt_len}")
        _check_labels(self.src_len, self.src_word, "source")
        _check_labels(self.tgt_len, self.tgt_word, "target")

    def key(self) -> tuple:
        return (self.src_len, self.tgt_len, self.classes)

    def same_as(self, other: "SplitEq") -> bool:
        return self.key() == other.key()

    def class_of(self, elem: Elem) -> tuple[Elem, ...]:
        for cls in self.classes:
            if elem in cls:
                return cls
        raise DiagramError(f"no class contains {elem}")


Diagram = Union[RelDiagram, SplitEq]


def _elem_key(elem: Elem) -> tuple[int, int]:
    # Sources before targets, each side by index.
    return (0 if elem[0] == "s" else 1, elem[1])


def _canon(classes: Iterable[Iterable[Elem]]) -> tuple[tuple[Elem, ...], ...]:
    sorted_classes = [tuple(sorted(cls, key=_elem_key)) for cls in classes]
    sorted_classes.sort(key=lambda cls: _elem_key(cls[0]))
    return tuple(sorted_classes)


def spliteq(src_len: int, tgt_len: int, classes: Iterable[Iterable[Elem]],
            src_word: Optional[str] = None,
            tgt_word: Optional[str] = None) -> SplitEq:
    return SplitEq(src_len, tgt_len, _canon(classes), src_word, tgt_word)


def spliteq_identity(n: int, word: Optional[str] = None) -> SplitEq:
    return spliteq(n, n, ([("s", i), ("t", i)] for i in range(n)), word, word)


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        root = x
        while self.parent.setdefault(root, root) != root:
            root = self.parent[root]
        while self.parent[x] != root:  # path compression
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        self.parent[self.find(x)] = self.find(y)


def spliteq_compose(g: SplitEq, f: SplitEq) -> SplitEq:
    """Compose f then g: transitive closure over the middle, middle deleted."""
    if f.tgt_len != g.src_len:
        raise DiagramError(
            f"cannot compose: middle lengths {f.tgt_len} != {g.src_len}")
    uf = _UnionFind()
    # Elements are tagged ("s",i) source of f, ("m",k) middle, ("t",j) target
    # of g; classes entirely inside the middle are simply never emitted.
    for cls in f.classes:
        tagged = [("s", i) if side == "s" else ("m", i) for side, i in cls]
        for elem in tagged[1:]:
            uf.union(tagged[0], elem)
    for cls in g.classes:
        tagged = [("m", i) if side == "s" else ("t", i) for side, i in cls]
        for elem in tagged[1:]:
            uf.union(tagged[0], elem)
    groups: dict = {}
    for i in range(f.src_len):
        groups.setdefault(uf.find(("s", i)), []).append(("s", i))
    for j in range(g.tgt_len):
        groups.setdefault(uf.find(("t", j)), []).append(("t", j))
    return spliteq(f.src_len, g.tgt_len, groups.values(), f.src_word, g.tgt_word)


# ---------------------------------------------------------------------------
# Generic operations on both carriers


def identity_diagram(kind: str, n: int, word: Optional[str] = None) -> Diagram:
    return rel_identity(n, word) if kind == "rel" else spliteq_identity(n, word)


def compose(g: Diagram, f: Diagram) -> Diagram:
    if isinstance(f, RelDiagram) and isinstance(g, RelDiagram):
        return rel_compose(g, f)
    if isinstance(f, SplitEq) and isinstance(g, SplitEq):
        return spliteq_compose(g, f)
    raise DiagramError("cannot compose a relation with a split equivalence")


def converse(d: Diagram) -> Diagram:
    """Swap source and target roles; involutive."""
    if isinstance(d, RelDiagram):
        return rel(d.tgt_len, d.src_len, ((j, i) for i, j in d.pairs),
                   d.tgt_word, d.src_word)
    flipped = (
        [("t", i) if side == "s" else ("s", i) for side, i in cls]
        for cls in d.classes
    )
    return spliteq(d.tgt_len, d.src_len, flipped, d.tgt_word, d.src_word)


def mirror(d: Diagram) -> Diagram:
    """Reflect left-to-right: index i becomes len-1-i on both boundaries,
    word labels reverse."""
    def rw(word: Optional[str]) -> Optional[str]:
        return word[::-1] if word is not None else None

    if isinstance(d, RelDiagram):
        return rel(d.src_len, d.tgt_len,
                   ((d.src_len - 1 - i, d.tgt_len - 1 - j) for i, j in d.pairs),
                   rw(d.src_word), rw(d.tgt_word))
    relabelled = (
        [(side, (d.src_len if side == "s" else d.tgt_len) - 1 - i)
         for side, i in cls]
        for cls in d.classes
    )
    return spliteq(d.src_len, d.tgt_len, relabelled, rw(d.src_word), rw(d.tgt_word))


def boundary_cycle(d: Diagram) -> list[Elem]:
    """Boundary elements in cyclic order for the planar layout: sources read
    left to right (descending index), then targets right to left (ascending
    index)."""
    cycle: list[Elem] = [("s", i) for i in range(d.src_len - 1, -1, -1)]
    cycle.extend(("t", j) for j in range(d.tgt_len))
    return cycle


def is_noncrossing(d: SplitEq) -> bool:
    """Planarity of the partition in the standard descending-index layout.

    Two classes cross exactly when they interleave (pattern x y x y) along
    the boundary cycle; interleaving is invariant under rotating the cycle,
    so checking one linear cut of the cycle is sufficient.
    """
    position = {elem: k for k, elem in enumerate(boundary_cycle(d))}
    labelled = sorted(
        (position[elem], num)
        for num, cls in enumerate(d.classes)
        for elem in cls
    )
    sequence = [num for _, num in labelled]
    for a in range(len(d.classes)):
        for b in range(a + 1, len(d.classes)):
            runs: list[int] = []
            for num in sequence:
                if num in (a, b) and (not runs or runs[-1] != num):
                    runs.append(num)
            if len(runs) > 2 and runs[0] == runs[-1]:
                runs.pop()  # the cycle joins the first and last run
            if len(runs) >= 4:
                return False
    return True


# ---------------------------------------------------------------------------
# Rendering and JSON


def _index_row(n: int, width: int) -> str:
    cells = [str(i).rjust(width) for i in range(n - 1, -1, -1)]
    return " ".join(cells)


def render_ascii(d: Diagram) -> str:
    """Deterministic text picture: indices descending left to right, vertical
    bars for straight-through links, remaining structure listed explicitly."""
    width = max(1, len(str(max(d.src_len, d.tgt_len, 1) - 1)))
    top = _index_row(d.src_len, width)
    bottom = _index_row(d.tgt_len, width)
    span = max(len(top), len(bottom))
    top = top.rjust(span)
    bottom = bottom.rjust(span)

    def col(side: str, i: int) -> int:
        # Character column of index i, right-aligned rows.
        return span - 1 - i * (width + 1) - 0

    bars = [" "] * span
    extras: list[str] = []
    if isinstance(d, RelDiagram):
        for i, j in sorted(d.pairs):
            if i == j:
                bars[col("s", i)] = "|"
            else:
                extras.append(f"({i},{j})")
        legend = "pairs: " + " ".join(extras) if extras else ""
    else:
        straight = {cls for cls in d.classes if len(cls) == 2
                    and cls[0][0] == "s" and cls[1][0] == "t"
                    and cls[0][1] == cls[1][1]}
        for cls in straight:
            bars[col("s", cls[0][1])] = "|"
        listed = [
            "{" + " ".join(f"{side}{i}" for side, i in cls) + "}"
            for cls in d.classes if cls not in straight
        ]
        legend = "classes: " + " ".join(listed) if listed else ""

    def label(word: Optional[str]) -> str:
        return f"  [{word_to_str(word)}]" if word is not None else ""

    lines = [top + label(d.src_word), "".join(bars), bottom + label(d.tgt_word)]
    if legend:
        lines.append(legend)
    return "\n".join(lines)


def to_json(d: Diagram) -> str:
    payload: dict = {"src": d.src_len, "tgt": d.tgt_len}
    if isinstance(d, RelDiagram):
        payload["kind"] = "rel"
        payload["pairs"] = sorted(list(p) for p in d.pairs)
    else:
        payload["kind"] = "spliteq"
        payload["classes"] = [[[side, i] for side, i in cls] for cls in d.classes]
    if d.src_word is not None:
        payload["src_word"] = word_to_str(d.src_word)
    if d.tgt_word is not None:
        payload["tgt_word"] = word_to_str(d.tgt_word)
    return json.dumps(payload, sort_keys=True)


def _parse_word_label(value) -> Optional[str]:
    if value is None:
        return None
    return "" if value == "e" else value


def from_json(text: str) -> Diagram:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramError(f"malformed JSON: {exc}") from exc
    try:
        src, tgt, kind = payload["src"], payload["tgt"], payload["kind"]
        src_word = _parse_word_label(payload.get("src_word"))
        tgt_word = _parse_word_label(payload.get("tgt_word"))
        if kind == "rel":
            pairs = [(int(i), int(j)) for i, j in payload["pairs"]]
            return rel(src, tgt, pairs, src_word, tgt_word)
        if kind == "spliteq":
            classes = [[(side, int(i)) for side, i in cls]
                       for cls in payload["classes"]]
            return spliteq(src, tgt, classes, src_word, tgt_word)
    except (KeyError, TypeError, ValueError) as exc:
        raise DiagramError(f"malformed diagram JSON: {exc}") from exc
    raise DiagramError(f"unknown diagram kind {payload.get('kind')!r}")
