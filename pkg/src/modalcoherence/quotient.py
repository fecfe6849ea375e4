"""The collapse quotients: word normalization, the conjugating isomorphism
arrows, the conjugated functor, the preorder skeletons, and the catalog of
preordering equations.

The sharp quotients identify each repeated operator with a single occurrence
(box-box with box, diamond-diamond with diamond); equality there is decided
by conjugating with the canonical isomorphisms and comparing images under the
base functor.  Adjoining the box/diamond commutation equation on top of sharp
collapses each theory to a preorder, whose skeleton is a fixed finite
diagram.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import diagram as dg
from .terms import (
    App,
    ArrowTerm,
    BOX,
    Comp,
    Gen,
    Id,
    TermError,
    check_word,
    term_type,
    word_to_str,
)
from .theories import SHARP, get_theory, typecheck


def sharp(word: str) -> str:
    """Collapse adjacent equal operators; the result alternates."""
    check_word(word)
    out: list[str] = []
    for c in word:
        if not out or out[-1] != c:
            out.append(c)
    return "".join(out)


def j_arrow(word: str) -> ArrowTerm:
    """The canonical arrow from a word to its collapsed form."""
    check_word(word)
    if not word:
        raise TermError("the collapse arrows are defined for nonempty words")
    if len(word) == 1:
        return Id(word)
    tail = j_arrow(word[1:])
    if word[0] != word[1]:
        return App(word[0], tail)
    if word[0] == BOX:
        return Comp(tail, Gen("eps_box", word[1:]))
    return Comp(tail, Gen("delta_dd", word[2:]))


def j_inv(word: str) -> ArrowTerm:
    """The canonical arrow from the collapsed form back to the word."""
    check_word(word)
    if not word:
        raise TermError("the collapse arrows are defined for nonempty words")
    if len(word) == 1:
        return Id(word)
    tail = j_inv(word[1:])
    if word[0] != word[1]:
        return App(word[0], tail)
    if word[0] == BOX:
        return Comp(Gen("delta_bb", word[2:]), tail)
    return Comp(Gen("eps_dia", word[1:]), tail)


def interp_sharp(theory: "Theory | str", term: ArrowTerm) -> dg.RelDiagram:
    """Image under the conjugated functor: collapse both endpoints with the
    canonical isomorphisms, then interpret in the base theory."""
    from .interp import interp

    theory = get_theory(theory)
    if theory.quotient != SHARP:
        raise TermError(f"theory {theory.id} is not a sharp quotient")
    base = theory.base
    src, tgt = typecheck(term, base)
    conjugated: ArrowTerm = term
    if src:
        conjugated = Comp(conjugated, j_inv(src))
    if tgt:
        conjugated = Comp(j_arrow(tgt), conjugated)
    image = interp(base, conjugated)
    return dg.RelDiagram(image.src_len, image.tgt_len, image.pairs,
                         sharp(src), sharp(tgt))


# ---------------------------------------------------------------------------
# Skeletons of the preorder quotients


@dataclass(frozen=True)
class SkeletonArrow:
    src: str
    tgt: str
    label: ArrowTerm


@dataclass(frozen=True)
class SkeletonDiagram:
    theory_id: str
    objects: tuple[str, ...]
    arrows: tuple[SkeletonArrow, ...]

    def reachability(self) -> dict[tuple[str, str], bool]:
        """Reflexive-transitive closure of the arrows."""
        reach = {(a, b): a == b for a in self.objects for b in self.objects}
        for arrow in self.arrows:
            reach[(arrow.src, arrow.tgt)] = True
        for mid in self.objects:
            for a in self.objects:
                for b in self.objects:
                    if reach[(a, mid)] and reach[(mid, b)]:
                        reach[(a, b)] = True
        return reach

    def reaches(self, src: str) -> set[str]:
        reach = self.reachability()
        return {b for b in self.objects if reach[(src, b)]}

    def to_json(self) -> str:
        import json

        return json.dumps({
            "theory": self.theory_id,
            "objects": [word_to_str(w) for w in self.objects],
            "arrows": [{"src": word_to_str(a.src), "tgt": word_to_str(a.tgt),
                        "term": str(a.label)} for a in self.arrows],
        })


def _parse_all(entries: list[tuple[str, str, str]]) -> tuple[SkeletonArrow, ...]:
    from .terms import parse_term

    return tuple(SkeletonArrow(src, tgt, parse_term(text))
                 for src, tgt, text in entries)


_SKELETONS = {
    "s4_boxdia_triv": (
        ("b", "bdb", "db", "bd", "dbd", "d", ""),
        [
            ("b", "bdb", "box(eps_dia{b}) . delta_bb{e}"),
            ("bdb", "db", "eps_box{db}"),
            ("bdb", "bd", "box(dia(eps_box{e}))"),
            ("db", "dbd", "dia(box(eps_dia{e}))"),
            ("bd", "dbd", "eps_dia{bd}"),
            ("dbd", "d", "delta_dd{e} . dia(eps_box{d})"),
            ("b", "", "eps_box{e}"),
            ("", "d", "eps_dia{e}"),
        ],
    ),
    "s42_triv": (
        ("b", "db", "bd", "d", ""),
        [
            ("b", "db", "eps_dia{b}"),
            ("db", "bd", "chi_db{e}"),
            ("bd", "d", "eps_box{d}"),
            ("b", "", "eps_box{e}"),
            ("", "d", "eps_dia{e}"),
        ],
    ),
    "s5_triv": (
        ("b", "", "d"),
        [("b", "", "eps_box{e}"), ("", "d", "eps_dia{e}")],
    ),
    "fives_triv": (
        ("b", "", "d"),
        [("b", "", "eps_box{e}"), ("", "d", "eps_dia{e}")],
    ),
}


def skeleton(theory: "Theory | str") -> SkeletonDiagram:
    """The finite skeleton of a preorder quotient, with one canonical arrow
    term labelling each generating edge."""
    theory = get_theory(theory)
    if theory.id not in _SKELETONS:
        raise TermError(f"theory {theory.id} has no preorder skeleton")
    objects, entries = _SKELETONS[theory.id]
    arrows = _parse_all(entries)
    for arrow in arrows:
        src, tgt = typecheck(arrow.label, theory.base)
        if (src, tgt) != (arrow.src, arrow.tgt):
            raise TermError(f"skeleton arrow {arrow.label} has type "
                            f"{src}->{tgt}, expected {arrow.src}->{arrow.tgt}")
    return SkeletonDiagram(theory.id, objects, arrows)


# ---------------------------------------------------------------------------
# Preordering equations


def preordering_catalog(theory: "Theory | str", word: str = "",
                        ) -> list[tuple[ArrowTerm, ArrowTerm]]:
    """The six equations any one of which collapses the box/diamond-mixing
    theory to a preorder, instantiated at the given index word.  The
    counit-collapse equations head the list; for the mirrored theory the
    catalog is the mirror image."""
    from .schemas import get_schema, instantiate

    theory = get_theory(theory)
    base = theory.base.id if theory.quotient else theory.id
    if base == "s5":
        ids = [f"preorder_{i}" for i in range(1, 7)]
    elif base == "fives":
        ids = [f"preorder_{i}_s" for i in range(1, 7)]
    else:
        raise TermError("the preordering catalog applies to s5 and fives")
    out = []
    for sid in ids:
        lhs, rhs = instantiate(get_schema(sid), word)
        if term_type(lhs) != term_type(rhs):
            raise TermError(f"catalog entry {sid} is not type-balanced")
        out.append((lhs, rhs))
    return out
