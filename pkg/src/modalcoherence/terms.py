"""Modality words and the arrow-term language.

A modality is a finite word over the two modal operators, written here as a
plain string of ``b`` (box, necessity) and ``d`` (diamond, possibility).  The
leftmost letter of the string is the outermost operator, so ``"bd"`` is box
applied to diamond.  Operator *positions* are counted from the right: position
0 is the rightmost (innermost) letter, position ``len(w) - 1`` the leftmost.
The empty word is a legal modality and is written ``e`` in the concrete
syntax.

Arrow terms denote deductions between modalities.  They are built from
identities, indexed generator arrows, applications of the two operator
functors, and composition ``g . f`` (apply ``f`` first).  Every well-formed
term has a unique source and target word, computed by :func:`term_type`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

BOX = "b"
DIA = "d"
LETTERS = (BOX, DIA)

PRETTY = {BOX: "□", DIA: "◇"}


class TermError(Exception):
    """Base class for errors raised by this package."""


class ParseError(TermError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class TypingError(TermError):
    """A term is ill-typed: mismatched composition or bad generator use."""


def check_word(word: str) -> str:
    if any(c not in LETTERS for c in word):
        raise TermError(f"bad modality word {word!r}: letters must be 'b' or 'd'")
    return word


def word_to_str(word: str) -> str:
    return word if word else "e"


def pretty_word(word: str) -> str:
    return "".join(PRETTY[c] for c in word) if word else "∅"


def swap_word(word: str) -> str:
    """Exchange box and diamond throughout."""
    return word.translate(str.maketrans("bd", "db"))


def rev_word(word: str) -> str:
    return word[::-1]


def letter_at(word: str, pos: int) -> str:
    """Letter at operator position ``pos`` (0 = rightmost)."""
    return word[len(word) - 1 - pos]


# Generator typing table: kind -> (source prefix, target prefix).  A generator
# of kind k with index word A has source prefix+A and target prefix+A.
GENERATORS: dict[str, tuple[str, str]] = {
    "eps_box": ("b", ""),
    "eps_dia": ("", "d"),
    "delta_bb": ("b", "bb"),
    "delta_dd": ("dd", "d"),
    "delta_bd": ("d", "bd"),
    "delta_db": ("db", "b"),
    "sigma_bb": ("b", "bb"),
    "sigma_dd": ("dd", "d"),
    "sigma_db": ("d", "db"),
    "sigma_bd": ("bd", "b"),
    "chi_bb": ("bb", "bb"),
    "chi_dd": ("dd", "dd"),
    "chi_db": ("db", "bd"),
    "chi_bd": ("bd", "db"),
}

# Duality: exchange box and diamond and reverse arrows.
DUAL_KIND = {
    "eps_box": "eps_dia",
    "eps_dia": "eps_box",
    "delta_bb": "delta_dd",
    "delta_dd": "delta_bb",
    "delta_bd": "delta_db",
    "delta_db": "delta_bd",
    "chi_bb": "chi_dd",
    "chi_dd": "chi_bb",
    "chi_db": "chi_db",
    "chi_bd": "chi_bd",
    "sigma_db": "sigma_bd",
    "sigma_bd": "sigma_db",
    "sigma_bb": "sigma_dd",
    "sigma_dd": "sigma_bb",
}


@dataclass(frozen=True)
class Id:
    word: str

    def __str__(self) -> str:
        return f"id{{{word_to_str(self.word)}}}"


@dataclass(frozen=True)
class Gen:
    kind: str
    index: str

    def __str__(self) -> str:
        return f"{self.kind}{{{word_to_str(self.index)}}}"


@dataclass(frozen=True)
class App:
    op: str  # 'b' or 'd'
    body: "ArrowTerm"

    def __str__(self) -> str:
        name = "box" if self.op == BOX else "dia"
        return f"{name}({self.body})"


@dataclass(frozen=True)
class Comp:
    outer: "ArrowTerm"
    inner: "ArrowTerm"

    def __str__(self) -> str:
        # Composition chains print right-associated; a composite on the left
        # keeps its parentheses so printing round-trips to the same tree.
        left = f"({self.outer})" if isinstance(self.outer, Comp) else str(self.outer)
        return f"{left} . {self.inner}"


ArrowTerm = Union[Id, Gen, App, Comp]


def gen_type(kind: str, index: str) -> tuple[str, str]:
    src_pre, tgt_pre = GENERATORS[kind]
    return src_pre + index, tgt_pre + index


def term_type(term: ArrowTerm) -> tuple[str, str]:
    """Source and target word of a term; raises TypingError on a mismatch."""
    if isinstance(term, Id):
        return term.word, term.word
    if isinstance(term, Gen):
        if term.kind not in GENERATORS:
            raise TypingError(f"unknown generator kind {term.kind!r}")
        return gen_type(term.kind, term.index)
    if isinstance(term, App):
        src, tgt = term_type(term.body)
        return term.op + src, term.op + tgt
    if isinstance(term, Comp):
        src_i, tgt_i = term_type(term.inner)
        src_o, tgt_o = term_type(term.outer)
        if tgt_i != src_o:
            raise TypingError(
                "composition mismatch: inner target "
                f"{word_to_str(tgt_i)} != outer source {word_to_str(src_o)}"
            )
        return src_i, tgt_o
    raise TermError(f"not an arrow term: {term!r}")


def term_size(term: ArrowTerm) -> int:
    """Number of generator occurrences."""
    if isinstance(term, Id):
        return 0
    if isinstance(term, Gen):
        return 1
    if isinstance(term, App):
        return term_size(term.body)
    return term_size(term.outer) + term_size(term.inner)


# ---------------------------------------------------------------------------
# Parsing


_GEN_NAMES = set(GENERATORS)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "().":
            tokens.append((c, c, i))
            i += 1
            continue
        if c == "{":
            j = text.find("}", i)
            if j < 0:
                raise ParseError("unclosed '{'", i)
            tokens.append(("mod", text[i + 1 : j].strip(), i))
            i = j + 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    return tokens


def _parse_mod(tok: tuple[str, str, int]) -> str:
    kind, value, pos = tok
    if kind != "mod":
        raise ParseError("expected '{modality}'", pos)
    if value == "e":
        return ""
    if value and all(c in LETTERS for c in value):
        return value
    raise ParseError(f"bad modality {value!r} (use 'e' or letters b/d)", pos)


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]], length: int):
        self.tokens = tokens
        self.pos = 0
        self.length = length

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.length)
        self.pos += 1
        return tok

    def parse_term(self) -> ArrowTerm:
        left = self.parse_atom()
        tok = self.peek()
        if tok is not None and tok[0] == ".":
            self.next()
            right = self.parse_term()  # '.' is right-associative
            return Comp(left, right)
        return left

    def parse_atom(self) -> ArrowTerm:
        kind, value, pos = self.next()
        if kind == "(":
            inner = self.parse_term()
            closing = self.next()
            if closing[0] != ")":
                raise ParseError("expected ')'", closing[2])
            return inner
        if kind != "name":
            raise ParseError(f"expected a term, got {value!r}", pos)
        if value == "id":
            return Id(_parse_mod(self.next()))
        if value in ("box", "dia"):
            opening = self.next()
            if opening[0] != "(":
                raise ParseError(f"expected '(' after {value}", opening[2])
            body = self.parse_term()
            closing = self.next()
            if closing[0] != ")":
                raise ParseError("expected ')'", closing[2])
            return App(BOX if value == "box" else DIA, body)
        if value in _GEN_NAMES:
            return Gen(value, _parse_mod(self.next()))
        raise ParseError(f"unknown generator name {value!r}", pos)


def parse_term(text: str) -> ArrowTerm:
    """Parse the concrete syntax; printing the result re-parses identically."""
    parser = _Parser(_tokenize(text), len(text))
    term = parser.parse_term()
    tok = parser.peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok[1]!r}", tok[2])
    return term


def term_to_str(term: ArrowTerm) -> str:
    return str(term)


# ---------------------------------------------------------------------------
# Structural operations


def append_context(term: ArrowTerm, ctx: str) -> ArrowTerm:
    """Append ``ctx`` on the right of every index word.

    This is the right-append functor: identities on A become identities on
    A+ctx, generator indices grow by ctx, and the operation commutes with
    application and composition.
    """
    check_word(ctx)
    if not ctx:
        return term
    if isinstance(term, Id):
        return Id(term.word + ctx)
    if isinstance(term, Gen):
        return Gen(term.kind, term.index + ctx)
    if isinstance(term, App):
        return App(term.op, append_context(term.body, ctx))
    return Comp(append_context(term.outer, ctx), append_context(term.inner, ctx))


def dualize(term: ArrowTerm) -> ArrowTerm:
    """Form the opposite term: swap box/diamond, dual generators, reversed
    composition.  The result has type (swap(tgt), swap(src))."""
    if isinstance(term, Id):
        return Id(swap_word(term.word))
    if isinstance(term, Gen):
        return Gen(DUAL_KIND[term.kind], swap_word(term.index))
    if isinstance(term, App):
        return App(swap_word(term.op), dualize(term.body))
    return Comp(dualize(term.inner), dualize(term.outer))


# ---------------------------------------------------------------------------
# Factor (spine) form.  A factor is a single generator under a stack of
# operator applications; every term equals a composite of factors by the
# categorial and functorial equations.


@dataclass(frozen=True)
class Factor:
    prefix: str  # operator letters applied outside the generator
    kind: str
    index: str

    @property
    def src(self) -> str:
        return self.prefix + GENERATORS[self.kind][0] + self.index

    @property
    def tgt(self) -> str:
        return self.prefix + GENERATORS[self.kind][1] + self.index

    @property
    def depth(self) -> int:
        return len(self.prefix)

    def to_term(self) -> ArrowTerm:
        term: ArrowTerm = Gen(self.kind, self.index)
        for op in reversed(self.prefix):
            term = App(op, term)
        return term


def term_factors(term: ArrowTerm) -> tuple[str, list[Factor]]:
    """Decompose a term as (source word, factors in application order)."""
    src, _ = term_type(term)
    factors: list[Factor] = []

    def walk(t: ArrowTerm, prefix: str) -> None:
        if isinstance(t, Id):
            return
        if isinstance(t, Gen):
            factors.append(Factor(prefix, t.kind, t.index))
            return
        if isinstance(t, App):
            walk(t.body, prefix + t.op)
            return
        walk(t.inner, prefix)
        walk(t.outer, prefix)

    walk(term, "")
    return src, factors


def factors_to_term(src: str, factors: list[Factor]) -> ArrowTerm:
    """Rebuild a term from factors; the empty list gives the identity."""
    if not factors:
        return Id(src)
    term: ArrowTerm = factors[0].to_term()
    for factor in factors[1:]:
        term = Comp(factor.to_term(), term)
    return term
