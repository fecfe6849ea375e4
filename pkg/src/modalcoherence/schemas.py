"""Equation schemas: the axiom families of each theory.

A schema side is a tuple of factor patterns in application order (the first
entry applies first).  A pattern factor is either a concrete generator with a
fixed operator prefix and an index of the form ``pre + A`` (``A`` a word
metavariable), or an arrow metavariable ``f`` under a fixed prefix, whose
source and target words bind the metavariables ``A`` and ``B``.  An empty
side denotes an identity; its word is recorded separately.

Schemas both *instantiate* (producing concrete equation instances for the
soundness sweep) and *match* against factor lists (driving the proof-search
and directed-rewriting engines).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

from .terms import (
    App,
    ArrowTerm,
    Factor,
    GENERATORS,
    TermError,
    factors_to_term,
    term_type,
)


@dataclass(frozen=True)
class GenPat:
    prefix: str
    kind: str
    index_pre: str
    index_var: str = "A"


@dataclass(frozen=True)
class FVarPat:
    prefix: str


Pat = Union[GenPat, FVarPat]
Side = tuple[Pat, ...]


@dataclass(frozen=True)
class EquationSchema:
    id: str
    lhs: Side
    rhs: Side
    # Word of the identity side, as (prefix letters, metavariable), for
    # schemas one of whose sides is an identity.
    identity_word: Optional[tuple[str, str]] = None
    # Instance-only schemas (no usable patterns) supply a builder instead.
    builder: Optional[Callable[[str], tuple[ArrowTerm, ArrowTerm]]] = None

    @property
    def naturality(self) -> bool:
        return any(isinstance(p, FVarPat) for p in self.lhs + self.rhs)

    @property
    def pattern_based(self) -> bool:
        return self.builder is None


def G(prefix: str, kind: str, index_pre: str, index_var: str = "A") -> GenPat:
    assert kind in GENERATORS
    return GenPat(prefix, kind, index_pre, index_var)


def F(prefix: str) -> FVarPat:
    return FVarPat(prefix)


# ---------------------------------------------------------------------------
# Matching and instantiation over factor lists


def match_side(side: Side, segment: list[Factor],
               bindings: Optional[dict] = None) -> Optional[dict]:
    """Match a pattern side against a factor segment; returns bindings."""
    if len(side) != len(segment):
        return None
    bound: dict = dict(bindings) if bindings else {}
    for pat, factor in zip(side, segment):
        if isinstance(pat, GenPat):
            if factor.kind != pat.kind or factor.prefix != pat.prefix:
                return None
            if not factor.index.startswith(pat.index_pre):
                return None
            word = factor.index[len(pat.index_pre):]
            if bound.setdefault(pat.index_var, word) != word:
                return None
        else:
            if not factor.prefix.startswith(pat.prefix):
                return None
            inner = Factor(factor.prefix[len(pat.prefix):], factor.kind,
                           factor.index)
            if bound.setdefault("f", inner) != inner:
                return None
            if bound.setdefault("A", inner.src) != inner.src:
                return None
            if bound.setdefault("B", inner.tgt) != inner.tgt:
                return None
    return bound


def build_side(side: Side, bindings: dict) -> list[Factor]:
    factors = []
    for pat in side:
        if isinstance(pat, GenPat):
            factors.append(Factor(pat.prefix, pat.kind,
                                  pat.index_pre + bindings[pat.index_var]))
        else:
            inner: Factor = bindings["f"]
            factors.append(Factor(pat.prefix + inner.prefix, inner.kind,
                                  inner.index))
    return factors


def _side_term(schema: EquationSchema, side: Side, bindings: dict,
               f_term: Optional[ArrowTerm]) -> ArrowTerm:
    if not side:
        pre, var = schema.identity_word
        word = pre + bindings[var]
        return factors_to_term(word, [])
    parts: list[ArrowTerm] = []
    src = None
    for pat in side:
        if isinstance(pat, GenPat):
            factor = Factor(pat.prefix, pat.kind,
                            pat.index_pre + bindings[pat.index_var])
            parts.append(factor.to_term())
            if src is None:
                src = factor.src
        else:
            term = f_term
            for op in reversed(pat.prefix):
                term = App(op, term)
            parts.append(term)
            if src is None:
                src = term_type(term)[0]
    out = parts[0]
    for part in parts[1:]:
        from .terms import Comp

        out = Comp(part, out)
    return out


def instantiate(schema: EquationSchema, word: str,
                f_term: Optional[ArrowTerm] = None) -> tuple[ArrowTerm, ArrowTerm]:
    """Concrete (lhs, rhs) instance at index word ``word``; naturality
    schemas additionally take the inner arrow."""
    if schema.builder is not None:
        return schema.builder(word)
    bindings: dict = {"A": word}
    if schema.naturality:
        if f_term is None:
            raise TermError(f"schema {schema.id} needs an inner arrow")
        a, b = term_type(f_term)
        bindings = {"A": a, "B": b}
    lhs = _side_term(schema, schema.lhs, bindings, f_term)
    rhs = _side_term(schema, schema.rhs, bindings, f_term)
    return lhs, rhs


# ---------------------------------------------------------------------------
# The registry


def _schema(id: str, lhs: list[Pat], rhs: list[Pat],
            identity_word: Optional[tuple[str, str]] = None) -> EquationSchema:
    return EquationSchema(id, tuple(lhs), tuple(rhs), identity_word)


def _build_registry() -> dict[str, EquationSchema]:
    s: list[EquationSchema] = []

    # Naturality families.
    s.append(_schema("nat_eps_box",
                     [F("b"), G("", "eps_box", "", "B")],
                     [G("", "eps_box", "", "A"), F("")]))
    s.append(_schema("nat_eps_dia",
                     [G("", "eps_dia", "", "A"), F("d")],
                     [F(""), G("", "eps_dia", "", "B")]))
    s.append(_schema("nat_delta_bb",
                     [G("", "delta_bb", "", "A"), F("bb")],
                     [F("b"), G("", "delta_bb", "", "B")]))
    s.append(_schema("nat_delta_bd",
                     [G("", "delta_bd", "", "A"), F("bd")],
                     [F("d"), G("", "delta_bd", "", "B")]))
    s.append(_schema("nat_delta_dd",
                     [F("dd"), G("", "delta_dd", "", "B")],
                     [G("", "delta_dd", "", "A"), F("d")]))
    s.append(_schema("nat_delta_db",
                     [F("db"), G("", "delta_db", "", "B")],
                     [G("", "delta_db", "", "A"), F("b")]))
    s.append(_schema("nat_chi_bb",
                     [G("", "chi_bb", "", "A"), F("bb")],
                     [F("bb"), G("", "chi_bb", "", "B")]))
    s.append(_schema("nat_chi_dd",
                     [G("", "chi_dd", "", "A"), F("dd")],
                     [F("dd"), G("", "chi_dd", "", "B")]))
    s.append(_schema("nat_chi_db",
                     [G("", "chi_db", "", "A"), F("bd")],
                     [F("db"), G("", "chi_db", "", "B")]))
    s.append(_schema("nat_chi_bd",
                     [G("", "chi_bd", "", "A"), F("db")],
                     [F("bd"), G("", "chi_bd", "", "B")]))
    s.append(_schema("nat_sigma_bb",
                     [G("", "sigma_bb", "", "A"), F("bb")],
                     [F("b"), G("", "sigma_bb", "", "B")]))
    s.append(_schema("nat_sigma_db",
                     [G("", "sigma_db", "", "A"), F("db")],
                     [F("d"), G("", "sigma_db", "", "B")]))
    s.append(_schema("nat_sigma_bd",
                     [F("bd"), G("", "sigma_bd", "", "B")],
                     [G("", "sigma_bd", "", "A"), F("b")]))
    s.append(_schema("nat_sigma_dd",
                     [F("dd"), G("", "sigma_dd", "", "B")],
                     [G("", "sigma_dd", "", "A"), F("d")]))

    # Counit slide (the one-generator base form of naturality).
    s.append(_schema("slide_eps_box",
                     [G("b", "eps_box", "", "A"), G("", "eps_box", "", "A")],
                     [G("", "eps_box", "b", "A"), G("", "eps_box", "", "A")]))
    s.append(_schema("slide_eps_dia",
                     [G("", "eps_dia", "", "A"), G("d", "eps_dia", "", "A")],
                     [G("", "eps_dia", "", "A"), G("", "eps_dia", "d", "A")]))

    # Comultiplication associativity (and its mixed forms).
    s.append(_schema("assoc_delta_bb",
                     [G("", "delta_bb", "", "A"), G("b", "delta_bb", "", "A")],
                     [G("", "delta_bb", "", "A"), G("", "delta_bb", "b", "A")]))
    s.append(_schema("assoc_delta_bd",
                     [G("", "delta_bd", "", "A"), G("b", "delta_bd", "", "A")],
                     [G("", "delta_bd", "", "A"), G("", "delta_bb", "d", "A")]))
    s.append(_schema("assoc_delta_dd",
                     [G("d", "delta_dd", "", "A"), G("", "delta_dd", "", "A")],
                     [G("", "delta_dd", "d", "A"), G("", "delta_dd", "", "A")]))
    s.append(_schema("assoc_delta_db",
                     [G("d", "delta_db", "", "A"), G("", "delta_db", "", "A")],
                     [G("", "delta_dd", "b", "A"), G("", "delta_db", "", "A")]))
    s.append(_schema("assoc_sigma_bb",
                     [G("", "sigma_bb", "", "A"), G("", "sigma_bb", "b", "A")],
                     [G("", "sigma_bb", "", "A"), G("b", "sigma_bb", "", "A")]))
    s.append(_schema("assoc_sigma_db",
                     [G("", "sigma_db", "", "A"), G("", "sigma_db", "b", "A")],
                     [G("", "sigma_db", "", "A"), G("d", "sigma_bb", "", "A")]))
    s.append(_schema("assoc_sigma_dd",
                     [G("", "sigma_dd", "d", "A"), G("", "sigma_dd", "", "A")],
                     [G("d", "sigma_dd", "", "A"), G("", "sigma_dd", "", "A")]))
    s.append(_schema("assoc_sigma_bd",
                     [G("", "sigma_bd", "d", "A"), G("", "sigma_bd", "", "A")],
                     [G("b", "sigma_dd", "", "A"), G("", "sigma_bd", "", "A")]))

    # Triangle laws.
    s.append(_schema("beta_bb",
                     [G("", "delta_bb", "", "A"), G("", "eps_box", "b", "A")],
                     [], identity_word=("b", "A")))
    s.append(_schema("beta_bd",
                     [G("", "delta_bd", "", "A"), G("", "eps_box", "d", "A")],
                     [], identity_word=("d", "A")))
    s.append(_schema("beta_dd",
                     [G("", "eps_dia", "d", "A"), G("", "delta_dd", "", "A")],
                     [], identity_word=("d", "A")))
    s.append(_schema("beta_db",
                     [G("", "eps_dia", "b", "A"), G("", "delta_db", "", "A")],
                     [], identity_word=("b", "A")))
    s.append(_schema("eta_bb",
                     [G("", "delta_bb", "", "A"), G("b", "eps_box", "", "A")],
                     [], identity_word=("b", "A")))
    s.append(_schema("eta_dd",
                     [G("d", "eps_dia", "", "A"), G("", "delta_dd", "", "A")],
                     [], identity_word=("d", "A")))
    s.append(_schema("beta_sigma_bb",
                     [G("", "sigma_bb", "", "A"), G("", "eps_box", "b", "A")],
                     [], identity_word=("b", "A")))
    s.append(_schema("beta_sigma_dd",
                     [G("", "eps_dia", "d", "A"), G("", "sigma_dd", "", "A")],
                     [], identity_word=("d", "A")))
    s.append(_schema("eta_sigma_bb",
                     [G("", "sigma_bb", "", "A"), G("b", "eps_box", "", "A")],
                     [], identity_word=("b", "A")))
    s.append(_schema("eta_sigma_db",
                     [G("", "sigma_db", "", "A"), G("d", "eps_box", "", "A")],
                     [], identity_word=("d", "A")))
    s.append(_schema("eta_sigma_bd",
                     [G("b", "eps_dia", "", "A"), G("", "sigma_bd", "", "A")],
                     [], identity_word=("b", "A")))
    s.append(_schema("eta_sigma_dd",
                     [G("d", "eps_dia", "", "A"), G("", "sigma_dd", "", "A")],
                     [], identity_word=("d", "A")))

    # Mixed interaction laws (the N- and I-shaped equations).
    s.append(_schema("zigzag_n_b",
                     [G("", "delta_bd", "b", "A"), G("b", "delta_db", "", "A")],
                     [G("", "delta_db", "", "A"), G("", "delta_bb", "", "A")]))
    s.append(_schema("zigzag_n_d",
                     [G("", "delta_bd", "d", "A"), G("b", "delta_dd", "", "A")],
                     [G("", "delta_dd", "", "A"), G("", "delta_bd", "", "A")]))
    s.append(_schema("zigzag_i_b",
                     [G("d", "delta_bb", "", "A"), G("", "delta_db", "b", "A")],
                     [G("", "delta_db", "", "A"), G("", "delta_bb", "", "A")]))
    s.append(_schema("zigzag_i_d",
                     [G("d", "delta_bd", "", "A"), G("", "delta_db", "d", "A")],
                     [G("", "delta_dd", "", "A"), G("", "delta_bd", "", "A")]))
    s.append(_schema("zigzag_n_b_s",
                     [G("", "sigma_bb", "d", "A"), G("b", "sigma_bd", "", "A")],
                     [G("", "sigma_bd", "", "A"), G("", "sigma_bb", "", "A")]))
    s.append(_schema("zigzag_n_d_s",
                     [G("", "sigma_db", "d", "A"), G("d", "sigma_bd", "", "A")],
                     [G("", "sigma_dd", "", "A"), G("", "sigma_db", "", "A")]))
    s.append(_schema("zigzag_i_b_s",
                     [G("b", "sigma_db", "", "A"), G("", "sigma_bd", "b", "A")],
                     [G("", "sigma_bd", "", "A"), G("", "sigma_bb", "", "A")]))
    s.append(_schema("zigzag_i_d_s",
                     [G("d", "sigma_db", "", "A"), G("", "sigma_dd", "b", "A")],
                     [G("", "sigma_dd", "", "A"), G("", "sigma_db", "", "A")]))

    # Permutation generators.
    s.append(_schema("invol_chi_bb",
                     [G("", "chi_bb", "", "A"), G("", "chi_bb", "", "A")],
                     [], identity_word=("bb", "A")))
    s.append(_schema("invol_chi_dd",
                     [G("", "chi_dd", "", "A"), G("", "chi_dd", "", "A")],
                     [], identity_word=("dd", "A")))
    s.append(_schema("yb_chi_bb",
                     [G("", "chi_bb", "b", "A"), G("b", "chi_bb", "", "A"),
                      G("", "chi_bb", "b", "A")],
                     [G("b", "chi_bb", "", "A"), G("", "chi_bb", "b", "A"),
                      G("b", "chi_bb", "", "A")]))
    s.append(_schema("yb_chi_dd",
                     [G("", "chi_dd", "d", "A"), G("d", "chi_dd", "", "A"),
                      G("", "chi_dd", "d", "A")],
                     [G("d", "chi_dd", "", "A"), G("", "chi_dd", "d", "A"),
                      G("d", "chi_dd", "", "A")]))
    s.append(_schema("eps_chi_bb",
                     [G("", "chi_bb", "", "A"), G("", "eps_box", "b", "A")],
                     [G("b", "eps_box", "", "A")]))
    s.append(_schema("eps_chi_dd",
                     [G("", "eps_dia", "d", "A"), G("", "chi_dd", "", "A")],
                     [G("d", "eps_dia", "", "A")]))
    s.append(_schema("delta_chi_bb",
                     [G("", "chi_bb", "", "A"), G("", "delta_bb", "b", "A")],
                     [G("b", "delta_bb", "", "A"), G("", "chi_bb", "b", "A"),
                      G("b", "chi_bb", "", "A")]))
    s.append(_schema("delta_chi_dd",
                     [G("", "delta_dd", "d", "A"), G("", "chi_dd", "", "A")],
                     [G("d", "chi_dd", "", "A"), G("", "chi_dd", "d", "A"),
                      G("d", "delta_dd", "", "A")]))
    s.append(_schema("chi_delta_bb",
                     [G("", "delta_bb", "", "A"), G("", "chi_bb", "", "A")],
                     [G("", "delta_bb", "", "A")]))
    s.append(_schema("chi_delta_dd",
                     [G("", "chi_dd", "", "A"), G("", "delta_dd", "", "A")],
                     [G("", "delta_dd", "", "A")]))

    # Mixing permutation: diamond-past-box.
    s.append(_schema("eps_box_chi_db",
                     [G("", "chi_db", "", "A"), G("", "eps_box", "d", "A")],
                     [G("d", "eps_box", "", "A")]))
    s.append(_schema("eps_dia_chi_db",
                     [G("", "eps_dia", "b", "A"), G("", "chi_db", "", "A")],
                     [G("b", "eps_dia", "", "A")]))
    s.append(_schema("delta_bb_chi_db",
                     [G("", "chi_db", "", "A"), G("", "delta_bb", "d", "A")],
                     [G("d", "delta_bb", "", "A"), G("", "chi_db", "b", "A"),
                      G("b", "chi_db", "", "A")]))
    s.append(_schema("delta_dd_chi_db",
                     [G("", "delta_dd", "b", "A"), G("", "chi_db", "", "A")],
                     [G("d", "chi_db", "", "A"), G("", "chi_db", "d", "A"),
                      G("b", "delta_dd", "", "A")]))

    # The converse mixing permutation, as the formal inverse.
    s.append(_schema("eps_box_chi_bd",
                     [G("", "eps_box", "d", "A")],
                     [G("", "chi_bd", "", "A"), G("d", "eps_box", "", "A")]))
    s.append(_schema("eps_dia_chi_bd",
                     [G("", "eps_dia", "b", "A")],
                     [G("b", "eps_dia", "", "A"), G("", "chi_bd", "", "A")]))
    s.append(_schema("delta_bb_chi_bd",
                     [G("", "delta_bb", "d", "A"), G("b", "chi_bd", "", "A"),
                      G("", "chi_bd", "b", "A")],
                     [G("", "chi_bd", "", "A"), G("d", "delta_bb", "", "A")]))
    s.append(_schema("delta_dd_chi_bd",
                     [G("", "chi_bd", "d", "A"), G("d", "chi_bd", "", "A"),
                      G("", "delta_dd", "b", "A")],
                     [G("b", "delta_dd", "", "A"), G("", "chi_bd", "", "A")]))
    s.append(_schema("chi_inv_db",
                     [G("", "chi_db", "", "A"), G("", "chi_bd", "", "A")],
                     [], identity_word=("db", "A")))
    s.append(_schema("chi_inv_bd",
                     [G("", "chi_bd", "", "A"), G("", "chi_db", "", "A")],
                     [], identity_word=("bd", "A")))

    # Collapse equations.
    s.append(_schema("triv_eps_box",
                     [G("b", "eps_box", "", "A")],
                     [G("", "eps_box", "b", "A")]))
    s.append(_schema("triv_eps_dia",
                     [G("", "eps_dia", "d", "A")],
                     [G("d", "eps_dia", "", "A")]))
    s.append(_schema("commute_box_dia",
                     [G("", "eps_box", "db", "A"), G("db", "eps_dia", "", "A")],
                     [G("bd", "eps_box", "", "A"), G("", "eps_dia", "bd", "A")]))

    # The six preordering equations, each of which collapses the
    # box/diamond-mixing theory to a preorder.
    s.append(_schema("preorder_1",
                     [G("b", "eps_box", "", "A")],
                     [G("", "eps_box", "b", "A")]))
    s.append(_schema("preorder_2",
                     [G("b", "eps_dia", "", "A")],
                     [G("", "eps_box", "", "A"), G("", "eps_dia", "", "A"),
                      G("", "delta_bd", "", "A")]))
    s.append(_schema("preorder_3",
                     [G("", "eps_dia", "", "A"), G("", "delta_bd", "", "A"),
                      G("b", "eps_dia", "d", "A")],
                     [G("", "eps_dia", "", "A"), G("", "eps_dia", "d", "A"),
                      G("", "delta_bd", "d", "A")]))
    s.append(_schema("preorder_4",
                     [G("", "delta_db", "b", "A"), G("", "eps_box", "b", "A"),
                      G("", "eps_box", "", "A")],
                     [G("d", "eps_box", "b", "A"), G("", "delta_db", "", "A"),
                      G("", "eps_box", "", "A")]))
    s.append(_schema("preorder_5",
                     [G("", "delta_db", "", "A"), G("", "eps_box", "", "A"),
                      G("", "eps_dia", "", "A")],
                     [G("d", "eps_box", "", "A")]))
    s.append(_schema("preorder_6",
                     [G("", "eps_dia", "d", "A")],
                     [G("d", "eps_dia", "", "A")]))

    registry = {schema.id: schema for schema in s}

    # Mirrored preordering equations (instance-built: the mirror places the
    # reversed index word as an application prefix, which the factor-pattern
    # language cannot express).
    def mirrored(base_id: str) -> Callable[[str], tuple[ArrowTerm, ArrowTerm]]:
        def build(word: str) -> tuple[ArrowTerm, ArrowTerm]:
            from .decide import mirror_term

            lhs, rhs = instantiate(registry[base_id], word[::-1])
            return mirror_term(lhs, source="s5"), mirror_term(rhs, source="s5")

        return build

    for i in range(1, 7):
        sid = f"preorder_{i}_s"
        registry[sid] = EquationSchema(sid, (), (), builder=mirrored(f"preorder_{i}"))
    return registry


SCHEMAS: dict[str, EquationSchema] = _build_registry()


def get_schema(schema_id: str) -> EquationSchema:
    try:
        return SCHEMAS[schema_id]
    except KeyError:
        raise TermError(f"unknown equation schema {schema_id!r}") from None
