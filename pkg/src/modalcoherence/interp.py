"""Coherence functors: interpret arrow terms as finite-ordinal diagrams.

Every registered theory carries a default functor into its target category
(binary relations or split equivalences); the classic presentations of the
base system also admit the two one-sided functor variants, the
box/diamond-mixing theories admit a dual functor that exchanges the counit
and comultiplication shapes, and the collapse quotients use a conjugated
functor computed in :mod:`modalcoherence.quotient`.

Equality of deductions is decided here by comparing diagrams, which the
coherence theorems make complete for the registered non-quotient theories.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import diagram as dg
from .terms import (
    App,
    ArrowTerm,
    Gen,
    Id,
    TermError,
    word_to_str,
)
from .theories import REL, SHARP, TRIV, Theory, get_theory, typecheck

STD = "std"
EPS = "eps"
DELTA = "delta"
DUAL = "dual"
SHARP_VARIANT = "sharp"

VARIANTS = (STD, EPS, DELTA, DUAL, SHARP_VARIANT)

# Theories admitting the one-sided functor variants.  On the mixed theories
# only one side is a functor (the added diagonal of the delta variant breaks
# the counit/unit mixing, and dually), so the eps variant stops at the
# counit-only mixed theory and the delta variant at the comultiplication-only
# one.
_EPS_OK = {"k", "t_box", "t_dia", "k4_box", "k4_dia", "t_boxdia"}
_DELTA_OK = {"k", "t_box", "t_dia", "k4_box", "k4_dia", "k4_boxdia"}
_DUAL_OK = {"s5", "fives"}

_CAP_KINDS = {"delta_bb", "delta_bd", "sigma_bb", "sigma_db"}
_CUP_KINDS = {"delta_dd", "delta_db", "sigma_dd", "sigma_bd"}


class VariantError(TermError):
    pass


def check_variant(theory: Theory, variant: str) -> None:
    if variant == STD:
        if theory.quotient == SHARP:
            return  # resolved to the sharp functor
        if theory.quotient == TRIV:
            raise VariantError(
                f"{theory.id} is a preorder quotient; it has no diagram functor")
        return
    if variant in (EPS, DELTA):
        allowed = _EPS_OK if variant == EPS else _DELTA_OK
        if theory.id not in allowed:
            raise VariantError(
                f"variant {variant!r} only applies to the base-system theories")
        return
    if variant == DUAL:
        if theory.id not in _DUAL_OK:
            raise VariantError(f"variant 'dual' only applies to s5 and fives")
        return
    if variant == SHARP_VARIANT:
        if theory.quotient != SHARP:
            raise VariantError(
                f"variant 'sharp' only applies to the sharp quotients")
        return
    raise VariantError(f"unknown functor variant {variant!r}")


def _rel_clause(variant: str, kind: str, n: int) -> dg.RelDiagram:
    ident = [(i, i) for i in range(n)]
    if kind == "eps_box":
        if variant == DELTA:
            pairs = ident + ([(n, n - 1)] if n >= 1 else [])
        else:
            pairs = ident
        return dg.rel(n + 1, n, pairs)
    if kind == "eps_dia":
        if variant == DELTA:
            pairs = ident + ([(n - 1, n)] if n >= 1 else [])
        else:
            pairs = ident
        return dg.rel(n, n + 1, pairs)
    if kind == "delta_bb":
        pairs = ident + [(n, n)]
        if variant != EPS:
            pairs.append((n, n + 1))
        return dg.rel(n + 1, n + 2, pairs)
    if kind == "delta_dd":
        pairs = ident + [(n, n)]
        if variant != EPS:
            pairs.append((n + 1, n))
        return dg.rel(n + 2, n + 1, pairs)
    if kind.startswith("chi_"):
        pairs = ident + [(n, n + 1), (n + 1, n)]
        return dg.rel(n + 2, n + 2, pairs)
    raise VariantError(f"no relational clause for generator {kind}")


def _straights(n: int) -> list[list[dg.Elem]]:
    return [[("s", i), ("t", i)] for i in range(n)]


def _gen_clause(kind: str, n: int) -> dg.SplitEq:
    if kind == "eps_box":
        return dg.spliteq(n + 1, n, _straights(n) + [[("s", n)]])
    if kind == "eps_dia":
        return dg.spliteq(n, n + 1, _straights(n) + [[("t", n)]])
    if kind in _CAP_KINDS:
        cap = [("s", n), ("t", n), ("t", n + 1)]
        return dg.spliteq(n + 1, n + 2, _straights(n) + [cap])
    if kind in _CUP_KINDS:
        cup = [("s", n), ("s", n + 1), ("t", n)]
        return dg.spliteq(n + 2, n + 1, _straights(n) + [cup])
    raise VariantError(f"no split-equivalence clause for generator {kind}")


def _dual_clause(kind: str, n: int) -> dg.SplitEq:
    # Counit and comultiplication exchange shapes; objects gain one strand.
    if kind == "eps_box":
        return _gen_clause("delta_dd", n)
    if kind == "eps_dia":
        return _gen_clause("delta_bb", n)
    if kind in ("delta_bb", "delta_bd"):
        classes = _straights(n + 1) + [[("t", n + 1)], [("s", n + 1), ("t", n + 2)]]
        return dg.spliteq(n + 2, n + 3, classes)
    if kind in ("delta_dd", "delta_db"):
        classes = _straights(n + 1) + [[("s", n + 1)], [("s", n + 2), ("t", n + 1)]]
        return dg.spliteq(n + 3, n + 2, classes)
    raise VariantError(f"no dual clause for generator {kind}")


def _with_labels(d: dg.Diagram, src: Optional[str], tgt: Optional[str]) -> dg.Diagram:
    if isinstance(d, dg.RelDiagram):
        return dg.RelDiagram(d.src_len, d.tgt_len, d.pairs, src, tgt)
    return dg.SplitEq(d.src_len, d.tgt_len, d.classes, src, tgt)


def _app_extend(d: dg.Diagram) -> dg.Diagram:
    """Clause for an operator application: one new top strand joining the new
    source element to the new target element."""
    if isinstance(d, dg.RelDiagram):
        pairs = set(d.pairs)
        pairs.add((d.src_len, d.tgt_len))
        return dg.rel(d.src_len + 1, d.tgt_len + 1, pairs)
    classes = [list(cls) for cls in d.classes]
    classes.append([("s", d.src_len), ("t", d.tgt_len)])
    return dg.spliteq(d.src_len + 1, d.tgt_len + 1, classes)


def _eval_rel(term: ArrowTerm, variant: str) -> dg.RelDiagram:
    if isinstance(term, Id):
        return dg.rel_identity(len(term.word))
    if isinstance(term, Gen):
        return _rel_clause(variant, term.kind, len(term.index))
    if isinstance(term, App):
        return _app_extend(_eval_rel(term.body, variant))
    return dg.rel_compose(_eval_rel(term.outer, variant),
                          _eval_rel(term.inner, variant))


def _eval_gen(term: ArrowTerm) -> dg.SplitEq:
    if isinstance(term, Id):
        return dg.spliteq_identity(len(term.word))
    if isinstance(term, Gen):
        return _gen_clause(term.kind, len(term.index))
    if isinstance(term, App):
        return _app_extend(_eval_gen(term.body))
    return dg.spliteq_compose(_eval_gen(term.outer), _eval_gen(term.inner))


def _eval_dual(term: ArrowTerm) -> dg.SplitEq:
    if isinstance(term, Id):
        return dg.spliteq_identity(len(term.word) + 1)
    if isinstance(term, Gen):
        return _dual_clause(term.kind, len(term.index))
    if isinstance(term, App):
        return _app_extend(_eval_dual(term.body))
    return dg.spliteq_compose(_eval_dual(term.outer), _eval_dual(term.inner))


def interp(theory: "Theory | str", term: ArrowTerm, variant: str = STD) -> dg.Diagram:
    """Image of a well-typed term under the requested coherence functor.

    The diagram carries the term's source and target words as labels, except
    under the dual functor, whose boundary ordinals exceed the word lengths.
    """
    theory = get_theory(theory)
    check_variant(theory, variant)
    src, tgt = typecheck(term, theory)
    if variant == SHARP_VARIANT or (variant == STD and theory.quotient == SHARP):
        from .quotient import interp_sharp

        return interp_sharp(theory, term)
    if variant == DUAL:
        if theory.id == "fives":
            from .decide import mirror_term

            return dg.mirror(_eval_dual(mirror_term(term, source="fives")))
        return _eval_dual(term)
    if theory.target == REL:
        return _with_labels(_eval_rel(term, variant), src, tgt)
    return _with_labels(_eval_gen(term), src, tgt)


EQUAL = "equal"
NOT_EQUAL = "not_equal"
TYPE_MISMATCH = "type_mismatch"


@dataclass(frozen=True)
class EqualityResult:
    verdict: str
    left_type: tuple[str, str]
    right_type: tuple[str, str]
    left_diagram: Optional[dg.Diagram] = None
    right_diagram: Optional[dg.Diagram] = None

    def __bool__(self) -> bool:
        return self.verdict == EQUAL

    def describe(self) -> str:
        if self.verdict == TYPE_MISMATCH:
            lt, rt = self.left_type, self.right_type
            return (f"type mismatch: {word_to_str(lt[0])} |- {word_to_str(lt[1])}"
                    f" vs {word_to_str(rt[0])} |- {word_to_str(rt[1])}")
        return self.verdict.replace("_", " ")


@dataclass(frozen=True)
class SoundnessFailure:
    schema_id: str
    word: str
    inner: Optional[str]
    lhs: str
    rhs: str


@dataclass(frozen=True)
class SoundnessReport:
    theory_id: str
    variant: str
    instances: int
    failures: tuple[SoundnessFailure, ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def describe(self) -> str:
        head = (f"{self.theory_id}/{self.variant}: {self.instances} instances, "
                f"{len(self.failures)} failures")
        lines = [head]
        for fail in self.failures:
            lines.append(f"  {fail.schema_id} @ A={word_to_str(fail.word)}"
                         + (f" f={fail.inner}" if fail.inner else "")
                         + f": {fail.lhs}  !=  {fail.rhs}")
        return "\n".join(lines)


def _all_words(max_len: int) -> list[str]:
    words = [""]
    level = [""]
    for _ in range(max_len):
        level = [w + c for w in level for c in "bd"]
        words.extend(level)
    return words


def check_soundness(theory: "Theory | str", variant: str = STD,
                    idx_bound: int = 3, f_bound: int = 2) -> SoundnessReport:
    """Verify every axiom-schema instance of the theory under the functor.

    Index metavariables range over words of length <= idx_bound; the inner
    arrow of a naturality schema ranges over all theory terms with at most
    f_bound generators whose source word has length <= idx_bound.  For the
    preorder quotients the check degenerates to equality of types, which is
    what their decision procedure relies on.
    """
    from .schemas import get_schema, instantiate
    from .terms import factors_to_term
    from .theories import enumerate_factor_terms

    theory = get_theory(theory)
    type_only = theory.quotient == TRIV
    if not type_only:
        check_variant(theory, variant)
    words = _all_words(idx_bound)
    failures: list[SoundnessFailure] = []
    instances = 0

    def check_one(schema_id: str, word: str, lhs: ArrowTerm, rhs: ArrowTerm,
                  inner: Optional[str]) -> None:
        nonlocal instances
        instances += 1
        if type_only:
            ok = typecheck(lhs, theory) == typecheck(rhs, theory)
        else:
            ok = interp(theory, lhs, variant).same_as(interp(theory, rhs, variant))
        if not ok:
            failures.append(SoundnessFailure(schema_id, word, inner,
                                             str(lhs), str(rhs)))

    for schema_id in theory.equations:
        schema = get_schema(schema_id)
        if schema.pattern_based and schema.naturality:
            for word in words:
                for factors in enumerate_factor_terms(theory, word, f_bound):
                    inner = factors_to_term(word, factors)
                    lhs, rhs = instantiate(schema, "", f_term=inner)
                    check_one(schema_id, word, lhs, rhs, str(inner))
        else:
            for word in words:
                lhs, rhs = instantiate(schema, word)
                check_one(schema_id, word, lhs, rhs, None)
    return SoundnessReport(theory.id, variant, instances, tuple(failures))


def decide_equal(theory: "Theory | str", f: ArrowTerm, g: ArrowTerm) -> EqualityResult:
    """Decide equality of two deductions in a theory.

    Non-quotient theories and the sharp quotients compare images under their
    (faithful) functor; the preorder quotients identify all terms of equal
    type.
    """
    theory = get_theory(theory)
    ftype = typecheck(f, theory)
    gtype = typecheck(g, theory)
    if ftype != gtype:
        return EqualityResult(TYPE_MISMATCH, ftype, gtype)
    if theory.quotient == TRIV:
        return EqualityResult(EQUAL, ftype, gtype)
    df = interp(theory, f)
    dgm = interp(theory, g)
    verdict = EQUAL if df.same_as(dgm) else NOT_EQUAL
    return EqualityResult(verdict, ftype, gtype, df, dgm)
