"""Equational rewriting: developed forms, staged normal forms, bounded
bidirectional proof search, and confluence checking.

Terms are handled in spine form: a source word plus the list of generator
factors in application order (the categorial and functorial equations are
normalized away by this representation).  A rewrite step applies one equation
schema, in either direction, to a contiguous factor segment under a common
operator prefix.

The proof search is the desk-scale independent check against the coherence
decision procedure: it certifies equalities by exhibiting derivations, and
an internal guard asserts that every explored step preserves the diagram
interpretation.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterator, Optional

from .interp import interp
from .schemas import EquationSchema, build_side, get_schema, match_side
from .terms import (
    ArrowTerm,
    Factor,
    TermError,
    factors_to_term,
    term_factors,
)
from .theories import Theory, get_theory, typecheck

DEFAULT_DEPTH = 12
_DEPTH_ENV = "MODALCOHERENCE_DEPTH"


def search_depth(depth: Optional[int] = None) -> int:
    if depth is not None:
        return depth
    try:
        return int(os.environ[_DEPTH_ENV])
    except (KeyError, ValueError):
        return DEFAULT_DEPTH


def develop(term: ArrowTerm) -> ArrowTerm:
    """Flatten a term into a composite of single-generator factors."""
    src, factors = term_factors(term)
    return factors_to_term(src, factors)


# ---------------------------------------------------------------------------
# Rewrite steps


@dataclass(frozen=True)
class Step:
    schema_id: str
    direction: str  # "lr" or "rl"
    position: int   # index of the first factor replaced
    strip: int      # common prefix depth stripped before matching
    replaced: int   # number of factors removed
    inserted: int   # number of factors inserted
    instantiation: str = ""  # bound metavariables, for the serialized form

    def reversed(self) -> "Step":
        return Step(self.schema_id,
                    "rl" if self.direction == "lr" else "lr",
                    self.position, self.strip, self.inserted, self.replaced,
                    self.instantiation)

    def to_dict(self) -> dict:
        return {"schema": self.schema_id, "direction": self.direction,
                "position": [self.position, self.strip],
                "instantiation": self.instantiation}


def derivation_to_json(steps: list[Step]) -> str:
    return json.dumps([s.to_dict() for s in steps])


def _describe_bindings(bindings: dict) -> str:
    from .terms import word_to_str

    parts = []
    for key in ("A", "B"):
        if key in bindings:
            parts.append(f"{key}={word_to_str(bindings[key])}")
    if "f" in bindings:
        parts.append(f"f={bindings['f'].to_term()}")
    return " ".join(parts)


def _boundary_words(src: str, factors: tuple[Factor, ...]) -> list[str]:
    words = [src]
    for f in factors:
        words.append(f.tgt)
    return words


def _strip(segment: list[Factor], s: int) -> Optional[list[Factor]]:
    if s == 0:
        return segment
    prefix = segment[0].prefix[:s]
    stripped = []
    for f in segment:
        if f.prefix[:s] != prefix or len(f.prefix) < s:
            return None
        stripped.append(Factor(f.prefix[s:], f.kind, f.index))
    return stripped


def _apply_prefix(factors: list[Factor], prefix: str) -> list[Factor]:
    if not prefix:
        return factors
    return [Factor(prefix + f.prefix, f.kind, f.index) for f in factors]


def _segment_rewrites(schema: EquationSchema, direction: str,
                      factors: tuple[Factor, ...],
                      words: list[str]) -> Iterator[tuple[tuple[Factor, ...], Step]]:
    frm, to = (schema.lhs, schema.rhs) if direction == "lr" else (schema.rhs, schema.lhs)
    n = len(factors)
    if frm:
        L = len(frm)
        for i in range(n - L + 1):
            segment = list(factors[i:i + L])
            max_strip = min(len(f.prefix) for f in segment)
            for s in range(max_strip + 1):
                stripped = _strip(segment, s)
                if stripped is None:
                    continue
                bindings = match_side(frm, stripped)
                if bindings is None:
                    continue
                prefix = segment[0].prefix[:s]
                new_segment = _apply_prefix(build_side(to, bindings), prefix)
                new_factors = factors[:i] + tuple(new_segment) + factors[i + L:]
                yield new_factors, Step(schema.id, direction, i, s, L,
                                        len(new_segment),
                                        _describe_bindings(bindings))
    else:
        # Inserting an expansion of the identity at a boundary.
        pre, var = schema.identity_word
        for i in range(n + 1):
            word = words[i]
            for s in range(len(word) + 1):
                rest = word[s:]
                if not rest.startswith(pre):
                    continue
                bindings = {var: rest[len(pre):]}
                new_segment = _apply_prefix(build_side(to, bindings), word[:s])
                new_factors = factors[:i] + tuple(new_segment) + factors[i:]
                yield new_factors, Step(schema.id, direction, i, s, 0,
                                        len(new_segment),
                                        _describe_bindings(bindings))


def rewrites(theory: Theory, src: str, factors: tuple[Factor, ...],
             directions: tuple[str, ...] = ("lr", "rl"),
             schema_ids: Optional[tuple[str, ...]] = None,
             ) -> Iterator[tuple[tuple[Factor, ...], Step]]:
    """All one-step rewrites of a spine by the theory's schemas."""
    words = _boundary_words(src, factors)
    for schema_id in (schema_ids if schema_ids is not None else theory.equations):
        schema = get_schema(schema_id)
        if not schema.pattern_based:
            continue
        for direction in directions:
            yield from _segment_rewrites(schema, direction, factors, words)


# ---------------------------------------------------------------------------
# Directed normalization (strategy used by the prover and the rewrite-based
# normal forms)

# Schemas that strictly shrink the factor count, oriented that way.
_SHRINKERS = {
    "beta_bb": "lr", "beta_bd": "lr", "beta_dd": "lr", "beta_db": "lr",
    "eta_bb": "lr", "eta_dd": "lr",
    "beta_sigma_bb": "lr", "beta_sigma_dd": "lr",
    "eta_sigma_bb": "lr", "eta_sigma_db": "lr",
    "eta_sigma_bd": "lr", "eta_sigma_dd": "lr",
    "invol_chi_bb": "lr", "invol_chi_dd": "lr",
    "chi_inv_db": "lr", "chi_inv_bd": "lr",
    "chi_delta_bb": "lr", "chi_delta_dd": "lr",
    "eps_chi_bb": "lr", "eps_chi_dd": "lr",
    "eps_box_chi_db": "lr", "eps_dia_chi_db": "lr",
    "eps_box_chi_bd": "rl", "eps_dia_chi_bd": "rl",
    "delta_chi_bb": "rl", "delta_chi_dd": "rl",
    "delta_bb_chi_db": "rl", "delta_dd_chi_db": "rl",
    "delta_bb_chi_bd": "lr", "delta_dd_chi_bd": "lr",
}

# Stage-fixing same-size rules.  The associativity family is oriented toward
# the shallow-prefix form on the comultiplication side and toward the deep
# form on its mirror, matching the oriented slide family.
_STAGE_FIXERS = {
    "zigzag_n_b": "lr", "zigzag_n_d": "lr",
    "zigzag_i_b": "lr", "zigzag_i_d": "lr",
    "zigzag_n_b_s": "lr", "zigzag_n_d_s": "lr",
    "zigzag_i_b_s": "lr", "zigzag_i_d_s": "lr",
    "assoc_delta_bb": "lr", "assoc_delta_bd": "lr",
    "assoc_delta_dd": "lr", "assoc_delta_db": "lr",
    "assoc_sigma_bb": "lr", "assoc_sigma_db": "lr",
    "assoc_sigma_dd": "lr", "assoc_sigma_bd": "lr",
}

_NATURALITIES = {
    "nat_eps_box", "nat_eps_dia", "nat_delta_bb", "nat_delta_bd",
    "nat_delta_dd", "nat_delta_db", "nat_chi_bb", "nat_chi_dd",
    "nat_chi_db", "nat_chi_bd", "nat_sigma_bb", "nat_sigma_db",
    "nat_sigma_bd", "nat_sigma_dd",
}

# Application stages per theory: lower stages apply earlier (more to the
# right of the composite) in the staged normal forms.
STAGES: dict[str, dict[str, int]] = {
    "t_box": {"eps_box": 1},
    "t_dia": {"eps_dia": 1},
    "k4_box": {"delta_bb": 1},
    "k4_dia": {"delta_dd": 1},
    "t_boxdia": {"eps_box": 1, "eps_dia": 2},
    "k4_boxdia": {"delta_dd": 1, "delta_bb": 2},
    "s4_box": {"eps_box": 1, "delta_bb": 2},
    "s4_dia": {"delta_dd": 1, "eps_dia": 2},
    "s4_boxdia": {"eps_box": 1, "delta_dd": 2, "delta_bb": 3, "eps_dia": 4},
    "s_chi": {"eps_box": 1, "chi_bb": 2},
    "splus_chi_op": {"delta_bb": 1, "chi_bb": 2},
    "s4_box_chi": {"eps_box": 1, "delta_bb": 2, "chi_bb": 3},
    "s4_dia_chi": {"chi_dd": 1, "delta_dd": 2, "eps_dia": 3},
    "s4_boxdia_chi": {"eps_box": 1, "delta_bb": 2, "chi_bb": 3,
                      "chi_dd": 4, "delta_dd": 5, "eps_dia": 6},
    "s42": {"eps_box": 1, "delta_bb": 2, "chi_db": 3, "delta_dd": 4,
            "eps_dia": 5},
    "s41": {"eps_box": 1, "delta_bb": 2, "chi_bd": 3, "delta_dd": 4,
            "eps_dia": 5},
    "s42_iso": {"eps_box": 1, "delta_bb": 2, "chi_db": 3, "chi_bd": 3,
                "delta_dd": 4, "eps_dia": 5},
    "s5": {"eps_box": 1, "delta_db": 1, "delta_dd": 1,
           "eps_dia": 2, "delta_bb": 2, "delta_bd": 2},
    "fives": {"eps_box": 1, "sigma_bd": 1, "sigma_dd": 1,
              "eps_dia": 2, "sigma_bb": 2, "sigma_db": 2},
}


def _stage(theory: Theory, kind: str) -> int:
    table = STAGES.get(theory.base.id if theory.quotient else theory.id, {})
    return table.get(kind, 0)


# Generators whose target word is longer than their source word.
_EXPANDING = {"eps_dia", "delta_bb", "delta_bd", "sigma_bb", "sigma_db"}
_NEUTRAL = {"chi_bb", "chi_dd", "chi_db", "chi_bd"}


def _sort_key(factor: Factor) -> tuple[int, int]:
    # Within a stage, contracting generators apply at the largest position
    # first and expanding ones at the smallest (the two halves of the
    # oriented slide family); permutation generators are left in place.
    if factor.kind in _NEUTRAL:
        return (0, 0)
    if factor.kind in _EXPANDING:
        return (-len(factor.index), len(factor.prefix))
    return (len(factor.index), -len(factor.prefix))


def directed_normalize(theory: "Theory | str", src: str,
                       factors: tuple[Factor, ...],
                       max_steps: int = 400,
                       ) -> tuple[tuple[Factor, ...], list[Step]]:
    """Greedy oriented rewriting: contract, fix stage order, sort stages.

    Terminates by a step cap and a seen-state set; the result is a sound
    rewrite of the input (every step is an equation of the theory) but is
    canonical only for the base single-generator theories.
    """
    theory = get_theory(theory)
    available = set(theory.equations)
    shrinkers = tuple((sid, d) for sid, d in _SHRINKERS.items() if sid in available)
    fixers = tuple((sid, d) for sid, d in _STAGE_FIXERS.items() if sid in available)
    nats = tuple(sid for sid in _NATURALITIES if sid in available)
    steps: list[Step] = []
    seen = {(src, factors)}
    current = factors
    for _ in range(max_steps):
        changed = False
        for sid, direction in shrinkers + fixers:
            found = next(rewrites(theory, src, current, (direction,), (sid,)), None)
            if found is not None and (src, found[0]) not in seen:
                current, step = found
                steps.append(step)
                seen.add((src, current))
                changed = True
                break
        if changed:
            continue
        # Adjacent naturality sort: move earlier-stage factors right.
        for i in range(len(current) - 1):
            inner, outer = current[i], current[i + 1]
            si, so = _stage(theory, inner.kind), _stage(theory, outer.kind)
            if si > so or (si == so and _sort_key(inner) <= _sort_key(outer)):
                wanted = None
                for sid in nats:
                    for direction in ("lr", "rl"):
                        for new_factors, step in _segment_rewrites(
                                get_schema(sid), direction,
                                current[i:i + 2],
                                _boundary_words(inner.src, current[i:i + 2])):
                            ni, no = new_factors
                            nsi, nso = _stage(theory, ni.kind), _stage(theory, no.kind)
                            if nsi > nso:
                                continue
                            if nsi == nso and not (_sort_key(ni) > _sort_key(no)):
                                continue
                            wanted = (new_factors, step)
                            break
                        if wanted:
                            break
                    if wanted:
                        break
                if wanted:
                    new_pair, step = wanted
                    candidate = current[:i] + new_pair + current[i + 2:]
                    if (src, candidate) not in seen:
                        current = candidate
                        steps.append(Step(step.schema_id, step.direction,
                                          i + step.position, step.strip,
                                          step.replaced, step.inserted))
                        seen.add((src, current))
                        changed = True
                        break
        if not changed:
            break
    return current, steps


# ---------------------------------------------------------------------------
# Normal forms


_REWRITE_NF = {"t_box", "t_dia", "k4_box", "k4_dia", "k4_boxdia"}


def normalize(theory: "Theory | str", term: ArrowTerm) -> ArrowTerm:
    """The theory's staged normal form of a term.

    For the base single-generator theories this is the irreducible developed
    form under the oriented slide family; for the staged theories it is
    produced by diagram-directed synthesis, hence canonical on each
    equality class.
    """
    theory = get_theory(theory)
    typecheck(term, theory)
    src, factors = term_factors(term)
    if theory.id in _REWRITE_NF:
        nf, _steps = directed_normalize(theory, src, tuple(factors))
        return factors_to_term(src, list(nf))
    from .decide import SYNTHESIS_THEORIES, synthesize

    if theory.id in SYNTHESIS_THEORIES:
        return synthesize(theory, interp(theory, term))
    raise TermError(f"theory {theory.id} has no declared normal form")


# ---------------------------------------------------------------------------
# Bounded bidirectional proof search


@dataclass(frozen=True)
class ProofResult:
    proved: bool
    steps: tuple[Step, ...] = ()

    def __bool__(self) -> bool:
        return self.proved

    def to_json(self) -> str:
        if not self.proved:
            return json.dumps(None)
        return derivation_to_json(list(self.steps))


class SoundnessViolation(TermError):
    """A rewrite step changed the interpretation; the schema registry or the
    matcher is broken."""


def prove_equal_bounded(theory: "Theory | str", f: ArrowTerm, g: ArrowTerm,
                        depth: Optional[int] = None,
                        size_slack: int = 2) -> ProofResult:
    """Search for an equational derivation joining f and g.

    Bidirectional breadth-bounded search over single schema applications (in
    both directions, at any position, under any operator prefix), seeded by
    the greedy directed strategy.  The total number of schema steps in a
    returned derivation is at most the depth budget.  ``Unknown`` (a falsy
    result) never means inequality.
    """
    theory = get_theory(theory)
    if theory.quotient is not None:
        raise TermError("proof search applies to the unquotiented theories")
    depth = search_depth(depth)
    ftype = typecheck(f, theory)
    gtype = typecheck(g, theory)
    if ftype != gtype:
        raise TermError("proof search needs terms of the same type")
    src = ftype[0]
    sf = tuple(term_factors(f)[1])
    sg = tuple(term_factors(g)[1])
    if sf == sg:
        return ProofResult(True)
    image = interp(theory, f)
    if not image.same_as(interp(theory, g)):
        return ProofResult(False)

    def guard(candidate: tuple[Factor, ...]) -> None:
        if not interp(theory, factors_to_term(src, list(candidate))).same_as(image):
            raise SoundnessViolation(
                f"rewriting broke the interpretation at {candidate}")

    def splice(forward: tuple[Step, ...], backward: tuple[Step, ...],
               ) -> Optional[ProofResult]:
        derivation = list(forward) + [s.reversed() for s in reversed(backward)]
        if len(derivation) <= depth:
            return ProofResult(True, tuple(derivation))
        return None

    # Greedy directed meet first.
    nf_f, steps_f = directed_normalize(theory, src, sf)
    nf_g, steps_g = directed_normalize(theory, src, sg)
    guard(nf_f)
    guard(nf_g)
    if nf_f == nf_g:
        found = splice(tuple(steps_f), tuple(steps_g))
        if found:
            return found

    # Bidirectional breadth-first search with a size cap.  States record the
    # side they were reached from and the step path from that side's root.
    max_size = max(len(sf), len(sg)) + size_slack
    sides: dict[tuple[Factor, ...], tuple[str, tuple[Step, ...]]] = {}
    frontiers = {"f": [], "g": []}

    def admit(tag: str, state: tuple[Factor, ...],
              path: tuple[Step, ...]) -> Optional[ProofResult]:
        if state in sides:
            known_tag, known_path = sides[state]
            if known_tag == tag:
                return None
            if tag == "f":
                return splice(path, known_path)
            return splice(known_path, path)
        sides[state] = (tag, path)
        frontiers[tag].append(state)
        return None

    for tag, state, path in (("f", sf, ()), ("g", sg, ()),
                             ("f", nf_f, tuple(steps_f)),
                             ("g", nf_g, tuple(steps_g))):
        if len(state) <= max_size:
            found = admit(tag, state, path)
            if found:
                return found

    spent = {"f": 0, "g": 0}
    while spent["f"] + spent["g"] < depth and (frontiers["f"] or frontiers["g"]):
        tag = "f" if (frontiers["f"] and spent["f"] <= spent["g"]) or not frontiers["g"] else "g"
        spent[tag] += 1
        expanding, frontiers[tag] = frontiers[tag], []
        for state in expanding:
            base_path = sides[state][1]
            for new_factors, step in rewrites(theory, src, state):
                if len(new_factors) > max_size or new_factors in sides:
                    if new_factors in sides and sides[new_factors][0] != tag:
                        found = admit(tag, new_factors, base_path + (step,))
                        if found:
                            guard(new_factors)
                            return found
                    continue
                guard(new_factors)
                found = admit(tag, new_factors, base_path + (step,))
                if found:
                    return found
    return ProofResult(False)


# ---------------------------------------------------------------------------
# Confluence of the oriented slide family


@dataclass
class ConfluenceReport:
    theory_id: str
    size_bound: int
    terms_checked: int
    divergences: list[tuple]
    normal_forms: dict

    @property
    def confluent(self) -> bool:
        return not self.divergences


def _oriented_steps(theory: Theory, src: str, factors: tuple[Factor, ...]):
    ids = tuple(sid for sid in theory.equations if sid in _NATURALITIES)
    yield from rewrites(theory, src, factors, ("lr",), ids)
    ids = tuple((sid, d) for sid, d in _SHRINKERS.items()
                if sid in theory.equations)
    for sid, d in ids:
        yield from rewrites(theory, src, factors, (d,), (sid,))


def confluence_check(theory: "Theory | str", size_bound: int,
                     src_words: Optional[list[str]] = None) -> ConfluenceReport:
    """Exhaustively verify that every maximal oriented-rewrite sequence from
    every term up to the size bound ends in one and the same normal form."""
    from .theories import enumerate_factor_terms

    theory = get_theory(theory)
    if src_words is None:
        letters = sorted({GENERATORS_LETTER[k] for k in theory.generators
                          if k in GENERATORS_LETTER})
        letter = letters[0] if letters else "b"
        src_words = [letter * k for k in range(size_bound + 2)]
    cache: dict = {}

    def all_nfs(state: tuple[str, tuple[Factor, ...]]) -> frozenset:
        if state in cache:
            return cache[state]
        src, factors = state
        reducts = [(src, nf) for nf, _ in _oriented_steps(theory, src, factors)]
        if not reducts:
            result = frozenset([state])
        else:
            result = frozenset().union(*(all_nfs(r) for r in set(reducts)))
        cache[state] = result
        return result

    divergences = []
    normal_forms: dict = {}
    checked = 0
    for src in src_words:
        for factors in enumerate_factor_terms(theory, src, size_bound):
            checked += 1
            state = (src, tuple(factors))
            nfs = all_nfs(state)
            if len(nfs) != 1:
                divergences.append((state, tuple(sorted(nfs))))
            else:
                nf = next(iter(nfs))
                tgt = _boundary_words(*state)[-1]
                normal_forms.setdefault((src, tgt), set()).add(nf[1])
    return ConfluenceReport(theory.id, size_bound, checked, divergences,
                            normal_forms)


GENERATORS_LETTER = {
    "eps_box": "b", "delta_bb": "b", "chi_bb": "b",
    "eps_dia": "d", "delta_dd": "d", "chi_dd": "d",
}
