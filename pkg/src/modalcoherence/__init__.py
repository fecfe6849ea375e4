"""Deductions between positive modalities as typed terms, interpreted as
finite-ordinal diagrams, with coherence-based equality decisions, staged
normal forms, and the classical isomorphisms with concrete categories of
finite-ordinal functions."""

from .diagram import (
    RelDiagram,
    SplitEq,
    compose,
    converse,
    from_json,
    is_noncrossing,
    mirror,
    rel,
    rel_identity,
    render_ascii,
    spliteq,
    spliteq_identity,
    to_json,
)
from .decide import (
    HomQuery,
    HomResult,
    enum_hom,
    mirror_term,
    random_term,
    realizable,
    synthesize,
)
from .interp import EqualityResult, check_soundness, decide_equal, interp
from .quotient import (
    SkeletonDiagram,
    interp_sharp,
    j_arrow,
    j_inv,
    preordering_catalog,
    sharp,
    skeleton,
)
from .rewrite import (
    confluence_check,
    develop,
    normalize,
    prove_equal_bounded,
)
from .simplicial import (
    FinMap,
    decompose_bij_monotone,
    decompose_inj_surj,
    decompose_surj_inj,
    embed_function,
    embed_injection,
    embed_monotone,
    embed_surjection,
    finmap,
    graph_to_map,
)
from .terms import (
    ArrowTerm,
    ParseError,
    TermError,
    TypingError,
    append_context,
    dualize,
    parse_term,
    term_size,
    term_to_str,
    term_type,
)
from .theories import REGISTRY, Theory, get_theory, typecheck

__version__ = "0.1.0"

__all__ = [
    "ArrowTerm", "EqualityResult", "FinMap", "HomQuery", "HomResult",
    "ParseError", "REGISTRY", "RelDiagram", "SkeletonDiagram", "SplitEq",
    "TermError", "Theory", "TypingError", "append_context", "check_soundness",
    "compose", "confluence_check", "converse", "decide_equal",
    "decompose_bij_monotone", "decompose_inj_surj", "decompose_surj_inj",
    "develop", "dualize", "embed_function", "embed_injection",
    "embed_monotone", "embed_surjection", "enum_hom", "finmap", "from_json",
    "get_theory", "graph_to_map", "interp", "interp_sharp", "is_noncrossing",
    "j_arrow", "j_inv", "mirror", "mirror_term", "normalize", "parse_term",
    "preordering_catalog", "prove_equal_bounded", "random_term", "realizable",
    "rel", "rel_identity", "render_ascii", "sharp", "skeleton", "spliteq",
    "spliteq_identity", "synthesize", "term_size", "term_to_str", "term_type",
    "to_json", "typecheck",
]
