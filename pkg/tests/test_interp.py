"""Coherence functors: clause values, functoriality, soundness, equality."""

import random

import pytest

from modalcoherence import diagram as dg
from modalcoherence.decide import mirror_term, random_term
from modalcoherence.interp import (
    EQUAL,
    NOT_EQUAL,
    TYPE_MISMATCH,
    VariantError,
    check_soundness,
    decide_equal,
    interp,
)
from modalcoherence.terms import Gen, parse_term, term_type
from modalcoherence.theories import REGISTRY


def S(i):
    return ("s", i)


def T(j):
    return ("t", j)


def test_relational_generator_clauses():
    assert interp("s4_box", parse_term("delta_bb{e}")).same_as(
        dg.rel(1, 2, [(0, 0), (0, 1)]))
    assert interp("s4_box", parse_term("eps_box{bb}")).same_as(
        dg.rel(3, 2, [(0, 0), (1, 1)]))
    assert interp("s4_dia", parse_term("delta_dd{b}")).same_as(
        dg.rel(3, 2, [(0, 0), (1, 1), (2, 1)]))
    assert interp("s42", parse_term("chi_db{d}")).same_as(
        dg.rel(3, 3, [(0, 0), (1, 2), (2, 1)]))


def test_one_sided_variants():
    # The delta variant adds the diagonal link to the counit clause.
    d = interp("t_box", parse_term("eps_box{b}"), "delta")
    assert d.same_as(dg.rel(2, 1, [(0, 0), (1, 0)]))
    d = interp("t_box", parse_term("eps_box{e}"), "delta")
    assert d.same_as(dg.rel(1, 0, []))
    # The eps variant drops the extra link of the comultiplication clause.
    d = interp("k4_dia", parse_term("delta_dd{e}"), "eps")
    assert d.same_as(dg.rel(2, 1, [(0, 0)]))
    # Base-system slide equation holds under both variants.
    lhs = parse_term("eps_box{e} . box(eps_box{e})")
    rhs = parse_term("eps_box{e} . eps_box{b}")
    for variant in ("std", "eps", "delta"):
        assert interp("t_box", lhs, variant).same_as(interp("t_box", rhs, variant))


def test_variant_admissibility():
    with pytest.raises(VariantError):
        interp("s5", parse_term("id{b}"), "eps")
    with pytest.raises(VariantError):
        interp("t_boxdia", parse_term("id{b}"), "delta")
    with pytest.raises(VariantError):
        interp("k4_boxdia", parse_term("id{b}"), "eps")
    with pytest.raises(VariantError):
        interp("s4_box", parse_term("id{b}"), "dual")
    with pytest.raises(VariantError):
        interp("s5", parse_term("id{b}"), "sharp")
    with pytest.raises(VariantError):
        interp("s4_boxdia_triv", parse_term("id{b}"))


def test_split_equivalence_clauses():
    d = interp("s5", parse_term("eps_box{d}"))
    assert d.same_as(dg.spliteq(2, 1, [[S(0), T(0)], [S(1)]]))
    d = interp("s5", parse_term("eps_dia{b}"))
    assert d.same_as(dg.spliteq(1, 2, [[S(0), T(0)], [T(1)]]))
    d = interp("s5", parse_term("delta_bd{b}"))
    assert d.same_as(dg.spliteq(2, 3, [[S(0), T(0)], [S(1), T(1), T(2)]]))
    d = interp("s5", parse_term("delta_db{e}"))
    assert d.same_as(dg.spliteq(2, 1, [[S(0), S(1), T(0)]]))
    # The mirrored generators share the transposed shapes.
    assert interp("fives", parse_term("sigma_db{e}")).same_as(
        interp("s5", parse_term("delta_bd{e}")))
    assert interp("fives", parse_term("sigma_bd{e}")).same_as(
        interp("s5", parse_term("delta_db{e}")))


def test_worked_composition():
    d = interp("s5", parse_term("box(delta_db{e}) . delta_bd{b}"))
    assert d.same_as(dg.spliteq(2, 2, [[S(0), S(1), T(0), T(1)]]))
    assert (d.src_word, d.tgt_word) == ("db", "bb")
    assert interp("s5", parse_term("id{bdb}")).same_as(dg.spliteq_identity(3))


def test_interp_functorial_on_random_terms():
    rng = random.Random(21)
    for tid in ("s4_boxdia", "s42", "s5", "fives", "s4_dia_chi"):
        for _ in range(60):
            src = rng.choice(["", "b", "d", "bd", "db"])
            f = random_term(tid, src, rng.randint(0, 4), rng)
            mid = term_type(f)[1]
            g = random_term(tid, mid, rng.randint(0, 4), rng)
            from modalcoherence.terms import Comp

            whole = interp(tid, Comp(g, f))
            parts = dg.compose(interp(tid, g), interp(tid, f))
            assert whole.same_as(parts)


def test_dual_functor_clauses():
    # Counit and comultiplication exchange shapes, one extra strand.
    d = interp("s5", parse_term("eps_box{e}"), "dual")
    assert d.same_as(dg.spliteq(2, 1, [[S(0), S(1), T(0)]]))
    d = interp("s5", parse_term("delta_bd{e}"), "dual")
    assert d.same_as(dg.spliteq(2, 3, [[S(0), T(0)], [T(1)], [S(1), T(2)]]))
    assert interp("s5", parse_term("id{bd}"), "dual").same_as(
        dg.spliteq_identity(3))


def test_dual_functor_tracking_strand():
    # Every dual image joins the extra source strand to the extra target
    # strand, possibly through other elements.
    rng = random.Random(33)
    for tid in ("s5", "fives"):
        for _ in range(80):
            src = rng.choice(["", "b", "d", "bd", "db"])
            f = random_term(tid, src, rng.randint(0, 5), rng)
            a, b = term_type(f)
            d = interp(tid, f, "dual")
            assert d.src_len == len(a) + 1 and d.tgt_len == len(b) + 1
            cls = d.class_of(("s", len(a)))
            assert ("t", len(b)) in cls


def test_dual_functor_on_mirror_theory_matches_transport():
    rng = random.Random(40)
    for _ in range(50):
        t = random_term("s5", rng.choice(["", "b", "d", "db"]),
                        rng.randint(0, 4), rng)
        m = mirror_term(t, source="s5")
        assert interp("fives", m, "dual").same_as(
            dg.mirror(interp("s5", t, "dual")))


def test_soundness_small_all_theories():
    for tid in REGISTRY:
        report = check_soundness(tid, idx_bound=2, f_bound=1)
        assert report.passed, report.describe()


def test_soundness_mutation_detects_broken_clause(monkeypatch):
    # Deliberate fault: drop the duplication link from the comultiplication
    # clause; the triangle law must then fail.
    import importlib

    interp_mod = importlib.import_module("modalcoherence.interp")
    original = interp_mod._rel_clause

    def broken(variant, kind, n):
        d = original(variant, kind, n)
        if kind == "delta_bb":
            return dg.rel(d.src_len, d.tgt_len,
                          [p for p in d.pairs if p != (n, n + 1)])
        return d

    monkeypatch.setattr(interp_mod, "_rel_clause", broken)
    report = check_soundness("s4_box", idx_bound=2, f_bound=1)
    assert not report.passed
    assert any(f.schema_id in ("beta_bb", "eta_bb", "nat_delta_bb",
                               "assoc_delta_bb")
               for f in report.failures)


def test_decide_equal_verdicts():
    lhs = parse_term("box(delta_db{e}) . delta_bd{b}")
    rhs = parse_term("delta_bb{e} . delta_db{e}")
    assert decide_equal("s5", lhs, rhs).verdict == EQUAL
    f = parse_term("eps_box{e}")
    assert decide_equal("s4_box", f, f).verdict == EQUAL
    r = decide_equal("s4_box", f, parse_term("delta_bb{e}"))
    assert r.verdict == TYPE_MISMATCH
    # Same type, different images.
    r = decide_equal("s4_boxdia",
                     parse_term("dia(box(eps_dia{e})) . eps_box{db}"),
                     parse_term("eps_dia{bd} . box(dia(eps_box{e}))"))
    assert r.verdict == NOT_EQUAL
    assert r.left_diagram is not None and r.right_diagram is not None


def test_noncrossing_images():
    rng = random.Random(55)
    for tid in ("s5", "fives"):
        for _ in range(120):
            t = random_term(tid, rng.choice(["", "b", "d", "bd", "db", "bdb"]),
                            rng.randint(0, 6), rng)
            assert dg.is_noncrossing(interp(tid, t))


def test_soundness_s4_box_deeper_indices():
    report = check_soundness("s4_box", idx_bound=4, f_bound=1)
    assert report.passed, report.describe()


def test_one_sided_clauses_are_converses():
    # The comultiplication clause is the converse of the deep counit clause
    # one level up.
    for n in range(4):
        deep = interp("t_box", Gen("eps_box", "b" * (n + 1)), "delta")
        comult = interp("k4_box", Gen("delta_bb", "b" * n))
        assert dg.converse(deep).same_as(comult)


def test_all_small_generator_images_noncrossing():
    words = [w for k in range(4) for w in
             ("".join(p) for p in __import__("itertools").product("bd", repeat=k))]
    for tid, kinds in (("s5", ("eps_box", "eps_dia", "delta_bb", "delta_dd",
                               "delta_bd", "delta_db")),
                       ("fives", ("eps_box", "eps_dia", "sigma_bb",
                                  "sigma_dd", "sigma_db", "sigma_bd"))):
        for kind in kinds:
            for word in words:
                assert dg.is_noncrossing(interp(tid, Gen(kind, word)))


def test_chi_clause_is_self_inverse_under_functor():
    for word in ("", "b", "d", "bd"):
        t = Gen("chi_bb", word)
        sq = dg.rel_compose(interp("s_chi", t), interp("s_chi", t))
        assert sq.same_as(dg.rel_identity(len(word) + 2))
