"""Term language: parsing, printing, typing, duality, context append."""

import random

import pytest

from modalcoherence.terms import (
    App,
    Comp,
    Gen,
    Id,
    ParseError,
    TypingError,
    append_context,
    dualize,
    parse_term,
    term_size,
    term_to_str,
    term_type,
)
from modalcoherence.theories import raw_splus, typecheck, TheoryError
from modalcoherence.decide import random_term
from modalcoherence.interp import interp
from modalcoherence import diagram as dg


def test_parse_examples():
    assert parse_term("eps_box{e}") == Gen("eps_box", "")
    assert term_type(parse_term("eps_box{e}")) == ("b", "")
    assert parse_term("dia(eps_box{b})") == App("d", Gen("eps_box", "b"))
    assert term_type(parse_term("dia(eps_box{b})")) == ("dbb", "db")
    # The grammar accepts ill-typed composites; typing rejects them.
    t = parse_term("eps_box{e} . eps_dia{e}")
    assert isinstance(t, Comp)
    with pytest.raises(TypingError):
        term_type(t)


def test_parse_is_right_associative():
    t = parse_term("eps_box{e} . eps_box{b} . delta_bb{e}")
    assert t == Comp(Gen("eps_box", ""),
                     Comp(Gen("eps_box", "b"), Gen("delta_bb", "")))


def test_parse_errors_carry_position():
    with pytest.raises(ParseError):
        parse_term("eps_box{e} . ")
    with pytest.raises(ParseError):
        parse_term("nosuch{e}")
    with pytest.raises(ParseError):
        parse_term("id{xyz}")
    with pytest.raises(ParseError):
        parse_term("box(eps_box{e}")


@pytest.mark.parametrize("text", [
    "id{e}", "id{bd}", "eps_box{e}", "box(dia(id{e}))",
    "(eps_box{e} . eps_box{b}) . delta_bb{e}",
    "eps_box{e} . (eps_box{b} . delta_bb{e})",
    "box(delta_db{e}) . delta_bd{b}",
])
def test_print_parse_round_trip(text):
    t = parse_term(text)
    assert parse_term(term_to_str(t)) == t


def test_print_parse_round_trip_random():
    rng = random.Random(7)
    for _ in range(200):
        t = random_term("s5", rng.choice(["", "b", "d", "bd", "db"]),
                        rng.randint(0, 6), rng)
        assert parse_term(term_to_str(t)) == t


def test_typing_table():
    cases = {
        "eps_box{d}": ("bd", "d"), "eps_dia{b}": ("b", "db"),
        "delta_bb{d}": ("bd", "bbd"), "delta_dd{b}": ("ddb", "db"),
        "delta_bd{d}": ("dd", "bdd"), "delta_db{e}": ("db", "b"),
        "sigma_bb{e}": ("b", "bb"), "sigma_dd{e}": ("dd", "d"),
        "sigma_db{e}": ("d", "db"), "sigma_bd{e}": ("bd", "b"),
        "chi_bb{d}": ("bbd", "bbd"), "chi_db{b}": ("dbb", "bdb"),
        "chi_bd{e}": ("bd", "db"), "chi_dd{e}": ("dd", "dd"),
    }
    for text, expected in cases.items():
        assert term_type(parse_term(text)) == expected, text


def test_typecheck_against_theory():
    assert typecheck(parse_term("delta_bd{d}"), "s5") == ("dd", "bdd")
    assert typecheck(parse_term("id{bd}"), "s4_boxdia") == ("bd", "bd")
    with pytest.raises(TypingError):
        typecheck(parse_term("eps_box{e} . eps_dia{e}"), "s4_boxdia")
    with pytest.raises(TheoryError):
        typecheck(parse_term("delta_bd{e}"), "s4_boxdia")
    with pytest.raises(TheoryError):
        typecheck(parse_term("eps_box{e}"), raw_splus())
    assert typecheck(parse_term("eps_box{b}"), raw_splus()) == ("bb", "b")


def test_typing_deterministic():
    t = parse_term("box(delta_db{e}) . delta_bd{b}")
    assert term_type(t) == term_type(t) == ("db", "bb")


def test_append_context_examples():
    t = append_context(parse_term("eps_box{e}"), "d")
    assert t == Gen("eps_box", "d")
    assert term_type(t) == ("bd", "d")
    t = parse_term("box(eps_dia{b})")
    assert append_context(t, "") == t
    appended = append_context(t, "d")
    assert appended == parse_term("box(eps_dia{bd})")
    assert term_type(appended) == ("bbd", "bdbd")


def test_append_context_functorial():
    rng = random.Random(3)
    for _ in range(100):
        f = random_term("s5", rng.choice(["", "b", "d", "db"]),
                        rng.randint(0, 4), rng)
        ctx = rng.choice(["", "b", "bd"])
        src, tgt = term_type(f)
        asrc, atgt = term_type(append_context(f, ctx))
        assert (asrc, atgt) == (src + ctx, tgt + ctx)
        g_of = append_context(Id(src), ctx)
        assert g_of == Id(src + ctx)


def test_dualize_examples():
    t = dualize(parse_term("eps_box{e}"))
    assert t == Gen("eps_dia", "")
    assert term_type(t) == ("", "d")
    t = parse_term("delta_bb{e} . eps_box{b}")
    d = dualize(t)
    assert d == parse_term("eps_dia{d} . delta_dd{e}")
    assert term_type(d) == ("dd", "dd")


def test_dualize_involution():
    rng = random.Random(11)
    for _ in range(100):
        t = random_term("s4_boxdia", rng.choice(["", "b", "d", "bd"]),
                        rng.randint(0, 5), rng)
        assert dualize(dualize(t)) == t


def test_dualize_matches_converse_of_interpretation():
    # The dual term's image is the converse diagram with both boundary words
    # operator-swapped; checked for every generator instance with small index.
    from modalcoherence.terms import GENERATORS, swap_word

    kind_theory = {
        "eps_box": "s4_boxdia", "eps_dia": "s4_boxdia",
        "delta_bb": "s4_boxdia", "delta_dd": "s4_boxdia",
        "delta_bd": "s5", "delta_db": "s5",
        "chi_bb": "s4_boxdia_chi", "chi_dd": "s4_boxdia_chi",
        "chi_db": "s42_iso", "chi_bd": "s42_iso",
    }
    words = ["", "b", "d", "bb", "bd", "db", "dd", "bdb", "dbd"]
    for kind, theory in kind_theory.items():
        for word in words:
            t = Gen(kind, word)
            image = interp(theory, t)
            dual_image = interp(theory, dualize(t))
            expected = dg.converse(image)
            assert dual_image.key() == expected.key(), (kind, word)
            assert dual_image.src_word == swap_word(expected.src_word)
            assert dual_image.tgt_word == swap_word(expected.tgt_word)


def test_term_size():
    assert term_size(parse_term("id{bd}")) == 0
    assert term_size(parse_term("box(delta_db{e}) . delta_bd{b}")) == 2
