"""Command-line surface: exit codes and deterministic output."""

import json

from modalcoherence.cli import DOMAIN_ERROR, USAGE_ERROR, run


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse(capsys):
    code, out, _ = invoke(capsys, "parse", "box(delta_db{e}) . delta_bd{b}")
    assert code == 0
    assert out.strip() == "box(delta_db{e}) . delta_bd{b}"


def test_type(capsys):
    code, out, _ = invoke(capsys, "type", "--theory", "s5", "delta_bd{d}")
    assert code == 0
    assert out.strip() == "dd |- bdd"


def test_eq_exit_codes(capsys):
    code, out, _ = invoke(capsys, "eq", "--theory", "s5",
                          "box(delta_db{e}) . delta_bd{b}",
                          "delta_bb{e} . delta_db{e}")
    assert code == 0 and "equal" in out
    code, out, _ = invoke(capsys, "eq", "--theory", "s4_boxdia",
                          "dia(box(eps_dia{e})) . eps_box{db}",
                          "eps_dia{bd} . box(dia(eps_box{e}))")
    assert code == 1
    code, out, _ = invoke(capsys, "eq", "--theory", "s4_box",
                          "eps_box{e}", "delta_bb{e}")
    assert code == 2


def test_eq_sharp_contrast(capsys):
    code, _, _ = invoke(capsys, "eq", "--theory", "s4_boxdia_sharp",
                        "dia(box(eps_dia{e})) . eps_box{db}",
                        "eps_dia{bd} . box(dia(eps_box{e}))")
    assert code == 1
    code, _, _ = invoke(capsys, "eq", "--theory", "s4_boxdia_triv",
                        "dia(box(eps_dia{e})) . eps_box{db}",
                        "eps_dia{bd} . box(dia(eps_box{e}))")
    assert code == 0


def test_interp_json(capsys):
    code, out, _ = invoke(capsys, "interp", "--theory", "s5",
                          "--format", "json", "box(delta_db{e}) . delta_bd{b}")
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "spliteq"
    assert payload["classes"] == [[["s", 0], ["s", 1], ["t", 0], ["t", 1]]]


def test_interp_deterministic(capsys):
    args = ("interp", "--theory", "s4_boxdia", "--format", "json",
            "eps_box{db} . delta_bb{db}")
    _, out1, _ = invoke(capsys, *args)
    _, out2, _ = invoke(capsys, *args)
    assert out1 == out2


def test_nf(capsys):
    code, out, _ = invoke(capsys, "nf", "--theory", "t_box",
                          "eps_box{b} . box(eps_box{b})")
    assert code == 0
    assert out.strip() == "eps_box{b} . eps_box{bb}"


def test_prove(capsys):
    code, out, _ = invoke(capsys, "prove", "--theory", "s5", "--depth", "6",
                          "box(delta_db{e}) . delta_bd{b}",
                          "delta_bb{e} . delta_db{e}")
    assert code == 0 and out.startswith("Proved")
    code, out, _ = invoke(capsys, "prove", "--theory", "s4_boxdia",
                          "--depth", "4",
                          "dia(box(eps_dia{e})) . eps_box{db}",
                          "eps_dia{bd} . box(dia(eps_box{e}))")
    assert code == 1 and out.strip() == "Unknown"


def test_hom(capsys):
    code, out, _ = invoke(capsys, "hom", "--theory", "s4_dia",
                          "--from", "dd", "--to", "dd")
    assert code == 0
    assert out.startswith("3 arrow(s)")


def test_embed(capsys):
    code, out, _ = invoke(capsys, "embed", "--kind", "monotone",
                          "--map", "0,0", "--cod", "1")
    assert code == 0
    assert out.splitlines()[0] == "delta_dd{e}"


def test_mirror(capsys):
    code, out, _ = invoke(capsys, "mirror", "--from", "s5", "delta_bd{e}")
    assert code == 0
    assert out.strip() == "sigma_db{e}"


def test_skeleton(capsys):
    code, out, _ = invoke(capsys, "skeleton", "--theory", "s4_boxdia_triv")
    assert code == 0
    assert len(json.loads(out)["objects"]) == 7


def test_check_suites(capsys):
    code, out, _ = invoke(capsys, "check", "--suite", "soundness",
                          "--theory", "s4_box", "--bound", "2")
    assert code == 0
    code, out, _ = invoke(capsys, "check", "--suite", "confluence",
                          "--theory", "t_box", "--bound", "3")
    assert code == 0
    code, out, _ = invoke(capsys, "check", "--suite", "roundtrip",
                          "--theory", "s5", "--bound", "25")
    assert code == 0
    code, out, _ = invoke(capsys, "check", "--suite", "counting",
                          "--theory", "s4_dia", "--bound", "3")
    assert code == 0


def test_usage_and_domain_errors(capsys):
    code, _, _ = invoke(capsys, "frobnicate")
    assert code == USAGE_ERROR
    code, _, _ = invoke(capsys, "eq", "--theory", "s5", "eps_box{e}")
    assert code == USAGE_ERROR
    code, _, err = invoke(capsys, "parse", "unknown_gen{e}")
    assert code == DOMAIN_ERROR and "error" in err
    code, _, err = invoke(capsys, "type", "--theory", "s4_boxdia",
                          "delta_bd{e}")
    assert code == DOMAIN_ERROR
    code, _, err = invoke(capsys, "interp", "--theory", "s5",
                          "--functor", "eps", "id{b}")
    assert code == DOMAIN_ERROR
