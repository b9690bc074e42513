import pytest

from mmso import corpus
from mmso import matroid as MT
from mmso.cli import main
from mmso.selftest import SENTENCES


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, dict(ln.split("=", 1) for ln in out.splitlines() if "=" in ln and " " not in ln), err


@pytest.fixture()
def files(tmp_path):
    out = {}
    for name in ("U24", "U23plus", "fano", "U12+U12"):
        p = tmp_path / f"{name}.matroid"
        p.write_text(MT.format_matroid(corpus.get(name)))
        out[name] = p
    (tmp_path / "basis-exists.cms").write_text("# a basis exists\nexists X1 Basis(X1)\n")
    return tmp_path, out


def test_check_example(files, capsys):
    d, f = files
    code, kv, _ = run(capsys, "check", f["U24"], d / "basis-exists.cms")
    assert code == 0 and kv["result"] == "true"


def test_bw_and_dw(files, capsys):
    _, f = files
    assert run(capsys, "bw", f["U24"])[1]["bw"] == "3"
    assert run(capsys, "dw", f["U24"])[1]["dw"] == "3"


def test_classes_transversal(files, capsys):
    _, f = files
    code, kv, _ = run(capsys, "classes", f["U23plus"], "--set", "a1,b1,c1")
    assert code == 0 and int(kv["classes"]) >= 3


def test_false_verdict_exit_code(files, capsys):
    _, f = files
    code, kv, _ = run(capsys, "evaluate", f["U24"], "forall X1 Ind(X1)")
    assert code == 1 and kv["result"] == "false"


def test_usage_errors(files, capsys):
    d, f = files
    code, _, err = run(capsys, "check", d / "missing.matroid", "Ind(X1)")
    assert code == 2 and err.count("\n") == 1
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "check", f["U24"], "exists X1 (Ind(X1)")[0] == 2
    assert run(capsys, "check", f["U24"], "Ind(X1)")[0] == 2


def test_resource_cap(files, capsys):
    _, f = files
    code, _, err = run(capsys, "dw", f["fano"], "--exact-cap", "5")
    assert code == 3 and "cap" in err


def test_parsetree_build_and_decide(files, capsys):
    d, f = files
    out = d / "out"
    code, kv, _ = run(capsys, "parsetree", "build", f["U24"], "-o", out)
    assert code == 0 and (out / "U24.aut").is_file() and (out / "U24.ptree").is_file()
    code, kv, _ = run(capsys, "decide", "--automaton", out / "U24.aut", "--tau",
                      "exists X1 Ind(X1)", "exists X1 (Empty(X1) & Ind(X1))")
    assert code == 0 and kv["result"] == "theorem"
    code, kv, _ = run(capsys, "decide", "--automaton", out / "U24.aut", "-o", d / "w",
                      "forall X1 Ind(X1)")
    assert code == 1 and kv["result"] == "counterexample"
    assert (d / "w" / "witness.matroid").is_file()


def test_dual_round_trip(files, capsys):
    d, f = files
    code, _, _ = run(capsys, "dual", f["fano"], "-o", d / "dual.matroid")
    assert code == 0
    D = MT.parse_matroid((d / "dual.matroid").read_text())
    assert MT.same_oracle(D, MT.dual(corpus.get("fano")))


def test_corpus_verbs(tmp_path, capsys):
    assert main(["corpus", "list"]) == 0
    assert "name=K4" in capsys.readouterr().out
    assert main(["corpus", "emit", "K4", "-o", str(tmp_path / "k4.matroid")]) == 0
    assert MT.same_oracle(MT.parse_matroid((tmp_path / "k4.matroid").read_text()), corpus.get("K4"))


@pytest.mark.parametrize("sentence", [s for s in SENTENCES if s != "@matroid"])
def test_check_agrees_with_evaluate(files, capsys, sentence):
    _, f = files
    for name in ("U24", "U12+U12"):
        a = run(capsys, "check", f[name], sentence)[0]
        b = run(capsys, "evaluate", f[name], sentence)[0]
        assert a == b


def test_selftest_subset(capsys):
    code, kv, _ = run(capsys, "selftest", "--only", "5,12", "--seed", "3")
    assert code == 0 and kv["failed"] == "0"
