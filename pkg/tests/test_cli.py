import io
import subprocess
import sys

import pytest

from helpers import DATA, NET_ATOMIC
from lambeklearn.cli import main

WORKED = str(DATA / "worked.frames")
GR = str(DATA / "gr.grammar")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_learn_golden():
    code, out, _ = run("learn", "--examples", WORKED)
    assert code == 0
    assert out == (DATA / "worked.rigid").read_text()


def test_learn_writes_file(tmp_path):
    target = tmp_path / "g.grammar"
    code, out, _ = run("learn", "--examples", WORKED, "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text() == (DATA / "worked.rigid").read_text()


def test_learn_kv():
    code, out, _ = run("learn", "--examples", WORKED, "--format", "kv")
    assert code == 0
    assert "word.to=x4/x1\n" in out and "dropped=\n" in out


def test_learn_reports_dropped(tmp_path):
    f = tmp_path / "d.frames"
    f.write_text("words: w\nframe: s~#1, s#1\n\nwords: w v\nframe: I#2, O#2*s~#1, s#1\n")
    code, out, err = run("learn", "--examples", str(f))
    assert code == 1
    assert "# w" in out and "w" in err


def test_check():
    code, out, _ = run("check", "--grammar", GR, "--examples", WORKED)
    assert code == 0
    assert out.count("generated") == 3


def test_check_learned_grammar():
    code, _, _ = run("check", "--grammar", str(DATA / "worked.rigid"), "--examples", WORKED, "--format", "kv")
    assert code == 0


def test_check_failure(tmp_path):
    f = tmp_path / "bad.frames"
    f.write_text("words: Anne\nframe: s~#1, s#1\n")
    code, out, _ = run("check", "--grammar", GR, "--examples", str(f), "--format", "kv")
    assert code == 1 and out == "example.1=not_generated\n"


def test_parse():
    code, out, _ = run("parse", "--grammar", GR, "--sentence", "Anne liked a book", "--format", "kv")
    assert code == 0
    assert out.startswith("frames=1\n")
    code, _, err = run("parse", "--grammar", GR, "--sentence", "book a liked Anne")
    assert code == 1 and "not generated" in err
    code, _, err = run("parse", "--grammar", GR, "--sentence", "Anne sneezed")
    assert code == 1 and "unknown word" in err


def test_parse_output_reads_back(tmp_path):
    code, out, _ = run("parse", "--grammar", GR, "--sentence", "Christian gave a book to Anne and a kiss to Sophie")
    f = tmp_path / "p.frames"
    f.write_text(out)
    assert code == 0
    assert run("check", "--grammar", GR, "--examples", str(f))[0] == 0


def test_validate(tmp_path):
    f = tmp_path / "nets.txt"
    f.write_text(f"# examples\ns~#1, s#1\n{NET_ATOMIC}\na~#1, b~#2, a#1, b#2\na#1*b#2, b~#2*a~#1\na~#1|a#1\n")
    code, out, _ = run("validate", str(f), "--format", "kv")
    assert code == 1
    assert out == "line.2=valid\nline.3=valid\nline.4=AxiomsCross\nline.5=Cyclic\nline.6=EmptyAntecedent\n"


def test_validate_crossing_only(tmp_path):
    f = tmp_path / "badnet.txt"
    f.write_text("a~#1, b~#2, a#1, b#2\n")
    code, out, _ = run("validate", str(f))
    assert code == 1 and out.startswith("AxiomsCross")


def test_label():
    code, out, _ = run("label", "--examples", WORKED, "--by-axiom", "--format", "kv")
    assert code == 0
    assert "word.1.gave=(x11\\s)/(x13*x12)\n" in out
    assert "word.3.that=(x34\\x33)/(x36/x35)\n" in out


@pytest.mark.parametrize(
    "c1, c2, code, expected",
    [
        ("x1", "np\\s", 0, "result=unified\nx1=np\\s\n"),
        ("s", "a*b", 1, "result=Clash\n"),
        ("x1", "x1\\s", 1, "result=OccursCheck\n"),
        ("s", "s", 0, "result=unified\n"),
    ],
)
def test_unify(c1, c2, code, expected):
    got = run("unify", c1, c2, "--format", "kv")
    assert got[0] == code and got[1] == expected


def test_nd_round_trip(tmp_path):
    nd = tmp_path / "d.nd"
    nd.write_text("(introR (elimL (hyp pn) (elimR (hyp (pn\\s)/np) (hyp np))))\n")
    code, nets, _ = run("nd2pn", str(nd))
    assert code == 0
    pn = tmp_path / "d.pn"
    pn.write_text(nets)
    code, back, _ = run("pn2nd", str(pn))
    assert code == 0 and back == nd.read_text()


def test_nd2pn_rejects_detour(tmp_path):
    nd = tmp_path / "d.nd"
    nd.write_text("(elimR (introR (elimL (hyp pn) (elimR (hyp (pn\\s)/np) (hyp np)))) (hyp np))\n")
    code, _, err = run("nd2pn", str(nd))
    assert code == 1 and "detour" in err


def test_simulate():
    code, out, _ = run("simulate", "--grammar", GR, "--max-len", "6", "--format", "kv")
    assert code == 0
    assert "stabilized=true\n" in out and "chain=true\n" in out


def test_simulate_below_bound():
    code, _, err = run("simulate", "--grammar", GR, "--max-len", "3")
    assert code == 1 and "no sentence" in err


def test_input_errors(tmp_path):
    assert run("learn", "--examples", str(tmp_path / "missing"))[0] == 2
    f = tmp_path / "junk.txt"
    f.write_text("s#1, s#\n")
    assert run("validate", str(f))[0] == 2
    assert run("unify", "s/", "s")[0] == 2


def test_usage_error():
    with pytest.raises(SystemExit) as info:
        run("frobnicate")
    assert info.value.code == 2


def _subprocess(*argv):
    return subprocess.run(
        [sys.executable, "-m", "lambeklearn.cli", *argv], capture_output=True, check=False
    )


@pytest.mark.parametrize(
    "argv",
    [
        ("learn", "--examples", WORKED),
        ("label", "--examples", WORKED),
        ("parse", "--grammar", GR, "--sentence", "Christian gave a book to Anne and a kiss to Sophie"),
        ("simulate", "--grammar", GR, "--max-len", "6", "--seed", "2"),
    ],
)
def test_byte_identical_runs(argv):
    a, b = _subprocess(*argv), _subprocess(*argv)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout
