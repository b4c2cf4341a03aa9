import json

import pytest

from mll.cli import main
from mll.fixtures import CUT_SC_CONCLUSION, CUT_SC_TEXT, SAMPLE_DI_CONCLUSION, SAMPLE_DI_TEXT
from mll.fuzz import FuzzConfig, corpus
from mll.syntax import MllError


@pytest.fixture
def files(tmp_path):
    (tmp_path / "sample.di").write_text(SAMPLE_DI_TEXT)
    (tmp_path / "cut.sc").write_text(CUT_SC_TEXT)
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check(files, capsys):
    code, out, _ = run(capsys, "check", files / "sample.di")
    assert code == 0 and out.splitlines()[0] == SAMPLE_DI_CONCLUSION
    code, out, _ = run(capsys, "check", files / "cut.sc", "--json")
    assert code == 0 and json.loads(out)["conclusion"] == CUT_SC_CONCLUSION


def test_check_bad_path(files, capsys):
    (files / "bad.di").write_text("axiom ai-down a\nsigma-up LL\n")
    code, _, err = run(capsys, "check", files / "bad.di")
    assert code == 1 and "invalid path" in err


def test_check_parse_error_and_claim(files, capsys):
    (files / "garbled.di").write_text("axiom ai-down a\nsigma-up LX\n")
    assert run(capsys, "check", files / "garbled.di")[0] == 2
    code, out, _ = run(capsys, "check", files / "sample.di", "--claim", "(a * ~a)")
    assert code == 1 and "NECESSARY-CONDITION: FAIL" in out
    assert run(capsys, "check", files / "sample.di", "--claim", SAMPLE_DI_CONCLUSION)[0] == 0
    assert run(capsys, "check", files / "sample.di", "--claim", "(~a % a)")[0] == 1


def test_translate(files, capsys):
    code, out, _ = run(capsys, "translate", files / "sample.di", "--to", "di2sc", "--naive", "--out", files / "o")
    assert code == 0 and json.loads(out)["output_metrics"]["cut"] == 3
    assert (files / "o" / "sample.di2sc-naive.sc").exists()
    assert run(capsys, "check", files / "o" / "sample.di2sc-naive.sc")[0] == 0
    code, out, err = run(capsys, "translate", files / "cut.sc", "--to", "cutelim")
    report = json.loads(err)
    assert code == 0 and report["output_metrics"].get("cut", 0) == 0
    (files / "ax.sc").write_text("(ax a)")
    code, out, _ = run(capsys, "translate", files / "ax.sc", "--to", "sc2di")
    assert code == 0 and out == "axiom ai-down a\n"
    assert run(capsys, "translate", files / "cut.sc", "--to", "di2sc")[0] == 2


def test_translate_reports_failed_identity(files, capsys):
    (files / "pair.sc").write_text("(tensor (par 0 (ax a)) (par 0 (ax b)))")
    code, _, err = run(capsys, "translate", files / "pair.sc", "--to", "sc2di")
    assert code == 1 and "cut + tensor = switch-family" in err


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--text", "(a * ~a)")
    assert code == 1 and "NECESSARY-CONDITION: FAIL" in out
    code, out, _ = run(capsys, "count", "--text", "|- ~a, (a*~b), (b*~c), c", "--json")
    rep = json.loads(out)
    assert code == 0 and (rep["n_t"], rep["n_p"]) == (2, 3)
    assert run(capsys, "count", "--text", "(~a % a)")[0] == 0
    assert run(capsys, "count", "--text", "~(a * ~a)")[0] == 0
    assert run(capsys, "count", "--text", "(a *")[0] == 2


def test_interpret(files, capsys):
    code, out, _ = run(capsys, "interpret", files / "sample.di", "--structure")
    tokens = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert code == 0 and len(tokens) == 4 and "# is_clique: PASS" in out
    (files / "ax.di").write_text("axiom ai-down a\n")
    code, out, _ = run(capsys, "interpret", files / "ax.di")
    assert [ln for ln in out.splitlines() if not ln.startswith("#")] == ["(0 0)", "(1 1)"]
    (files / "v.txt").write_text("a: carrier=[0,1]\n")
    assert run(capsys, "interpret", files / "sample.di", "--valuation", files / "v.txt")[0] == 1
    (files / "big.txt").write_text("a: carrier=[0,1,2]\nb: carrier=[0]\n")
    assert run(capsys, "interpret", files / "sample.di", "--valuation", files / "big.txt", "--limit", 2)[0] == 2


def test_compare(files, capsys):
    run(capsys, "translate", files / "sample.di", "--to", "di2sc", "--out", files / "o")
    code, out, _ = run(capsys, "compare", files / "sample.di", files / "o" / "sample.di2sc.sc")
    assert code == 0 and out.strip() == "EQUAL"
    run(capsys, "translate", files / "cut.sc", "--to", "cutelim", "--out", files / "o")
    code, out, _ = run(capsys, "compare", files / "cut.sc", files / "o" / "cut.cutelim.sc")
    assert code == 0 and out.strip() == "EQUAL"
    code, out, _ = run(capsys, "compare", files / "sample.di", files / "cut.sc")
    assert code == 1 and out.startswith("CONCLUSION-MISMATCH")


def test_compare_reports_difference(files, capsys):
    (files / "p1.sc").write_text("(par 0 (par 0 (exch 1 (tensor (ax a) (exch 0 (ax a))))))")
    (files / "p2.sc").write_text("(par 0 (par 0 (exch 0 (exch 1 (tensor (ax a) (exch 0 (ax a)))))))")
    code, out, _ = run(capsys, "compare", files / "p1.sc", files / "p2.sc")
    assert code == 1 and out.strip() == "DIFFER"


def test_fuzz_determinism(tmp_path, capsys):
    for name in ("a", "b"):
        assert run(capsys, "fuzz", "--seed", 42, "--count", 10, "--out", tmp_path / name)[0] == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert len(names) == 11
    for n in names:
        assert (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes()
        if n != "manifest.json":
            assert run(capsys, "check", tmp_path / "a" / n)[0] == 0


def test_fuzz_axiom_only(tmp_path, capsys):
    assert run(capsys, "fuzz", "--seed", 3, "--count", 6, "--max-steps", 0, "--out", tmp_path)[0] == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    for entry in manifest["files"]:
        text = (tmp_path / entry["file"]).read_text().strip()
        assert "\n" not in text
    assert run(capsys, "fuzz", "--atoms", "", "--out", tmp_path)[0] == 2


def test_metrics(files, capsys):
    code, out, _ = run(capsys, "metrics", files / "cut.sc")
    rep = json.loads(out)
    assert code == 0 and rep["rules"] == {"ax": 4, "cut": 1, "tensor": 2} and rep["n_p"] - rep["n_t"] == 1


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "check", "/nonexistent/file.di")[0] == 2


def test_fuzz_library_determinism():
    cfg = FuzzConfig(seed=9, max_steps=6)
    assert corpus(cfg, 20) == corpus(cfg, 20)
    assert [k for k, _ in corpus(cfg, 4)] == ["di", "sc", "di", "sc"]


@pytest.mark.parametrize("kwargs", [{"atoms": ()}, {"weights": {"frob": 1.0}},
                                    {"weights": {"ai-down": 0.0, "i-down": 0.0}},
                                    {"weights": {"ai-down": -1.0}}])
def test_fuzz_config_validation(kwargs):
    with pytest.raises(MllError):
        FuzzConfig(**kwargs)
