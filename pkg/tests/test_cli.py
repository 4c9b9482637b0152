import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from abdual.cli import main
from abdual.corpus import bundled, bundled_names

DATA = Path(__file__).resolve().parents[1] / "src" / "abdual" / "data"
FIXTURES = Path(__file__).resolve().parent / "fixtures"


def lp(name):
    return str(DATA / f"{name}.lp")


def call(*argv, stdin=None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv), out)
    return code, out.getvalue()


def test_wfs_p1():
    code, out = call("wfs", lp("p1"))
    assert code == 0
    assert out.splitlines()[:2] == ["true: p", "false: not -p, not q, not -q, not r, not -r"]


def test_solve_p1_has_no_solution():
    assert call("solve", lp("p1"), "--query", "q") == (1, "")


def test_solve_p2_and_p3():
    assert call("solve", lp("p2"), "-q", "s") == (0, "{}\n")
    assert call("solve", lp("p3"), "-q", "q", "--minimal") == (0, "{-p*, q*}\n")


def test_solve_requires_query(capsys):
    assert call("solve", lp("p1"))[0] == 2
    assert "requires --query" in capsys.readouterr().err


def test_oracle_solve_matches_engine():
    assert call("oracle-solve", lp("p3"), "-q", "q", "--minimal") == (0, "{-p*, q*}\n")
    assert call("oracle-solve", lp("p1"), "-q", "q")[0] == 1


def test_oracle_guard_is_an_error(capsys):
    code, _ = call("oracle-solve", lp("p3"), "-q", "q", "--max-abducibles", "2")
    assert code == 2
    assert "abdual: error:" in capsys.readouterr().err


def test_gsm_modes():
    for mode in ("partial", "total"):
        code, out = call("gsm", lp("gsm_pq"), "--mode", mode)
        assert code == 0
        assert out.splitlines() == [
            "{abd_p, -abd_q} {p, not -p, not q, not -q}",
            "{-abd_p, abd_q} {not p, not -p, q, not -q}",
        ]
    assert call("gsm", lp("coherence"), "--mode", "total") == (1, "")


def test_dualize_tags():
    code, out = call("dualize", lp("p1"), "--format", "machine")
    assert code == 0
    records = [json.loads(x) for x in out.splitlines()]
    assert {r["tag"] for r in records} == {"source", "folding", "coherency"}
    _, unfolded = call("dualize", lp("p1"), "--unfold")
    assert "not p :- q, r." in unfolded.splitlines()


def test_machine_formats():
    _, out = call("wfs", lp("p1"), "--format", "machine")
    rows = {r["literal"]: r["value"] for r in map(json.loads, out.splitlines())}
    assert rows["p"] == "t" and rows["q"] == "f"
    _, out = call("solve", lp("p3"), "-q", "q", "--format", "machine", "--minimal")
    assert json.loads(out) == {"context": ["-p*", "q*"]}
    _, out = call("gsm", lp("gsm_pq"), "--format", "machine")
    first = json.loads(out.splitlines()[0])
    assert set(first) == {"context", "model"}


def test_stdin_input(monkeypatch):
    code, out = call("solve", "-", "-q", "s", stdin=bundled("p2").text, monkeypatch=monkeypatch)
    assert (code, out) == (0, "{}\n")


def test_parse_error_has_position(capsys, tmp_path):
    bad = tmp_path / "bad.lp"
    bad.write_text("p :- q\n")
    assert call("wfs", str(bad))[0] == 2
    err = capsys.readouterr().err
    assert str(bad) in err and "1" in err


def test_missing_file_and_bad_flag(capsys):
    assert call("wfs", "/nonexistent.lp")[0] == 2
    assert call("wfs", lp("p1"), "--mode", "sideways")[0] == 2
    assert call()[0] == 2


def test_debug_forest_to_stderr(capsys):
    code, out = call("solve", lp("p1"), "-q", "q", "--debug-forest")
    err = capsys.readouterr().err
    assert code == 1 and out == ""
    assert err.startswith("0. <query,{}> :- | query")
    call("solve", lp("p1"), "-q", "q", "--debug-forest", "--format", "machine")
    records = [json.loads(x) for x in capsys.readouterr().err.splitlines()]
    assert records and all("op" in r for r in records)


def test_step_budget_breach_is_an_error(capsys):
    assert call("solve", lp("p2"), "-q", "s", "--step-budget", "3")[0] == 2
    assert "step budget" in capsys.readouterr().err


def test_deterministic_with_seed():
    runs = {call("solve", lp("p3"), "-q", "q", "--seed", "4") for _ in range(3)}
    assert len(runs) == 1


def test_check_bundled_corpus():
    code, out = call("check")
    assert code == 0
    assert out == f"checked {len(bundled_names())} framework(s): ok\n"
    assert call("check", lp("p3"), "--format", "machine") == (0, "")


def _fixture_sections(name):
    entry = bundled(name)
    sections = [("wfs", ("wfs", lp(name)))]
    if entry.query:
        sections.append((f"solve {entry.query}", ("solve", lp(name), "-q", entry.query)))
    sections.append(("gsm total", ("gsm", lp(name), "--mode", "total")))
    return sections


@pytest.mark.parametrize("name", bundled_names())
def test_corpus_fixtures(name):
    got = []
    for title, argv in _fixture_sections(name):
        got.append(f"## {title}\n")
        got.append(call(*argv)[1])
    assert "".join(got) == (FIXTURES / f"{name}.out").read_text()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "abdual.cli", "solve", lp("p2"), "-q", "s"], capture_output=True, text=True
    )
    assert (proc.returncode, proc.stdout) == (0, "{}\n")
