import json

import pytest

from forge import suite
from forge.cli import main
from forge.reports import MAYER_VIETORIS, NOVIKOV, PUSHOFF

from .oracles.honesty import consumption_probe, hidden_assumptions

CHECK_KEYS = {"id", "status", "value", "assumptions", "ms"}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "17 checks: 17 pass, 0 fail, 0 inconclusive" in out
    assert "PASS* = holds given the listed assumptions" in out
    assert "proved" not in out.lower()


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "--format", "json", "--no-timing")
    doc = json.loads(out)
    assert code == 0 and set(doc) == {"bound", "summary", "checks"}
    assert doc["bound"] == suite.DEFAULT_BOUND
    assert doc["summary"] == {"pass": 17, "fail": 0, "inconclusive": 0}
    ids = [c["id"] for c in doc["checks"]]
    assert ids == sorted(ids) and len(set(ids)) == len(ids)
    for c in doc["checks"]:
        assert set(c) == CHECK_KEYS and c["ms"] == 0
        assert all(": " in a for a in c["assumptions"])


def test_no_timing_output_is_byte_identical(capsys):
    first = run(capsys, "verify", "--format", "json", "--no-timing")[1]
    second = run(capsys, "verify", "--format", "json", "--no-timing")[1]
    assert first == second


def test_check_selection_and_alias(capsys):
    code, out, _ = run(capsys, "verify", "--check", "h1v", "--format", "json")
    assert code == 0 and [c["id"] for c in json.loads(out)["checks"]] == ["homology.V"]
    code, out, _ = run(capsys, "verify", "--check", "mcg.*", "--format", "json")
    assert len(json.loads(out)["checks"]) == 6
    code, _, err = run(capsys, "verify", "--check", "nothing.here")
    assert code == 1 and "no check matches" in err


def test_tiny_bound_is_inconclusive_never_fail(capsys):
    code, out, _ = run(capsys, "verify", "--bound", "1", "--format", "json", "--no-timing")
    doc = json.loads(out)
    assert code == 2
    assert doc["summary"]["fail"] == 0 and doc["summary"]["inconclusive"] > 0
    code, out, _ = run(capsys, "verify", "--bound", "1")
    assert "INCONCLUSIVE(bound=1)" in out


@pytest.mark.parametrize("bound", [0, 1, 2, 4, 8])
def test_bound_sweep_never_fails(bound):
    results = suite.run_suite(bound=bound, timing=False)
    assert all(r.status in ("pass", "inconclusive") for r in results)


def test_claims_from_file(tmp_path, capsys):
    f = tmp_path / "claims.fg"
    f.write_text('claim "good": a b a == b a b\nclaim "bad": a b == b a\n')
    code, out, _ = run(capsys, "verify", str(f), "--check", "claim.*", "--format", "json")
    statuses = {c["id"]: c["status"] for c in json.loads(out)["checks"]}
    assert statuses == {"claim.bad": "fail", "claim.good": "pass"} and code == 1


def test_user_file_can_break_a_check(tmp_path, capsys):
    f = tmp_path / "v.fg"
    f.write_text("luttinger T_alpha { torus c alpha; meridian b; slope +1 }\n")
    # b is not null-homologous in the complement, so the meridian check must reject it
    code, out, _ = run(capsys, "verify", str(f), "--check", "bundles.tori", "--format", "json")
    assert code == 1 and json.loads(out)["checks"][0]["status"] == "fail"


def test_parse_errors_report_position(tmp_path, capsys):
    f = tmp_path / "bad.fg"
    f.write_text("a b\nbundle { alpha: phi; beta: a q }\n")
    for argv in (["parse", str(f)], ["verify", str(f)]):
        code, _, err = run(capsys, *argv)
        assert code == 1 and err.startswith(f"{f}:2:30: unknown generator 'q'")
    good = tmp_path / "good.fg"
    good.write_text("a b\n")
    assert run(capsys, "parse", str(good))[0] == 0


def test_missing_file(capsys):
    code, _, err = run(capsys, "verify", "/nonexistent/file.fg")
    assert code == 1 and err.startswith("forge:")


def test_report_writes_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, stdout, _ = run(capsys, "report", "--out", str(out), "--no-timing")
    doc = json.loads(out.read_text())
    assert code == 0 and len(doc["checks"]) == 17 and "17 checks" in stdout


def test_bad_bound_is_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "--bound", "-3"])


def test_no_hidden_assumptions(monkeypatch):
    assert hidden_assumptions(monkeypatch) == {}


def test_probe_detects_consumption(monkeypatch):
    ws = suite.Workspace.default()
    spec = next(s for s in suite.CHECKS if s.id == "quotient.W")
    with consumption_probe(monkeypatch) as used:
        suite.run_check(spec, ws, 16)
    assert used == {PUSHOFF.label, MAYER_VIETORIS.label, NOVIKOV.label}


def test_probe_catches_a_dishonest_check(monkeypatch):
    honest = next(s for s in suite.CHECKS if s.id == "forms.A")
    dishonest = suite.CheckSpec("forms.A", "", "", lambda ws, b: suite.Outcome(True, honest.run(ws, b).value))
    monkeypatch.setattr(suite, "CHECKS", (dishonest,))
    assert hidden_assumptions(monkeypatch) == {"forms.A": sorted([NOVIKOV.label, PUSHOFF.label])}
