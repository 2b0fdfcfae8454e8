import json
import subprocess
import sys

import pytest

from sto_integrals import __version__
from sto_integrals.__main__ import main
from sto_integrals._cli import ResultRecord, Status, read_cases
from sto_integrals.oracle import CheckResult

H2 = ["--orb1", "1 0 0 1.0", "--orb2", "1 0 0 1.0"]
H2 += ["--orb3", "1 0 0 1.0", "--orb4", "1 0 0 1.0"]

ONES = 'orb1: "1 0 0 1.0", orb2: "1 0 0 1.0", orb3: "1 0 0 1.0", orb4: "1 0 0 1.0"'
MIXED = (
    'orb1: [2, 1, 1, 1.1], orb2: "3 2 0 0.9", orb3: "2 1 0 1.3", orb4: [2, 1, -1, 1]'
)
BATCH = "\n".join(
    [
        "# hydrogen molecule at its bond length",
        f"{{id: h2-j, class: coulomb, {ONES}, R: 1.4}}",
        "",
        '{id: broken, orb1: "1 0 0 1.0", R: 1.4}',
        f"{{id: p-pi, {MIXED}, R: 2.0}}",
    ]
)


def test_cli_version():
    cmd = [sys.executable, "-m", "sto_integrals", "--version"]
    assert subprocess.check_output(cmd).decode().strip() == __version__


def test_eval_json(capsys):
    args = ["eval", "--class", "coulomb", *H2, "--R", "1.4", "--format", "json"]
    assert main(args) == 0
    record = ResultRecord.from_json(capsys.readouterr().out)
    assert record.status is Status.OK
    assert record.value == pytest.approx(0.5035, abs=5e-5)
    assert record.mu_used is not None and record.terms_evaluated


def test_eval_text(capsys):
    assert main(["eval", *H2, "--R", "1.4"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[1].split() == ["status", "ok"]


def test_eval_zero_by_selection(capsys):
    orbitals = ["--orb1", "2 1 1 1.0", "--orb2", "1 0 0 1.0"]
    orbitals += ["--orb3", "1 0 0 1.0", "--orb4", "1 0 0 1.0"]
    assert main(["eval", *orbitals, "--R", "2", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["status"] == "zero_by_selection"
    assert data["value"] == 0.0


def test_eval_rejects_nonpositive_distance(capsys):
    assert main(["eval", *H2, "--R", "-1"]) == 2
    assert "R:" in capsys.readouterr().err


def test_eval_rejects_bad_orbital(capsys):
    args = ["eval", *H2[:-1], "2 2 0 1.0", "--R", "1.4"]
    assert main(args) == 2
    assert "orb4" in capsys.readouterr().err


def test_eval_reports_non_convergence(capsys):
    orbitals = ["--orb1", "1 0 0 1.2", "--orb2", "1 0 0 1.2"]
    orbitals += ["--orb3", "1 0 0 0.8", "--orb4", "1 0 0 0.8"]
    assert main(["eval", *orbitals, "--R", "2", "--mu-cap", "2"]) == 3
    assert "NotConverged" in capsys.readouterr().err


def test_invalid_log_level():
    with pytest.raises(SystemExit) as exc_info:
        main(["--log-level", "CHATTY", "eval", *H2, "--R", "1.4"])
    assert exc_info.value.code == 2


@pytest.fixture
def batch_file(tmp_path):
    path = tmp_path / "cases.yaml"
    path.write_text(BATCH)
    return path


def _records(path):
    return [ResultRecord.from_json(line) for line in path.read_text().splitlines()]


def test_batch_keeps_going_past_bad_lines(batch_file, tmp_path, capsys):
    output = tmp_path / "out.jsonl"
    assert main(["batch", str(batch_file), str(output)]) == 1
    records = _records(output)
    assert [r.id for r in records] == ["h2-j", "broken", "p-pi"]
    assert [r.status for r in records] == [Status.OK, Status.ERROR, Status.OK]
    assert "missing key" in records[1].message
    assert records[0].value == pytest.approx(0.5035, abs=5e-5)
    assert all(r.elapsed is None for r in records)
    assert "ok=2 zero_by_selection=0 error=1" in capsys.readouterr().err


def test_batch_is_independent_of_workers(batch_file, tmp_path):
    serial, parallel = tmp_path / "serial.jsonl", tmp_path / "parallel.jsonl"
    main(["batch", str(batch_file), str(serial)])
    main(["batch", str(batch_file), str(parallel), "--workers", "2"])
    assert serial.read_text() == parallel.read_text()


def test_batch_timing(batch_file, tmp_path):
    output = tmp_path / "out.jsonl"
    main(["batch", str(batch_file), str(output), "--timing"])
    elapsed = [r.elapsed for r in _records(output) if r.status is Status.OK]
    assert all(t is not None and t >= 0 for t in elapsed)


def test_empty_batch(tmp_path):
    source, output = tmp_path / "empty.yaml", tmp_path / "out.jsonl"
    source.write_text("# nothing\n\n")
    assert main(["batch", str(source), str(output)]) == 0
    assert output.read_text() == ""


def test_batch_missing_input(tmp_path):
    assert main(["batch", str(tmp_path / "nope"), str(tmp_path / "out")]) == 2


def test_read_cases_numbers_lines():
    cases = read_cases(["", "# comment", "[1, 2]", "{id: x, R: 1}"])
    assert [c.case_id for c in cases] == ["line-3", "x"]


def test_batch_overrides(tmp_path):
    source, output = tmp_path / "cases.yaml", tmp_path / "out.jsonl"
    case = '{orb1: "1 0 0 1.2", orb2: "1 0 0 1.2", orb3: "1 0 0 0.8", orb4: "1 0 0 0.8"'
    source.write_text(
        f"{case}, R: 2, overrides: {{mu_cap: 2}}}}\n"
        f"{case}, R: 2, overrides: {{colour: red}}}}\n"
    )
    assert main(["batch", str(source), str(output)]) == 1
    first, second = _records(output)
    assert first.message.startswith("NotConverged")
    assert "unknown keys ['colour']" in second.message


@pytest.mark.parametrize(
    "results, code",
    [
        ([CheckResult("w_forms", True)], 0),
        ([CheckResult("w_forms", True), CheckResult("scaling", False, "off")], 1),
    ],
)
def test_verify_exit_code(monkeypatch, capsys, results, code):
    monkeypatch.setattr("sto_integrals._cli.run_checks", lambda grid: results)
    assert main(["verify"]) == code
    out = capsys.readouterr().out
    assert "w_forms" in out and "PASS" in out
    if code:
        assert "FAIL" in out and "off" in out


def test_batch_reports_undecodable_line_in_place(tmp_path, capsys):
    source, output = tmp_path / "cases.yaml", tmp_path / "out.jsonl"
    good = f"{{id: h2-j, class: coulomb, {ONES}, R: 1.4}}".encode()
    source.write_bytes(good + b"\n{id: bad, R: 1.4\xff}\n" + good + b"\n")
    assert main(["batch", str(source), str(output)]) == 1
    records = _records(output)
    assert [r.id for r in records] == ["h2-j", "line-2", "h2-j"]
    assert [r.status for r in records] == [Status.OK, Status.ERROR, Status.OK]
    assert "not UTF-8" in records[1].message
    assert "ok=2 zero_by_selection=0 error=1" in capsys.readouterr().err


def test_read_cases_decodes_each_line_alone():
    cases = read_cases([b"{id: x, R: 1}", b"\xff\xfe", "{id: y, R: 2}"])
    assert [c.case_id for c in cases] == ["x", "line-2", "y"]


def test_override_error_stays_with_its_line(tmp_path, capsys):
    source, output = tmp_path / "cases.yaml", tmp_path / "out.jsonl"
    case = f"{{id: same, class: coulomb, {ONES}, R: 1.4"
    source.write_text(f"{case}}}\n{case}, overrides: {{mu_tol: -1}}}}\n")
    assert main(["batch", str(source), str(output)]) == 1
    first, second = _records(output)
    assert (first.status, second.status) == (Status.OK, Status.ERROR)
    assert "mu_tol" in second.message
    assert "ok=1 zero_by_selection=0 error=1" in capsys.readouterr().err


def test_precision_tol_override(tmp_path):
    source, output = tmp_path / "cases.yaml", tmp_path / "out.jsonl"
    case = f"{{id: h2-j, class: coulomb, {ONES}, R: 1.4"
    source.write_text(
        f"{case}, overrides: {{precision_tol: 1.0e-15}}}}\n"
        f"{case}, overrides: {{precision_tol: 2}}}}\n"
    )
    assert main(["batch", str(source), str(output)]) == 1
    first, second = _records(output)
    assert first.status is Status.OK
    assert first.value == pytest.approx(0.5035, abs=5e-5)
    assert "precision_tol" in second.message


def test_override_exponents_without_a_dot_are_numbers():
    [case] = read_cases([f"{{id: a, {ONES}, R: 1.4, overrides: {{mu_tol: 1e-12}}}}"])
    assert case.overrides == {"mu_tol": 1e-12}
    [bad] = read_cases([f"{{id: b, {ONES}, R: 1.4, overrides: {{mu_cap: lots}}}}"])
    assert "mu_cap is not a number" in bad.message
