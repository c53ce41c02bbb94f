from __future__ import annotations

import json

import pytest

from rebac import DecisionTrace, dumps_workspace, make_fixture
from rebac.cli import main


@pytest.fixture()
def corporate_file(tmp_path):
    path = tmp_path / "corporate.json"
    path.write_text(dumps_workspace(make_fixture("corporate")))
    return str(path)


@pytest.fixture()
def unix_file(tmp_path):
    path = tmp_path / "unix.json"
    path.write_text(dumps_workspace(make_fixture("unix")))
    return str(path)


def test_validate_reports_counts(corporate_file, capsys):
    assert main(["validate", "--workspace", corporate_file]) == 0
    out = capsys.readouterr().out
    assert out == f"{corporate_file}: ok (25 entities, 29 edges, 12 rules)\n"


def test_validate_prints_every_violation_and_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    doc = json.loads(dumps_workspace(make_fixture("unix")))
    doc["version"] = 9
    doc["model"]["symmetric"] = ["friend"]
    bad.write_text(json.dumps(doc))
    assert main(["validate", "--workspace", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "version must be 1, found 9" in err
    assert "symmetric label 'friend'" in err


def test_eval_allow_exit_code_and_annotation(corporate_file, capsys):
    code = main(
        ["eval", "-w", corporate_file, "-s", "Tech.#2", "-o", "Func.Spec.#1", "-a", "write"]
    )
    assert code == 0
    assert capsys.readouterr().out == "ALLOW (first match)\n"


def test_eval_deny_exit_code_and_annotation(corporate_file, capsys):
    code = main(
        ["eval", "-w", corporate_file, "-s", "CEO", "-o", "Proj.#1 Report#1", "-a", "read"]
    )
    assert code == 1
    assert capsys.readouterr().out == "DENY (system default)\n"


def test_eval_unambiguous_outcome_has_no_annotation(corporate_file, capsys):
    code = main(
        ["eval", "-w", corporate_file, "-s", "Tech.#2", "-o", "Test.Spec.#1", "-a", "read"]
    )
    assert code == 0
    assert capsys.readouterr().out == "ALLOW\n"


def test_eval_unknown_entity_exits_2(corporate_file, capsys):
    code = main(["eval", "-w", corporate_file, "-s", "ghost", "-o", "Func.Spec.#1", "-a", "read"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_eval_metrics_lists_evaluated_rules(corporate_file, capsys):
    main(
        [
            "eval",
            "-w",
            corporate_file,
            "-s",
            "Sales.#2",
            "-o",
            "Func.Spec.#1",
            "-a",
            "write",
            "--metrics",
        ]
    )
    out = capsys.readouterr().out
    assert "rule 9 " in out
    assert "found=yes n=6 e=16" in out


def test_eval_explain_emits_a_loadable_trace(corporate_file, capsys):
    main(
        [
            "eval",
            "-w",
            corporate_file,
            "-s",
            "Tech.#2",
            "-o",
            "Func.Spec.#1",
            "-a",
            "write",
            "--explain",
        ]
    )
    out = capsys.readouterr().out
    _, _, payload = out.partition("\n")
    trace = DecisionTrace.from_dict(json.loads(payload))
    assert trace.outcome.value == "allow"
    assert trace.resolution == "crs:FirstMatch"
    assert trace.possible_decisions == [True, False]


def test_eval_trace_prefixes_rule_numbers(corporate_file, capsys):
    main(
        [
            "eval",
            "-w",
            corporate_file,
            "-s",
            "CTO",
            "-o",
            "Proj.#1 Report#1",
            "-a",
            "read",
            "--trace",
        ]
    )
    out = capsys.readouterr().out
    assert any(line.startswith("rule ") for line in out.splitlines())


def test_eval_batch_prints_one_line_per_request(corporate_file, capsys):
    assert main(["eval-batch", "--workspace", corporate_file]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == [
        "Tech.#2 Test.Spec.#1 read: ALLOW",
        "Tech.#2 Func.Spec.#1 write: ALLOW (first match)",
        "Sales.#2 Func.Spec.#1 write: DENY",
        "CTO Proj.#1 Report#1 read: ALLOW",
        "CEO Proj.#1 Report#1 read: DENY (system default)",
    ]


def test_eval_batch_explain_collects_all_traces(unix_file, capsys):
    assert main(["eval-batch", "-w", unix_file, "--explain"]) == 0
    out = capsys.readouterr().out
    payload = out[out.index("[") :]
    traces = json.loads(payload)
    assert [t["outcome"] for t in traces] == ["allow", "allow", "deny", "deny"]


def test_match_found_with_metrics(corporate_file, capsys):
    code = main(
        [
            "match",
            "-w",
            corporate_file,
            "-s",
            "Sales.#2",
            "-t",
            "Func.Spec.#1",
            "-p",
            "P . ~R . (~M)+",
            "--metrics",
        ]
    )
    assert code == 0
    assert capsys.readouterr().out == "found=yes\nn=6 e=16 queue_peak=2 pairs_seen=9\n"


def test_match_not_found_exits_1(corporate_file, capsys):
    code = main(
        [
            "match",
            "-w",
            corporate_file,
            "-s",
            "CEO",
            "-t",
            "Proj.#1 Report#1",
            "-p",
            "S+ . ~M . S . ~D . (~M)+",
        ]
    )
    assert code == 1
    assert capsys.readouterr().out == "found=no\n"


def test_match_rejects_unknown_label(corporate_file, capsys):
    code = main(
        ["match", "-w", corporate_file, "-s", "CEO", "-t", "CTO", "-p", "Supervises . nope"]
    )
    assert code == 2
    assert "unknown relationship label" in capsys.readouterr().err


def test_simplify_pushes_reversal_inward(capsys):
    assert main(["simplify", "--path", "~(~(r1 . r2) . (r1 . r3)+)"]) == 0
    assert capsys.readouterr().out == "(~r3 . ~r1)+ . r1 . r2\n"


def test_simplify_resolves_abbreviations_against_workspace(corporate_file, capsys):
    assert main(["simplify", "-p", "S+ . ~M", "--workspace", corporate_file]) == 0
    assert capsys.readouterr().out == "Supervises+ . ~Member-of\n"


def test_simplify_rejects_star_with_position(capsys):
    assert main(["simplify", "--path", "a*"]) == 2
    err = capsys.readouterr().err
    assert "'*' has no surface form" in err


def test_fixture_to_stdout_round_trips(capsys):
    assert main(["fixture", "unix"]) == 0
    out = capsys.readouterr().out
    assert out == dumps_workspace(make_fixture("unix"))


def test_fixture_to_file(tmp_path, capsys):
    out_path = tmp_path / "rbac.json"
    assert main(["fixture", "rbac", "--out", str(out_path)]) == 0
    assert capsys.readouterr().out == f"wrote {out_path}\n"
    assert json.loads(out_path.read_text())["version"] == 1


def test_oracle_check_workspace_and_random_trials(corporate_file, capsys):
    code = main(["oracle-check", "--workspace", corporate_file, "--trials", "200", "--seed", "7"])
    assert code == 0
    out = capsys.readouterr().out
    checked = 200 + 5 * 12  # random trials + requests x path rules
    assert out == f"{checked}/{checked} agree\n"


def test_oracle_check_random_only(capsys):
    assert main(["oracle-check", "--trials", "50"]) == 0
    assert capsys.readouterr().out == "50/50 agree\n"


def test_missing_workspace_file_exits_2(capsys):
    assert main(["validate", "--workspace", "/nonexistent/ws.json"]) == 2
    assert capsys.readouterr().err != ""
