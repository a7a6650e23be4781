import json
from pathlib import Path

import pytest

from lcs_cohomology.cli import EXIT_BUDGET, EXIT_INVALID, EXIT_OK, load_schema, main

DOCS = Path(__file__).resolve().parent.parent / "docs"
EXAMPLE = DOCS / "examples" / "z2_z4.json"
BRACE = DOCS / "examples" / "brace_z4_z2.json"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, doc, name="p.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def test_golden_markdown(capsys):
    code, out, _ = run(capsys, "h2", EXAMPLE)
    assert code == EXIT_OK
    assert out == (DOCS / "examples" / "z2_z4.h2.md").read_text()


def test_output_is_deterministic(capsys):
    first = run(capsys, "h2", EXAMPLE, "--format", "json")
    second = run(capsys, "h2", EXAMPLE, "--format", "json", "--threads", "2")
    assert first == second


def test_shipped_schema_matches_package_schema():
    assert json.loads((DOCS / "problem.schema.json").read_text()) == load_schema()


def test_h2_json_for_trivial_z2_z2(capsys, tmp_path):
    doc = {"H": {"orders": [2]}, "I": {"orders": [2]}, "action": "trivial"}
    code, out, _ = run(capsys, "h2", write(tmp_path, doc), "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["results"][0]["invariant_factors"] == [2, 2]


def test_h2_with_oracle(capsys):
    code, out, _ = run(capsys, "h2", EXAMPLE, "--oracle", "--format", "json")
    assert code == EXIT_OK
    for entry in json.loads(out)["results"]:
        assert entry["oracle"]["counts_agree"] and entry["oracle"]["bijective"]


def test_seed_round_trip_regenerates_the_extension(capsys, tmp_path):
    code, out, _ = run(capsys, "extensions", EXAMPLE, "--format", "json")
    assert code == EXIT_OK
    first = json.loads(out)["extensions"]
    # feed every emitted seed back in, one action at a time
    doc = json.loads(EXAMPLE.read_text())
    for item in first:
        A, B = item["action"]["A"], item["action"]["B"]
        again = dict(doc, action={"A": A, "B": B}, task={"kind": "extensions", "seeds": [item["seed"]["vector"]]})
        code, out, _ = run(capsys, "run", write(tmp_path, again), "--format", "json")
        assert code == EXIT_OK
        assert json.loads(out)["extensions"][0]["extension"] == item["extension"]


def test_nontrivial_h_extensions(capsys):
    code, out, _ = run(capsys, "run", BRACE, "--format", "json")
    assert code == EXIT_OK
    exts = json.loads(out)["extensions"]
    assert len(exts) == 2
    assert all(len(e["extension"]["carrier"]) == 8 for e in exts)


def test_schema_errors_carry_json_pointers(capsys, tmp_path):
    doc = {"H": {"orders": [1, "x"]}, "I": {}, "action": {"A": [[[3]]]}}
    code, _, err = run(capsys, "validate", write(tmp_path, doc))
    assert code == EXIT_INVALID
    assert "/H/orders/0" in err and "/H/orders/1" in err and "/I" in err


def test_semantic_error_points_into_document(capsys, tmp_path):
    doc = {"H": {"orders": [2]}, "I": {"orders": [4]}, "action": "enumerate",
           "task": {"kind": "extensions", "seeds": [[1, 2, 3]]}}
    code, _, err = run(capsys, "run", write(tmp_path, doc))
    assert code == EXIT_INVALID
    assert "/task/seeds/0" in err


def test_invalid_action_exits_one(capsys, tmp_path):
    doc = {"H": {"orders": [2]}, "I": {"orders": [4]}, "action": {"A": [[[2]]], "B": [[[0]]]}}
    code, _, err = run(capsys, "validate", write(tmp_path, doc))
    assert code == EXIT_INVALID and err


def test_not_json_exits_one(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{")
    code, _, err = run(capsys, "h2", path)
    assert code == EXIT_INVALID and "not valid JSON" in err


def test_budget_exit_code(capsys, tmp_path):
    doc = {"H": {"orders": [2, 2]}, "I": {"orders": [2, 2]}, "action": "enumerate"}
    code, _, err = run(capsys, "oracle", write(tmp_path, doc), "--budget", "1000")
    assert code == EXIT_BUDGET and "budget" in err


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", 2, 2, 2, "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert {c["a"]: c["h2_order"] for c in report["cases"]} == {1: 16, 3: 4}


def test_classify_markdown_lists_every_root(capsys):
    code, out, _ = run(capsys, "classify", 3, 1, 2)
    assert code == EXIT_OK
    assert out.startswith("# ")
    for a in (1, 4, 7):
        assert f"| {a} |" in out


def test_classify_needs_yleft_zero(capsys):
    code, _, err = run(capsys, "classify", 2, 1, 1, "--no-yleft-zero")
    assert code == EXIT_INVALID and err


@pytest.mark.parametrize("kind", ["validate", "actions", "h2", "oracle"])
def test_run_dispatches_on_task_kind(capsys, tmp_path, kind):
    doc = {"H": {"orders": [2]}, "I": {"orders": [2]}, "action": "enumerate", "task": {"kind": kind}}
    path = write(tmp_path, doc)
    assert run(capsys, "run", path) == run(capsys, kind, path)
