"""End-to-end checks of the command-line tool via subprocess."""

import json
import os
import subprocess

import pytest

CLI = os.environ.get("MPP_CLI")

pytestmark = pytest.mark.skipif(CLI is None, reason="MPP_CLI not set")


def run(*args, cwd):
    return subprocess.run([CLI, *args], cwd=cwd, capture_output=True, text=True)


@pytest.fixture()
def cake_path(tmp_path):
    result = run("demo-cake", "--out", str(tmp_path), cwd=tmp_path)
    assert result.returncode == 0, result.stderr
    return tmp_path / "cake.json"


def test_demo_cake_writes_artifacts_and_summary(tmp_path):
    result = run("demo-cake", "--out", str(tmp_path), cwd=tmp_path)
    assert result.returncode == 0, result.stderr
    assert "E1 = E2 = 27 under pi-hat" in result.stdout
    assert "(half,half) yields 20,20" in result.stdout
    assert "breakpoints r = 1/3 and 2/3" in result.stdout
    for name in ["cake.json", "cake_policy.json", "cake_frontier.csv", "cake_prop1.json"]:
        assert (tmp_path / name).exists()
    assert result.stdout.strip().splitlines()[-1] == "RESULT demo-cake ok"


def test_solve_writes_policy_and_payoffs(cake_path, tmp_path):
    out = tmp_path / "solved_policy.json"
    result = run(
        "solve", "--problem", str(cake_path), "--weights", "0.5,0.5", "--out", str(out),
        cwd=tmp_path,
    )
    assert result.returncode == 0, result.stderr
    assert "E1 = 27.000000000" in result.stdout
    assert "E2 = 27.000000000" in result.stdout
    assert result.stdout.strip().splitlines()[-1].startswith(
        "RESULT solve ok payoffs=27.000000000,27.000000000"
    )
    policy = json.loads(out.read_text())
    assert policy["red"]["all-none"] == 1.0
    assert policy["green"]["none-all"] == 1.0


def test_solved_policy_file_round_trips_through_trace(cake_path, tmp_path):
    policy_path = tmp_path / "p.json"
    run("solve", "--problem", str(cake_path), "--out", str(policy_path), cwd=tmp_path)
    out = tmp_path / "traj.csv"
    result = run(
        "trace", "--problem", str(cake_path), "--policy", str(policy_path),
        "--seed", "3", "--count", "10", "--out", str(out), cwd=tmp_path,
    )
    assert result.returncode == 0, result.stderr
    lines = out.read_text().splitlines()
    assert lines[0] == "step,obs,action,state,eff_w_1,eff_w_2,model_tag"
    assert len(lines) == 11


def test_frontier_csv_contract(cake_path, tmp_path):
    out = tmp_path / "frontier.csv"
    result = run(
        "frontier", "--problem", str(cake_path), "--grid", "101", "--out", str(out),
        cwd=tmp_path,
    )
    assert result.returncode == 0, result.stderr
    lines = out.read_text().splitlines()
    assert lines[0] == "w1,w2,payoff1,payoff2,policy_id"
    assert len(lines) == 6  # header + five distinct optimal payoffs
    assert any("27.000000000,27.000000000" in line for line in lines)


def test_oracle_payoffs_lists_nine_rows(cake_path, tmp_path):
    result = run("oracle", "--problem", str(cake_path), "--mode", "payoffs", cwd=tmp_path)
    assert result.returncode == 0, result.stderr
    rows = [line for line in result.stdout.splitlines() if "," in line and "RESULT" not in line]
    assert len(rows) == 9


def test_oracle_verify_fails_with_witness_on_dominated_target(cake_path, tmp_path):
    report_path = tmp_path / "verify.json"
    result = run(
        "oracle", "--problem", str(cake_path), "--mode", "verify", "--target", "20,20",
        "--out", str(report_path), cwd=tmp_path,
    )
    assert result.returncode == 4
    assert "witness" in result.stdout
    report = json.loads(report_path.read_text())
    assert report["mode"] == "verify"
    assert report["witnesses"][0] == pytest.approx([27.0, 27.0], abs=1e-9)

    ok = run(
        "oracle", "--problem", str(cake_path), "--mode", "verify", "--target", "27,27",
        cwd=tmp_path,
    )
    assert ok.returncode == 0
    assert ok.stdout.strip().splitlines()[-1] == "RESULT oracle verify PASS"


def test_oracle_prop1_confirms_impossibility(cake_path, tmp_path):
    result = run(
        "oracle", "--problem", str(cake_path), "--mode", "prop1", "--target", "27,27",
        cwd=tmp_path,
    )
    assert result.returncode == 0, result.stderr
    assert result.stdout.strip().splitlines()[-1] == "RESULT oracle prop1 PASS"

    achievable = run(
        "oracle", "--problem", str(cake_path), "--mode", "prop1", "--target", "20,20",
        cwd=tmp_path,
    )
    assert achievable.returncode == 4
    assert "achievable at r=0.5" in achievable.stdout


def test_exit_codes_for_bad_input_and_size_cap(cake_path, tmp_path):
    missing = run("solve", "--problem", str(tmp_path / "nope.json"), cwd=tmp_path)
    assert missing.returncode == 2

    bad = tmp_path / "bad.json"
    doc = json.loads(cake_path.read_text())
    doc["principals"][0]["prior"] = {"red": 0.5, "green": 0.6}
    bad.write_text(json.dumps(doc))
    invalid = run("solve", "--problem", str(bad), cwd=tmp_path)
    assert invalid.returncode == 2
    assert "prior sums to" in invalid.stderr

    capped = run("solve", "--problem", str(cake_path), "--cap", "5", cwd=tmp_path)
    assert capped.returncode == 3


def test_trace_under_first_model_sees_mostly_red(cake_path, tmp_path):
    out = tmp_path / "alice.csv"
    result = run(
        "trace", "--problem", str(cake_path), "--model", "1", "--seed", "1",
        "--count", "500", "--out", str(out), cwd=tmp_path,
    )
    assert result.returncode == 0, result.stderr
    rows = out.read_text().splitlines()[1:]
    reds = sum(1 for row in rows if row.split(",")[1] == "red")
    assert reds / len(rows) > 0.8
    report = json.loads(result.stdout[: result.stdout.rfind("RESULT")])
    assert report["generator"] == 1
