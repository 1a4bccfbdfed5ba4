"""End-to-end command-line behavior, exit codes included."""

import json

import pytest

from slicebench.cli.main import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_construct_emits_function_file(capsys):
    code, out, err = run(capsys, "construct", "eq:k=1")
    assert code == 0 and err == ""
    obj = json.loads(out)
    assert (obj["kind"], obj["n"], obj["k"]) == ("slice", 4, 2)
    assert obj["construction"]["name"] == "eq"


def test_construct_out_writes_file(capsys, tmp_path):
    target = tmp_path / "f.json"
    code, out, _ = run(capsys, "construct", "eq:k=1", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["construction"]["params"] == {"k": 1}


def test_construct_unknown_name_is_input_error(capsys):
    code, _, err = run(capsys, "construct", "nope:k=1")
    assert code == 4
    assert json.loads(err)["error"] == "input"


def test_usage_error_exits_with_input_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 4
    with pytest.raises(SystemExit) as exc:
        main(["measure", "--bogus-flag"])
    assert exc.value.code == 4


def test_measure_json_report(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("SLICEBENCH_CACHE_DIR", str(tmp_path / "cache"))
    code, out, _ = run(
        capsys, "measure", "--construct", "eq:k=1", "--measures", "D,C,s"
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["function"] == {"construction": "eq:k=1"}
    assert {k: obj["measures"][k]["value"] for k in ("D", "C", "s")} == {
        "D": 2,
        "C": 2,
        "s": 2,
    }


def test_measure_csv_layout(capsys):
    code, out, _ = run(
        capsys,
        "measure", "--construct", "eq:k=1", "--measures", "D", "--no-cache",
        "--csv",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "measure,value,nodes,millis"
    assert lines[1].startswith("D,2,")


def test_measure_cache_reruns_byte_identical(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("SLICEBENCH_CACHE_DIR", str(tmp_path / "cache"))
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for target in (a, b):
        code, _, _ = run(
            capsys,
            "measure", "--construct", "random:n=6,k=3,seed=5",
            "--measures", "D,C,bs,deg", "--out", str(target),
        )
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    assert any((tmp_path / "cache").iterdir())


def test_measure_unknown_measure_is_input_error(capsys):
    code, _, err = run(
        capsys, "measure", "--construct", "eq:k=1", "--measures", "D,QQ"
    )
    assert code == 4
    assert "QQ" in json.loads(err)["message"]


def test_measure_needs_a_function_source(capsys):
    code, _, err = run(capsys, "measure", "--measures", "D")
    assert code == 4
    assert "construct" in json.loads(err)["message"]


def test_measure_missing_file_is_input_error(capsys, tmp_path):
    code, _, err = run(
        capsys, "measure", "--function", str(tmp_path / "absent.json")
    )
    assert code == 4
    assert json.loads(err)["error"] == "input"


def test_measure_resource_cap_exit_code(capsys):
    code, _, err = run(
        capsys,
        "measure", "--construct", "or-first-half:n=21",
        "--measures", "nonadaptive", "--no-cache",
    )
    assert code == 3
    assert json.loads(err)["error"] == "resource-cap"


def test_match_eq_players_transcript(capsys):
    code, out, _ = run(
        capsys,
        "match", "--construct", "eq:k=1",
        "--algorithm", "eq:k=1", "--adversary", "eq:k=1",
    )
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    assert [line["query"] for line in lines[:-1]] == [1, 2]
    verdict = lines[-1]["verdict"]
    assert verdict["status"] == "claimed"
    assert verdict["correct"] is True
    assert verdict["query_count"] == 2
    assert "queries" not in verdict


def test_match_budget_status(capsys):
    code, out, _ = run(
        capsys,
        "match", "--construct", "eq:k=2",
        "--algorithm", "eq:k=2", "--adversary", "eq:k=2", "--budget", "3",
    )
    assert code == 0
    verdict = json.loads(out.splitlines()[-1])["verdict"]
    assert verdict["status"] == "budget" and verdict["query_count"] == 3


def test_match_fixed_adversary_and_optimal_player(capsys):
    code, out, _ = run(
        capsys,
        "match", "--construct", "eq:k=1",
        "--algorithm", "optimal", "--adversary", "fixed:x=0110",
    )
    assert code == 0
    verdict = json.loads(out.splitlines()[-1])["verdict"]
    assert verdict["correct"] is True and verdict["query_count"] <= 2


def test_match_rejects_member_outside_domain(capsys):
    code, _, err = run(
        capsys,
        "match", "--construct", "eq:k=1",
        "--algorithm", "optimal", "--adversary", "fixed:x=1110",
    )
    assert code == 4
    assert json.loads(err)["error"] == "input"


def test_match_unknown_players_are_input_errors(capsys):
    for flag, value in [("--algorithm", "nope"), ("--adversary", "nope")]:
        other = "--adversary" if flag == "--algorithm" else "--algorithm"
        code, _, err = run(
            capsys,
            "match", "--construct", "eq:k=1", flag, value, other, "eq:k=1",
        )
        assert code == 4
        assert "nope" in json.loads(err)["message"]


def test_match_algorithm_param_validation(capsys):
    code, _, err = run(
        capsys,
        "match", "--construct", "eq:k=1",
        "--algorithm", "eq:k=1,z=2", "--adversary", "eq:k=1",
    )
    assert code == 4
    assert "unknown parameters" in json.loads(err)["message"]


def test_experiment_report_and_rerun_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for target in (a, b):
        code, _, _ = run(
            capsys,
            "experiment", "kml-count", "--set", "rs=3", "--out", str(target),
        )
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    report = json.loads(a.read_text())
    assert report["failures"] == 0
    assert report["cases"][0]["observed"]["enumerated"] == 14


def test_experiment_spec_file_rerun_matches(capsys, tmp_path):
    direct = tmp_path / "direct.json"
    run(capsys, "experiment", "kml-count", "--set", "rs=3", "--out", str(direct))
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"name": "kml-count", "params": {"rs": [3]}}))
    replay = tmp_path / "replay.json"
    code, _, _ = run(
        capsys, "experiment", "--spec", str(spec), "--out", str(replay)
    )
    assert code == 0
    assert replay.read_bytes() == direct.read_bytes()


def test_experiment_jobs_do_not_change_the_report(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "experiment", "eq-depth", "--set", "ks=1-2", "--out", str(a))
    code, _, _ = run(
        capsys,
        "experiment", "eq-depth", "--set", "ks=1-2", "--jobs", "2",
        "--out", str(b),
    )
    assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_experiment_csv_layout(capsys):
    code, out, _ = run(
        capsys, "experiment", "kml-count", "--set", "rs=3", "--csv"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("key,pass,")
    assert lines[1].startswith("r=03,true,")


def test_experiment_failure_exits_with_counterexample(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, _, err = run(
        capsys,
        "experiment", "ramsey-random", "--set", "seeds=5",
        "--set", "min_count=6", "--out", str(report),
    )
    assert code == 2
    payload = json.loads(err)
    assert payload["error"] == "assertion"
    assert payload["counterexample"]["aggregate"]["pass"] is False
    assert json.loads(report.read_text())["failures"] == 1


def test_experiment_override_validation(capsys):
    code, _, err = run(capsys, "experiment", "kml-count", "--set", "nope=3")
    assert code == 4
    assert "nope" in json.loads(err)["message"]
    code, _, _ = run(capsys, "experiment", "kml-count", "--set", "rs=x")
    assert code == 4
    code, _, _ = run(capsys, "experiment", "unknown-name")
    assert code == 4


def test_experiment_spec_flag_is_exclusive(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"name": "kml-count", "params": {"rs": [3]}}))
    code, _, err = run(
        capsys, "experiment", "kml-count", "--spec", str(spec)
    )
    assert code == 4
    assert "--spec" in json.loads(err)["message"]


def test_experiment_spec_file_bad_json(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text("not json\n")
    code, _, err = run(capsys, "experiment", "--spec", str(spec))
    assert code == 4
    payload = json.loads(err)
    assert payload["error"] == "format" and payload["line"] == 1


def test_verify_round_trip_and_tamper_detection(capsys, tmp_path):
    report = tmp_path / "report.json"
    code, _, _ = run(
        capsys,
        "measure", "--construct", "eq:k=1", "--measures", "D,C,s",
        "--no-cache", "--out", str(report),
    )
    assert code == 0
    code, out, _ = run(
        capsys, "verify", "--construct", "eq:k=1", "--report", str(report)
    )
    assert code == 0
    assert json.loads(out)["verified"] == ["C", "D", "s"]

    obj = json.loads(report.read_text())
    obj["measures"]["D"]["value"] = 3
    report.write_text(json.dumps(obj))
    code, _, err = run(
        capsys, "verify", "--construct", "eq:k=1", "--report", str(report)
    )
    assert code == 2
    assert json.loads(err)["error"] == "verification"


def test_verify_report_against_wrong_function(capsys, tmp_path):
    report = tmp_path / "report.json"
    run(
        capsys,
        "measure", "--construct", "eq:k=1", "--measures", "D", "--no-cache",
        "--out", str(report),
    )
    code, _, err = run(
        capsys, "verify", "--construct", "random:n=4,k=2,seed=0",
        "--report", str(report),
    )
    assert code == 2
    assert json.loads(err)["error"] == "verification"


def test_verify_empty_report_is_input_error(capsys, tmp_path):
    report = tmp_path / "report.json"
    report.write_text("{}")
    code, _, err = run(
        capsys, "verify", "--construct", "eq:k=1", "--report", str(report)
    )
    assert code == 4
    assert json.loads(err)["error"] == "format"
