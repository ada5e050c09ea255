import json
import shutil

import pytest

from qsteenrod import golden
from qsteenrod.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, RunConfig, UsageError, main
from qsteenrod.harness import REGISTRY, Registry, check_golden


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_local_p1_p5(capsys):
    code, out, _ = run(capsys, "local-p1", "--prime", "5", "--q-max", "10", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["status"] == "pass"
    assert data["reports"][0]["check_id"] == "local_p1_closed_form"


def test_local_p1_bb_support(capsys):
    code, out, _ = run(capsys, "local-p1", "--prime", "3", "--q-max", "3", "--b0", "b", "--binf", "b",
                       "--format", "json")
    records = json.loads(out)["result"]["pairings"]["(b,b)"]
    assert code == EXIT_OK
    assert records == [{"q": 3, "t": 2, "h": 0, "x": 0, "c": 2}]


@pytest.mark.parametrize("argv", [
    ["local-p1", "--prime", "4"],
    ["local-p1", "--prime", "2"],
    ["flat-section", "--prime", "5"],
    ["annihilation"],
    ["no-such-command"],
    ["local-p1", "--format", "xml"],
    ["local-p1", "--prime", "3", "--prime", "5"],
])
def test_usage_errors(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse-level errors
        code = exc.code
    assert code == EXIT_USAGE


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig(prime=9)
    cfg = RunConfig(prime=5, mu=7)
    assert cfg.q_max == 15 and cfg.mu == 2 and cfg.t_min == -9


def test_tstar_p1(capsys):
    code, out, _ = run(capsys, "tstar-p1", "--prime", "3", "--q-max", "9", "--h-max", "2")
    assert code == EXIT_OK
    assert "low_order_closed_forms_corrected" in out


def test_tstar_p1_periodicity(capsys):
    code, out, _ = run(capsys, "tstar-p1", "--prime", "5", "--q-max", "10", "--mu", "2", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK
    assert "periodicity" in [r["check_id"] for r in data["reports"]]


def test_tstar_p1_h0_is_classical_only(capsys):
    code, out, _ = run(capsys, "tstar-p1", "--h-max", "0", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK
    pairings = data["result"]["pairings"]
    assert pairings["(1,1)"] == [{"q": 0, "t": 2, "h": -1, "x": 0, "c": 2}]
    assert pairings["(b,b)"] == []


def test_tstar_p1_printed_forms_fail(capsys):
    code, _, _ = run(capsys, "tstar-p1", "--prime", "3", "--q-max", "6", "--h-max", "2", "--closed-form", "printed")
    assert code == EXIT_FAIL


@pytest.mark.parametrize("argv", [
    ["char0", "--q-max", "3"],
    ["flat-section", "--prime", "5", "--mu", "2"],
    ["annihilation", "--prime", "7", "--mu", "3"],
    ["flatness", "--prime", "3", "--q-max", "9", "--h-max", "3"],
    ["flatness", "--prime", "5", "--q-max", "10", "--h-max", "3", "--basis", "stable"],
    ["decompose", "--prime", "3", "--q-max", "9", "--h-max", "3", "--seed", "4"],
])
def test_subcommands_pass(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_OK, out


def test_json_is_deterministic(capsys, tmp_path):
    argv = ["decompose", "--prime", "3", "--q-max", "6", "--h-max", "2", "--seed", "11", "--format", "json"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--out", str(a)]) == EXIT_OK
    assert main(argv + ["--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert "wall_time" not in a.read_text()


def test_registry_refuses_missing_anchor():
    reg = Registry()
    with pytest.raises(ValueError):
        reg.register("x", "")
    with pytest.raises(ValueError):
        REGISTRY.register("flatness", "again")


def test_every_check_has_anchor():
    assert all(c.anchor.strip() for c in REGISTRY)


@pytest.fixture
def golden_copy(tmp_path):
    shutil.copytree(golden.DEFAULT_ROOT, tmp_path / "golden")
    return tmp_path / "golden"


def test_golden_fixtures_match(golden_copy):
    assert check_golden(golden_copy).ok


def test_corrupted_golden_fails_in_isolation(golden_copy, capsys):
    path = golden.golden_path(golden_copy, 3, 9, 4)
    data = json.loads(path.read_text())
    data["pairings"]["1,b"][0]["c"] += 1
    path.write_text(json.dumps(data))
    report = check_golden(golden_copy)
    assert not report.ok
    assert [f[0] for f in report.defect] == [[3, 9, 4]]
    code, out, _ = run(capsys, "verify-all", "--prime", "3", "--golden-dir", str(golden_copy), "--format", "json")
    statuses = {r["check_id"]: r["status"] for r in json.loads(out)["reports"]}
    assert code == EXIT_FAIL
    assert statuses["golden"] == "fail"
    assert statuses["flatness"] == statuses["dual_path"] == "pass"


def test_regen_golden_is_explicit(tmp_path, capsys):
    root = tmp_path / "fresh"
    assert not check_golden(root).ok
    run(capsys, "verify-all", "--prime", "3", "--golden-dir", str(root), "--regen-golden")
    assert check_golden(root).ok
