import json
import subprocess
import sys

import numpy as np
import pytest

from balanced_invariants import harness
from balanced_invariants.cli import UsageError, main, parse_complex, parse_point

TINY = ["--restarts", "2", "--max-iterations", "200", "--degree", "3", "--radii", "6", "--angles", "64"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _strip_timing(text):
    doc = json.loads(text)
    doc.pop("timing")
    return doc


@pytest.mark.parametrize("text,value", [("0.5", 0.5), ("0.3+0.2i", 0.3 + 0.2j), ("-0.1-0.4i", -0.1 - 0.4j),
                                        ("0.2i", 0.2j), ("i", 1j), ("-i", -1j), ("1e-3+2e-1i", 1e-3 + 0.2j),
                                        ("2j", 2j)])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_parse_errors():
    with pytest.raises(UsageError):
        parse_complex("abc")
    with pytest.raises(UsageError):
        parse_complex("")
    np.testing.assert_array_equal(parse_point("0,0.5i"), [0, 0.5j])


def test_eval_example10(capsys):
    code, out, _ = run(capsys, "eval", "--domain", "example10", "--param", "a=0.8", "--point", "0,0.5")
    assert code == 0
    res = json.loads(out)["results"][0]
    assert res["h"]["value"] == pytest.approx(0.625) and res["h"]["kind"] == "Exact"
    assert res["hull_upper"]["kind"] == "UpperBound"


def test_eval_polydisc_and_example7(capsys):
    code, out, _ = run(capsys, "eval", "--domain", "polydisc", "--dim", "2", "--point", "0.5,0.3")
    assert code == 0 and json.loads(out)["results"][0]["h"]["value"] == 0.5
    code, out, _ = run(capsys, "eval", "--domain", "example7", "--point", "0.5,1.2")
    res = json.loads(out)["results"][0]
    assert res["c_lower"]["value_starred"] == pytest.approx(0.6, abs=1e-12)
    assert res["c_lower"]["kind"] == "LowerBound"


def test_usage_errors(capsys):
    assert run(capsys, "eval", "--domain", "nope", "--point", "1")[0] == 2
    assert run(capsys, "eval", "--domain", "ball", "--point", "x,1")[0] == 2
    assert run(capsys, "eval", "--domain", "ball", "--param", "a")[0] == 2
    assert run(capsys, "lempert", "--domain", "ball", "--from", "0,0")[0] == 2
    assert run(capsys, "lempert", "--domain", "ball", "--from", "0,0", "--to", "1,0")[0] == 2
    assert run(capsys, "carath", "--domain", "ball", "--point", "0.1,0.1")[0] == 2
    assert run(capsys, "verify", "nope")[0] == 2
    assert run(capsys, "eval", "--domain", "ball", "--point", "0,0", "--angles", "8")[0] == 2
    assert run(capsys)[0] == 2


def test_lempert_deterministic(capsys):
    argv = ["lempert", "--domain", "example10", "--param", "a=0.8", "--from", "0.1,0", "--to", "0,0.3", *TINY]
    code, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert code == 0
    assert _strip_timing(a) == _strip_timing(b)
    assert a.split('"timing"')[0] == b.split('"timing"')[0]
    res = json.loads(a)["results"][0]
    assert res["kind"] == "UpperBound" and res["seed"] == 0


def test_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("BALINV_SEED", "7")
    _, out, _ = run(capsys, "eval", "--domain", "ball", "--point", "0.1,0")
    assert json.loads(out)["config"]["seed"] == 7
    _, out, _ = run(capsys, "eval", "--domain", "ball", "--point", "0.1,0", "--seed", "3")
    assert json.loads(out)["config"]["seed"] == 3


def test_config_merge(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"domain": "example10", "params": {"a": 0.9}, "point": ["0,0.3"], "seed": 4}))
    _, out, _ = run(capsys, "eval", "--config", str(cfg))
    doc = json.loads(out)
    assert doc["results"][0]["h"]["value"] == pytest.approx(1 / 3)
    _, out, _ = run(capsys, "eval", "--config", str(cfg), "--param", "a=0.6")
    assert json.loads(out)["results"][0]["h"]["value"] == pytest.approx(0.5)
    bad = tmp_path / "bad.json"
    bad.write_text("[1]")
    assert run(capsys, "eval", "--config", str(bad))[0] == 2


def test_chain_example7(capsys):
    code, out, _ = run(capsys, "chain", "--domain", "example7", "--from", "0,0", "--to", "0.5,0.9", "--m", "2", *TINY)
    assert code == 0
    assert json.loads(out)["results"][0]["value_starred"] <= 0.501


def test_carath_hull_kr(capsys, tmp_path):
    code, out, _ = run(capsys, "carath", "--domain", "example7", "--point", "0.5,1.2", "--exponent-budget", "8")
    assert code == 0 and json.loads(out)["results"][0]["beta"] == [1, 1]
    code, out, _ = run(capsys, "hull", "--domain", "ball", "--point", "0.3,0.4")
    assert json.loads(out)["results"][0]["value"] == pytest.approx(0.5)
    code, out, _ = run(capsys, "kr", "--domain", "ball", "--direction", "3,4", *TINY)
    assert json.loads(out)["results"][0]["value"] == pytest.approx(5.0)
    target = tmp_path / "kr.json"
    code, out, _ = run(capsys, "kr", "--domain", "ball", "--direction", "0.5,0", "--split", *TINY,
                       "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["results"][0]["value"] == pytest.approx(0.5, abs=1e-6)


def test_scan_threshold_csv(capsys):
    code, out, _ = run(capsys, "scan", "threshold", "--b-from", "0.5", "--b-to", "0.95", "--steps", "46",
                       "--output", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "b,mu,margin,admissible,blocked" and len(lines) == 47
    row = [line for line in lines[1:] if line.startswith("0.8,")][0].split(",")
    assert float(row[1]) == pytest.approx(0.5, abs=1e-12)


def test_scan_divergence_and_slice(capsys):
    code, out, _ = run(capsys, "scan", "divergence", "--domain", "polydisc", "--dim", "2", "--boundary", "1,0")
    assert code == 0 and json.loads(out)["reports"][0]["pass"]
    code, out, _ = run(capsys, "scan", "slice", "--domain", "ball", "--a", "1,0", "--lambdas", "0.5", *TINY,
                       "--output", "csv")
    assert code == 0 and out.startswith("lambda,h")


def test_verify_scenario_and_failure_exit(capsys, monkeypatch):
    code, out, _ = run(capsys, "verify", "threshold")
    assert code == 0 and json.loads(out)["pass"]
    code, out, _ = run(capsys, "verify", "divergence_polydisc", "--output", "csv")
    assert code == 0 and out.splitlines()[0] == "k,value_distance,kind"

    original = harness._scenarios

    def with_failure(budget):
        table = original(budget)
        table["always_fails"] = lambda: harness.Report("always_fails", [harness.gt("never", 0.0, 1.0, 0.0)])
        return table

    monkeypatch.setattr(harness, "_scenarios", with_failure)
    code, out, _ = run(capsys, "verify", "always_fails")
    assert code == 1 and json.loads(out)["pass"] is False


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "balanced_invariants", "eval", "--domain", "polydisc",
                           "--point", "0.5,0.3"], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"][0]["h"]["value"] == 0.5
