import io
import json
import subprocess
import sys

import pytest

from indefq.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_expand_g():
    code, text = run("expand", "g", "1", "1", "0", "0")
    assert code == 0
    assert text.splitlines()[0] == "q^(1/8): -1"


def test_expand_eta_and_theta():
    assert run("expand", "eta", "--cutoff", "2")[1] == "q^(1/24): 1\nq^(25/24): -1\n"
    assert run("expand", "theta", "3", "3", "--cutoff", "1")[1] == "q^(3/4): 2\n"


def test_expand_fractional_cutoff_and_signed():
    code, text = run("expand", "theta 1/2 3/2 signed", "--cutoff", "21/2")
    assert code == 0 and text.startswith("q^(1/24): 1")


def test_expand_json_series_and_block():
    code, text = run("expand", "eta", "--cutoff", "2", "--format", "json")
    assert json.loads(text) == [{"exponent": "1/24", "coefficient": "1"},
                                {"exponent": "25/24", "coefficient": "-1"}]
    code, text = run("expand", "phi_add", "1", "1", "-1", "--format", "json")
    doc = json.loads(text)
    assert doc["m"] == 1 and set(doc["coefficients"]) == {"0", "1"}


def test_expand_block_text():
    code, text = run("expand", "G", "1", "1", "0", "--cutoff", "1")
    assert code == 0 and text.startswith("[theta_0,1 + theta_-0,1]:")


@pytest.mark.parametrize("argv", [("expand", "nosuch"), ("expand", "vartheta11"),
                                  ("expand", "g", "1", "1"), ("expand", "g", "1", "1", "x", "0"),
                                  ("expand", "g", "1", "1", "5", "0"),
                                  ("verify", "--filter", "zzz*"), ("transform", "S", "g")])
def test_usage_errors(argv, capsys):
    code, _ = run(*argv)
    assert code == 2
    assert "indefq: error:" in capsys.readouterr().err


@pytest.mark.parametrize("flag", [["--cutoff", "0"], ["--cutoff", "abc"], ["--tol", "-1"]])
def test_bad_flags(flag):
    with pytest.raises(SystemExit) as exc:
        run("expand", "eta", *flag)
    assert exc.value.code == 2


def test_verify_level_one():
    code, text = run("verify", "--filter", "m1-*")
    assert code == 0
    lines = text.splitlines()
    assert lines and all(line.startswith("PASS") for line in lines)


def test_verify_sign_relation():
    code, text = run("verify", "--filter", "g2-vs-g1-*")
    assert code == 0 and text.count("PASS") == 49


def test_verify_mutated_golden_file(tmp_path):
    code, text = run("catalog", "--filter", "m1-prop-*", "--format", "json")
    recs = json.loads(text)
    golden = tmp_path / "golden.json"
    golden.write_text(json.dumps(recs))
    assert run("verify", "--catalog", str(golden))[0] == 0
    # change one coefficient: 1/2 eta theta_{3,3} becomes 1/3 eta theta_{3,3}
    target = next(r for r in recs if r["id"] == "m1-prop-iii")
    assert target["rhs"][1] == "1/2"
    target["rhs"][1] = "1/3"
    golden.write_text(json.dumps(recs))
    code, text = run("verify", "--catalog", str(golden))
    assert code == 1 and "FAIL  m1-prop-iii" in text


def test_transform_examples():
    assert run("transform", "S", "g", "1")[0] == 0
    assert run("transform", "T", "g", "2")[0] == 0
    assert run("transform", "S", "theta", "3")[0] == 0
    assert run("transform", "S", "h")[0] == 0
    assert run("transform", "S", "theta_mhalf", "2", "--tau", "0.1+1.1i")[0] == 0


def test_transform_bad_tau():
    assert run("transform", "S", "g", "1", "--tau", "oops")[0] == 2
    assert run("transform", "S", "g", "1", "--tau", "0.2-1i")[0] == 2


def test_determinism():
    argv = ("verify", "--filter", "m1-prop-*", "--format", "json", "--no-timing", "--seed", "3")
    assert run(*argv) == run(*argv)
    argv = ("transform", "S", "g", "1", "--format", "json", "--no-timing", "--seed", "3")
    assert run(*argv) == run(*argv)


def test_json_reports_schema():
    code, text = run("verify", "--filter", "num-v11-*", "--format", "json", "--no-timing")
    reps = json.loads(text)
    assert code == 0 and reps
    keys = {"id", "status", "mode", "cutoff", "max_abs_residual", "first_mismatch", "seconds"}
    for r in reps:
        assert set(r) == keys and r["seconds"] == 0.0
    # ordering is by record id
    assert [r["id"] for r in reps] == sorted(r["id"] for r in reps)


def test_catalog_listing():
    code, text = run("catalog")
    assert code == 0 and len(text.splitlines()) == 172


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "indefq", "expand", "eta", "--cutoff", "2"],
                         capture_output=True, text=True, check=True)
    assert res.stdout == "q^(1/24): 1\nq^(25/24): -1\n"
