import json
import subprocess
import sys

import pytest

from hsiso.cli import BREACH, COUNTEREXAMPLE, OK, USAGE, main, parse_rho


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_parse_rho():
    assert parse_rho("x1=2,x2=1") == {1: 2, 2: 1}
    assert parse_rho("x=3, z=1") == {1: 3, 3: 1}
    assert parse_rho("") == {}


@pytest.mark.parametrize("bad", ["x1", "x1=0", "x1=-2", "q=2"])
def test_parse_rho_rejects(capsys, bad):
    code, _, err = run(capsys, "eval", "x1", "--rho", bad)
    assert code == USAGE and err.startswith("error:")


def test_parse(capsys):
    code, payload = run_json(capsys, "parse", "x^(y+1)")
    assert code == OK
    assert payload["free_vars"] == ["x1", "x2"]
    assert payload["type"] == "#2 + 1 -> #1"


def test_parse_error_is_usage(capsys):
    code, _, err = run(capsys, "parse", "x +")
    assert code == USAGE and "error" in err


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "(x^x+y)^y")
    report = json.loads(out)
    assert code == OK and report["L"] is False
    assert report["blocking_subterm"]["expr"] == "x1^x1+x2"


def test_classify_explain(capsys):
    code, out, _ = run(capsys, "classify", "1", "--explain")
    assert code == OK and "in all fragments" in out


def test_eval(capsys):
    code, payload = run_json(capsys, "eval", "x^(x+1)", "--rho", "x=2", "--type")
    assert code == OK
    assert payload["value"] == "8"
    assert payload["type"] == "1 + 1 + 1 -> 1 + 1"


def test_equal_codes(capsys):
    code, payload = run_json(capsys, "equal", "x*y", "y*x", "--bound", "3")
    assert code == OK
    assert payload["verdict"] == "equal_up_to" and payload["bound"] == 3
    code, payload = run_json(capsys, "equal", "x^y = y^x", "--bound", "3")
    assert code == COUNTEREXAMPLE
    assert payload["point"] == {"x1": 1, "x2": 2}


def test_equal_probe_finds_counterexample(capsys):
    code, _, out = run(capsys, "equal", "x", "x+1", "--probe", "1")
    assert code == COUNTEREXAMPLE


def test_prove_and_check_cert(capsys, tmp_path):
    cert = tmp_path / "c.json"
    code, out, _ = run(capsys, "prove", "x^(y+z) = x^y*x^z", "-o", str(cert))
    assert code == OK and cert.exists()
    code, payload = run_json(capsys, "check-cert", str(cert), "x^(y+z) = x^y*x^z")
    assert code == OK and payload["ok"]
    code, payload = run_json(capsys, "check-cert", str(cert), "x = y")
    assert code == USAGE and not payload["ok"]


def test_prove_without_certificate(capsys):
    code, payload = run_json(capsys, "prove", "x^y = y^x")
    assert code == OK and payload["proved"] is False


def test_check_cert_bad_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "check-cert", str(bad))
    assert code == USAGE and "not JSON" in err
    code, _, _ = run(capsys, "check-cert", str(tmp_path / "missing.json"))
    assert code == USAGE


def test_witness_and_verify(capsys):
    code, payload = run_json(capsys, "witness", "x^1 = x", "--rho", "x=2")
    assert code == OK
    assert payload["source_type"] == "1 -> 1 + 1"
    assert payload["target_type"] == "1 + 1"
    code, payload = run_json(capsys, "verify", "x*(y+z) = x*y+x*z")
    assert code == OK
    assert len(payload["results"]) == 8
    assert all(r["roundtrip"] for r in payload["results"])


def test_verify_with_cert(capsys, tmp_path):
    cert = tmp_path / "c.json"
    run(capsys, "prove", "x*y = y*x", "-o", str(cert))
    code, payload = run_json(capsys, "verify", "--cert", str(cert), "--rho", "x=3,y=2")
    assert code == OK and payload["results"][0]["roundtrip"] is True


def test_verify_unprovable_is_usage(capsys):
    code, _, err = run(capsys, "verify", "x^y = y^x")
    assert code == USAGE and "no certificate" in err


def test_gen(capsys):
    code, payload = run_json(capsys, "gen", "martin")
    assert code == OK and payload["lhs"].count("^") == 6
    assert run(capsys, "gen", "gurevic", "4")[0] == USAGE
    assert run(capsys, "gen", "gurevic")[0] == USAGE
    assert run(capsys, "gen", "wilkie", "5")[0] == USAGE


def test_pipeline_codes(capsys):
    code, payload = run_json(capsys, "pipeline", "x*y = y*x", "--bound", "3")
    assert code == OK and payload["proved"]
    assert all(w["roundtrip"] for w in payload["witnesses"])
    code, payload = run_json(capsys, "pipeline", "x = x+1")
    assert code == COUNTEREXAMPLE and payload["notes"] == ["refuted by evaluation"]


def test_breach_exit_code(capsys, monkeypatch):
    import hsiso.cli as cli
    from hsiso.corpus import SoundnessBreach

    def boom(*args, **kwargs):
        raise SoundnessBreach("forced")

    monkeypatch.setattr(cli, "run_pipeline", boom)
    code, _, err = run(capsys, "pipeline", "x = x")
    assert code == BREACH and "forced" in err


def test_argparse_errors_are_usage(capsys):
    assert run(capsys, "bogus")[0] == USAGE
    assert run(capsys, "gen", "nothing")[0] == USAGE


def test_corpus_run(capsys):
    code, payload = run_json(capsys, "corpus", "run")
    assert code == OK
    assert all(entry["ok"] for entry in payload)
    assert [e["name"] for e in payload] == sorted(e["name"] for e in payload)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hsiso", "eval", "2^x", "--rho", "x=10"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == OK
    assert proc.stdout.strip() == "1024"
