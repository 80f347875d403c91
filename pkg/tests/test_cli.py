import json

import pytest

from qlrc import certificate as certs
from qlrc.cli import InputError, main, read_config
from qlrc.errors import VerificationError
from qlrc.families import cyclic_family_one


@pytest.fixture
def even_code(tmp_path):
    path = tmp_path / "even.json"
    path.write_text(json.dumps({"q": 2, "generator": [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]]}))
    return str(path)


def test_build_writes_a_certificate_that_validates(tmp_path):
    out = tmp_path / "c.json"
    assert main(["build", "cyclic-1", "--q", "13", "--u", "1", "--r", "3", "--l", "1", "--out", str(out)]) == 0
    cert = json.loads(out.read_text())
    body = cert["body"]
    assert body["parameters"] == {"n": 4, "kappa": 2, "delta": 2, "r": 3, "purity": "pure"}
    assert body["status"] == "ok"
    assert out.read_text() == certs.dump(cert)
    assert main(["validate", str(out)]) == 0


def test_build_guard_failure_exits_2(capsys):
    assert main(["build", "cyclic-2", "--q", "13", "--u", "3", "--r", "4"]) == 2
    assert "guard u+2<r violated" in capsys.readouterr().err


def test_build_missing_parameter_exits_1():
    assert main(["build", "grs-pair", "--q", "4"]) == 1


def test_unknown_subcommand_exits_1():
    assert main(["frobnicate"]) == 1


def test_budget_exhaustion_exits_3(even_code, tmp_path):
    out = tmp_path / "x.json"
    assert main(["certify", even_code, "--r", "3", "--budget", "1", "--out", str(out)]) == 3
    assert json.loads(out.read_text())["body"]["status"] == "inconclusive"


def test_certify_classical_and_quantum(even_code, tmp_path, capsys):
    out = tmp_path / "cl.json"
    assert main(["certify", even_code, "--r", "3", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["body"]["parameters"] == {"n": 4, "k": 3, "d": 2, "r": 3}
    assert main(["validate", str(out)]) == 0
    qout = tmp_path / "q.json"
    assert main(["certify", even_code, "--r", "3", "--quantum", "--out", str(qout)]) == 0
    body = json.loads(qout.read_text())["body"]
    assert (body["parameters"]["n"], body["parameters"]["kappa"], body["parameters"]["delta"]) == (4, 2, 2)
    assert {r["bound"] for r in body["reports"]} >= {"T-distance", "T-dimension", "T-length"}
    assert main(["validate", str(qout)]) == 0


def test_certify_refuses_too_small_locality(even_code):
    assert main(["certify", even_code, "--r", "2"]) == 2


def test_malformed_input_exits_1(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["certify", str(bad), "--r", "2"]) == 1
    assert main(["validate", str(bad)]) == 1


def test_tampered_certificate_exits_4(tmp_path):
    cert = certs.build_certificate(cyclic_family_one(13, 1, 3, 1))
    cert["body"]["parameters"]["delta"] = 3
    path = tmp_path / "t.json"
    path.write_text(certs.dump(cert))
    assert main(["validate", str(path)]) == 4


def test_tampered_witness_is_caught():
    cert = certs.build_certificate(cyclic_family_one(13, 1, 3, 1))
    pair = cert["body"]["quantum"]["locality_certificate"]["pairs"][0]
    pair["word1"] = [1, 1, 0, 0]
    with pytest.raises(VerificationError):
        certs.revalidate(cert)


def test_run_section_is_not_compared():
    cert = certs.build_certificate(cyclic_family_one(13, 1, 3, 1), {"wall_clock_s": 1.0})
    cert["run"]["wall_clock_s"] = 99.0
    certs.revalidate(cert)


def test_bounds_eval(capsys):
    assert main(["bounds", "eval", "--n", "12", "--kappa", "6", "--r", "5"]) == 0
    out = capsys.readouterr().out
    assert "Q-Singleton,2*delta <= 6 (delta <= 3)" in out
    assert "delta=3: kappa <= 6" in out


def test_bounds_asymptotic_defaults(capsys):
    assert main(["bounds", "asymptotic"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "delta,r_dim,r_dist,r_cm" and len(lines) == 52


def test_config_file_and_threads(tmp_path, even_code, monkeypatch):
    monkeypatch.setenv("QLRC_THREADS", "1")  # restored after the test; --threads overwrites it
    cfg = tmp_path / "qlrc.cfg"
    cfg.write_text("# settings\nbudget = 1\n")
    assert main(["certify", even_code, "--r", "3", "--config", str(cfg)]) == 3
    assert main(["certify", even_code, "--r", "3", "--config", str(cfg), "--budget", "1000", "--threads", "2"]) == 0
    cfg.write_text("colour = blue\n")
    with pytest.raises(InputError):
        read_config(str(cfg))
    assert main(["certify", even_code, "--r", "3", "--config", str(cfg)]) == 1


def test_selftest(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 6 and "FAIL" not in out
