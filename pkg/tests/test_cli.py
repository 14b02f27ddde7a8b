import re
import subprocess
import sys

import pytest

from grssd.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    kv = dict(line.split("=", 1) for line in out.out.splitlines() if "=" in line and not line.startswith("#"))
    return code, kv, out


def test_field_info(capsys):
    code, kv, _ = run(capsys, "field-info", "19", "1")
    assert code == 0 and kv["q"] == "361" and kv["r"] == "19" and kv["theta_order_certified"] == "1"
    code, kv, _ = run(capsys, "field-info", "151", "1")
    assert kv["q"] == "22801"
    code, _, out = run(capsys, "field-info", "4", "1")
    assert code == 2 and "not prime" in out.err


def test_build_and_verify(capsys, tmp_path):
    path = tmp_path / "ex2.mat"
    code, kv, _ = run(capsys, "build", "thm4", "--r", "19", "--u", "20", "--v", "18", "--s", "9",
                      "--s-prime", "10", "--t", "2", "--emit", "matrix", "--out", str(path))
    assert code == 0 and kv["code_length"] == "310" and kv["self_dual"] == "1"
    code, kv, _ = run(capsys, "verify", str(path), "--samples", "2", "--seed", "3")
    assert code == 0 and kv["check_randomized"] == "1"
    text = path.read_text().splitlines()
    row = text[6].split()
    row[1] = str((int(row[1]) + 1) % 361)
    text[6] = " ".join(row)
    path.write_text("\n".join(text) + "\n")
    code, kv, _ = run(capsys, "verify", str(path))
    assert code == 1 and "checksum" in kv["reason"]


def test_build_exit_codes(capsys):
    code, kv, _ = run(capsys, "build", "thm4", "--r", "19", "--u", "20", "--v", "18", "--s", "8",
                      "--s-prime", "10", "--t", "2")
    assert code == 2 and kv["status"] == "invalid"
    code, kv, _ = run(capsys, "build", "thm3", "--r", "19", "--l", "18", "--s", "0", "--l1", "8", "--l2", "6")
    assert code == 3 and kv["status"] == "verification-failed"
    code, _, out = run(capsys, "build", "thm4", "--r", "19", "--u", "20")
    assert code == 2 and "--v" in out.err


def test_build_known_length_note(capsys):
    code, kv, _ = run(capsys, "build", "cor1", "--r", "19", "--u", "20", "--v", "18", "--s", "2",
                      "--s-prime", "10", "--t", "1", "--emit", "summary")
    assert code == 0 and kv["code_length"] == "230" and "314" in kv["note"]


def test_build_small_with_mds(capsys, tmp_path):
    path = tmp_path / "m.mat"
    code, kv, _ = run(capsys, "build", "thm2", "--r", "7", "--l", "6", "--s", "0", "--l1", "1", "--l2", "0",
                      "--emit", "matrix", "--out", str(path))
    assert code == 0 and kv["mds"] == "1" and kv["min_distance"] == "6"
    code, kv, _ = run(capsys, "verify", str(path), "--mds-bruteforce", "--matrix-method")
    assert code == 0 and kv["mds"] == "1"


def test_build_set_output(capsys, tmp_path):
    from grssd.evalsets import read_evalset
    path = tmp_path / "s.txt"
    code, _, _ = run(capsys, "build", "thm2", "--r", "7", "--l", "6", "--s", "0", "--l1", "1", "--l2", "0",
                     "--emit", "set", "--out", str(path))
    head, elems = read_evalset(path)
    assert code == 0 and head["construction"] == "thm2" and len(elems) == 9


def test_enumerate_and_ratio(capsys, tmp_path):
    out = tmp_path / "lengths.csv"
    code, kv, _ = run(capsys, "enumerate", "--r", "19", "--classes", "1,2", "--out", str(out), "--quiet")
    assert code == 0 and out.read_text().startswith("length,classId,witnessParams\n")
    code, kv, _ = run(capsys, "ratio", "--r", "19", "--quiet")
    assert code == 0 and re.fullmatch(r"\d+\.\d\d%", kv["ratio"])
    code, _, out = run(capsys, "ratio", "--r", "13")
    assert code == 2 and "3 mod 4" in out.err


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "grssd.conf"
    cfg.write_text(f"# comment\nout_dir = {tmp_path}\nseed = 4\nsamples = 1\n")
    code, kv, _ = run(capsys, "--config", str(cfg), "build", "thm2", "--r", "7", "--l", "6", "--s", "0",
                      "--l1", "1", "--l2", "0", "--emit", "matrix")
    assert code == 0 and kv["out"].startswith(str(tmp_path)) and kv["check_randomized"] == "1"
    cfg.write_text("threads = zero\n")
    code, _, out = run(capsys, "--config", str(cfg), "field-info", "7")
    assert code == 2 and "not an integer" in out.err
    cfg.write_text("colour = blue\n")
    assert run(capsys, "--config", str(cfg), "field-info", "7")[0] == 2


def test_self_test(capsys):
    code, kv, _ = run(capsys, "self-test", "--field", "49")
    assert code == 0 and kv["status"] == "ok"
    code, kv, _ = run(capsys, "self-test", "--field", "49", "--inject-fault")
    assert code == 4 and kv["first_failure"] == "delta-factorization"
    code, kv, _ = run(capsys, "self-test", "--field", "49", "--as-stated")
    assert code == 4 and kv["first_failure"] == "norm-fiber-character-as-stated"


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "grssd.cli", "field-info", "7"], capture_output=True, text=True)
    assert res.returncode == 0 and "q=49" in res.stdout
