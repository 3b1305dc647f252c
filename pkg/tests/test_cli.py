import csv
import io
import json
import subprocess
import sys

import pytest

from conftest import SSB_P, SSB_Q, SSB_T, TSB_P1, TSB_P2, TSB_Q1, TSB_Q2, TSB_T
from escrowkey.cli import main
from escrowkey.instancefile import InstanceFile
from escrowkey.numtheory import is_probable_prime


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def _prime_neighbour(T):
    """A different prime obtained by changing exactly one decimal digit of T."""
    digits = str(T)
    for pos in range(len(digits) - 1, 0, -1):
        for d in "0123456789":
            if d != digits[pos]:
                cand = int(digits[:pos] + d + digits[pos + 1 :])
                if is_probable_prime(cand):
                    return cand
    raise AssertionError("no prime one digit away")


def test_keygen_verify_recover_ssb(tmp_path, capsys):
    full, pub = tmp_path / "full.json", tmp_path / "pub.json"
    code, _, _ = _run(
        capsys, "keygen", "ssb", "--alpha", 128, "--c", 5, "--kmax", 30, "--seed", 7,
        "--out", full, "--public-out", pub,
    )  # fmt: skip
    assert code == 0
    code, out, _ = _run(capsys, "verify", "--in", full)
    assert code == 0 and "FAIL" not in out and out.count("PASS") >= 5
    doc = InstanceFile.read(full)
    code, out, _ = _run(capsys, "recover", "--in", pub, "--T", doc.secret["T"])
    assert code == 0
    result = json.loads(out)
    assert {int(result["factors"]["p"]), int(result["factors"]["q"])} == {
        doc.secret["p"],
        doc.secret["q"],
    }
    assert int(result["witnesses"]["k"]) == doc.secret["k"]
    assert result["trace"]


def test_keygen_is_reproducible(capsys):
    argv = ("keygen", "ssb", "--alpha", 64, "--c", 5, "--kmax", 32, "--seed", 3)
    assert _run(capsys, *argv)[1] == _run(capsys, *argv)[1]


def test_keygen_tsb_default_threshold(tmp_path, capsys):
    full = tmp_path / "t.json"
    assert _run(capsys, "keygen", "tsb", "--alpha", 64, "--c", 3, "--kmax", 100, "--seed", 1, "--out", full)[0] == 0
    doc = InstanceFile.read(full)
    assert doc.params.b_threshold == 2**58
    code, out, _ = _run(capsys, "verify", "--in", full)
    assert code == 0 and "FAIL" not in out
    code, out, _ = _run(capsys, "recover", "--in", full)
    assert code == 0
    f = {k: int(v) for k, v in json.loads(out)["factors"].items()}
    assert f["p1"] * f["q1"] == doc.public["N1"] and f["p2"] * f["q2"] == doc.public["N2"]


def test_keygen_hex_format(capsys):
    code, out, _ = _run(capsys, "keygen", "ssb", "--alpha", 32, "--c", 5, "--kmax", 16, "--seed", 2, "--format", "hex")
    assert code == 0
    assert json.loads(out)["public"]["N"].startswith("0x")


def test_keygen_missing_alpha(capsys):
    with pytest.raises(SystemExit) as info:
        main(["keygen", "ssb", "--c", "5", "--kmax", "30"])
    assert info.value.code == 2


def test_keygen_bad_params(capsys):
    code, _, err = _run(capsys, "keygen", "ssb", "--alpha", 128, "--c", 5, "--kmax", 1)
    assert code == 2 and "error" in err
    code, _, _ = _run(capsys, "keygen", "ssb", "--alpha", 128, "--c", 5, "--kmax", 30, "--b", 5)
    assert code == 2


def test_recover_reference_ssb(tmp_path, capsys, ssb_reference):
    key, inst = ssb_reference
    pub = tmp_path / "ssb.json"
    InstanceFile.from_ssb(key, inst).public_only().write(pub)
    code, out, _ = _run(capsys, "recover", "--in", pub, "--T", SSB_T)
    assert code == 0
    result = json.loads(out)
    assert result["factors"] == {"p": str(SSB_P), "q": str(SSB_Q)}
    assert result["witnesses"] == {"k": 9}


def test_recover_reference_tsb(tmp_path, capsys, tsb_reference):
    key, inst = tsb_reference
    pub = tmp_path / "tsb.json"
    InstanceFile.from_tsb(key, inst).public_only().write(pub)
    code, out, _ = _run(capsys, "recover", "--in", pub, "--T", TSB_T, "--b", 2**57)
    assert code == 0
    result = json.loads(out)
    assert result["factors"] == {k: str(v) for k, v in zip(("p1", "q1", "p2", "q2"), (TSB_P1, TSB_Q1, TSB_P2, TSB_Q2))}
    assert result["witnesses"] == {"h": 47, "k1": 98, "k2": 69, "kt1": 671, "kt2": 10}


def test_recover_wrong_key(tmp_path, capsys, ssb_reference):
    key, inst = ssb_reference
    pub = tmp_path / "ssb.json"
    InstanceFile.from_ssb(key, inst).public_only().write(pub)
    wrong = _prime_neighbour(SSB_T)
    assert wrong != SSB_T and sum(a != b for a, b in zip(str(wrong), str(SSB_T))) == 1
    code, _, err = _run(capsys, "recover", "--in", pub, "--T", wrong)
    assert code == 1 and "not recovered" in err
    # a composite key is rejected as bad input
    code, _, _ = _run(capsys, "recover", "--in", pub, "--T", SSB_T + 2)
    assert code == 2


def test_recover_trivial_factor(tmp_path, capsys, ssb_reference):
    key, _ = ssb_reference
    doc = InstanceFile("ssb", key.params, {"N": SSB_T * 1000003})
    path = tmp_path / "f.json"
    doc.write(path)
    code, _, err = _run(capsys, "recover", "--in", path, "--T", SSB_T)
    assert code == 1 and f"gcd = {SSB_T}" in err


def test_recover_needs_key(tmp_path, capsys, ssb_reference):
    key, inst = ssb_reference
    pub = tmp_path / "ssb.json"
    InstanceFile.from_ssb(key, inst).public_only().write(pub)
    assert _run(capsys, "recover", "--in", pub)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema_version": "1"}')
    assert _run(capsys, "recover", "--in", bad, "--T", 7)[0] == 2
    assert _run(capsys, "recover", "--in", tmp_path / "absent.json", "--T", 7)[0] == 2


def test_verify_reference_and_tampered(tmp_path, capsys, ssb_reference, tsb_reference):
    key, inst = ssb_reference
    doc = InstanceFile.from_ssb(key, inst)
    path = tmp_path / "v.json"
    doc.write(path)
    code, out, _ = _run(capsys, "verify", "--in", path)
    assert code == 0 and "FAIL" not in out
    for delta in (2, -2):
        doc.secret["q"] = SSB_Q + delta
        doc.write(path)
        code, out, _ = _run(capsys, "verify", "--in", path)
        assert code == 1 and "FAIL" in out
    doc.public_only().write(path)
    assert _run(capsys, "verify", "--in", path)[0] == 2
    tkey, tinst = tsb_reference
    InstanceFile.from_tsb(tkey, tinst).write(path)
    code, out, _ = _run(capsys, "verify", "--in", path)
    assert code == 0 and "PASS  H6" in out


def test_rsa_assemble(capsys):
    code, out, _ = _run(capsys, "rsa-assemble", 61, 53, "--e", 17)
    assert code == 0
    assert out.splitlines() == ["N=3233", "e=17", "d=2753"]
    code, out, _ = _run(capsys, "rsa-assemble", SSB_P, SSB_Q)
    values = dict(line.split("=") for line in out.splitlines())
    phi = (SSB_P - 1) * (SSB_Q - 1)
    assert int(values["e"]) * int(values["d"]) % phi == 1
    assert _run(capsys, "rsa-assemble", 61, 61)[0] == 2
    # gcd(3, 3120) = 3: the caller must pick another exponent
    code, _, err = _run(capsys, "rsa-assemble", 61, 53, "--e", 3)
    assert code == 1 and err


def test_bench_csv(tmp_path, capsys):
    out_csv = tmp_path / "b.csv"
    code, _, _ = _run(capsys, "bench", "ssb", "--alpha", 128, "--c", 5, "--kvalues", "50,100", "--trials", 3, "--seed", 1, "--out", out_csv)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out_csv.read_text())))
    assert rows[0] == ["K", "gen_avg", "gen_std", "rec_avg", "rec_std"]
    assert [r[0] for r in rows[1:]] == ["50", "100"]
    for row in rows[1:]:
        assert all(float(x) >= 0 and len(x.split(".")[1]) == 3 for x in row[1:])


def test_bench_single_trial(capsys):
    code, out, _ = _run(capsys, "bench", "tsb", "--alpha", 48, "--c", 5, "--kvalues", "20", "--trials", 1, "--seed", 4)
    assert code == 0
    row = out.splitlines()[1].split(",")
    assert row[2] == row[4] == "0.000"


def test_bench_empty_kvalues(capsys):
    with pytest.raises(SystemExit) as info:
        main(["bench", "ssb", "--alpha", "64", "--c", "5", "--kvalues", "", "--trials", "2"])
    assert info.value.code == 2
    assert _run(capsys, "bench", "ssb", "--alpha", 64, "--c", 5, "--kvalues", "8", "--trials", 0)[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "escrowkey", "rsa-assemble", "61", "53", "--e", "17"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "d=2753" in proc.stdout
