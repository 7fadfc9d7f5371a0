import io
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from strictpoly import __version__, adjoints, schur
from strictpoly import polyfun as pf
from strictpoly.cli import Cache, cached_realize, run_command


def run(capsys, *argv):
    code = run_command(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_info(capsys):
    code, out, _ = run(capsys, "info", "--format", "json")
    info = json.loads(out)
    assert code == 0
    assert info["schur_dim"] == 165 and info["associative"]
    assert info["simple_dims"] == {"(3)": 3, "(2,1)": 7, "(1,1,1)": 1}
    assert info["p_restricted"] == ["(2,1)", "(1,1,1)"]


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "--expr", "S(3)", "--format", "json", "--no-timing")
    res = json.loads(out)
    assert code == 0 and res["dim"] == 10 and res["composition"] == {"(3)": 1, "(2,1)": 1} and not res["simple"]
    assert "ms" not in res
    code, out, _ = run(capsys, "eval", "--expr", "F(Lambda(3))", "--format", "json")
    assert code == 0 and json.loads(out)["dim"] == 1


def test_iso_refuted(capsys):
    code, out, _ = run(capsys, "iso", "--lhs", "Gamma(3)", "--rhs", "S(3)", "--format", "json")
    assert code == 1 and json.loads(out)["status"] == "refuted"
    code, out, _ = run(capsys, "iso", "--lhs", "Q", "--rhs", "L(2,1)", "--format", "json")
    assert code == 0 and json.loads(out)["status"] == "verified"


def test_mullineux_and_ext(capsys):
    assert run(capsys, "mullineux", "--lambda", "2,1", "--p", "3")[1].strip() == "(3)"
    assert run(capsys, "mullineux", "--lambda", "4,1", "--p", "5")[1].strip() == "(3,1,1)"
    assert run(capsys, "ext", "--mu", "2,1", "--nu", "3")[1].strip() == "1"
    assert run(capsys, "mullineux", "--lambda", "1,1,1", "--p", "3")[0] == 2


@pytest.mark.parametrize("argv", [
    ["eval", "--expr", "tensor(L(2,1)"],
    ["eval", "--expr", "tensor(S(2,1),Gamma(2))"],
    ["info", "--p", "4"],
    ["iso", "--lhs", "S(3)", "--rhs", "S(3)", "--n", "2"],
    ["verify", "--suite", "nope"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "usage error" in err


def test_parse_error_reports_position(capsys):
    _, _, err = run(capsys, "eval", "--expr", "tensor(L(2,1)")
    assert "position 13" in err and "unbalanced parenthesis" in err


def test_verify_identities(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--suite", "identities", "--format", "json", "--no-timing",
                       "--cache-dir", str(tmp_path), "--jobs", "2")
    rows = [json.loads(x) for x in out.splitlines()]
    assert sum(r["status"] == "verified" for r in rows) >= 20
    refuted = sorted(r["id"] for r in rows if r["status"] == "refuted")
    assert refuted == ["identity/HomSS/(0,0,3)", "identity/HomSS/(0,3,0)", "identity/HomSS/(3,0,0)"]
    # exit 0 only when nothing is refuted
    assert code == 1
    witness = next(r for r in rows if r["id"] == "identity/SxS")["witness_file"]
    mat, p = adjoints.load_witness(os.path.join(tmp_path, witness))
    lhs = pf.realize(pf.ITensor(pf.Sym((3,)), pf.Sym((3,))), 3, 3).module
    assert adjoints.revalidate(mat, lhs, pf.realize(pf.Sym((3,)), 3, 3).module)


def test_verify_mullineux_exit_zero(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "mullineux")
    assert code == 0 and out.strip().splitlines()[-1].startswith("summary: verified 37")


def test_deterministic_json():
    cmd = [sys.executable, "-m", "strictpoly", "verify", "--suite", "adjoints", "--format", "json", "--no-timing"]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd + ["--jobs", "1"], capture_output=True, check=False)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout


def test_table_flags_discrepancy(capsys):
    code, out, _ = run(capsys, "table", "--kind", "simple-tensor")
    lines = out.strip().splitlines()
    assert len(lines) == 4 and code == 1
    flagged = [x for x in lines if "discrepancy" in x]
    assert len(flagged) == 1 and flagged[0].startswith("(1,1,1)x(1,1,1)")


# --- cache -------------------------------------------------------------------------------


def test_algebra_cache_roundtrip(tmp_path):
    alg = schur.SchurAlg(3, 3, 3)
    alg.check_associativity(50, 0)
    cache = Cache(str(tmp_path))
    cache.store_algebra(alg)
    fresh = schur.SchurAlg(3, 3, 3)
    assert cache.load_algebra(fresh) > 0
    assert {k: v for k, v in fresh._memo.items() if v} == {k: v for k, v in alg._memo.items() if v}
    assert Cache(str(tmp_path), version="0.0.0").load_algebra(schur.SchurAlg(3, 3, 3)) == 0


def test_realization_cache_roundtrip(tmp_path):
    cache = Cache(str(tmp_path))
    r = pf.realize(pf.Simple((2, 1)), 3, 3)
    cache.store_realization(r)
    back = cache.load_realization(r.expr, 3, 3)
    assert back.check()
    assert np.array_equal(pf._dense(back.L), pf._dense(r.L))
    assert np.array_equal(pf._dense(back.C), pf._dense(r.C))
    assert back.weights == r.weights


def test_corrupt_cache_recomputes(tmp_path, caplog):
    cache = Cache(str(tmp_path))
    r = pf.realize(pf.Sym((2, 1)), 3, 3)
    path = cache.store_realization(r)
    with open(path, "r+b") as fh:
        fh.seek(-1, io.SEEK_END)
        last = fh.read(1)
        fh.seek(-1, io.SEEK_END)
        fh.write(bytes([last[0] ^ 0xFF]))
    assert cache.load_realization(r.expr, 3, 3) is None
    assert "checksum mismatch" in caplog.text
    pf.clear_cache()
    again = cached_realize(cache, pf.Sym((2, 1)), 3, 3)
    assert again.dim == r.dim
    assert cache.load_realization(r.expr, 3, 3) is not None


def test_env_cache_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SPF_CACHE_DIR", str(tmp_path))
    assert run(capsys, "eval", "--expr", "Gamma(2,1)")[0] == 0
    assert os.listdir(tmp_path / "realization")


def test_version(capsys):
    with pytest.raises(SystemExit):
        run_command(["--version"])
    assert __version__ in capsys.readouterr().out
