import csv
import io
import json
import subprocess
import sys

import pytest

from complex_ou import __version__
from complex_ou.cli import read_config, run
from complex_ou.hermite import make_hermite
from complex_ou.polynomial import WirtingerPolynomial
from complex_ou.semigroup import eigen_residuals


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_no_arguments_is_usage_error():
    code, _, err = call()
    assert code == 2
    assert "usage" in err


def test_unknown_flag_is_usage_error():
    assert call("hermite", "--m", "1", "--n", "1", "--bogus")[0] == 2
    assert call("frobnicate")[0] == 2


def test_hermite():
    code, out, err = call("hermite", "--m", "1", "--n", "1")
    assert code == 0
    assert WirtingerPolynomial.from_json(out) == make_hermite(1, 1)
    man = json.loads(err)
    assert man["subcommand"] == "hermite"
    assert man["version"] == __version__
    assert "timestamp" in man and man["parameters"]["m"] == 1


def test_eigencheck():
    code, out, _ = call("eigencheck", "--max-degree", "6", "--theta", "0.7")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["m", "n", "theta", "residual"]
    assert len(table) == 28
    assert max(float(r["residual"]) for r in table) <= 1e-12
    # the CLI is a thin adapter over the library table
    lib = eigen_residuals(6, [0.7])
    assert [float(r["residual"]) for r in table] == [r[3] for r in lib]


def test_eigencheck_fails_on_tight_tolerance():
    assert call("eigencheck", "--max-degree", "8", "--theta", "1.2", "--tol", "0")[0] == 1


def test_semicheck_modes():
    code, out, _ = call("semicheck", "--theta", "0.5,-1.0", "--t", "0.3", "--degree", "3",
                        "--dim", "2", "--mode", "both")
    assert code == 0
    table = rows(out)
    assert [r["route"] for r in table] == ["spectral", "mehler"] * 2
    assert all(float(r["residual"]) <= 1e-10 for r in table)
    code, out, _ = call("semicheck", "--mode", "spectral", "--samples", "20000")
    assert code == 0
    assert [r["route"] for r in rows(out)] == ["spectral", "monte-carlo"]


def test_simulate_paths_and_summary():
    code, out, _ = call("simulate", "--theta", "0.3", "--steps", "4", "--paths", "3", "--z0-re", "1")
    assert code == 0
    table = rows(out)
    assert len(table) == 15
    assert list(table[0]) == ["path_id", "step", "t", "re", "im"]
    assert float(table[0]["re"]) == 1.0
    code, out, _ = call("simulate", "--paths", "20000", "--summary", "--t-end", "5")
    summary = json.loads(out)
    assert summary["abs2"] == pytest.approx(2 * summary["stationary_var_per_coord"], rel=0.05)


def test_simulate_bad_params():
    assert call("simulate", "--a", "-1")[0] == 2
    assert call("simulate", "--scheme", "rk4")[0] == 2


def test_simulate_is_reproducible():
    args = ("simulate", "--steps", "5", "--paths", "2", "--seed", "17")
    assert call(*args)[1] == call(*args)[1]


def test_hyper():
    code, out, _ = call("hyper", "--p", "2,3", "--t", "0,0.5", "--theta", "0.9",
                        "--samples", "20000", "--polys", "5")
    assert code == 0
    table = rows(out)
    assert list(table[0])[:11] == ["p", "t", "theta", "variant", "q", "lhs", "lhs_se",
                                   "rhs", "rhs_se", "margin", "pass"]
    assert len(table) == 4
    assert all(r["pass"] == "1" for r in table)
    assert call("hyper", "--p", "1")[0] == 2


def test_hyper_statement_violation_is_reported_not_failed():
    code, out, _ = call("hyper", "--variant", "statement", "--p", "2", "--t", "0.5",
                        "--theta", "1.4", "--samples", "20000", "--polys", "5")
    assert code == 0
    assert rows(out)[0]["pass"] == "0"


def test_chaos(tmp_path):
    f = WirtingerPolynomial.z() * WirtingerPolynomial.zbar()
    src = tmp_path / "f.json"
    src.write_text(f.to_json())
    code, out, _ = call("chaos", "--poly", str(src))
    assert code == 0
    coeffs = {(tuple(c["m"]), tuple(c["n"])): c["re"] for c in json.loads(out)["coeffs"]}
    assert coeffs == {((0,), (0,)): 2.0, ((1,), (1,)): 2.0}
    code, out, _ = call("chaos", "--poly", str(src), "--project", "1,1")
    assert WirtingerPolynomial.from_json(out) == make_hermite(1, 1)
    assert call("chaos", "--poly", str(tmp_path / "missing.json"))[0] == 2


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# hermite order\nm = 2\nn=0\n")
    code, out, _ = call("hermite", "--config", str(cfg))
    assert code == 0
    assert WirtingerPolynomial.from_json(out) == make_hermite(2, 0)
    code, out, _ = call("hermite", "--config", str(cfg), "--n", "1")
    assert WirtingerPolynomial.from_json(out) == make_hermite(2, 1)


@pytest.mark.parametrize("body", ["m 2\n", "nonsense = 1\n", "m = two\n"])
def test_malformed_config(tmp_path, body):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(body)
    assert call("hermite", "--config", str(cfg), "--n", "0")[0] == 2


def test_missing_config():
    assert call("hermite", "--config", "/nonexistent/x.cfg")[0] == 2


def test_read_config(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("max-degree = 3  # inline\n\ntheta=0.1,0.2\n")
    assert read_config(cfg) == {"max_degree": "3", "theta": "0.1,0.2"}


def test_out_and_manifest(tmp_path):
    out = tmp_path / "j.json"
    code, stdout, _ = call("hermite", "--m", "0", "--n", "2", "--out", str(out))
    assert code == 0 and stdout == ""
    assert WirtingerPolynomial.from_json(out.read_text()) == make_hermite(0, 2)
    man = json.loads((tmp_path / "j.json.manifest.json").read_text())
    assert man["parameters"]["n"] == 2


def test_unwritable_out():
    assert call("hermite", "--m", "0", "--n", "0", "--out", "/nonexistent/dir/x.json")[0] == 2


def test_manifest_reproduces_run(tmp_path):
    out = tmp_path / "s.csv"
    call("simulate", "--steps", "3", "--paths", "2", "--out", str(out))
    man = json.loads((tmp_path / "s.csv.manifest.json").read_text())
    p = man["parameters"]
    argv = ["simulate", "--steps", str(p["steps"]), "--paths", str(p["paths"]),
            "--seed", str(man["seed"]), "--theta", str(p["theta"])]
    assert call(*argv)[1] == out.read_text()


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "complex_ou.cli", "hermite", "--m", "1", "--n", "0"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert WirtingerPolynomial.from_json(res.stdout) == make_hermite(1, 0)
