import csv
import io
import json
import math
import subprocess
import sys

import pytest

from artifact import families as fam
from artifact.acceptance import CHECKS
from artifact.cli import main, parse_scaled, resolve
from artifact.recurrence import orthonormal_value


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


# -- eval ------------------------------------------------------------------------


def test_eval_hermite_zero(capsys):
    code, out, _ = run(capsys, "--command", "eval", "--family", "hermite", "--N", "2", "--y", f"0,{1 / math.sqrt(2)!r}")
    assert code == 0
    rows = rows_of(out)
    assert list(rows[0]) == ["family", "N", "y", "exact_mantissa", "exact_exp2", "sign"]
    assert len(rows) == 2
    # 1/sqrt(2) is not exactly representable, so the zero shows up at rounding level
    assert abs(parse_scaled(rows[1]["exact_mantissa"], rows[1]["exact_exp2"], rows[1]["sign"]).to_float()) < 1e-15
    assert parse_scaled(rows[0]["exact_mantissa"], rows[0]["exact_exp2"], rows[0]["sign"]).to_float() < 0


def test_eval_degree_zero(capsys):
    code, out, _ = run(capsys, "--command", "eval", "--N", "0", "--y", "0.3")
    rows = rows_of(out)
    assert code == 0 and len(rows) == 1
    assert parse_scaled(rows[0]["exact_mantissa"], rows[0]["exact_exp2"], rows[0]["sign"]).to_float() == 1.0


def test_eval_large_degree_finite(capsys):
    code, out, _ = run(capsys, "--command", "eval", "--N", "10000", "--y", "2", "--scaled")
    row = rows_of(out)[0]
    assert code == 0
    exp = int(row["exact_exp2"])
    assert exp > 1000
    assert 1.0 <= float(row["exact_mantissa"]) < 2.0


def test_eval_round_trip_bit_for_bit(capsys, tmp_path):
    out = tmp_path / "e.csv"
    ys = [0.1, 0.77, 1.3, 2.9]
    code, _, _ = run(capsys, "--command", "eval", "--family", "laguerre", "--params", "alpha=1.5",
                     "--N", "7,300", "--y", ",".join(map(repr, ys)), "--out", str(out))
    assert code == 0
    spec = fam.make_family("laguerre", alpha=1.5)
    for row in rows_of(out.read_text()):
        back = parse_scaled(row["exact_mantissa"], row["exact_exp2"], row["sign"])
        want = orthonormal_value(spec.coefficients, int(row["N"]), float(row["y"]))
        assert (back.sign, back.mantissa, back.exponent) == (want.sign, want.mantissa, want.exponent)


def test_eval_grid_flags(capsys):
    code, out, _ = run(capsys, "--command", "eval", "--N", "3", "--y-min", "0", "--y-max", "1", "--y-count", "5")
    assert code == 0
    assert [float(r["y"]) for r in rows_of(out)] == [0.0, 0.25, 0.5, 0.75, 1.0]


# -- asym / table / zeros ------------------------------------------------------------


def test_asym_rows_and_tolerance(capsys):
    code, out, _ = run(capsys, "--command", "asym", "--N", "100,200", "--y", "1.5", "--tol", "5")
    assert code == 0
    devs = [float(r["rel_dev"]) for r in rows_of(out)]
    assert len(devs) == 2 and devs[1] < devs[0]
    code, _, _ = run(capsys, "--command", "asym", "--N", "100", "--y", "1.5", "--tol", "1e-6")
    assert code == 1


def test_table_hermite_outer_slope(capsys):
    code, out, _ = run(capsys, "--command", "table", "--N", "50,100,200,400", "--y", "1.5,2.0", "--json")
    payload = json.loads(out)
    assert code == 0
    assert payload["pass"] is True
    assert payload["slope"] == pytest.approx(-1.0, abs=0.05)
    assert len(payload["rows"]) == 8


def test_table_slope_outside_window_fails(capsys):
    code, _, err = run(capsys, "--command", "table", "--N", "50,100", "--y", "1.5", "--slope-window=-3,-2")
    assert code == 1
    assert "FAIL" in err


def test_table_meixner_band_reports_d(capsys):
    code, out, _ = run(capsys, "--command", "table", "--family", "meixner", "--region", "band",
                       "--N", "50,100,200", "--y", "0.2,0.25", "--json")
    payload = json.loads(out)
    assert code == 0
    d = payload["d"]
    for r in payload["rows"]:
        assert float(r["rel_dev"]) <= d / r["N"] * (1 + 1e-6)


def test_table_region_family_mismatch(capsys):
    code, _, err = run(capsys, "--command", "table", "--family", "hermite", "--region", "band", "--N", "50", "--y", "0.5")
    assert code == 2
    assert "--region" in err


def test_zeros_rows(capsys):
    code, out, _ = run(capsys, "--command", "zeros", "--family", "hermite", "--N", "2", "--k", "1")
    row = rows_of(out)[0]
    assert code == 0
    assert float(row["abs_err"]) < 0.1
    code, out, _ = run(capsys, "--command", "zeros", "--family", "meixner", "--region", "saturated", "--N", "100", "--k", "3")
    assert all(float(r["abs_err"]) < 1e-12 for r in rows_of(out))


# -- verify ------------------------------------------------------------------------


def test_verify_only_airy_json(capsys):
    code, out, _ = run(capsys, "--command", "verify", "--only", "airy", "--json")
    payload = json.loads(out)
    assert code == 0
    assert payload and all({"id", "measured", "bound", "pass"} <= set(p) for p in payload)
    assert all(p["pass"] for p in payload)
    tagged = {c.id for c in CHECKS if "airy" in c.tags}
    assert {p["id"] for p in payload} == tagged
    assert 6 not in tagged and 7 not in tagged


def test_verify_only_by_id(capsys):
    code, out, _ = run(capsys, "--command", "verify", "--only", "6")
    assert code == 0
    assert out.count("criterion") == 1 and "PASS" in out


# -- configuration and errors ----------------------------------------------------------


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nfamily = laguerre\nparams = alpha=2\nN = 5,6\ncommand = eval\ny = 0.5\n")
    rc = resolve(["--config", str(cfg), "--N", "9"])
    assert rc.family.kind == "laguerre" and rc.family.param("alpha") == 2.0
    assert rc.Ns == (9,)
    assert rc.command == "eval"
    assert rc.k == 3


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["--command", "eval", "--y", "0.5", "--N", "x"], "--N"),
        (["--command", "eval", "--N", "3"], "--y"),
        (["--command", "eval", "--family", "laguerre", "--params", "alpha=-3", "--y", "1"], "--params"),
        (["--command", "eval", "--params", "oops", "--y", "1"], "--params"),
        (["--command", "asym", "--N", "0", "--y", "1"], "--N"),
        (["--command", "verify", "--only", "nothing-matches"], "--only"),
        (["--command", "eval", "--y-min", "0", "--y"], None),
    ],
)
def test_usage_errors(capsys, argv, flag):
    code, _, err = run(capsys, *argv)
    assert code == 2
    if flag:
        assert flag in err


def test_bad_config_key(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    code, _, err = run(capsys, "--config", str(cfg))
    assert code == 2 and "--config" in err


def test_asym_point_outside_region(capsys):
    code, _, err = run(capsys, "--command", "asym", "--N", "50", "--y", "0.5")
    assert code == 2
    assert "--y" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "artifact", "--command", "eval", "--N", "1", "--y", "0.25"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0].startswith("family,N,y")
