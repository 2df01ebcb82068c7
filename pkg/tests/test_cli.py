import csv
import io
import json
import subprocess
import sys

import pytest

from circleop.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_norm_example(capsys):
    code, out, _ = run(capsys, "norm", "--alpha", "one", "--beta", "z")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1
    assert doc["svd_estimate"] == pytest.approx(1.41421, abs=1e-5)
    assert doc["case"] == "CaseIV" and doc["lower"] == pytest.approx(1) and doc["upper"] == pytest.approx(2 ** 0.5)


def test_norm_with_ny_estimate(capsys):
    code, out, _ = run(capsys, "norm", "--alpha", "one", "--beta", "zbar", "--deg", "2")
    doc = json.loads(out)
    assert doc["ny_estimate"] == pytest.approx(1.0, abs=1e-6) and doc["ny_norm"] == pytest.approx(1.0, abs=1e-6)


def test_winding_example(capsys):
    code, out, _ = run(capsys, "winding", "--symbol", "0:-0.5;1:1", "--at", "0")
    assert code == 0 and out == "1\n"
    code, out, _ = run(capsys, "winding", "--symbol", "zbar", "--format", "json")
    assert json.loads(out)["winding"] == -1


def test_matrix_example(capsys):
    code, out, _ = run(capsys, "matrix", "--alpha", "0:2;1:1", "--beta", "zbar", "--M", "4")
    rows = list(csv.reader(io.StringIO(out)))
    out_modes = [int(x) for x in rows[0][1:]]
    in_modes = [int(x) for x in rows[1][1:]]
    entry = rows[2 + out_modes.index(1)][in_modes.index(0)]
    assert code == 0 and complex(entry.replace("i", "j")) == 1


def test_spectrum_csv_and_negative_grid(capsys):
    code, out, _ = run(capsys, "spectrum", "--alpha", "z", "--beta", "zbar", "--grid", "-2,2,0,0,3")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("re,im,in_range_a")
    # n points per axis: a degenerate imaginary range repeats the real row
    assert [ln.split(",")[6] for ln in lines[1:]] == ["0", "1", "0"] * 3


def test_product_and_commute(capsys):
    _, out, _ = run(capsys, "product", "--alpha", "z", "--beta", "zbar", "--alpha", "z", "--beta", "zbar")
    doc = json.loads(out)
    assert doc["is_product"] and doc["alpha"] == "2:1.0" and doc["zero_product"] == "NonZero"
    _, out, _ = run(capsys, "commute", "--alpha", "z", "--beta", "zbar", "--alpha", "zbar", "--beta", "z")
    assert json.loads(out)["verdict"] == "NonCommuting"


def test_kernel_and_subspace(capsys):
    _, out, _ = run(capsys, "kernel", "--alpha", "one", "--beta", "z", "--M", "8")
    assert json.loads(out)["dimension"] == 1
    _, out, _ = run(capsys, "subspace", "--canonical", "H2", "--M", "32")
    assert json.loads(out)["verdict"] == "Reducing"
    _, out, _ = run(capsys, "subspace", "--phi-zeros", "0.5", "--psi-power", "1", "--M", "128")
    doc = json.loads(out)
    assert doc["verdict"] == "NotReducing" and doc["invariance_residual"] <= 1e-10


def test_parse_error_exit_2(capsys):
    code, out, err = run(capsys, "norm", "--alpha", "0:2;1:x", "--beta", "z")
    assert code == 2 and out == ""
    assert "position 6" in err and "--alpha" in err


def test_domain_error_exit_2(capsys):
    code, _, err = run(capsys, "winding", "--symbol", "z", "--at", "1")
    assert code == 2 and "error" in err


def test_non_convergence_exit_3(capsys):
    code, out, _ = run(capsys, "norm", "--alpha", "0:2;1:1", "--beta", "zbar", "--M", "8")
    doc = json.loads(out)
    assert code == 3 and doc["error"] == "not converged"
    assert doc["diagnostic"]["converged"] is False


def test_output_file_and_determinism(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["product", "--alpha", "one", "--beta", "0:2", "--alpha", "zbar", "--beta", "one",
                     "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert capsys.readouterr().out == ""


def test_selftest_only(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "1,2")
    assert code == 0
    assert out.count("[PASS]") == 2 and "criterion" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "circleop", "winding", "--symbol", "3:1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "3\n"
