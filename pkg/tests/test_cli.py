import csv
import math

import numpy as np
import pytest

from cpdr import ModelSpec, delta_distance
from cpdr.cli import FitReport, main
from cpdr.simulation import generate, true_basis


def write_csv(path, X, y, names=None):
    names = names or [f"x{j + 1}" for j in range(X.shape[1])]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names + ["y"])
        for row, v in zip(X, y):
            w.writerow([repr(float(a)) for a in row] + [repr(float(v))])
    return path


@pytest.fixture(scope="module")
def model_one_csv(tmp_path_factory):
    spec = ModelSpec("I", n=400, df=3)
    X, y = generate(spec, 2024)
    path = tmp_path_factory.mktemp("data") / "model1.csv"
    return write_csv(path, X, y), spec, X, y


def load(path):
    return FitReport.from_json(path.read_text())


def test_fit_recovers_model_one(model_one_csv, tmp_path):
    path, spec, _, _ = model_one_csv
    out = tmp_path / "fit.json"
    assert main(["fit", str(path), "--response", "y", "--method", "cp-dr", "--dim", "1", "--out", str(out)]) == 0
    rep = load(out)
    b = np.array(rep.basis_x).T
    assert delta_distance(true_basis(spec), b) < 0.1
    assert rep.K == 5 and rep.scatter_residual < 1e-8


def test_fit_auto_dimension(model_one_csv, tmp_path):
    path, *_ = model_one_csv
    out = tmp_path / "fit.json"
    assert main(["fit", str(path), "--response", "y", "--dim", "auto", "--out", str(out)]) == 0
    assert load(out).d_selected == 1


def test_report_round_trip(model_one_csv, tmp_path):
    path, *_ = model_one_csv
    out = tmp_path / "fit.json"
    main(["fit", str(path), "--response", "y", "--method", "save", "--dim", "2", "--out", str(out)])
    rep = load(out)
    assert FitReport.from_json(rep.to_json()) == rep
    assert rep.to_json() == out.read_text()


def test_standardize_gives_same_span(model_one_csv, tmp_path):
    path, *_ = model_one_csv
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["fit", str(path), "--response", "y", "--dim", "1", "--out", str(a)])
    main(["fit", str(path), "--response", "y", "--dim", "1", "--standardize", "--out", str(b)])
    assert delta_distance(np.array(load(a).basis_x).T, np.array(load(b).basis_x).T) < 1e-8


def test_missing_response_column(model_one_csv, tmp_path, capsys):
    path, *_ = model_one_csv
    out = tmp_path / "fit.json"
    assert main(["fit", str(path), "--response", "nope", "--out", str(out)]) == 2
    assert not out.exists()
    assert "nope" in capsys.readouterr().err


def test_non_numeric_cell_names_row_and_column(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,y\n1,2,3\n4,oops,6\n")
    assert main(["fit", str(path), "--response", "y", "--out", str(tmp_path / "o.json")]) == 2
    err = capsys.readouterr().err
    assert "row 3" in err and "'b'" in err


def test_numerical_failure_exit_code(tmp_path, capsys):
    rng = np.random.default_rng(0)
    X = rng.standard_t(3, size=(41, 3))
    X[0] = np.median(X, axis=0)
    path = write_csv(tmp_path / "deg.csv", X, rng.normal(size=41))
    out = tmp_path / "o.json"
    assert main(["fit", str(path), "--response", "y", "--out", str(out)]) == 3
    assert "degenerate sample" in capsys.readouterr().err
    assert not out.exists()


def test_project_reproduces_indices(model_one_csv, tmp_path):
    path, spec, X, y = model_one_csv
    model = tmp_path / "fit.json"
    idx = tmp_path / "idx.csv"
    main(["fit", str(path), "--response", "y", "--dim", "2", "--out", str(model)])
    assert main(["project", str(path), "--model-file", str(model), "--out", str(idx)]) == 0
    with open(idx) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["y", "eta1", "eta2"]
    eta = np.array(rows[1:], dtype=float)
    np.testing.assert_allclose(eta[:, 1:], np.array(load(model).indices), atol=1e-10)
    assert np.all(np.abs(eta[:, 1:]) <= 1 + 1e-12)
    e1 = eta[:, 1] * np.sign(np.array(load(model).basis_x[0])[:3].sum())
    assert np.corrcoef(y, e1)[0, 1] > 0.5


def test_project_dimension_mismatch(model_one_csv, tmp_path):
    path, spec, X, y = model_one_csv
    model = tmp_path / "fit.json"
    main(["fit", str(path), "--response", "y", "--out", str(model)])
    other = write_csv(tmp_path / "small.csv", X[:, :5], y)
    assert main(["project", str(other), "--model-file", str(model), "--out", str(tmp_path / "i.csv")]) == 2


def test_simulate_single_rep_rows(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    args = ["simulate", "--models", "I,V", "--dfs", "3,inf", "--n", "120", "--reps", "1",
            "--methods", "cp-dr,sir", "--seed", "1", "--out", str(out)]
    assert main(args) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "model,family,df,n,method,reps,mean_delta,se_delta"
    assert len(lines) == 1 + 2 * 2 * 2
    assert (tmp_path / "bench_dhat.csv").exists()
    assert "mean_delta" in capsys.readouterr().out


def test_simulate_is_byte_identical(tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"b{k}.csv"
        main(["simulate", "--models", "II", "--dfs", "1", "--n", "100", "--reps", "3",
              "--methods", "cp-save,dr", "--seed", "4", "--out", str(out)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.parametrize("flag,value", [("--models", "VII"), ("--methods", "pca"),
                                        ("--families", "gamma"), ("--dfs", "two")])
def test_simulate_rejects_bad_enums(tmp_path, flag, value, capsys):
    with pytest.raises(SystemExit) as info:
        main(["simulate", flag, value, "--out", str(tmp_path / "x.csv")])
    assert info.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_simulate_reproduces_table_one_ordering(tmp_path):
    out = tmp_path / "t1.csv"
    main(["simulate", "--models", "I", "--dfs", "3", "--n", "400", "--reps", "100",
          "--methods", "cp-dr,dr", "--seed", "7", "--jobs", "4", "--out", str(out)])
    with open(out) as fh:
        rows = {r["method"]: float(r["mean_delta"]) for r in csv.DictReader(fh)}
    assert rows["cp_dr"] < rows["dr"]
    assert not math.isnan(rows["dr"])


def test_module_entry_point(model_one_csv, tmp_path):
    import subprocess
    import sys

    path, *_ = model_one_csv
    out = tmp_path / "fit.json"
    proc = subprocess.run([sys.executable, "-m", "cpdr", "fit", str(path), "--response", "y",
                           "--method", "cp-sir", "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert load(out).method == "cp_sir"
