import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from recthull.cli import main


def write_points(path, rows):
    d = len(rows[0])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"x_{j + 1}" for j in range(d)])
        writer.writerows(rows)
    return str(path)


def parse_csv(text):
    return list(csv.reader(io.StringIO(text)))


@pytest.fixture
def gauss_csv(tmp_path):
    rng = np.random.default_rng(0)
    return write_points(tmp_path / "pts.csv", rng.standard_normal((100, 2)).tolist())


def test_bounds_table(capsys):
    assert main(["bounds", "--alpha", "0.1", "--d", "2", "--B", "5"]) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines[0].startswith("# alpha=0.1 d=2 batch_count=6 tau=")
    rows = parse_csv("\n".join(lines[1:]))
    assert rows[0] == ["B", "delta", "lower_bound", "upper_bound"]
    assert rows[1] == ["5", "0", "0.12109375", "0.12109375"]


def test_bounds_ranges(capsys):
    code = main(["bounds", "--alpha", "0.1", "--d", "2", "--B", "2..4", "--delta-grid", "0:0.2:0.1"])
    assert code == 0
    rows = parse_csv(capsys.readouterr().out.split("\n", 1)[1])
    assert len(rows) == 1 + 9
    assert [r[1] for r in rows[1:4]] == ["0", "0.1", "0.2"]
    assert all(float(r[2]) <= float(r[3]) for r in rows[1:])


def test_bounds_bad_inputs(capsys):
    assert main(["bounds", "--alpha", "0.1", "--d", "2", "--delta-grid", "nope"]) == 2
    assert "delta-grid" in capsys.readouterr().err
    assert main(["bounds", "--alpha", "1.5", "--d", "2"]) == 2
    assert main(["bounds", "--alpha", "0.1", "--d", "2", "--B", "5..3"]) == 2


def test_bias_known_sample(tmp_path, capsys):
    path = write_points(tmp_path / "b.csv", [(1.0, 2.0), (2.0, 1.0), (-1.0, -1.0)])
    assert main(["bias", "--input", path]) == 0
    captured = capsys.readouterr()
    rows = parse_csv(captured.out)
    assert rows[0] == ["metric", "value", "method"]
    table = {r[0]: r[1:] for r in rows[1:]}
    assert table["r_bias"][0] == "0.166666666667"  # twelve significant digits
    assert table["t_bias"][0] == "0.166666666667"
    assert table["o_bias"][0] == "0.5"
    assert "sweep" in table["t_bias"][1]
    assert "n=3 d=2" in captured.err


def test_bias_center_flag(tmp_path, capsys):
    path = write_points(tmp_path / "b.csv", [(1.0, 2.0), (2.0, 1.0), (-1.0, -1.0)])
    assert main(["bias", "--input", path, "--center", "1,1"]) == 0
    rows = parse_csv(capsys.readouterr().out)
    table = {r[0]: r[1] for r in rows[1:]}
    assert table["r_bias"] == "0"  # points tie the center in each coordinate
    assert main(["bias", "--input", path, "--center", "a,b"]) == 2
    assert main(["bias", "--input", path, "--center", "1,2,3"]) == 2


def test_bias_csv_errors(tmp_path, capsys):
    cases = [
        ("a,b\n1,2\n", "header"),
        ("x_1,x_2\n1,2\n3\n", "line 3"),
        ("x_1,x_2\n1,oops\n", "line 2"),
        ("x_1,x_2\n1,inf\n", "non-finite"),
        ("x_1,x_2\n", "no data rows"),
        ("", "empty"),
    ]
    for text, expected in cases:
        path = tmp_path / "bad.csv"
        path.write_text(text)
        assert main(["bias", "--input", str(path)]) == 2
        assert expected in capsys.readouterr().err
    assert main(["bias", "--input", str(tmp_path / "missing.csv")]) == 2


def test_hulc_output_and_reproducibility(tmp_path, gauss_csv):
    f1, f2, f3 = (str(tmp_path / name) for name in ("r1.csv", "r2.csv", "r3.csv"))
    assert main(["hulc", "--data", gauss_csv, "--alpha", "0.1", "--seed", "7", "--output", f1]) == 0
    assert main(["hulc", "--data", gauss_csv, "--alpha", "0.1", "--seed", "7", "--output", f2]) == 0
    assert main(["hulc", "--data", gauss_csv, "--alpha", "0.1", "--seed", "8", "--output", f3]) == 0
    b1, b2, b3 = (open(f, "rb").read() for f in (f1, f2, f3))
    assert b1 == b2
    assert b1 != b3

    text = b1.decode()
    header = text.splitlines()[0]
    assert header.startswith("# alpha=0.1 seed=7 d=2 b_star=")
    b_star = int(header.split("b_star=")[1].split()[0])
    assert b_star in (5, 6)
    rows = parse_csv(text.split("\n", 1)[1])
    records = [r[0] for r in rows[1:]]
    assert records[:2] == ["lower", "upper"]
    assert records[2:] == [f"batch_estimate_{j}" for j in range(1, b_star + 1)]
    lower = np.array([float(v) for v in rows[1][1:]])
    upper = np.array([float(v) for v in rows[2][1:]])
    assert np.all(lower <= upper)
    for r in rows[3:]:
        est = np.array([float(v) for v in r[1:]])
        assert np.all((lower <= est) & (est <= upper))


def test_hulc_requires_seed(gauss_csv, capsys):
    assert main(["hulc", "--data", gauss_csv]) == 2
    capsys.readouterr()


MEAN_SCRIPT = """\
import csv, sys
rows = list(csv.reader(sys.stdin))
data = [[float(v) for v in row] for row in rows[1:]]
cols = list(zip(*data))
print(" ".join(f"{sum(c) / len(c):.17g}" for c in cols))
"""


def test_hulc_subprocess_estimator(tmp_path, gauss_csv):
    script = tmp_path / "est.py"
    script.write_text(MEAN_SCRIPT)
    out = str(tmp_path / "out.csv")
    command = f'"{sys.executable}" "{script}"'
    code = main(["hulc", "--data", gauss_csv, "--estimator", command, "--alpha", "0.1", "--seed", "2", "--output", out])
    assert code == 0
    rows = parse_csv(open(out).read().split("\n", 1)[1])
    assert rows[1][0] == "lower" and rows[2][0] == "upper"


def test_hulc_subprocess_estimator_failure(tmp_path, gauss_csv, capsys):
    script = tmp_path / "bad.py"
    script.write_text('import sys; print("deliberate failure", file=sys.stderr); sys.exit(3)\n')
    command = f'"{sys.executable}" "{script}"'
    assert main(["hulc", "--data", gauss_csv, "--estimator", command, "--seed", "2"]) == 3
    err = capsys.readouterr().err
    assert "estimator failure" in err
    assert "batch 0" in err
    assert "status 3" in err and "deliberate failure" in err


def test_hulc_subprocess_wrong_arity(tmp_path, gauss_csv, capsys):
    script = tmp_path / "short.py"
    script.write_text('print("1.0")\n')
    command = f'"{sys.executable}" "{script}"'
    assert main(["hulc", "--data", gauss_csv, "--estimator", command, "--seed", "2"]) == 3
    assert "expected 2" in capsys.readouterr().err


def test_simulate_unknown_experiment(capsys):
    assert main(["simulate", "no-such-thing", "--seed", "0"]) == 2
    err = capsys.readouterr().err
    assert "available:" in err
    assert "sandwich" in err and "oracle-check" in err


def test_simulate_oracle_check_output(tmp_path, capsys):
    f1, f2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    argv = ["simulate", "oracle-check", "--seed", "1", "--reps", "2000", "--B", "3"]
    assert main(argv + ["--output", f1]) == 0
    assert "all checks passed" in capsys.readouterr().err
    assert main(argv + ["--output", f2]) == 0
    capsys.readouterr()
    assert open(f1, "rb").read() == open(f2, "rb").read()
    rows = parse_csv(open(f1).read())
    assert rows[0] == [
        "experiment", "d", "B", "alpha", "delta", "estimate",
        "std_error", "lower_bound", "upper_bound", "seed",
    ]
    assert [r[7] for r in rows[1:]] == ["0.472", "0.484"]


def test_simulate_check_failure_exit_code(capsys):
    # 50 points cannot pin the demo biases to 0.02
    assert main(["simulate", "bias-demo", "--seed", "0", "--n", "50"]) == 4
    assert "CHECK FAILED" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "sandwich", "--seed", "3", "--measures", "20", "--B", "2..4"],
        ["simulate", "general-upper", "--seed", "4", "--measures", "15", "--B", "2..4"],
        ["simulate", "hull-miscoverage", "--seed", "5", "--reps", "2000", "--B", "4"],
        ["simulate", "vertex-bias", "--seed", "6", "--reps", "3000"],
        ["simulate", "coverage", "--seed", "7", "--reps", "300", "--n", "120"],
        ["simulate", "bias-demo", "--seed", "8", "--n", "40000"],
    ],
    ids=["sandwich", "general-upper", "hull-miscoverage", "vertex-bias", "coverage", "bias-demo"],
)
def test_simulate_experiments_pass(tmp_path, capsys, argv):
    out = str(tmp_path / "rows.csv")
    assert main(argv + ["--output", out]) == 0
    assert "all checks passed" in capsys.readouterr().err
    rows = parse_csv(open(out).read())
    assert len(rows) >= 2
    assert all(r[0] == argv[1] for r in rows[1:])


def test_unwritable_output(capsys):
    code = main(["bounds", "--alpha", "0.1", "--d", "1", "--output", "/nonexistent/dir/x.csv"])
    assert code == 2
    assert "cannot write" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "recthull", "bounds", "--alpha", "0.1", "--d", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("# alpha=0.1 d=1")
