import io
import json
import subprocess
import sys

import pytest

from prabrelax import cli
from prabrelax.cli import GridSpec, JobConfig, main, run
from prabrelax.errors import InvalidParam
from prabrelax.laplace import PrabhakarKernel
from prabrelax.volterra import VolterraProblem, solve_closed_cc


def _csv(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, [line.split(",") for line in out.strip().splitlines()], err


def test_ml_value(capsys):
    code, rows, _ = _csv(capsys, ["ml", "--alpha", "1", "--x", "1"])
    assert code == 0
    assert rows[0] == ["x", "value"]
    assert float(rows[1][1]) == pytest.approx(2.718281828459045, rel=1e-15)


def test_fraction_arguments_and_closed_solve(capsys):
    code, rows, _ = _csv(capsys, ["solve", "--alpha", "3/4", "--nu", "1", "--mu", "3/4", "--a", "0",
                                  "--B", "1", "--method", "closed", "--t", "1"])
    assert code == 0
    assert float(rows[1][1]) == pytest.approx(0.39310830281575406, rel=1e-14)
    assert rows[1][2] == "closed_cc"


@pytest.mark.parametrize("method", ["series", "laplace", "integral", "eq1", "closed"])
def test_solve_routes_agree(capsys, method):
    argv = ["solve", "--alpha", "0.75", "--nu", "1", "--mu", "0.75", "--a", "3", "--B", "1.25",
            "--method", method, "--start", "0", "--stop", "1", "--count", "5"]
    code, rows, _ = _csv(capsys, argv)
    assert code == 0 and len(rows) == 6
    ref = [0.0, 0.25, 0.5, 0.75, 1.0]
    p = VolterraProblem(PrabhakarKernel.cole_cole(0.75, 3.0), 1.25)
    for row, t in zip(rows[1:], ref):
        assert float(row[0]) == t
        assert float(row[1]) == pytest.approx(solve_closed_cc(p, t), abs=1e-4)


def test_log_grid_and_json(capsys):
    code = main(["spectral", "--alpha", "0.6", "--nu", "1", "--mu", "0.6", "--start", "0.1",
                 "--stop", "10", "--count", "3", "--spacing", "log", "--output", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["meta"]["command"] == "spectral"
    assert doc["meta"]["grid"]["spacing"] == "log"
    assert [r["omega"] for r in doc["rows"]] == pytest.approx([0.1, 1.0, 10.0])
    assert doc["rows"][1]["re"] == pytest.approx((1 / (1 + 1j**0.6)).real, rel=1e-14)


def test_jonscher_row(capsys):
    code, rows, _ = _csv(capsys, ["jonscher", "--alpha", "0.7", "--nu", "0.5", "--mu", "0.8",
                                  "--a", "1"])
    assert code == 0
    m, omn, em, eomn = map(float, rows[1])
    assert abs(m - em) <= 0.02 and abs(omn - eomn) <= 0.02


def test_levy_and_prabhakar(capsys):
    code, rows, _ = _csv(capsys, ["levy", "--alpha", "1/2", "--u", "1", "--lam", "1", "--t", "1"])
    assert code == 0
    assert float(rows[1][1]) == pytest.approx(0.4795001221869535, rel=1e-12)
    code, rows, _ = _csv(capsys, ["prabhakar", "--alpha", "1", "--a", "-1", "--t", "0.5", "2"])
    assert code == 0 and len(rows) == 3


def test_parameter_error_exit_code(capsys):
    assert main(["solve", "--alpha", "1.5", "--nu", "1", "--mu", "1", "--B", "1", "--t", "1"]) == 2
    assert "InvalidParam" in capsys.readouterr().err
    assert main(["solve", "--alpha", "0.5", "--nu", "1", "--t", "1"]) == 2
    assert "missing" in capsys.readouterr().err
    assert main(["ml", "--alpha", "0.5", "--start", "0", "--count", "3"]) == 2


def test_numerical_error_exit_code(capsys):
    code = main(["solve", "--alpha", "0.75", "--nu", "1", "--mu", "0.75", "--a", "3", "--B", "1.25",
                 "--method", "series", "--t", "40"])
    out, err = capsys.readouterr()
    assert code == 3 and out == ""
    assert err.startswith("NonConvergent")


def test_verify_subset(capsys):
    code = main(["verify", "--only", "1", "8"])
    out, err = capsys.readouterr()
    assert code == 0
    assert out.splitlines()[0] == "criterion,title,status,detail"
    assert len(out.splitlines()) == 3 and "PASS" in out
    assert "[PASS] 1." in err


def test_output_is_deterministic(capsys):
    argv = ["fig1", "--start", "0", "--stop", "5", "--count", "11"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first
    assert first.splitlines()[0] == "t,f_tau=0.2,f_tau=0.4,f_tau=0.6,f_tau=0.8,f_tau=1"


def test_config_file(tmp_path, capsys):
    path = tmp_path / "jobs.json"
    path.write_text(json.dumps({"jobs": [
        {"command": "ml", "parameters": {"alpha": 0.5, "x": -1.0}},
        {"command": "fig1", "grid": {"start": 0, "stop": 1, "count": 2}, "output": "json"},
    ]}))
    assert main(["--config", str(path)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("x,")
    assert json.loads(out[-1])["meta"]["command"] == "fig1"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"command": "nope"}))
    assert main(["--config", str(bad)]) == 2


def test_job_config_validation():
    with pytest.raises(InvalidParam):
        JobConfig("ml", {"alpha": 0.5}, output="xml")
    with pytest.raises(InvalidParam):
        GridSpec(0.0, 1.0, 3, "log")
    code, rows = run(JobConfig("ml", {"alpha": 1.0, "x": [0.0, 1.0]}), out=io.StringIO())
    assert code == 0 and len(rows) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "prabrelax", "ml", "--alpha", "1", "--x", "0"],
                         capture_output=True, text=True, check=True)
    assert float(res.stdout.splitlines()[1].split(",")[1]) == 1.0
    assert cli.EXIT_NUMERIC == 3


def test_concurrent_grid_keeps_order(capsys):
    base = ["solve", "--alpha", "0.7", "--nu", "0.5", "--mu", "0.8", "--a", "1", "--B", "0.9",
            "--start", "0.1", "--stop", "20", "--count", "12", "--spacing", "log"]
    main(base + ["--workers", "1"])
    serial = capsys.readouterr().out
    main(base + ["--workers", "4"])
    assert capsys.readouterr().out == serial
    assert main(base + ["--workers", "0"]) == 2
