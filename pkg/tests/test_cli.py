import json
import math
from fractions import Fraction

import pytest

from cgl.census import CensusReport, HeightedTuple
from cgl.cli import RunConfig, emit_plot_data, main, run
from cgl.galois import GaloisCertificate
from cgl.pencil import DiscriminantReport
from cgl.poly import format_poly
from cgl.sieve import DeligneReport, GrowthReport, HenselResult, ParamCheck, SieveDensity


def cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def doc(capsys, *argv):
    code, out, _ = cli(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture
def delta_file(tmp_path, example_delta):
    path = tmp_path / "delta.txt"
    path.write_text(format_poly(example_delta) + "\n")
    return path


def test_nd_csv(capsys):
    code, out, _ = cli(capsys, "nd", "--max", "5")
    assert code == 0
    assert out.splitlines()[0] == "d,N_d"
    assert out.splitlines()[-1] == "5,87304"


def test_census_csv(capsys):
    code, out, _ = cli(capsys, "census", "--B", "1")
    assert code == 0
    assert "1,13" in out.splitlines()


def test_galois_symmetric(capsys, delta_file):
    code, d = doc(capsys, "galois", "--poly", str(delta_file), "--prime-bound", "10000")
    assert code == 0
    assert d["status"] == "SYMMETRIC"
    cert = GaloisCertificate.from_dict(d["certificate"])
    assert cert.conclusion == "SYMMETRIC"
    assert cert.witness_full_cycle.prime == 31


def test_inconclusive_is_success(capsys, tmp_path):
    f = tmp_path / "f.txt"
    f.write_text("t^4 + 1")
    code, d = doc(capsys, "galois", "--poly", str(f), "--prime-bound", "500", "--census")
    assert code == 0 and d["status"] == "INCONCLUSIVE"
    assert d["census"]["primes_used"] > 0


def test_pencil_round_trip(capsys):
    code, d = doc(capsys, "pencil", "--example")
    assert code == 0
    report = DiscriminantReport.from_dict(d)
    assert report.degree == 12 and report.proportional_to_reference


def test_pencil_from_points(capsys, tmp_path, example):
    pts = tmp_path / "pts.txt"
    pts.write_text("\n".join(str(p) for p in example.listed_points) + "\n")
    code, d = doc(capsys, "pencil", "--points", str(pts))
    assert code == 0 and d["status"] == "DEGENERATE"
    assert d["error"]["error"] == "DUPLICATE_POINT"


def test_experiment_is_deterministic(capsys, tmp_path):
    args = ["experiment", "--coord-bound", "5", "--samples", "3", "--seed", "11", "--prime-bound", "500"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    d = json.loads(a.read_text())
    report = CensusReport.from_dict(d["report"])
    assert report.samples_tested + report.degenerate == 3
    assert [HeightedTuple.from_dict(t).height for t in d["tuples"]] == [int(t["height"]) for t in d["tuples"]]


@pytest.mark.parametrize(
    "argv,kind,key",
    [
        (["sieve", "omega", "--model", "type1 form=x0", "--p", "7", "--form", "x0^3 + x1^3 + x2^3"], SieveDensity, "density"),
        (["sieve", "growth", "--omega", "1/2", "--Q", "10", "100", "1000"], GrowthReport, "report"),
        (["sieve", "hensel", "--p", "5", "--ell", "2", "--form", "x0^3 + x1^3 + x2^3"], HenselResult, "result"),
        (["sieve", "deligne", "--p", "7", "--form", "x0^3 + x1^3 + x2^3"], DeligneReport, "result"),
        (["sieve", "params", "--N", "5", "--d", "2", "--e", "2"], ParamCheck, "result"),
    ],
)
def test_sieve_json_round_trips(capsys, argv, kind, key):
    code, d = doc(capsys, *argv)
    assert code == 0 and d["schema_version"] == 1
    assert kind.from_dict(d[key]).to_dict() == {k: v for k, v in d[key].items()}


def test_sieve_gq(capsys):
    code, d = doc(capsys, "sieve", "gq", "--omega", "1/2", "--Q", "100")
    assert code == 0 and d["G"] == "61"


def test_domain_error_exit_code(capsys):
    code, d = doc(capsys, "sieve", "hensel", "--p", "3", "--ell", "2", "--form", "x0^3", "--nvars", "3")
    assert code == 1
    assert d["status"] == "error" and d["error"]["error"] == "SINGULAR_REDUCTION"
    code, d = doc(capsys, "sieve", "omega", "--model", "type1 form=1", "--p", "5")
    assert code == 1 and d["error"]["error"] == "DEGENERATE_MODEL"


@pytest.mark.parametrize(
    "argv,flag",
    [
        (["nd"], "--max"),
        (["nd", "--max", "0"], "--max"),
        (["census", "--B", "x"], "--B"),
        (["galois", "--poly", "/nonexistent/f.txt", "--prime-bound", "10"], "/nonexistent/f.txt"),
        (["sieve", "hensel", "--p", "4", "--ell", "2", "--form", "x0"], "prime"),
    ],
)
def test_usage_errors_exit_two(capsys, argv, flag):
    # argparse exits by itself; later checks return the status
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2
    assert flag in capsys.readouterr().err


def test_budget_env_applies(capsys, monkeypatch):
    monkeypatch.setenv("CGL_BUDGET", "10")
    code, d = doc(capsys, "sieve", "omega", "--model", "type1 form=x0", "--p", "7", "--form", "x0^3 + x1^3 + x2^3")
    assert code == 1 and d["error"]["error"] == "TOO_LARGE"


def test_run_writes_output(tmp_path):
    out = tmp_path / "nd.csv"
    assert run(RunConfig(command="nd", options={"max": 3}, output=str(out), format="csv")) == 0
    assert out.read_text() == "d,N_d\n1,1\n2,1\n3,12\n"


def test_census_plot_sweep(capsys, tmp_path):
    plot = tmp_path / "census.dat"
    code, _, _ = cli(capsys, "census", "--B", "100", "1000", "10000", "--plot", str(plot))
    assert code == 0
    rows = [tuple(map(float, line.split())) for line in plot.read_text().splitlines()]
    assert len(rows) == 3
    assert all(a[1] < b[1] for a, b in zip(rows, rows[1:]))


def test_empty_plot(tmp_path):
    path = tmp_path / "empty.dat"
    emit_plot_data([], path)
    assert path.read_text() == ""
    emit_plot_data(GrowthReport(model="none"), path)
    assert path.read_text() == ""


def test_growth_plot_follows_table(capsys, tmp_path):
    plot = tmp_path / "growth.dat"
    code, d = doc(capsys, "sieve", "growth", "--omega", "1/3", "--Q", "10", "100", "1000", "--plot", str(plot))
    assert code == 0
    rows = [tuple(map(float, line.split())) for line in plot.read_text().splitlines()]
    table = d["report"]["rows"]
    assert len(rows) == len(table)
    for (x, y), r in zip(rows, table):
        assert x == pytest.approx(math.log(r["Q"]), rel=1e-11)
        assert y == pytest.approx(math.log(Fraction(r["G"])), rel=1e-11)
