import json
import math

import pytest
from click.testing import CliRunner

from prandtl_modes.cli import RunConfig, main, parse_complex
from prandtl_modes.specfun import kummer_m


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, **kw):
        return runner.invoke(main, [str(a) for a in args], **kw)

    return invoke


def values(output):
    return [tuple(float(x) for x in line.split(",")) for line in output.strip().splitlines()]


# ---------------------------------------------------------------- eval

def test_eval_kummer(run):
    res = run("eval", "kummer_m", "1+2i", "--a", "0.5", "--c", "1.5")
    assert res.exit_code == 0
    re, im = map(float, res.output.split())
    ref = kummer_m(0.5, 1.5, 1 + 2j)
    assert (re, im) == (ref.real, ref.imag)


@pytest.mark.parametrize("name,point,expect", [
    ("erf", "0", 0j),
    ("gamma", "5", 24 + 0j),
    ("w_criterion", "0", 0.5 + 0j),
    ("tau_criterion", "0", complex(-1, -1) / math.sqrt(2)),
])
def test_eval_known_values(run, name, point, expect):
    res = run("eval", name, point)
    assert res.exit_code == 0
    re, im = map(float, res.output.split())
    assert abs(complex(re, im) - expect) < 1e-14 * max(1, abs(expect))


def test_eval_upsilon_and_v(run):
    res = run("eval", "upsilon2", "0", "--mu", "-1")
    assert res.exit_code == 0 and float(res.output.split()[0]) == pytest.approx(-0.5)
    assert run("eval", "V", "0.5").exit_code == 0
    assert run("eval", "V", "0.5", "--upp", "-2").exit_code == 0


def test_eval_exit_codes(run):
    assert run("eval", "nope", "1").exit_code == 2
    assert run("eval", "erf", "abc").exit_code == 2
    assert run("eval", "kummer_m", "1").exit_code == 2
    assert run("eval", "gamma", "0").exit_code == 3
    assert run("eval", "x_tau1", "1", "--tau", "1").exit_code == 3
    assert run("eval", "kummer_m", "1", "--a", "1", "--c", "-2").exit_code == 3


def test_parse_complex():
    assert parse_complex("1-2i") == 1 - 2j
    assert parse_complex(" 3 + 4j") == 3 + 4j
    assert parse_complex(2) == 2
    with pytest.raises(ValueError):
        parse_complex("x")


# ---------------------------------------------------------------- mode

def test_mode_stdout(run):
    res = run("mode", "--c0-re", 1, "--grid", 0, 1, 3)
    assert res.exit_code == 0
    rows = values(res.output)
    assert [r[0] for r in rows] == [0.0, 0.5, 1.0]
    assert rows[0][1] == pytest.approx(-1.0)


def test_mode_free_example(run):
    res = run("mode", "--c0-re", math.sqrt(math.pi / 2), "--c1-re", 2, "--grid", 0, 5, 6)
    assert values(res.output)[0][1] == pytest.approx(-math.sqrt(math.pi / 2), abs=1e-12)


def test_mode_no_slip(run):
    res = run("mode", "--no-slip", "--k", 10, "--grid", 0, 2, 5)
    assert res.exit_code == 0
    y0, re, im = values(res.output)[0]
    assert y0 == 0 and abs(complex(re, im)) < 1e-10


def test_mode_files(run, tmp_path):
    out = tmp_path / "phi.csv"
    res = run("mode", "--c1-re", 1, "--grid", 0, 1, 4, "--out", out)
    assert res.exit_code == 0
    assert out.read_text().splitlines()[0] == "y,re,im"
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["frame"]["k"] == 1 and meta["grid"]["n"] == 4
    js = tmp_path / "phi.json"
    res = run("mode", "--c1-re", 1, "--grid", 0, 1, 4, "--out", js, "--format", "json")
    assert res.exit_code == 0
    data = json.loads(js.read_text())
    assert len(data["rows"]) == 4 and "coefficients" in data["meta"]


def test_mode_repeatable_and_thread_independent(run):
    args = ("mode", "--c1-re", 1, "--c2-im", 0.5, "--k", 7, "--grid", 0, 3, 33)
    a = run(*args).output
    b = run(*args).output
    c = run(*args, "--threads", 4).output
    assert a == b == c


@pytest.mark.parametrize("args", [("--grid", 1, 0, 5), ("--grid", 0, 1, 1), ("--k", 0),
                                  ("--beta", 1), ("--tol-rel", 0), ("--a", -1)])
def test_mode_invalid_input(run, args):
    assert run("mode", *args).exit_code == 2


# ---------------------------------------------------------------- verify

def test_verify_passes(run, tmp_path):
    res = run("verify", "recurrences")
    assert res.exit_code == 0
    assert json.loads(res.stdout)["passed"] is True
    out = tmp_path / "rep.json"
    assert run("verify", "boundary", "--out", out).exit_code == 0
    assert json.loads(out.read_text())["suite"] == "boundary"


def test_verify_detects_perturbation(run):
    res = run("verify", "criterion", "--perturb-tau", "1e-3")
    assert res.exit_code == 1
    assert "FAIL W_ode" in res.output


def test_verify_unknown_suite(run):
    assert run("verify", "bogus").exit_code == 2


# ---------------------------------------------------------------- shearlayer

def test_shearlayer(run, tmp_path):
    res = run("shearlayer", "--example", "--grid", -6, 6, 7)
    assert res.exit_code == 0
    rows = values(res.output)
    assert len(rows) == 7 and rows[3][0] == 0.0
    out = tmp_path / "v.csv"
    assert run("shearlayer", "--upp", -2, "--out", out).exit_code == 0
    assert out.read_text().startswith("z,re,im\n")


@pytest.mark.parametrize("args", [("--upp", 1), (), ("--example", "--grid", 1, -1, 5)])
def test_shearlayer_invalid(run, args):
    assert run("shearlayer", *args).exit_code == 2


def test_shearlayer_threads(run):
    a = run("shearlayer", "--example", "--grid", -6, 6, 61, "--threads", 1).output
    b = run("shearlayer", "--example", "--grid", -6, 6, 61, "--threads", 4).output
    assert a == b


# ---------------------------------------------------------------- figures

def test_figures(run, tmp_path):
    res = run("figures", "--out-dir", tmp_path, "--n", 5)
    assert res.exit_code == 0
    names = sorted(p.name for p in tmp_path.glob("*.csv"))
    assert names == sorted([f"figure1_k{k}.csv" for k in (1, 100, 1000000)]
                           + [f"figure2_k{k}.csv" for k in (1, 10, 100)] + ["figure3.csv"])
    first = (tmp_path / "figure2_k10.csv").read_text().splitlines()[1].split(",")
    assert abs(complex(float(first[1]), float(first[2]))) < 1e-10


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("mode", grid=(0, 1, 1))
    with pytest.raises(ValueError):
        RunConfig("mode", format="xml")
    with pytest.raises(ValueError):
        RunConfig("mode", tolerances={"rel": -1})
