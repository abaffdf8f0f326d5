import json
import math
import statistics

import numpy as np
import pytest

from ffdensity import charsums
from ffdensity.harness import cli, report
from ffdensity.harness.config import ConfigError, RunConfig, validate
from ffdensity.harness.suites import GRIDS, suite_gauss_closed_form


def run_cli(tmp_path, *args, name="out"):
    out = tmp_path / name
    code = cli.main(list(args) + ["--out", str(out)])
    return code, (out.read_text() if out.exists() else None)


# -- configuration ------------------------------------------------------------------------

@pytest.mark.parametrize("q", [7, 4, 9, 2])
def test_bad_field_rejected(q):
    with pytest.raises(ConfigError):
        validate(RunConfig(mode="one-level", q=q))


@pytest.mark.parametrize("g,N", [(1, 4), (1, 9), (2, 8)])
def test_one_level_support_limit(g, N):
    with pytest.raises(ConfigError, match="4g"):
        validate(RunConfig(mode="one-level", g=g, N=N))


@pytest.mark.parametrize("kw", [dict(mode="one-level", alpha=0), dict(mode="two-level", N=1),
                                dict(mode="two-level", beta=0), dict(mode="ratio-average", gamma=0.3),
                                dict(mode="one-level", threads=0), dict(mode="one-level", cutoff=0),
                                dict(mode="one-level", N=3, order=2), dict(mode="sweep", sweep_N=(1, 2)),
                                dict(mode="verify-lemmas", grid="huge"), dict(mode="nothing")])
def test_invalid_configs(kw):
    with pytest.raises(ConfigError):
        validate(RunConfig(**kw))


def test_nudge_is_applied_and_reported(tmp_path, capsys):
    code, text = run_cli(tmp_path, "--mode", "two-level", "--N", "2", "--alpha-re", "0.02", "--beta-re", "0.02")
    assert code == 0
    rep = json.loads(text)
    assert rep["shift_nudge"]["field"] == "beta"
    assert report.complex_from(rep["config"]["beta"]) == pytest.approx(0.02 + 1e-3j)
    assert "nudged" in capsys.readouterr().err


def test_no_nudge_when_far_apart():
    cfg = validate(RunConfig(mode="two-level", N=2, alpha=0.01, beta=0.02))
    assert cfg.nudged is None and cfg.beta == 0.02


# -- exit codes ------------------------------------------------------------------------------

def test_exit_config_error(tmp_path):
    assert run_cli(tmp_path, "--mode", "one-level", "--q", "7")[0] == 2
    assert run_cli(tmp_path, "--mode", "one-level", "--N", "4")[0] == 2
    assert cli.main(["--mode", "bogus"]) == 2


def test_exit_pole(tmp_path):
    a = math.pi / math.log(5)
    assert run_cli(tmp_path, "--mode", "one-level", "--alpha-re", "0", "--alpha-im", repr(a))[0] == 3
    # gamma + delta = 0 puts the recipe on the pole of its zeta factor
    assert run_cli(tmp_path, "--mode", "ratio-average", "--g", "1")[0] == 3


def test_exit_suite_failure(tmp_path, monkeypatch):
    _flip_case_table(monkeypatch)
    code, text = run_cli(tmp_path, "--mode", "verify-lemmas")
    assert code == 1
    rep = json.loads(text)
    assert not rep["passed"]


def test_verify_quick_grid_passes(tmp_path):
    code, text = run_cli(tmp_path, "--mode", "verify-lemmas", "--grid", "quick")
    rep = json.loads(text)
    assert code == 0, [s["name"] for s in rep["suites"] if not s["passed"]]
    assert rep["passed"] and all(s["checked"] > 0 for s in rep["suites"])


# -- sign-flip injection -------------------------------------------------------------------------

def _flip_case_table(monkeypatch):
    original = charsums.gauss_closed_all

    def flipped(P, j, chiP=None):
        return -original(P, j, chiP)

    monkeypatch.setattr(charsums, "gauss_closed_all", flipped)


def test_sign_flip_is_located(monkeypatch):
    _flip_case_table(monkeypatch)
    res = suite_gauss_closed_form(GRIDS["quick"])
    assert not res.passed and res.failure_count > 0
    first = res.failures[0]
    assert {"P", "j", "V_code"} <= set(first)
    closed, transform = complex(*first["closed"]), complex(*first["transform"])
    assert closed == pytest.approx(-transform)


# -- serialization --------------------------------------------------------------------------------

def test_json_round_trip_is_byte_identical(tmp_path):
    code, text = run_cli(tmp_path, "--mode", "two-level", "--g", "1", "--N", "4")
    assert code == 0
    assert report.dumps(json.loads(text)) == text
    assert json.loads(text)["schema_version"] == report.SCHEMA_VERSION


def test_non_finite_values_are_strings():
    text = report.dumps({"a": float("inf"), "b": complex(float("nan"), -float("inf"))})
    d = json.loads(text)
    assert d["a"] == "inf" and d["b"] == {"im": "-inf", "re": "nan"}
    z = report.complex_from(d["b"])
    assert math.isnan(z.real) and z.imag == -math.inf


def test_threads_do_not_change_bytes(tmp_path):
    outs = [run_cli(tmp_path, "--mode", "two-level", "--g", "2", "--N", "6", "--threads", t, name=t)[1]
            for t in ("1", "4", "8")]
    assert outs[0] == outs[1] == outs[2]


def test_timings_go_to_stderr_unless_embedded(tmp_path, capsys):
    code, text = run_cli(tmp_path, "--mode", "one-level", "--N", "2")
    assert "timings" not in json.loads(text)
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["backend"] in ("cython", "python") and "empirical" in err["timings"]
    code, text = run_cli(tmp_path, "--mode", "one-level", "--N", "2", "--timings", name="t")
    assert "empirical" in json.loads(text)["timings"]


def test_one_level_report_contents(tmp_path):
    code, text = run_cli(tmp_path, "--mode", "one-level", "--g", "1", "--N", "3")
    rep = json.loads(text)
    assert rep["within_budget"] and rep["type2_caveat"] is False
    total = sum(report.complex_from(v) for v in rep["classes"].values())
    assert abs(total - report.complex_from(rep["empirical"])) < 1e-12
    assert rep["certificates"]["dual_route"]["layers_checked_by_prime_route"]


def test_two_level_caveat_flag(tmp_path):
    rep = json.loads(run_cli(tmp_path, "--mode", "two-level", "--g", "1", "--N", "4")[1])
    assert rep["type2_caveat"] is True
    rep = json.loads(run_cli(tmp_path, "--mode", "two-level", "--g", "2", "--N", "4", name="b")[1])
    assert rep["type2_caveat"] is False


def test_tail_variant_only_moves_type1(tmp_path):
    a = json.loads(run_cli(tmp_path, "--mode", "two-level", "--g", "2", "--N", "5", name="a")[1])
    b = json.loads(run_cli(tmp_path, "--mode", "two-level", "--g", "2", "--N", "5",
                           "--tail-variant", "negated", name="b")[1])
    assert a["empirical"] == b["empirical"]
    assert a["prediction"]["type0"] == b["prediction"]["type0"]
    assert a["prediction"]["type2"] == b["prediction"]["type2"]
    assert a["prediction"]["type1"] != b["prediction"]["type1"]
    assert a["prediction"]["total"] != b["prediction"]["total"]


# -- sweep ---------------------------------------------------------------------------------------

def test_sweep_table(tmp_path):
    code, text = run_cli(tmp_path, "--mode", "sweep", "--sweep-g", "1,2", "--sweep-N", "2..7")
    assert code == 0
    assert text.splitlines()[0].split(",") == list(report.CSV_COLUMNS)
    assert (tmp_path / "out").read_bytes().count(b"\r\n") == 13
    rows = report.read_csv(text)
    assert len(rows) == 12
    assert [(int(r["g"]), int(r["N"])) for r in rows] == [(g, N) for g in (1, 2) for N in range(2, 8)]
    med = {g: statistics.median(float(r["abs_residual"]) for r in rows if int(r["g"]) == g) for g in (1, 2)}
    assert med[2] < med[1]


def test_one_level_sweep_skips_out_of_range(tmp_path):
    code, text = run_cli(tmp_path, "--mode", "sweep", "--sweep-level", "one-level",
                         "--sweep-g", "1", "--sweep-N", "1..6")
    rows = report.read_csv(text)
    assert [int(r["N"]) for r in rows] == [1, 2, 3]


def test_sweep_interrupt_leaves_marker(tmp_path, monkeypatch):
    from ffdensity.harness import commands
    real = commands.cmd_two_level
    calls = []

    def interrupting(cfg):
        calls.append(cfg)
        if len(calls) == 3:
            raise KeyboardInterrupt
        return real(cfg)

    monkeypatch.setattr(commands, "cmd_two_level", interrupting)
    code, text = run_cli(tmp_path, "--mode", "sweep")
    assert code == 130
    assert text.rstrip().splitlines()[-1].startswith(report.TRUNCATION_MARKER)
    assert len(report.read_csv(text)) == 2


def test_sweep_nudges_points():
    from ffdensity.harness.commands import sweep_points
    cfg = validate(RunConfig(mode="sweep", alpha=0.02, beta=0.02, sweep_g=(1,), sweep_N=(2, 3)))
    pts = list(sweep_points(cfg))
    assert all(abs(p.beta - p.alpha) > 1e-4 for p in pts)


def test_int_list_parser():
    assert cli._int_list("1,3..5") == (1, 3, 4, 5)
    assert cli._int_list("2..7") == tuple(range(2, 8))
