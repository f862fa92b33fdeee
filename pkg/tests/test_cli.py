import json
import re
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from gammaforge import __version__
from gammaforge.cli import main
from gammaforge.reports import (
    VerificationReport,
    reports_from_json,
    reports_to_csv,
    reports_to_json,
)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestGamma:
    def test_bm2_ten(self, capsys):
        assert run(capsys, "gamma", "--digits", "10", "--method", "bm2")[:2] == (0, "0.5772156649\n")

    def test_glaisher_one_digit(self, capsys):
        assert run(capsys, "gamma", "--digits", "1", "--method", "glaisher")[1] == "0.6\n"

    def test_bm3_equals_bm2(self, capsys):
        a = run(capsys, "gamma", "--digits", "50", "--method", "bm3")[1]
        b = run(capsys, "gamma", "--digits", "50", "--method", "bm2")[1]
        c = run(capsys, "gamma", "--digits", "50", "--method", "bm-n:4")[1]
        assert a == b == c

    def test_json_has_plan(self, capsys):
        code, out, _ = run(capsys, "gamma", "--digits", "20", "--method", "bm2", "--out", "json")
        doc = json.loads(out)
        assert code == 0 and doc["tool_version"] == __version__
        assert doc["plan"]["n"] == 2 and doc["plan"]["x"] >= 12
        assert doc["value"] == "0.57721566490153286061"

    @pytest.mark.parametrize(
        "argv",
        [
            ["gamma", "--digits", "0"],
            ["gamma", "--digits", "10", "--method", "bm-n:x"],
            ["gamma", "--digits", "10", "--method", "bm-n:0"],
            ["gamma", "--digits", "10", "--method", "zeta"],
        ],
    )
    def test_invalid(self, capsys, argv):
        assert run(capsys, *argv)[0] == 2

    def test_digit_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("GAMMAFORGE_MAX_DIGITS", "40")
        assert run(capsys, "gamma", "--digits", "41")[0] == 2
        assert run(capsys, "gamma", "--digits", "40")[0] == 0

    def test_argparse_errors_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["gamma"])
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--claim", "lemma2", "--out", "xml"])
        assert exc.value.code == 2


class TestVerify:
    def test_nielsen_claim(self, capsys):
        code, out, _ = run(capsys, "verify", "--claim", "lemma2", "--precision", "30", "--out", "json")
        reps = reports_from_json(out)
        assert code == 0 and len(reps) == 1
        assert reps[0].passed and abs(float(reps[0].computed_residual)) < 1e-25

    def test_rate_fit_2(self, capsys):
        code, out, _ = run(capsys, "verify", "--claim", "rate-fit:2", "--out", "json")
        rep = reports_from_json(out)[0]
        assert code == 0 and float(rep.computed_residual) <= 0.05
        assert abs(float(rep.notes["fitted_slope"]) + 4) < 0.2

    def test_failed_check_exit_1(self, capsys):
        # the n = 1 slope is 6.4% off (its error is E1(x) with a 1/x prefactor)
        code, out, _ = run(capsys, "verify", "--claim", "rate-fit:1")
        assert code == 1 and out.startswith("FAIL")

    def test_precision_failure_exit_3(self, capsys):
        code, _, err = run(capsys, "verify", "--claim", "rate-fit:2", "--precision", "20")
        assert code == 3 and "precision" in err

    def test_n3_divergence(self, capsys):
        code, out, _ = run(capsys, "verify", "--claim", "n3-divergence", "--out", "json")
        reps = reports_from_json(out)
        brackets = [r for r in reps if r.notes.get("kind") == "sign-change"]
        assert code == 0 and len(brackets) >= 3
        assert [r.claim_id for r in reps[-2:]] == ["n3-divergence[count]", "n3-divergence[growth]"]

    @pytest.mark.parametrize("claim", ["theorem2", "rate-fit:", "rate-fit:0", "rate-fit:two"])
    def test_unknown_claim(self, capsys, claim):
        assert run(capsys, "verify", "--claim", claim)[0] == 2

    def test_bad_grid(self, capsys):
        assert run(capsys, "verify", "--claim", "hid-identity", "--grid", "a,b")[0] == 2
        assert run(capsys, "verify", "--claim", "ex5.7", "--grid", "2")[0] == 2

    def test_grid_override_and_order(self, capsys):
        code, out, _ = run(capsys, "verify", "--claim", "hid-identity", "--grid", "10,1,5", "--out", "csv")
        lines = out.strip().splitlines()
        assert lines[0] == "claim_id,precision,x,residual,tolerance,passed,wall_time_ms"
        assert [l.split(",")[0] for l in lines[1:]] == [
            "hid-identity[x=10]", "hid-identity[x=1]", "hid-identity[x=5]"
        ]

    def test_threads_same_reports(self, capsys):
        a = run(capsys, "verify", "--claim", "ex5.7", "--grid", "2:1/4,3:1/3", "--out", "json")[1]
        b = run(capsys, "verify", "--claim", "ex5.7", "--grid", "2:1/4,3:1/3", "--out", "json",
                "--threads", "2")[1]
        assert _strip_times(a) == _strip_times(b)

    def test_deterministic_output(self, capsys):
        argv = ("verify", "--claim", "corollary1", "--grid", "50,80", "--out", "json")
        assert _strip_times(run(capsys, *argv)[1]) == _strip_times(run(capsys, *argv)[1])


class TestEval:
    def test_e_routes_agree(self, capsys):
        a = run(capsys, "eval", "--what", "e", "--x", "10", "--route", "integral", "--precision", "30")[1]
        b = run(capsys, "eval", "--what", "e", "--x", "10", "--route", "series", "--precision", "30")[1]
        va, vb = float(a.split()[0]), float(b.split()[0])
        assert abs(va - vb) < 1e-20
        assert "route bessel-integral" in a and "route direct-series" in b

    def test_j0_zero(self, capsys):
        code, out, _ = run(capsys, "eval", "--what", "J0", "--x", "0")
        assert code == 0 and out.splitlines()[0] == "1"

    def test_e1(self, capsys):
        out = run(capsys, "eval", "--what", "E1", "--x", "1", "--precision", "14")[1]
        assert out.splitlines()[0] == "0.21938393439552"

    def test_S_and_expansion_json(self, capsys):
        code, out, _ = run(capsys, "eval", "--what", "S", "--n", "2", "--x", "1", "--precision", "25",
                           "--out", "json")
        doc = json.loads(out)
        assert doc["value"].startswith("0.441919402208100930647459")
        code, out, _ = run(capsys, "eval", "--what", "expansion", "--x", "40", "--precision", "20",
                           "--out", "json")
        assert code == 0 and json.loads(out)["route"] == "asymptotic-expansion"

    @pytest.mark.parametrize(
        "argv",
        [
            ["eval", "--what", "e", "--x", "0.5", "--route", "expansion"],
            ["eval", "--what", "expansion", "--x", "1"],
            ["eval", "--what", "E1", "--x", "0"],
            ["eval", "--what", "E1", "--x", "1", "--route", "series"],
            ["eval", "--what", "J0", "--x", "3", "--n", "2"],
            ["eval", "--what", "J0", "--x", "3", "--route", "magic"],
            ["eval", "--what", "e", "--x", "abc"],
            ["eval", "--what", "S"],
        ],
    )
    def test_invalid_combinations(self, capsys, argv):
        assert run(capsys, *argv)[0] == 2


def _strip_times(text):
    return re.sub(r'"wall_time_ms": \d+', '"wall_time_ms": 0', text)


report_st = st.builds(
    lambda cid, inputs, res, tol: VerificationReport.build(cid, inputs, res, tol),
    st.text(min_size=1, max_size=20),
    st.dictionaries(st.text(min_size=1, max_size=8), st.text(max_size=8), max_size=4),
    st.decimals(allow_nan=False, allow_infinity=False, places=10).map(str),
    st.decimals(min_value=0, allow_nan=False, allow_infinity=False, places=10).map(str),
)


@given(st.lists(report_st, max_size=5))
def test_json_round_trip(reports):
    assert reports_from_json(reports_to_json("verify --claim x", reports)) == reports


def test_report_invariant():
    with pytest.raises(ValueError):
        VerificationReport("c", {}, "1e-3", "1e-4", True)
    r = VerificationReport.build("c", {"b": 1, "a": 2}, "-1e-5", "1e-4")
    assert r.passed
    assert reports_to_csv([r]).splitlines()[0] == "claim_id,a,b,residual,tolerance,passed,wall_time_ms"


def test_module_entry_point():
    p = subprocess.run(
        [sys.executable, "-m", "gammaforge", "gamma", "--digits", "5"],
        capture_output=True, text=True, check=False,
    )
    assert p.returncode == 0 and p.stdout == "0.57722\n"
