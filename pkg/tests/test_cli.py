import json
import subprocess
import sys

import pytest

from chowm3.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, exit_status, main
from chowm3.report import FAIL, INCONCLUSIVE, PASS, VerificationReport, dump_lines, load_lines


def run(tmp_path, *argv):
    out = tmp_path / "out"
    code = main([*argv, "--out", str(out)])
    return code, out


def statuses(out):
    return {r.check: r.status for r in load_lines((out / "reports.jsonl").read_text())}


class TestExitCodes:
    def test_appendix_passes(self, tmp_path, capsys):
        code, out = run(tmp_path, "verify", "appendix", "--max-N", "5")
        assert code == EXIT_OK
        assert capsys.readouterr().out.splitlines()[-1].startswith("all ")
        assert set(statuses(out).values()) == {PASS}

    def test_presentation_fails_on_variant_search(self, tmp_path):
        code, out = run(tmp_path, "verify", "presentation")
        assert code == EXIT_FAIL
        st = statuses(out)
        assert st["variant_search"] == FAIL
        assert st["degree_audit"] == PASS and st["alias_forcing"] == PASS

    def test_usage_errors(self, tmp_path):
        assert main(["verify", "nothing"]) == EXIT_USAGE
        assert main(["frobnicate", "all"]) == EXIT_USAGE
        assert main(["verify", "appendix", "--variants", "whatever"]) == EXIT_USAGE
        assert main(["verify", "appendix", "--max-N", "x"]) == EXIT_USAGE

    def test_help(self, capsys):
        assert main(["--help"]) == EXIT_OK

    def test_budget_makes_groebner_check_inconclusive(self, tmp_path):
        code, out = run(tmp_path, "simplify", "rational", "--budget", "5")
        st = statuses(out)
        assert st["groebner_elimination"] == INCONCLUSIVE
        assert code == EXIT_FAIL  # the relation count still fails

    def test_fixed_variants(self, tmp_path):
        code, out = run(
            tmp_path, "verify", "presentation",
            "--variants", "fixed:d11c=with_d1,k1_1=outside,kh=minus",
        )
        assert statuses(out)["degree_audit"] == PASS

    @pytest.mark.parametrize("found,expected", [
        ({PASS}, EXIT_OK),
        ({PASS, INCONCLUSIVE}, EXIT_BUDGET),
        ({PASS, INCONCLUSIVE, FAIL}, EXIT_FAIL),
    ])
    def test_exit_status_precedence(self, found, expected):
        reports = [VerificationReport(s, "m", "a", s) for s in found]
        assert exit_status(reports) == expected


class TestOutput:
    def test_byte_identical_reruns(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        main(["verify", "appendix", "--max-N", "5", "--out", str(a)])
        main(["verify", "appendix", "--max-N", "5", "--out", str(b)])
        for name in ("reports.jsonl", "summary.txt"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_context_line_first(self, tmp_path):
        _, out = run(tmp_path, "emit", "classes")
        first = json.loads((out / "reports.jsonl").read_text().splitlines()[0])
        ctx = first["context"]
        assert ctx["oracle_multiplicity"] == "(N-s)!"
        assert ctx["lambda_convention"] == [{"fiber": "standard", "lambda_dual": True}]
        assert len(ctx["relation_data_sha256"]) == 64

    def test_report_round_trip(self, tmp_path):
        _, out = run(tmp_path, "compare", "faber")
        text = (out / "reports.jsonl").read_text()
        reports = load_lines(text)
        assert dump_lines(reports) == "".join(text.splitlines(keepends=True)[1:])

    def test_summary_lists_every_check(self, tmp_path):
        _, out = run(tmp_path, "compare", "faber")
        lines = (out / "summary.txt").read_text().splitlines()
        assert lines[-1] == "3 of 4 checks passed"
        assert any(l.startswith("FAIL") and "transported_counts" in l for l in lines)

    def test_no_floats_in_reports(self, tmp_path):
        _, out = run(tmp_path, "emit", "classes")
        text = (out / "reports.jsonl").read_text()
        for line in text.splitlines():
            stack = [json.loads(line)]
            while stack:
                x = stack.pop()
                assert not isinstance(x, float)
                if isinstance(x, dict):
                    stack.extend(x.values())
                elif isinstance(x, list):
                    stack.extend(x)


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "chowm3", "verify", "appendix", "--max-N", "4",
         "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "summary.txt").read_text() == proc.stdout
