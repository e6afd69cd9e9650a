import io
import json
from fractions import Fraction

import pytest

from nilprob import cli, constants
from nilprob.catalog import alt_group, sym_group
from nilprob.constants import TableRow
from nilprob.engine import tau


def run_cli(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    code = cli.run(list(argv), out)
    return code, out.getvalue()


class TestNuVerb:
    def test_json_payload_exact(self):
        code, text = run_cli("nu", "alt:5", "--format", "json", "--deterministic")
        assert code == 0
        payload = json.loads(text)
        assert payload["value"] == {"num": 1, "den": 12}
        assert payload["order"] == 60
        assert "timestamp" not in payload
        assert "elapsed_ms" not in payload

    def test_nilpotent_group_renders_one_over_one(self):
        code, text = run_cli("nu", "cyc:6")
        assert code == 0
        assert "1/1" in text

    def test_text_output_carries_decimal(self):
        code, text = run_cli("nu", "sym:4")
        assert code == 0
        assert "1/3" in text

    def test_csv_header(self):
        code, text = run_cli("nu", "sym:3", "--format", "csv")
        assert code == 0
        assert text.splitlines()[0] == "group,method,num,den,decimal,status"

    def test_full_method_flag(self):
        code, text = run_cli("nu", "sym:4", "--method", "full", "--format", "json")
        payload = json.loads(text)
        assert payload["value"] == {"num": 1, "den": 3}
        assert payload["method"] == "exact-full"


class TestContextVerbs:
    def test_nu_coset_with_reps(self):
        code, text = run_cli(
            "nu-coset",
            "sym:3",
            "--normal",
            "alt:3",
            "--g1",
            "(1 2)",
            "--g2",
            "(1 2)",
            "--format",
            "json",
        )
        assert code == 0
        assert json.loads(text)["value"] == {"num": 1, "den": 3}

    def test_nu_coset_socle_keyword(self):
        code, text = run_cli(
            "nu-coset", "alt:5", "--normal", "socle", "--format", "json"
        )
        assert code == 0
        assert json.loads(text)["value"] == {"num": 1, "den": 12}

    def test_pi_defaults_to_socle_pair(self):
        code, text = run_cli("pi", "alt:5", "--format", "json")
        assert code == 0
        assert json.loads(text)["value"] == {"num": 19, "den": 30}

    def test_image_rep_accepted(self):
        # image list shorter than the degree pads fixed points
        code, text = run_cli(
            "nu-coset",
            "sym:3",
            "--normal",
            "alt:3",
            "--g1",
            "2,1",
            "--g2",
            "2,1",
            "--format",
            "json",
        )
        assert code == 0
        assert json.loads(text)["value"] == {"num": 1, "den": 3}


class TestTauVerb:
    def test_row_value_matches_engine(self):
        expected = tau(sym_group(5), alt_group(5)).value
        code, text = run_cli("tau", "alt:5", "--row", "2", "--format", "json")
        assert code == 0
        payload = json.loads(text)
        assert Fraction(payload["value"]["num"], payload["value"]["den"]) == expected

    def test_default_row_is_full_ambient(self):
        code, text = run_cli("tau", "alt:5", "--format", "json")
        assert code == 0
        assert json.loads(text)["witness"]

    def test_unknown_row_is_usage_error(self):
        code, _ = run_cli("tau", "alt:5", "--row", "17")
        assert code == 2


class TestNuTildeVerb:
    def test_alt5_rows_and_best(self):
        code, text = run_cli("nu-tilde", "alt:5", "--format", "json")
        assert code == 0
        payload = json.loads(text)
        assert payload["value"] == {"num": 1, "den": 12}
        assert [r["label"] for r in payload["rows"]] == ["1", "2"]

    def test_csv_emits_one_line_per_row(self):
        code, text = run_cli("nu-tilde", "alt:5", "--format", "csv")
        assert code == 0
        lines = text.strip().splitlines()
        # header, two extension rows, closing max line
        assert len(lines) == 4
        assert lines[-1].startswith("max(")

    def test_csv_rows_discriminate_values(self):
        code, text = run_cli("nu-tilde", "alt:6", "--format", "csv")
        assert code == 0
        body = text.strip().splitlines()[1:-1]
        values = {line.split(",")[2] + "/" + line.split(",")[3] for line in body}
        assert values == {"1/36", "1/45"}


class TestAltBoundVerb:
    def test_reference_value(self):
        code, text = run_cli(
            "alt-bound",
            "--pi-n",
            "15403/18144",
            "--pi-n-1",
            "15403/18144",
            "--n",
            "10",
        )
        assert code == 0
        assert "12007/181440" in text

    def test_small_degree_rejected(self):
        code, _ = run_cli(
            "alt-bound", "--pi-n", "1/2", "--pi-n-1", "1/2", "--n", "9"
        )
        assert code == 2


class TestMcVerb:
    def test_deterministic_runs_are_byte_identical(self):
        args = (
            "mc",
            "alt:5",
            "--samples",
            "2000",
            "--seed",
            "5",
            "--workers",
            "2",
            "--deterministic",
            "--format",
            "json",
        )
        code_a, text_a = run_cli(*args)
        code_b, text_b = run_cli(*args)
        assert code_a == code_b == 0
        assert text_a == text_b
        payload = json.loads(text_a)
        assert payload["samples"] == 2000
        assert payload["ci"]["lo"] <= payload["decimal"] <= payload["ci"]["hi"]

    def test_nondeterministic_carries_timestamp(self):
        code, text = run_cli(
            "mc", "alt:5", "--samples", "500", "--seed", "1", "--format", "json"
        )
        assert code == 0
        payload = json.loads(text)
        assert "timestamp" in payload and "elapsed_ms" in payload


class TestExitCodes:
    def test_unknown_spec_is_usage(self):
        code, _ = run_cli("nu", "nosuch:7")
        assert code == 2

    def test_missing_file_is_usage(self):
        code, _ = run_cli("nu", "file:/does/not/exist.grp")
        assert code == 2

    def test_budget_refusal(self):
        code, _ = run_cli("nu", "sym:5", "--budget", "100")
        assert code == 3

    def test_bad_flag_is_usage(self):
        code, _ = run_cli("nu", "sym:3", "--format", "yaml")
        assert code == 2

    def test_verify_mismatch_is_failure(self, monkeypatch):
        wrong = (
            TableRow(
                label="PSL(2,7)",
                spec="psl2:7",
                expected=Fraction(1, 56),
                source="synthetic wrong row",
                witness_row="1",
            ),
        )
        monkeypatch.setattr(constants, "TABLE1", wrong)
        code, text = run_cli("verify-tables", "--table", "1", "--budget", "60")
        assert code == 1
        assert "MISMATCH" in text


class TestVerifyTables:
    def test_table1_fast_rows_exact(self, monkeypatch):
        fast = tuple(r for r in constants.TABLE1 if r.spec == "psl2:7")
        monkeypatch.setattr(constants, "TABLE1", fast)
        code, text = run_cli(
            "verify-tables", "--table", "1", "--budget", "60", "--deterministic"
        )
        assert code == 0
        assert "exact-match" in text
        assert "all rows consistent" in text

    def test_json_shape(self, monkeypatch):
        fast = tuple(r for r in constants.TABLE1 if r.spec == "psl2:7")
        monkeypatch.setattr(constants, "TABLE1", fast)
        code, text = run_cli(
            "verify-tables",
            "--table",
            "1",
            "--budget",
            "60",
            "--format",
            "json",
            "--deterministic",
        )
        assert code == 0
        payload = json.loads(text)
        assert payload["all_ok"] is True
        assert payload["rows"][0]["status"] == "exact-match"

    @pytest.mark.slow
    def test_table2_mc_fallback(self):
        code, text = run_cli(
            "verify-tables",
            "--table",
            "2",
            "--budget",
            "0.00001",
            "--mc-samples",
            "20000",
            "--seed",
            "20260818",
            "--deterministic",
        )
        assert code == 0
        assert text.count("ci-consistent") == 7
