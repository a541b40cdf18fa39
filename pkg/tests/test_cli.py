import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from irs_aser.cli import EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, main, parse_scheme
from irs_aser.curves import compute_curve, parse_snr_range
from irs_aser.errors import DomainError
from irs_aser.modem import ModulationScheme

S = ModulationScheme


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    manifest = json.loads(lines[0][2:])
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    return manifest, rows


def column(rows, name):
    return np.array([float(r[name]) for r in rows])


class TestSchemeGrammar:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("bpsk", S.bpsk()),
            ("BPSK", S.bpsk()),
            ("rqam:8x4:b=1.0", S.rqam(8, 4, 1.0)),
            ("rqam:16x2:b=8", S.rqam(16, 2, 8.0)),
            ("rqam:4x2", S.rqam(4, 2, 1.0)),
            ("sqam:16", S.sqam(16)),
            ("xqam:512", S.xqam(512)),
        ],
    )
    def test_parses(self, text, expected):
        assert parse_scheme(text) == expected

    @pytest.mark.parametrize("text", ["qam:16", "rqam:8by4", "rqam:8x4:b=x", "sqam:12", "xqam:64", ""])
    def test_rejects(self, text):
        with pytest.raises(DomainError):
            parse_scheme(text)

    def test_cross_message_lists_sizes(self):
        with pytest.raises(DomainError, match="32, 128, 512, 2048"):
            parse_scheme("xqam:64")


class TestSnrRange:
    def test_inclusive_grid(self):
        assert parse_snr_range("-20:1:10").tolist() == list(range(-20, 11))
        assert parse_snr_range("-20:0.5:30").size == 101
        assert parse_snr_range("7").tolist() == [7.0]

    @pytest.mark.parametrize("text", ["1:2", "0:0:5", "5:1:0", "a:1:2"])
    def test_rejects(self, text):
        with pytest.raises(DomainError):
            parse_snr_range(text)

    def test_curve_needs_n(self):
        with pytest.raises(DomainError):
            compute_curve(S.bpsk(), None, [0.0], "closed-form")


class TestCurve:
    def test_bpsk_methods_agree(self, capsys):
        code, out, _ = run(capsys, "curve", "--scheme", "bpsk", "-N", "32", "--snr", "-20:1:10",
                           "--methods", "closed-form,quadrature")
        assert code == EXIT_OK
        manifest, rows = read_csv(out)
        assert list(rows[0]) == ["snr_db", "closed-form", "quadrature"]
        assert len(rows) == 31
        a, b = column(rows, "closed-form"), column(rows, "quadrature")
        assert np.all(np.abs(a - b) <= 1e-6 * b)
        assert manifest["command"] == "curve" and manifest["params"]["N"] == 32

    def test_sentinel_row(self, capsys):
        code, out, _ = run(capsys, "curve", "--scheme", "rqam:4x2:b=1.0", "-N", "32", "--snr", "-100",
                           "--methods", "closed-form,quadrature")
        assert code == EXIT_OK
        _, rows = read_csv(out)
        for m in ("closed-form", "quadrature"):
            assert column(rows, m)[0] == pytest.approx(0.875, abs=1e-3)

    def test_all_methods(self, capsys):
        methods = "closed-form,quadrature,low-snr,high-snr,awgn-bound,awgn-exact,monte-carlo"
        code, out, _ = run(capsys, "curve", "--scheme", "xqam:32", "-N", "16", "--snr", "0:5:10",
                           "--methods", methods, "--symbols", "20000")
        assert code == EXIT_OK
        _, rows = read_csv(out)
        assert list(rows[0])[1:] == methods.split(",")
        for m in methods.split(","):
            assert np.all((column(rows, m) >= 0) & (column(rows, m) <= 1))

    def test_out_file_and_sidecar(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
        target = tmp_path / "sub" / "bpsk.csv"
        code, out, _ = run(capsys, "curve", "--scheme", "bpsk", "-N", "8", "--snr", "0:1:2", "--out", str(target))
        assert code == EXIT_OK and out == ""
        side = json.loads((tmp_path / "sub" / "bpsk.manifest.json").read_text())
        assert side["timestamp"] == "1970-01-01T00:00:00Z"
        assert side["outputs"] == ["bpsk.csv"]

    def test_deterministic(self, capsys):
        argv = ("curve", "--scheme", "rqam:4x2", "-N", "16", "--snr", "-5:5:5", "--methods", "monte-carlo",
                "--symbols", "20000", "--seed", "9")
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]

    @pytest.mark.parametrize(
        "argv,needle",
        [
            (("curve", "--scheme", "xqam:64", "-N", "8"), "32, 128, 512, 2048"),
            (("curve", "--scheme", "qam:16", "-N", "8"), "'qam'"),
            (("curve", "--scheme", "bpsk", "-N", "8", "--snr", "0:x:5"), "'x'"),
            (("curve", "--scheme", "bpsk", "-N", "8", "--methods", "magic"), "'magic'"),
            (("curve", "--scheme", "bpsk"), "needs an element count"),
            (("curve", "--scheme", "bpsk", "-N", "0"), "element"),
        ],
    )
    def test_domain_errors(self, capsys, argv, needle):
        code, _, err = run(capsys, *argv)
        assert code == EXIT_USAGE
        assert needle in err

    def test_equals_form_for_snr(self, capsys):
        a = run(capsys, "curve", "--scheme", "bpsk", "-N", "8", "--snr=-3:1:0")[1]
        b = run(capsys, "curve", "--scheme", "bpsk", "-N", "8", "--snr", "-3:1:0")[1]
        assert a.splitlines()[1:] == b.splitlines()[1:]

    def test_usage_error_exit_code(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["curve"])
        assert info.value.code == EXIT_USAGE
        with pytest.raises(SystemExit) as info:
            main(["figure", "fig9"])
        assert info.value.code == EXIT_USAGE

    def test_console_script(self):
        proc = subprocess.run([sys.executable, "-m", "irs_aser.cli", "curve", "--scheme", "xqam:64", "-N", "4"],
                              capture_output=True, text=True)
        assert proc.returncode == EXIT_USAGE
        assert "2048" in proc.stderr


class TestFigure:
    @pytest.mark.parametrize("fig", ["fig2", "fig4", "fig5", "fig6", "fig7"])
    def test_outputs(self, capsys, tmp_path, fig):
        code, out, _ = run(capsys, "figure", fig, "--out", str(tmp_path), "--snr", "-10:5:30")
        assert code == EXIT_OK
        assert (tmp_path / f"{fig}.csv").exists()
        assert (tmp_path / f"plot_{fig}.py").exists()
        side = json.loads((tmp_path / f"{fig}.manifest.json").read_text())
        assert side["outputs"] == [f"{fig}.csv", f"plot_{fig}.py"]
        compile((tmp_path / f"plot_{fig}.py").read_text(), "plot", "exec")
        _, rows = read_csv((tmp_path / f"{fig}.csv").read_text())
        assert len(rows) == 9

    def test_fig3_has_simulation_table(self, capsys, tmp_path):
        code, _, _ = run(capsys, "figure", "fig3", "--out", str(tmp_path), "--snr", "-10:2.5:10",
                         "--symbols", "20000")
        assert code == EXIT_OK
        _, rows = read_csv((tmp_path / "fig3_montecarlo.csv").read_text())
        assert {int(r["N"]) for r in rows} >= {4, 8, 16}
        assert all(float(r["closed_form"]) >= 1e-5 for r in rows)

    def test_fig4_ordering(self, capsys, tmp_path):
        run(capsys, "figure", "fig4", "--out", str(tmp_path), "--snr", "-10:2.5:30")
        _, rows = read_csv((tmp_path / "fig4.csv").read_text())
        for n in (16, 32, 64, 128):
            best = column(rows, f"8x4_b1_N{n}")
            for beta in ("1", "8"):
                assert np.all(best <= column(rows, f"16x2_b{beta}_N{n}"))

    def test_fig7_ordering(self, capsys, tmp_path):
        run(capsys, "figure", "fig7", "--out", str(tmp_path), "--snr", "-20:2.5:30")
        _, rows = read_csv((tmp_path / "fig7.csv").read_text())
        for n in (16, 32, 64, 128):
            r, x = column(rows, f"rqam8x4_N{n}"), column(rows, f"xqam32_N{n}")
            both = (r > 1e-7) & (x > 1e-7)
            assert both.any() and np.all(x[both] < r[both])

    def test_rejects_small_budget(self, capsys, tmp_path):
        assert run(capsys, "figure", "fig3", "--out", str(tmp_path), "--symbols", "10")[0] == EXIT_USAGE


class TestValidate:
    def test_fast_passes(self, capsys):
        code, out, _ = run(capsys, "validate", "--level", "fast")
        assert code == EXIT_OK
        assert "FAIL" not in out

    def test_mutation_is_caught(self, capsys):
        code, out, _ = run(capsys, "validate", "--level", "fast", "--mutate", "delta1")
        assert code == EXIT_VALIDATION
        assert "FAIL" in out and "closed_vs_quadrature" in out

    def test_fast_report_is_deterministic(self, capsys):
        assert run(capsys, "validate", "--seed", "7")[1] == run(capsys, "validate", "--seed", "7")[1]
