"""Command line interface: JSON point reports, CSV sweeps, report figures."""

import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from bmr.cli import EXIT_DOMAIN, EXIT_IO, EXIT_OK, EXIT_USAGE, main


def run_rate(capsys, *argv):
    code = main(["rate", *argv])
    payload = json.loads(capsys.readouterr().out)
    return code, payload


def results_by_scheme(payload):
    return {entry["scheme"]: entry for entry in payload["results"]}


class TestRateCommand:
    def test_single_use_schemes_agree(self, capsys):
        code, payload = run_rate(capsys, "--n", "1", "--eta", "0.7", "--s", "3", "--N", "8")
        assert code == EXIT_OK
        by = results_by_scheme(payload)
        assert by["local"]["per_use_bits"] == by["collective"]["per_use_bits"]

    def test_memoryless_schemes_agree(self, capsys):
        code, payload = run_rate(capsys, "--n", "10", "--eta", "0.7", "--s", "0", "--N", "8")
        assert code == EXIT_OK
        by = results_by_scheme(payload)
        assert by["local"]["per_use_bits"] == by["collective"]["per_use_bits"]

    def test_strong_memory_asymptote(self, capsys):
        code, payload = run_rate(capsys, "--n", "10", "--eta", "0.7", "--s", "20", "--N", "8")
        assert code == EXIT_OK
        by = results_by_scheme(payload)
        assert abs(by["collective"]["per_use_bits"] - math.log2(17.0)) < 0.01 * math.log2(17.0)
        assert by["local"]["per_use_bits"] < 0.2

    def test_scheme_filter_and_payload_shape(self, capsys):
        code, payload = run_rate(capsys, "--scheme", "collective")
        assert code == EXIT_OK
        assert [entry["scheme"] for entry in payload["results"]] == ["collective"]
        entry = payload["results"][0]
        assert set(entry) == {"scheme", "total_bits", "per_use_bits", "per_mode_bits", "allocation", "r_opt"}
        assert len(entry["allocation"]) == payload["params"]["n"]

    def test_edge_transmissivity_notice(self, capsys):
        code, payload = run_rate(capsys, "--eta", "1", "--N", "8")
        assert code == EXIT_OK and "notice" in payload
        assert results_by_scheme(payload)["local"]["per_use_bits"] == pytest.approx(math.log2(17.0), abs=1e-11)
        code, payload = run_rate(capsys, "--eta", "0")
        assert code == EXIT_OK and "notice" in payload
        assert results_by_scheme(payload)["collective"]["total_bits"] == 0.0

    def test_round_trip_reevaluation(self, capsys):
        args = ["--n", "7", "--eta", "0.45", "--s", "1.3", "--N", "5.5"]
        main(["rate", *args])
        first = capsys.readouterr().out
        params = json.loads(first)["params"]
        main([
            "rate",
            "--n", str(params["n"]),
            "--eta", repr(params["eta"]),
            "--s", repr(params["s"]),
            "--N", repr(params["N"]),
        ])
        assert capsys.readouterr().out == first


class TestSweepCommand:
    def test_header_and_ordering(self, tmp_path):
        out = tmp_path / "sweep.csv"
        code = main(["sweep", "--sweep", "s=0:1:0.5", "--out", str(out)])
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "value,scheme,total_bits,per_use_bits"
        schemes = [line.split(",")[1] for line in lines[1:]]
        assert schemes == ["local", "collective"] * 3
        values = [line.split(",")[0] for line in lines[1:]]
        assert values == ["0", "0", "0.5", "0.5", "1", "1"]

    def test_deterministic_bytes(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["sweep", "--sweep", "s=0:2:0.25", "--n", "6", "--eta", "0.6", "--N", "4"]
        assert main([*argv, "--out", str(first)]) == EXIT_OK
        assert main([*argv, "--out", str(second)]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()

    def test_memory_sweep_monotonicity(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sweep", "--sweep", "s=0:3:0.25", "--out", str(out)]) == EXIT_OK
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        coll = [float(row[3]) for row in rows if row[1] == "collective"]
        local = [float(row[3]) for row in rows if row[1] == "local"]
        assert np.all(np.diff(coll) >= -1e-10)
        assert np.all(np.diff(local) <= 1e-10)

    def test_transmissivity_sweep_memoryless_equality(self, tmp_path):
        out = tmp_path / "eta.csv"
        assert main(["sweep", "--sweep", "eta=0.1:0.9:0.1", "--s", "0", "--out", str(out)]) == EXIT_OK
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        local = {row[0]: float(row[2]) for row in rows if row[1] == "local"}
        coll = {row[0]: float(row[2]) for row in rows if row[1] == "collective"}
        assert len(local) == 9
        for value, bits in local.items():
            assert abs(bits - coll[value]) < 1e-9

    def test_empty_sweep_writes_header_only(self, tmp_path):
        out = tmp_path / "empty.csv"
        assert main(["sweep", "--sweep", "s=", "--out", str(out)]) == EXIT_OK
        assert out.read_text() == "value,scheme,total_bits,per_use_bits\n"
        assert main(["sweep", "--sweep", "s=2:1:0.5", "--out", str(out)]) == EXIT_OK
        assert out.read_text() == "value,scheme,total_bits,per_use_bits\n"

    def test_explicit_value_list_and_uses_sweep(self, tmp_path):
        out = tmp_path / "n.csv"
        assert main(["sweep", "--sweep", "n=1,2,4", "--s", "0", "--out", str(out)]) == EXIT_OK
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 6
        per_use = [float(line.split(",")[3]) for line in lines[1:]]
        assert max(per_use) - min(per_use) < 1e-9  # memoryless rates do not depend on n

    def test_budget_variable_aliases(self, tmp_path):
        short = tmp_path / "short.csv"
        long = tmp_path / "long.csv"
        assert main(["sweep", "--sweep", "N=0:8:4", "--out", str(short)]) == EXIT_OK
        assert main(["sweep", "--sweep", "n_mean=0:8:4", "--out", str(long)]) == EXIT_OK
        assert short.read_bytes() == long.read_bytes()
        first = short.read_text().splitlines()[1]
        assert first.startswith("0,local,0,")  # zero budget sends zero bits

    def test_precision_override(self, tmp_path, monkeypatch):
        out = tmp_path / "p.csv"
        monkeypatch.setenv("BMR_PRECISION", "4")
        assert main(["sweep", "--sweep", "s=0:0:1", "--out", str(out)]) == EXIT_OK
        total = out.read_text().splitlines()[1].split(",")[2]
        assert len(total.replace(".", "").replace("-", "")) <= 4

    def test_invalid_precision_is_usage_error(self, monkeypatch, tmp_path, capsys):
        monkeypatch.setenv("BMR_PRECISION", "lots")
        assert main(["sweep", "--sweep", "s=0:1:1", "--out", str(tmp_path / "x.csv")]) == EXIT_USAGE
        capsys.readouterr()


class TestExitCodes:
    def test_usage_errors(self, capsys):
        assert main(["rate", "--bogus"]) == EXIT_USAGE
        assert main(["sweep", "--sweep", "zeta=0:1:1", "--out", "x.csv"]) == EXIT_USAGE
        assert main(["sweep", "--sweep", "s=0:1", "--out", "x.csv"]) == EXIT_USAGE
        assert main(["sweep", "--sweep", "s=0:1:-1", "--out", "x.csv"]) == EXIT_USAGE
        capsys.readouterr()

    def test_domain_errors(self, capsys, tmp_path):
        assert main(["rate", "--eta", "1.5"]) == EXIT_DOMAIN
        assert main(["rate", "--N", "-3"]) == EXIT_DOMAIN
        out = str(tmp_path / "x.csv")
        assert main(["sweep", "--sweep", "eta=0.5:2:0.5", "--out", out]) == EXIT_DOMAIN
        assert main(["sweep", "--sweep", "n=1.5,2", "--out", out]) == EXIT_DOMAIN
        capsys.readouterr()

    def test_io_error(self, capsys):
        assert main(["sweep", "--sweep", "s=0:1:1", "--out", "/nonexistent-dir/x.csv"]) == EXIT_IO
        capsys.readouterr()

    def test_help_exits_cleanly(self, capsys):
        assert main(["--help"]) == 0
        capsys.readouterr()


@pytest.fixture(scope="module")
def fig_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("figures")
    assert main(["figure", "fig2", "--out-dir", str(out)]) == EXIT_OK
    assert main(["figure", "fig3", "--out-dir", str(out)]) == EXIT_OK
    return out


class TestFigureCommand:
    def test_files_exist(self, fig_dir):
        for name in ("fig2.csv", "fig2.svg", "fig3.csv", "fig3.svg"):
            assert (fig_dir / name).is_file()

    def test_fig2_csv_layout(self, fig_dir):
        lines = (fig_dir / "fig2.csv").read_text().splitlines()
        assert lines[0] == "n,s,scheme,total_bits,per_use_bits"
        assert len(lines) == 1 + 10 * 4 * 2

    def test_fig3_csv_layout(self, fig_dir):
        lines = (fig_dir / "fig3.csv").read_text().splitlines()
        assert lines[0] == "eta,s,scheme,total_bits,per_use_bits"
        assert len(lines) == 1 + 9 * 61 * 2

    def test_svgs_are_well_formed_and_reference_series(self, fig_dir):
        from bmr.figures import ASYMPTOTE_ID, fig2_series_id, fig3_series_id

        fig2 = (fig_dir / "fig2.svg").read_text()
        ET.fromstring(fig2)
        rows = [line.split(",") for line in (fig_dir / "fig2.csv").read_text().splitlines()[1:]]
        for scheme, s in {(row[2], float(row[1])) for row in rows}:
            assert fig2_series_id(scheme, s) in fig2

        fig3 = (fig_dir / "fig3.svg").read_text()
        ET.fromstring(fig3)
        rows = [line.split(",") for line in (fig_dir / "fig3.csv").read_text().splitlines()[1:]]
        for scheme, eta in {(row[2], float(row[0])) for row in rows}:
            assert fig3_series_id(scheme, eta) in fig3
        assert ASYMPTOTE_ID in fig3

    def test_fig2_memoryless_rows_ignore_uses(self, fig_dir):
        rows = [line.split(",") for line in (fig_dir / "fig2.csv").read_text().splitlines()[1:]]
        for scheme in ("local", "collective"):
            per_use = [float(row[4]) for row in rows if row[2] == scheme and float(row[1]) == 0.0]
            assert max(per_use) - min(per_use) < 1e-9

    def test_fig3_collective_dominates_local(self, fig_dir):
        rows = [line.split(",") for line in (fig_dir / "fig3.csv").read_text().splitlines()[1:]]
        table = {(row[0], row[1], row[2]): float(row[4]) for row in rows}
        for (eta, s, scheme), bits in table.items():
            if scheme == "collective":
                assert bits >= table[(eta, s, "local")] - 1e-9
