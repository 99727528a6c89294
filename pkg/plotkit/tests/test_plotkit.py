import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from plotkit import (LOG_FLOOR, PlotSpec, SchemaError, plot_actions,
                     read_actions_csv)

DATA = Path(__file__).parent / "data"
PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class TestReadCsv:
    def test_parses_golden(self):
        s = read_actions_csv(DATA / "fig1_nonres.csv")
        assert len(s.t) == 41
        assert s.t[0] == 0.0
        assert 0 in s.actions and -1 in s.actions
        assert all(len(v) == 41 for v in s.actions.values())

    def test_missing_columns_listed(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("n,t,I_0\n0,0.0,1.0\n")
        with pytest.raises(SchemaError) as err:
            read_actions_csv(p)
        assert err.value.missing == ["norm", "max_drift"]

    def test_empty_file(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("")
        with pytest.raises(SchemaError):
            read_actions_csv(p)


class TestPlotSpec:
    def test_empty_mode_subset_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            PlotSpec([DATA / "fig1_nonres.csv"], tmp_path / "o.png", modes=[])

    def test_no_inputs_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            PlotSpec([], tmp_path / "o.png")

    def test_bad_scale_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            PlotSpec([DATA / "fig1_nonres.csv"], tmp_path / "o.png",
                     yscale="sqrt")


class TestPlotActions:
    def test_figure1_two_panel(self, tmp_path):
        out = plot_actions(PlotSpec(
            [DATA / "fig1_nonres.csv", DATA / "fig1_res.csv"],
            tmp_path / "fig1.png", title="actions"))
        data = out.read_bytes()
        assert data.startswith(PNG_MAGIC) and len(data) > 10_000

    def test_figure2_flat_bands(self, tmp_path):
        out = plot_actions(PlotSpec(
            [DATA / "fig2_eps01.csv", DATA / "fig2_eps001.csv"],
            tmp_path / "fig2.png"))
        assert out.read_bytes().startswith(PNG_MAGIC)
        # the underlying data really is flat bands at separated levels:
        # every action stays within a narrow relative band per run
        for name in ("fig2_eps01.csv", "fig2_eps001.csv"):
            s = read_actions_csv(DATA / name)
            for a, y in s.actions.items():
                lo = np.abs(y).min()
                if lo > 1e-8:
                    assert np.abs(y).max() / lo < 3.0

    def test_byte_stable(self, tmp_path):
        spec = PlotSpec([DATA / "fig1_nonres.csv"], tmp_path / "a.png",
                        modes=[0, 1, -1, 2])
        first = plot_actions(spec).read_bytes()
        second = plot_actions(spec).read_bytes()
        assert first == second

    def test_input_not_mutated(self, tmp_path):
        src = DATA / "fig1_nonres.csv"
        before = src.read_bytes()
        plot_actions(PlotSpec([src], tmp_path / "o.png"))
        assert src.read_bytes() == before

    def test_unknown_mode_is_schema_error(self, tmp_path):
        with pytest.raises(SchemaError):
            plot_actions(PlotSpec([DATA / "fig1_nonres.csv"],
                                  tmp_path / "o.png", modes=[999]))

    def test_log_floor_applied(self, tmp_path):
        p = tmp_path / "zero.csv"
        p.write_text("n,t,norm,max_drift,I_0\n"
                     "0,0.0,1.0,0.0,0.0\n"
                     "1,0.1,1.0,0.0,0.0\n")
        out = plot_actions(PlotSpec([p], tmp_path / "z.png"))
        assert out.exists()
        assert LOG_FLOOR == 1e-18

    def test_linear_scale(self, tmp_path):
        out = plot_actions(PlotSpec([DATA / "fig2_eps01.csv"],
                                    tmp_path / "lin.png", yscale="linear"))
        assert out.read_bytes().startswith(PNG_MAGIC)


class TestCli:
    def run_cli(self, *args):
        return subprocess.run([sys.executable, "-m", "plotkit.cli"]
                              + list(args), capture_output=True, text=True)

    def test_actions_command(self, tmp_path):
        out = tmp_path / "fig.png"
        res = self.run_cli("actions", "--csv", str(DATA / "fig1_nonres.csv"),
                           "--csv", str(DATA / "fig1_res.csv"),
                           "--out", str(out), "--modes", "0,1,-1,2,-2")
        assert res.returncode == 0, res.stderr
        assert out.read_bytes().startswith(PNG_MAGIC)

    def test_missing_file_errors(self, tmp_path):
        res = self.run_cli("actions", "--csv", str(tmp_path / "nope.csv"),
                           "--out", str(tmp_path / "o.png"))
        assert res.returncode == 65
        assert "error:" in res.stderr

    def test_empty_modes_errors(self, tmp_path):
        res = self.run_cli("actions", "--csv", str(DATA / "fig1_nonres.csv"),
                           "--out", str(tmp_path / "o.png"), "--modes", "")
        assert res.returncode == 65
