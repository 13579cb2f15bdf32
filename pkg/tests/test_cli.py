import json

import numpy as np
import pytest
from click.testing import CliRunner

from sombrero.cli import main

from conftest import TABLE1


@pytest.fixture()
def runner():
    return CliRunner()


def run_ok(runner, args, **kw):
    result = runner.invoke(main, args, **kw)
    assert result.exit_code == 0, result.output
    return result


def read_csv(path):
    lines = path.read_text().split("\n")
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:] if ln]
    return header, rows


class TestSolveCommand:
    def test_report_written(self, runner, tmp_path):
        run_ok(runner, ["solve", "--g", "1", "--A", "2", "--outdir", str(tmp_path)])
        doc = json.loads((tmp_path / "report.json").read_text())
        assert set(doc) == {
            "params", "a", "xi", "energies", "converged", "iterations", "argmax_radius",
        }
        assert doc["converged"] is True
        assert abs(doc["energies"][-1] - 2.1517) < 2e-3
        assert doc["argmax_radius"] == 0.0

    def test_curves_csv(self, runner, tmp_path):
        run_ok(runner, ["solve", "--g", "1", "--A", "2", "--format", "csv",
                        "--outdir", str(tmp_path)])
        header, rows = read_csv(tmp_path / "curves.csv")
        assert header == ["r", "phi", "psi", "h", "f"]
        assert float(rows[0][0]) == 0.0 and float(rows[0][2]) == 1.0
        # the zero anchor pins f(0) = 1, and psi is phi*f over its origin value
        data = np.array([[float(v) for v in row] for row in rows])
        assert abs(data[0, 4] - 1.0) < 1e-9
        prod = data[1:, 1] * data[1:, 4]
        prod0 = data[0, 1] * data[0, 4]
        assert np.allclose(data[1:, 2], prod / prod0, rtol=1e-9, atol=1e-12)

    def test_trial_parameter_independence(self, runner, tmp_path):
        energies = {}
        for a in ("2", "5"):
            out = tmp_path / a
            run_ok(runner, ["solve", "--g", "1", "--A", "2", "--a-trial", a,
                            "--outdir", str(out)])
            energies[a] = json.loads((out / "report.json").read_text())["energies"][-1]
        assert abs(energies["2"] - energies["5"]) < 5e-4

    def test_missing_required_flag(self, runner):
        result = runner.invoke(main, ["solve", "--g", "1"])
        assert result.exit_code != 0

    def test_non_convergence_exits_nonzero_but_writes_report(self, runner, tmp_path):
        result = runner.invoke(main, ["solve", "--g", "1", "--A", "2",
                                      "--max-iter", "1", "--tol", "1e-14",
                                      "--outdir", str(tmp_path)])
        assert result.exit_code == 1
        doc = json.loads((tmp_path / "report.json").read_text())
        assert doc["converged"] is False

    def test_byte_stable_reruns(self, runner, tmp_path):
        blobs = []
        for sub in ("one", "two"):
            out = tmp_path / sub
            run_ok(runner, ["solve", "--g", "0.5", "--A", "2", "--format", "csv",
                            "--outdir", str(out)])
            blobs.append((out / "report.json").read_bytes()
                         + (out / "curves.csv").read_bytes())
        assert blobs[0] == blobs[1]

    def test_outdir_from_environment(self, runner, tmp_path, monkeypatch):
        monkeypatch.setenv("SOMBRERO_OUTDIR", str(tmp_path / "envout"))
        run_ok(runner, ["solve", "--g", "1", "--A", "2"])
        assert (tmp_path / "envout" / "report.json").exists()


class TestTable1Command:
    def test_default_run_all_rows_pass(self, runner, tmp_path):
        run_ok(runner, ["table1", "--outdir", str(tmp_path)])
        header, rows = read_csv(tmp_path / "table1.csv")
        assert header == ["g", "A", "reference", "energy", "oracle", "dev_reference",
                          "dev_oracle", "converged", "status"]
        assert len(rows) == len(TABLE1)
        assert all(row[-1] == "pass" for row in rows)
        # the g=1, A=2 row must sit on the closed-form value
        row = next(r for r in rows if r[0] == "1" and r[1] == "2")
        assert abs(float(row[3]) - (5.0 / 3.0) ** 1.5) <= 2e-3

    def test_loose_tolerance_still_close(self, runner, tmp_path):
        # a loose run may miss the strict pass gate (nonzero exit) but the
        # energies stay in the right neighbourhood
        result = runner.invoke(main, ["table1", "--tol", "1e-2", "--outdir", str(tmp_path)])
        assert result.exit_code in (0, 1), result.output
        _, rows = read_csv(tmp_path / "table1.csv")
        assert len(rows) == len(TABLE1)
        for row in rows:
            assert abs(float(row[3]) - float(row[2])) < 5e-2


class TestFiguresCommand:
    def test_shape_transition_data(self, runner, tmp_path):
        run_ok(runner, ["figures", "--outdir", str(tmp_path)])
        h1, rows1 = read_csv(tmp_path / "fig1.csv")
        assert h1 == ["r", "trial_phi", "converged_psi"]
        data1 = np.array([[float(v) for v in row] for row in rows1])
        # trial state peaks away from the origin, converged one at the origin
        assert data1[np.argmax(data1[:, 1]), 0] > 0.1
        assert data1[np.argmax(data1[:, 2]), 0] == 0.0

        h2, _ = read_csv(tmp_path / "fig2.csv")
        assert h2 == ["r", "psi_A1", "psi_A2", "psi_A3"]

        h3, rows3 = read_csv(tmp_path / "fig3.csv")
        assert h3 == ["r", "psi_g05", "psi_g1", "psi_g2"]
        data3 = np.array([[float(v) for v in row] for row in rows3])
        assert data3[np.argmax(data3[:, 3]), 0] > 0.0  # g=2 is ring shaped
        assert data3[np.argmax(data3[:, 2]), 0] == 0.0  # g=1 peaks at the origin
        # every curve is normalized to its own maximum
        assert np.allclose(data3[:, 1:].max(axis=0), 1.0, atol=1e-12)


class TestOracleCommand:
    def test_writes_extrapolated_energy(self, runner, tmp_path):
        run_ok(runner, ["oracle", "--g", "1", "--A", "2", "--outdir", str(tmp_path)])
        doc = json.loads((tmp_path / "oracle.json").read_text())
        assert abs(doc["extrapolated"] - (5.0 / 3.0) ** 1.5) < 1e-4
        assert len(doc["energies"]) == len(doc["steps"]) == 3


class TestSweepCommand:
    def test_phase_corners(self, runner, tmp_path):
        run_ok(runner, ["sweep", "--g-min", "0.5", "--g-max", "2", "--g-steps", "2",
                        "--a-min", "1", "--a-max", "3", "--a-steps", "2",
                        "--outdir", str(tmp_path)])
        header, rows = read_csv(tmp_path / "sweep.csv")
        assert header == ["g", "A", "energy", "argmax_radius", "shape", "converged"]
        table = {(float(r[0]), float(r[1])): r for r in rows}
        assert table[(0.5, 1.0)][4] == "origin"
        assert float(table[(0.5, 1.0)][3]) == 0.0
        assert table[(2.0, 3.0)][4] == "ring"
        assert float(table[(2.0, 3.0)][3]) > 0.0

    def test_empty_lattice(self, runner, tmp_path):
        run_ok(runner, ["sweep", "--g-steps", "0", "--outdir", str(tmp_path)])
        header, rows = read_csv(tmp_path / "sweep.csv")
        assert header == ["g", "A", "energy", "argmax_radius", "shape", "converged"]
        assert rows == []

    def test_per_point_failure_recorded_inline(self, runner, tmp_path):
        # A = 0 is invalid; the point is recorded as an error and the sweep
        # still completes with the valid point present
        run_ok(runner, ["sweep", "--g-min", "1", "--g-max", "1", "--g-steps", "1",
                        "--a-min", "0", "--a-max", "2", "--a-steps", "2",
                        "--outdir", str(tmp_path)])
        _, rows = read_csv(tmp_path / "sweep.csv")
        assert len(rows) == 2
        shapes = {float(r[1]): r[4] for r in rows}
        assert shapes[0.0] == "error"
        assert shapes[2.0] == "origin"
