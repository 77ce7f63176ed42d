import json

import numpy as np
import pytest
import yaml

from app.cli import main, read_structured_points
from app.core.config import load_run_config
from app.fields.field_io import load


def write_config(tmp_path, **sections):
    data = {
        "grid": {"nx": 8, "ny": 8, "nz": 8},
        "schedule": {"times": [0.4, 1.0]},
        "solver": {"coarsening": {"cx": 4, "cy": 4, "cz": 4}},
        "experiment": {"name": "cli", "n_realizations": 1, "output_dir": str(tmp_path / "out")},
    }
    for name, values in sections.items():
        data.setdefault(name, {}).update(values)
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(data))
    return path


def test_generate_is_deterministic(tmp_path, capsys):
    config = write_config(tmp_path)
    first, second, other = tmp_path / "a.txt", tmp_path / "b.txt", tmp_path / "c.txt"
    assert main(["generate", "--config", str(config), "--seed", "3", "--field-file", str(first)]) == 0
    assert capsys.readouterr().out.strip() == str(first)
    assert main(["generate", "--config", str(config), "--seed", "3", "--field-file", str(second)]) == 0
    assert main(["generate", "--config", str(config), "--seed", "4", "--field-file", str(other)]) == 0
    assert first.read_text() == second.read_text()
    assert first.read_text() != other.read_text()
    assert load(first).dims == (8, 8, 8)


def test_generate_default_target(tmp_path):
    config = write_config(tmp_path)
    assert main(["generate", "--config", str(config), "--seed", "9"]) == 0
    assert (tmp_path / "out" / "field_seed9.txt").is_file()


def test_run_writes_linear_incompressible_profile(tmp_path):
    config = write_config(tmp_path, field={"var_lnk": 0.0}, fluid={"eta": 0.0})
    assert main(["run", "--config", str(config), "--vtk"]) == 0
    out = tmp_path / "out"
    grid, fields = read_structured_points(out / "pressure_step2.vtk")
    assert grid.dims == (8, 8, 8)
    i = np.arange(grid.n_cells) % 8
    assert np.abs(fields["pressure"] - (1.0 - (i + 0.5) / 8)).max() < 1e-7
    assert np.allclose(fields["permeability"], np.exp(-1.0))

    report = json.loads((out / "report.json").read_text())
    assert report["success"] is True
    assert len(report["steps"]) == 2
    assert load_run_config(out / "config.yaml") == load_run_config(config)


def test_run_from_a_field_file(tmp_path):
    field = tmp_path / "k.txt"
    config = write_config(tmp_path, field={"file": str(field)})
    assert main(["generate", "--config", str(config), "--seed", "1"]) == 0
    assert field.is_file()
    assert main(["run", "--config", str(config)]) == 0


def test_run_dumps_operators(tmp_path):
    config = write_config(tmp_path)
    assert main(["run", "--config", str(config), "--dump-operators"]) == 0
    operators = tmp_path / "out" / "operators"
    assert (operators / "P.mtx").is_file()
    summary = yaml.safe_load((operators / "hierarchy.yaml").read_text())
    assert summary["n_primal"] == 8


def test_configuration_errors_exit_with_two(tmp_path, capsys):
    bad_ratio = write_config(tmp_path, solver={"coarsening": {"cx": 3, "cy": 3, "cz": 3}})
    assert main(["run", "--config", str(bad_ratio)]) == 2
    assert "coarsening ratio" in capsys.readouterr().err

    assert main(["run", "--config", str(tmp_path / "missing.yaml")]) == 2

    no_field = write_config(tmp_path, field={"file": str(tmp_path / "absent.txt")})
    assert main(["run", "--config", str(no_field)]) == 2

    unknown = tmp_path / "unknown.yaml"
    unknown.write_text("solver:\n  smoothing: 3\n")
    assert main(["run", "--config", str(unknown)]) == 2

    assert main(["bench", "--config", str(bad_ratio), "--jobs", "0"]) == 2


def test_non_convergence_exits_with_three(tmp_path):
    config = write_config(tmp_path, solver={"nonlinear_tol": 1e-300, "max_outer": 1})
    assert main(["run", "--config", str(config)]) == 3
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["success"] is False
    assert report["steps"][0]["failure_stage"] == "max_outer"
    assert len(report["steps"]) == 1


def test_unwritable_output_exits_with_four(tmp_path):
    config = write_config(tmp_path)
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    assert main(["run", "--config", str(config), "--output", str(blocker)]) == 4


def test_bench_writes_summary(tmp_path):
    config = write_config(tmp_path, experiment={"n_realizations": 2, "variants": [{"smoothing_steps": 1}, {}]})
    assert main(["bench", "--config", str(config), "--seed", "5"]) == 0
    out = tmp_path / "out"
    summary = json.loads((out / "cli_summary.json").read_text())
    assert len(summary["configs"]) == 2
    assert (out / "cli.csv").is_file()
    assert (out / "cli_summary.txt").is_file()


def test_bench_grid_sweep(tmp_path):
    config = write_config(tmp_path, experiment={"sweep": {"kind": "coarsening", "values": [2, 4]}})
    assert main(["bench", "--config", str(config)]) == 0
    table = json.loads((tmp_path / "out" / "cli_coarsening.json").read_text())
    assert [entry["value"] for entry in table["entries"]] == ["2x2x2", "4x4x4"]


def test_command_is_required():
    with pytest.raises(SystemExit):
        main([])


def test_zero_variance_field_is_constant(tmp_path):
    config = write_config(tmp_path, field={"var_lnk": 0.0, "mean_lnk": 0.0})
    target = tmp_path / "flat.txt"
    assert main(["generate", "--config", str(config), "--field-file", str(target)]) == 0
    assert np.all(load(target).k == 1.0)


def test_pressure_front_enters_from_the_west(tmp_path):
    config = write_config(tmp_path, grid={"nx": 16, "ny": 16, "nz": 16}, schedule={"times": [0.4]})
    assert main(["run", "--config", str(config), "--seed", "7", "--vtk"]) == 0
    grid, fields = read_structured_points(tmp_path / "out" / "pressure_step1.vtk")
    slabs = fields["pressure"].reshape(grid.shape).mean(axis=(0, 1))
    assert np.all(np.diff(slabs) < 0)
