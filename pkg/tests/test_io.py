import re
import subprocess
import sys

import pytest
import yaml

from builders import build_scenario, scenario_doc
from unicycle_formation.cli import main
from unicycle_formation.engine import compute_metrics, run
from unicycle_formation.plots import emit_plots
from unicycle_formation.potential import v_m
from unicycle_formation.trajectory import (
    format_metrics,
    format_trajectory,
    parse_metrics,
    parse_trajectory,
)

V_M = 6.92798551373335542034


def serialize(records, scenario):
    return format_trajectory(records, scenario.formation, v_m(scenario.potential),
                             scenario.tol_conv, scenario.name)


def data_rows(text):
    return [line for line in text.splitlines() if not line.startswith("#")][1:]


def test_one_agent_two_steps():
    sc = build_scenario([(0.0, 0.0, 0.0)], offsets=[(3.0, 0.0)], duration=0.01)
    records, _ = run(sc)
    text = serialize(records, sc)
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    assert lines[0].split(",") == ["t", "x_1", "y_1", "theta_1", "v_1", "u_1", "mode_1",
                                   "V_a", "d_min", "clearance"]
    rows = data_rows(text)
    assert len(rows) == 2
    assert all(len(r.split(",")) == 10 for r in rows)
    # heading already on target and the estimator still warming up
    assert rows[0].split(",")[5] == "0"
    assert serialize(records, sc) == text


def test_nine_significant_digits():
    sc = build_scenario([(0.0, 0.0, 0.0)], offsets=[(3.0, 1.0)], duration=0.05)
    records, _ = run(sc)
    row = data_rows(serialize(records, sc))[-1].split(",")
    x = row[1]
    assert x == "%.9g" % records[-1].agents[0].x


def test_parse_back_round_trip(line_scenario, line_run):
    records, _ = line_run
    text = serialize(records, line_scenario)
    traj = parse_trajectory(text)
    assert len(traj.records) == len(records)
    assert traj.V_m == v_m(line_scenario.potential)
    assert traj.formation == line_scenario.formation
    assert format_trajectory(traj.records, traj.formation, traj.V_m, traj.tol_conv,
                             traj.name) == text


def test_d_min_column_above_a(line_scenario, line_run):
    records, _ = line_run
    text = serialize(records, line_scenario)
    header = [line for line in text.splitlines() if not line.startswith("#")][0].split(",")
    col = header.index("d_min")
    assert min(float(r.split(",")[col]) for r in data_rows(text)) > 1.0


def test_reject_foreign_file():
    with pytest.raises(ValueError):
        parse_trajectory("t,x\n0,1\n")


def test_metrics_format_round_trip(line_run):
    _, m = line_run
    d = parse_metrics(format_metrics(m))
    assert set(d) == {"convergence_time", "min_distance", "min_clearance", "max_v",
                      "max_u", "admissible"}
    assert float(d["min_distance"]) == pytest.approx(m.min_distance, rel=1e-8)
    assert d["admissible"] == "true"


def test_plots(tmp_path, line_scenario, line_run):
    records, metrics = line_run
    obstacles = [(o.center.x, o.center.y, o.radius) for o in line_scenario.obstacles]
    paths = emit_plots(records, tmp_path, obstacles)
    assert sorted(p.name for p in paths) == sorted(
        ["x.svg", "y.svg", "theta.svg", "u.svg", "v.svg", "d_min.svg", "trajectories.svg"]
    )
    traj_svg = (tmp_path / "trajectories.svg").read_text()
    assert len(re.findall(r'id="obstacle_\d+"', traj_svg)) == 2
    assert "Evolution of the minimum distance among agents" in (tmp_path / "d_min.svg").read_text()
    note = re.search(r"<!-- min (\S+) m -->", (tmp_path / "d_min.svg").read_text())
    assert float(note.group(1)) == float(f"{metrics.min_distance:.6g}")


def test_plots_without_obstacles(tmp_path):
    sc = build_scenario([(0.0, 0.0, 0.0)], offsets=[(3.0, 0.0)], duration=0.5)
    records, _ = run(sc)
    emit_plots(records, tmp_path)
    assert "obstacle" not in (tmp_path / "trajectories.svg").read_text()


def test_plots_are_reproducible(tmp_path):
    sc = build_scenario([(0.0, 0.0, 0.0)], offsets=[(3.0, 0.0)], duration=0.5)
    records, _ = run(sc)
    emit_plots(records, tmp_path / "a")
    emit_plots(records, tmp_path / "b")
    for name in ("x.svg", "trajectories.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


# -- command line -----------------------------------------------------------


def write_doc(path, **kw):
    doc = scenario_doc([(0.0, 0.0, 0.0), (5.0, 0.0, 0.0)], offsets=[(8, 0), (8, 4)],
                       duration=1.0)
    doc.update(kw)
    path.write_text(yaml.safe_dump(doc))
    return path


def test_cli_check_shipped(capsys):
    assert main(["check", "line_formation"]) == 0
    assert "9 agents" in capsys.readouterr().out


def test_cli_check_echo_fills_defaults(tmp_path, capsys):
    path = write_doc(tmp_path / "s.yaml")
    assert main(["check", str(path), "--echo"]) == 0
    echoed = yaml.safe_load(capsys.readouterr().out)
    assert echoed["estimator_delay"] == pytest.approx(0.05)


def test_cli_check_invalid(tmp_path, capsys):
    path = write_doc(tmp_path / "s.yaml", potential={"K": 3, "a": 1, "b": 4, "c": 4})
    assert main(["check", str(path)]) == 1
    assert "a < b < c" in capsys.readouterr().err
    assert main(["check", str(tmp_path / "missing.yaml")]) == 1


def test_cli_simulate_and_report(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["simulate", "line_formation", "--out", str(out)]) == 0
    summary = capsys.readouterr().out
    assert float(parse_metrics(summary)["max_v"]) <= 12.0
    assert (out / "metrics.txt").read_text() == summary
    assert main(["report", str(out / "trajectory.csv")]) == 0
    assert capsys.readouterr().out == summary
    assert main(["plot", str(out / "trajectory.csv"), "--out", str(tmp_path / "figs")]) == 0
    assert len(list((tmp_path / "figs").glob("*.svg"))) == 7


def test_report_matches_metrics_of_read_records(tmp_path, capsys):
    path = write_doc(tmp_path / "s.yaml")
    out = tmp_path / "run"
    assert main(["simulate", str(path), "--out", str(out)]) == 0
    capsys.readouterr()
    traj = parse_trajectory((out / "trajectory.csv").read_text())
    expected = format_metrics(compute_metrics(traj.records, traj.V_m, traj.tol_conv))
    main(["report", str(out / "trajectory.csv")])
    assert capsys.readouterr().out == expected


def test_cli_runtime_fault(tmp_path, capsys):
    # a coarse step carries the agent straight into the obstacle
    doc = scenario_doc([(-8.0, 0.0, 0.0)], offsets=[(20.0, 0.0)], obstacles=[((0.0, 0.0), 5.0)],
                       dt=0.5, duration=5.0, circ_range=0.01, estimator_delay=0.5)
    path = tmp_path / "crash.yaml"
    path.write_text(yaml.safe_dump(doc))
    assert main(["simulate", str(path), "--out", str(tmp_path / "run")]) == 2
    assert "inside obstacle" in capsys.readouterr().err


def test_cli_report_bad_file(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("nope\n")
    assert main(["report", str(bad)]) == 1


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "unicycle_formation", "check", "line_formation"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
