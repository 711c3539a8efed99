import csv
import json

import pytest
from click.testing import CliRunner

from conftest import raw_with_quota, shipped_raw
from netgame.cli import main


def invoke(*args, env=None):
    return CliRunner().invoke(main, [str(a) for a in args], env=env)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return p


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.mark.parametrize("name,expected", [
    ("complete_4x4", "lambda2 = 8.000000\n"),
    ("disconnected_4", "lambda2 = 0.000000 (disconnected)\n"),
    ("path3", "lambda2 = 1.000000\n"),
])
def test_lambda2_command(name, expected):
    r = invoke("lambda2", f"builtin:{name}")
    assert r.exit_code == 0
    assert r.output.startswith(expected)
    assert "components = " in r.output


def test_validation_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    r = invoke("lambda2", bad)
    assert r.exit_code == 2 and "error:" in r.output
    raw = shipped_raw("path3")
    raw["players"][0]["quota"] = 5
    assert invoke("lambda2", write(tmp_path, "q.json", raw)).exit_code == 2


def test_capacity_error_exit_4_keeps_partial_trajectory(tmp_path):
    raw = shipped_raw("fig1_4x4_k7")
    raw["solver"] = {"enumeration_cap": 100}
    r = invoke("solve", write(tmp_path, "c.json", raw), "--mode", "br", "--out", tmp_path / "o")
    assert r.exit_code == 4
    traj = rows(tmp_path / "o_trajectory.csv")
    assert len(traj) == 1 and traj[0]["step"] == "0"


def test_quota_zero_gives_single_row(tmp_path):
    r = invoke("solve", "builtin:path3", "--out", tmp_path / "p")
    assert r.exit_code == 0
    traj = rows(tmp_path / "p_trajectory.csv")
    assert len(traj) == 1
    assert traj[0]["lambda2"] == "1.000000"
    assert list(traj[0]) == ["step", "mover", "lambda2", "changed", "selection_p1", "selection_p2"]


def test_complete_instance_both_modes(tmp_path):
    r = invoke("solve", "builtin:complete_4x4", "--out", tmp_path / "c")
    assert r.exit_code == 0, r.output
    ne = json.loads((tmp_path / "c_ne.json").read_text())
    team = json.loads((tmp_path / "c_team.json").read_text())
    loc = json.loads((tmp_path / "c_loc.json").read_text())
    assert ne["lambda2_NE"] == 8.0 and team["lambda2_team"] == 8.0
    assert loc["loc_percent"] == 0.0 and not loc["negative"]
    assert "single-player moves" in ne["step_counting"]
    topo = json.loads((tmp_path / "c_ne_topology.json").read_text())
    assert len(topo["links"]) == 28


def test_loc_written_once_both_separate_runs_exist(tmp_path):
    out = tmp_path / "s"
    invoke("solve", "builtin:psn_5x4", "--mode", "br", "--out", out)
    assert not (tmp_path / "s_loc.json").exists()
    invoke("solve", "builtin:psn_5x4", "--mode", "team", "--out", out)
    assert (tmp_path / "s_loc.json").exists()


def test_no_loc_across_different_instances(tmp_path):
    out = tmp_path / "m"
    invoke("solve", "builtin:psn_5x4", "--mode", "br", "--out", out)
    p = write(tmp_path, "k3.json", raw_with_quota("psn_5x4", 3))
    invoke("solve", p, "--mode", "team", "--out", out)
    assert not (tmp_path / "m_loc.json").exists()


def test_undefined_loc_is_reported(tmp_path):
    r = invoke("solve", "builtin:disconnected_4", "--out", tmp_path / "d")
    assert r.exit_code == 0
    loc = json.loads((tmp_path / "d_loc.json").read_text())
    assert loc["defined"] is False and loc["loc_percent"] is None


def test_heuristic_run_flags_negative_loc(tmp_path):
    p = write(tmp_path, "k9.json", raw_with_quota("complete_4x4", 9))
    r = invoke("solve", p, "--solver", "rgp", "--scheme", "greedy", "--out", tmp_path / "h")
    assert r.exit_code == 0, r.output
    loc = json.loads((tmp_path / "h_loc.json").read_text())
    assert loc["negative"] is True
    assert "negative" in r.output


def outputs(folder):
    return {p.name: p.read_bytes() for p in sorted(folder.iterdir())}


@pytest.mark.parametrize("args", [
    ["solve", "builtin:psn_5x4"],
    ["solve", "builtin:fig1_4x4_k7", "--solver", "rgp", "--scheme", "loglbl", "--max-steps", "6"],
    ["round", "builtin:fig1_4x4_k7", "--player", "2", "--scheme", "lbl"],
    ["sweep", "builtin:sweep_psn_quota"],
])
def test_byte_identical_reruns(tmp_path, args):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir()
    b.mkdir()
    assert invoke(*args, "--out", a / "x").exit_code == 0
    assert invoke(*args, "--out", b / "x").exit_code == 0
    assert outputs(a) == outputs(b)


def test_round_with_stored_fractional(tmp_path):
    r = invoke("round", "builtin:fig1_4x4_k7", "--player", "1", "--scheme", "greedy", "--out", tmp_path / "r")
    assert r.exit_code == 0
    first = json.loads((tmp_path / "r_rounded.json").read_text())
    r = invoke("round", "builtin:fig1_4x4_k7", "--player", "1", "--scheme", "greedy",
               "--fractional", tmp_path / "r_fractional.json", "--out", tmp_path / "again")
    assert r.exit_code == 0
    again = json.loads((tmp_path / "again_rounded.json").read_text())
    assert again["selected"] == first["selected"] and again["lambda2"] == first["lambda2"]
    r = invoke("round", "builtin:fig1_4x4_k7", "--player", "2", "--fractional", tmp_path / "r_fractional.json",
               "--out", tmp_path / "wrong")
    assert r.exit_code == 2


def test_sweep_command_and_timing_column(tmp_path):
    r = invoke("sweep", "builtin:sweep_psn_quota", "--timing", "--out", tmp_path / "t")
    assert r.exit_code == 0
    table = rows(tmp_path / "t_sweep.csv")
    assert len(table) == 11 and "wall_time_s" in table[0]


def test_log_level_from_environment(tmp_path):
    r = invoke("lambda2", "builtin:path3", env={"NETGAME_LOG": "DEBUG"})
    assert r.exit_code == 0


def test_instances_listing():
    r = invoke("instances")
    assert "builtin:psn_5x4" in r.output
