import json

import pytest

from firebreak.cli import dispatch
from firebreak.lattice import box_lattice
from firebreak.simulation import PlacementSchedule, run


def out_of(capsys):
    captured = capsys.readouterr()
    return captured.out, captured.err


def test_simulate_stored_strategy(capsys):
    assert dispatch(["simulate", "--strategy", "optimal-2d"]) == 0
    out, _ = out_of(capsys)
    assert "burnt 18" in out
    assert "contained_at 8" in out


def test_simulate_json_document(capsys):
    assert dispatch(["simulate", "--strategy", "optimal-2d", "--json"]) == 0
    out, _ = out_of(capsys)
    doc = json.loads(out)
    assert doc["burnt_total"] == 18
    assert doc["contained_at"] == 8
    assert doc["schema"] == 1


def test_simulate_schedule_file(tmp_path, capsys):
    schedule = PlacementSchedule.build(1, [[(0, 1)], [(1, 1)]])
    path = tmp_path / "schedule.json"
    path.write_text(json.dumps(schedule.to_json()))
    rc = dispatch(
        [
            "simulate",
            "--spec",
            "box:2:2",
            "--schedule",
            str(path),
            "--horizon",
            "3",
            "--json",
        ]
    )
    assert rc == 0
    doc = json.loads(out_of(capsys)[0])
    reference = run(box_lattice(2, 2), [(0, 0)], schedule, 1, 3)
    assert doc["burnt_total"] == len(reference.final_state.burnt)


def test_simulate_rejects_schedule_and_strategy(tmp_path, capsys):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(PlacementSchedule.build(1, []).to_json()))
    rc = dispatch(
        ["simulate", "--schedule", str(path), "--strategy", "greedy"]
    )
    assert rc == 1
    assert "error:" in out_of(capsys)[1]


def test_simulate_firewall_strategy(capsys):
    assert dispatch(["simulate", "--strategy", "firewall", "--n", "10"]) == 0
    out, _ = out_of(capsys)
    # 56 vertices survive: the 21-vertex wall plus 35 strictly saved behind it
    assert "burnt 944 defended 21 saved 35" in out
    assert "[contained]" in out


def test_simulate_bad_spec(capsys):
    assert dispatch(["simulate", "--spec", "box:2", "--horizon", "1"]) == 1
    assert "bad spec" in out_of(capsys)[1]


def test_solve_json_replays(capsys):
    rc = dispatch(
        ["solve", "min-burn", "--l", "2", "--T", "4", "--f", "2", "--json"]
    )
    assert rc == 0
    doc = json.loads(out_of(capsys)[0])
    assert doc["status"] == "optimal"
    assert doc["objective"] == 8
    assert "wall_time" not in doc
    schedule = PlacementSchedule.from_json(doc["schedule"])
    trace = run(box_lattice(2, 2), [(0, 0)], schedule, 2, 4)
    assert len(trace.final_state.burnt) == 8


def test_solve_json_byte_deterministic(capsys):
    argv = ["solve", "min-burn", "--l", "2", "--T", "3", "--f", "1", "--json"]
    assert dispatch(argv) == 0
    first = out_of(capsys)[0]
    assert dispatch(argv) == 0
    second = out_of(capsys)[0]
    assert first == second


def test_solve_deadline_human(capsys):
    rc = dispatch(
        ["solve", "deadline", "--l", "2", "--T", "3", "--f", "2", "--deadline", "2"]
    )
    assert rc == 0
    assert "optimal" in out_of(capsys)[0]


def test_solve_node_limit_reports_bound(capsys):
    rc = dispatch(
        [
            "solve",
            "min-burn",
            "--l",
            "2",
            "--T",
            "4",
            "--f",
            "2",
            "--node-limit",
            "10",
            "--json",
        ]
    )
    assert rc == 0
    doc = json.loads(out_of(capsys)[0])
    assert doc["status"] == "bound"
    assert doc["lower_bound"] <= doc["objective"]


def test_export_lp_stdout(capsys):
    rc = dispatch(["export-lp", "min-burn", "--l", "1", "--T", "1", "--f", "1"])
    assert rc == 0
    out, _ = out_of(capsys)
    assert out.startswith("Minimize")
    assert out.rstrip().endswith("End")


def test_export_lp_file(tmp_path, capsys):
    target = tmp_path / "model.lp"
    rc = dispatch(
        [
            "export-lp",
            "deadline",
            "--l",
            "1",
            "--T",
            "2",
            "--f",
            "1",
            "--deadline",
            "1",
            "--out",
            str(target),
        ]
    )
    assert rc == 0
    assert "nolate_t2" in target.read_text()


def test_solve_export_lp_side_file(tmp_path, capsys):
    target = tmp_path / "side.lp"
    rc = dispatch(
        [
            "solve",
            "min-burn",
            "--l",
            "1",
            "--T",
            "1",
            "--f",
            "0",
            "--export-lp",
            str(target),
            "--json",
        ]
    )
    assert rc == 0
    assert target.read_text().startswith("Minimize")
    assert json.loads(out_of(capsys)[0])["objective"] == 5


def test_verify_first_shell(capsys):
    assert dispatch(["verify", "lemma-first-shell", "--d", "3"]) == 0
    assert "no counterexample (57 subsets)" in out_of(capsys)[0]


def test_verify_front_growth(capsys):
    rc = dispatch(
        [
            "verify",
            "lemma-front-growth",
            "--d",
            "3",
            "--k",
            "1",
            "--sizes",
            "4..6",
            "--seed",
            "0",
        ]
    )
    assert rc == 0
    assert "exhaustive" in out_of(capsys)[0]


def test_verify_front_growth_requires_seed():
    with pytest.raises(SystemExit) as exc:
        dispatch(["verify", "lemma-front-growth", "--d", "3", "--k", "1", "--sizes", "4..6"])
    assert exc.value.code == 2


def test_verify_growth_l3(capsys):
    rc = dispatch(
        ["verify", "lemma-growth-l3", "--f", "3", "--k", "2", "--size-max", "6"]
    )
    assert rc == 0


def test_verify_sigma_json(capsys):
    assert dispatch(["verify", "sigma", "--f", "4", "--json"]) == 0
    doc = json.loads(out_of(capsys)[0])
    assert doc["counterexample"] is None
    assert doc["sequences_checked"] == 3905


def test_verify_hall_config(tmp_path, capsys):
    config = tmp_path / "hall.json"
    config.write_text(
        json.dumps(
            {"dimension": 3, "radius": 8, "f": 4, "a": [5, 6], "horizon": 6}
        )
    )
    rc = dispatch(
        ["verify", "hall", "--config", str(config), "--seed", "3", "--policies", "5"]
    )
    assert rc == 0
    assert "bound held" in out_of(capsys)[0]


def test_verify_hall_bad_config(tmp_path, capsys):
    config = tmp_path / "hall.json"
    config.write_text(json.dumps({"f": 4}))
    rc = dispatch(["verify", "hall", "--config", str(config), "--seed", "1"])
    assert rc == 1
    assert "bad hall config" in out_of(capsys)[1]


def test_verify_octant_deterministic(capsys):
    argv = ["verify", "octant", "--n", "2", "--policies", "5", "--seed", "1", "--json"]
    assert dispatch(argv) == 0
    first = out_of(capsys)[0]
    assert dispatch(argv) == 0
    assert first == out_of(capsys)[0]
    assert json.loads(first)["violations"] == []


def test_strategies_listing(capsys):
    assert dispatch(["strategies"]) == 0
    out, _ = out_of(capsys)
    for name in ("optimal-2d", "firewall", "greedy"):
        assert name in out
    assert dispatch(["strategies", "--json"]) == 0
    doc = json.loads(out_of(capsys)[0])
    assert {s["name"] for s in doc["strategies"]} == {
        "optimal-2d",
        "firewall",
        "greedy",
    }


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        dispatch(["frobnicate"])
    assert exc.value.code == 2
