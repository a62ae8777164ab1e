import re

import pytest

from firebreak.optimize import (
    SearchBudget,
    Solution,
    assignment_from_schedule,
    build_deadline_model,
    build_min_burn_model,
    export_lp,
    extract_strategy,
    schedule_from_assignment,
    solve,
    verify_solution,
)
from firebreak.optimize.model import LINE_WIDTH, var_name
from firebreak.simulation import PlacementSchedule, run

from _oracles import dp_opt, exhaustive_opt


# --- model shape ---------------------------------------------------------


def test_variable_count_full_size():
    model = build_min_burn_model(6, 9, 2)
    assert model.variable_count == 2 * 13 * 13 * 10 == 3380
    assert len(model.variable_names()) == 3380


def test_variable_count_smallest():
    model = build_min_burn_model(1, 1, 1)
    assert model.variable_count == 2 * 9 * 2 == 36


def test_model_validation():
    with pytest.raises(ValueError):
        build_min_burn_model(0, 1, 1)
    with pytest.raises(ValueError):
        build_min_burn_model(1, 0, 1)
    with pytest.raises(ValueError):
        build_min_burn_model(1, 1, -1)
    with pytest.raises(ValueError):
        build_deadline_model(2, 3, 1, 4)
    with pytest.raises(ValueError):
        build_deadline_model(2, 3, 1, -1)
    # a zero budget is allowed: the program then scores free spread
    build_min_burn_model(1, 1, 0)


def test_constraint_families_present():
    model = build_min_burn_model(1, 2, 1)
    kinds = {c.kind for c in model.constraints}
    assert kinds == {
        "init_burn",
        "init_defend",
        "spread",
        "no_defend_burnt",
        "burn_monotone",
        "defend_monotone",
        "budget",
    }
    labels = [c.label for c in model.constraints]
    assert "initburn_0_0" in labels
    assert any(l.startswith("spread_t1_") for l in labels)
    deadline = build_deadline_model(1, 2, 1, 1)
    assert "nolate_t2" in [c.label for c in deadline.constraints]


# --- oracle layering -----------------------------------------------------
# exhaustive_opt enumerates every legal play on the radius-1 box; dp_opt
# must agree with it before it is trusted as the reference for the solver.


@pytest.mark.parametrize("horizon", [1, 2])
@pytest.mark.parametrize("f", [0, 1, 2])
def test_dp_oracle_matches_exhaustive(horizon, f):
    assert dp_opt(1, horizon, f) == exhaustive_opt(1, horizon, f)


@pytest.mark.parametrize("deadline", [0, 1, 2])
def test_dp_oracle_matches_exhaustive_deadline(deadline):
    got = dp_opt(1, 2, 1, deadline=deadline)
    assert got == exhaustive_opt(1, 2, 1, deadline=deadline)


def test_oracle_hand_values():
    # radius 1, one step: the origin plus its four unguarded neighbours
    assert exhaustive_opt(1, 1, 0) == 5
    assert exhaustive_opt(1, 1, 1) == 4
    assert exhaustive_opt(1, 1, 2) == 3
    # two steps, two defenders per step: four cells burn and no fewer,
    # since the first spread reaches at least two edge cells whose corner
    # neighbours outnumber the second wave of defenders
    assert exhaustive_opt(1, 2, 2) == 4
    # without defense the whole boundary of the box is reached
    assert exhaustive_opt(1, 1, 0, deadline=0) == 4


# --- solver vs oracle ----------------------------------------------------


@pytest.mark.parametrize(
    "radius,horizon,f",
    [(1, t, f) for t in (1, 2, 3, 4) for f in (0, 1, 2)]
    + [(2, t, f) for t in (1, 2, 3) for f in (0, 1, 2)]
    + [(2, 4, 0), (2, 4, 1)],
)
def test_solver_matches_oracle_min_burn(radius, horizon, f):
    model = build_min_burn_model(radius, horizon, f)
    sol = solve(model)
    assert sol.status == "optimal"
    assert sol.objective_value == dp_opt(radius, horizon, f)
    assert verify_solution(model, sol.assignment)


@pytest.mark.parametrize(
    "radius,horizon,f,deadline",
    [(1, 2, 1, 1), (1, 3, 1, 2), (2, 3, 2, 2), (2, 4, 1, 2)],
)
def test_solver_matches_oracle_deadline(radius, horizon, f, deadline):
    model = build_deadline_model(radius, horizon, f, deadline)
    sol = solve(model)
    assert sol.status == "optimal"
    assert sol.objective_value == dp_opt(radius, horizon, f, deadline=deadline)
    assert verify_solution(model, sol.assignment)


@pytest.mark.parametrize(
    "burnt0,defended0",
    [
        (((0, 0), (1, 0)), ()),
        (((0, 0), (1, 0), (0, 1)), ((-1, 0),)),
        (((0, 0),), ((0, 1), (1, 0))),
    ],
)
def test_solver_matches_oracle_mid_game(burnt0, defended0):
    # positions handed over mid-play: several burnt cells, standing defenses
    model = build_min_burn_model(2, 3, 1, burnt0=burnt0, defended0=defended0)
    sol = solve(model)
    assert sol.status == "optimal"
    assert sol.objective_value == dp_opt(
        2, 3, 1, initial_burnt=burnt0, initial_defended=defended0
    )
    assert verify_solution(model, sol.assignment)


def test_initial_state_validation():
    with pytest.raises(ValueError):
        build_min_burn_model(2, 3, 1, burnt0=())
    with pytest.raises(ValueError):
        build_min_burn_model(2, 3, 1, burnt0=((0, 0),), defended0=((0, 0),))
    with pytest.raises(ValueError):
        build_min_burn_model(2, 3, 1, burnt0=((3, 0),))


def test_initial_state_in_rows_and_assignment():
    model = build_min_burn_model(2, 2, 1, burnt0=((1, 1),), defended0=((0, 0),))
    by_label = {c.label: c for c in model.constraints}
    assert by_label["initburn_1_1"].rhs == 1
    assert by_label["initburn_0_0"].rhs == 0
    assert by_label["initdef_0_0"].rhs == 1
    assignment = assignment_from_schedule(model, PlacementSchedule.build(0, []))
    assert assignment[var_name("d", (0, 0), 0)] == 1
    assert assignment[var_name("b", (1, 1), 0)] == 1
    assert verify_solution(model, assignment)


def test_budget_monotonicity():
    values = [
        solve(build_min_burn_model(2, 3, f)).objective_value for f in range(4)
    ]
    assert values == sorted(values, reverse=True)
    # free spread for three steps reaches every cell of the radius-2 box
    # except the four corners, which sit at grid distance four
    assert values[0] == 21


def test_deadline_zero_full_size():
    # free spread from the origin for nine steps touches the radius-6 ring
    # in the 28 cells with |x| = 6, |y| <= 3 or |y| = 6, |x| <= 3
    model = build_deadline_model(6, 9, 2, 0)
    sol = solve(model)
    assert sol.status == "optimal"
    assert sol.objective_value == 28


def test_workers_agree_with_sequential():
    model = build_min_burn_model(2, 4, 2)
    seq = solve(model)
    par = solve(model, workers=2)
    assert par.status == "optimal"
    assert par.objective_value == seq.objective_value
    assert extract_strategy(par, model).steps == extract_strategy(seq, model).steps


def test_node_limit_yields_bound():
    model = build_min_burn_model(2, 4, 2)
    sol = solve(model, SearchBudget(node_limit=50))
    assert sol.status == "bound"
    assert sol.nodes <= 50
    assert sol.lower_bound <= 8 <= sol.objective_value
    # the incumbent is still a legal, simulated plan
    assert verify_solution(model, sol.assignment)


def test_time_limit_yields_bound():
    model = build_min_burn_model(3, 6, 1)
    sol = solve(model, SearchBudget(time_limit=0.05))
    assert sol.status in {"bound", "optimal"}
    assert sol.lower_bound <= sol.objective_value
    assert verify_solution(model, sol.assignment)


def test_warm_start_used():
    model = build_min_burn_model(2, 3, 2)
    best = extract_strategy(solve(model), model)
    sol = solve(model, warm_start=best)
    assert sol.status == "optimal"
    assert sol.objective_value == 8
    with pytest.raises(ValueError):
        over = PlacementSchedule.build(3, [[(0, 1), (1, 0), (0, -1)]])
        solve(model, warm_start=over)


# --- assignments, verification, extraction -------------------------------


def test_assignment_round_trip():
    model = build_min_burn_model(2, 3, 2)
    schedule = PlacementSchedule.build(2, [[(0, 2), (1, 1)], [(-1, -1)]])
    assignment = assignment_from_schedule(model, schedule)
    back = schedule_from_assignment(model, assignment)
    taken = [schedule.placements_at(t) for t in range(1, 4)]
    assert [back.placements_at(t) for t in range(1, 4)] == taken
    assert verify_solution(model, assignment)


def test_assignment_rejects_over_budget():
    model = build_min_burn_model(2, 3, 1)
    schedule = PlacementSchedule.build(2, [[(0, 2), (1, 1)]])
    with pytest.raises(ValueError):
        assignment_from_schedule(model, schedule)


def test_verify_rejects_defense_on_burnt():
    model = build_min_burn_model(1, 1, 1)
    assignment = assignment_from_schedule(model, PlacementSchedule.build(1, []))
    bad = dict(assignment)
    bad[var_name("d", (0, 0), 1)] = 1
    assert verify_solution(model, bad) is False


def test_verify_rejects_nonbinary_and_missing():
    model = build_min_burn_model(1, 1, 0)
    assignment = assignment_from_schedule(model, PlacementSchedule.build(0, []))
    ok = verify_solution(model, assignment)
    assert ok is True
    frac = dict(assignment)
    frac[var_name("b", (1, 1), 1)] = 0.5
    assert verify_solution(model, frac) is False
    short = dict(assignment)
    del short[var_name("b", (0, 0), 0)]
    assert verify_solution(model, short) is False


def test_verify_rejects_missed_spread():
    # claiming the fire stops on its own violates the spread rows
    model = build_min_burn_model(1, 2, 0)
    assignment = assignment_from_schedule(model, PlacementSchedule.build(0, []))
    lazy = {
        name: (
            value
            if not name.startswith("b_") or name.endswith("_0")
            else assignment[name.rsplit("_", 1)[0] + "_0"]
        )
        for name, value in assignment.items()
    }
    assert verify_solution(model, lazy) is False


def test_extract_requires_assignment():
    model = build_min_burn_model(1, 1, 0)
    empty = Solution("bound", 5, 0, None, 1, 0.0)
    with pytest.raises(ValueError):
        extract_strategy(empty, model)


def test_solution_json_embeds_schedule():
    model = build_min_burn_model(1, 2, 1)
    sol = solve(model)
    doc = sol.to_json(model)
    assert doc["status"] == "optimal"
    assert doc["objective"] == sol.objective_value
    assert doc["schedule"]["f"] == 1
    replay = PlacementSchedule.from_json(doc["schedule"])
    trace = run(model.spec(), [(0, 0)], replay, 1, 2)
    assert len(trace.final_state.burnt) == sol.objective_value


# --- solutions replay through the simulator ------------------------------


@pytest.mark.parametrize("radius,horizon,f", [(1, 2, 1), (2, 3, 2), (2, 4, 2)])
def test_optimal_schedule_replays_to_value(radius, horizon, f):
    model = build_min_burn_model(radius, horizon, f)
    sol = solve(model)
    schedule = extract_strategy(sol, model)
    trace = run(model.spec(), [(0, 0)], schedule, f, horizon)
    assert len(trace.final_state.burnt) == sol.objective_value


# --- LP export -----------------------------------------------------------


def test_export_lp_structure():
    model = build_min_burn_model(1, 1, 1)
    text = export_lp(model)
    lines = text.splitlines()
    assert lines[0] == "Minimize"
    assert "Subject To" in lines
    assert "Binaries" in lines
    assert lines[-1] == "End"
    # negative coordinates use an m prefix so names stay LP-safe
    assert "b_m1_m1_1" in text
    assert re.search(r"^\s*initburn_0_0: b_0_0_0 = 1$", text, re.M)
    body = text[text.index("Minimize") : text.index("Subject To")]
    assert body.count("b_") == 9  # one objective term per cell at the horizon
    binaries = text[text.index("Binaries") : text.index("End")].split()
    assert len(set(binaries) - {"Binaries"}) == 36


def test_export_lp_line_width_and_round_trip_names():
    model = build_min_burn_model(6, 9, 2)
    text = export_lp(model)
    assert all(len(line) <= LINE_WIDTH for line in text.splitlines())
    mentioned = set(re.findall(r"[bd]_m?\d+_m?\d+_\d+", text))
    assert mentioned == set(model.variable_names())


def test_lp_rows_match_model_evaluation():
    # every row printed must evaluate consistently with the model rows
    model = build_min_burn_model(1, 2, 1)
    sol = solve(model)
    for row in model.constraints:
        total = sum(c * sol.assignment[n] for c, n in row.terms)
        if row.sense == ">=":
            assert total >= row.rhs
        elif row.sense == "<=":
            assert total <= row.rhs
        else:
            assert total == row.rhs
