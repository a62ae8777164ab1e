"""One-time derivation of the stored optimal two-dimensional schedule.

Solves the exact minimum-burn program with an external MILP backend, with two
extra row groups pinning the interesting shape: no defenses after step 8 and
no burn growth at step 9 (which, with the spread rows, forces containment by
step 8).  The result is simulated, checked (18 burnt, contained at 8, budget
2), and frozen into src/firebreak/data/optimal_2d_schedule.json.

Run: python3 scripts/bootstrap_schedule.py [--radius 6 --horizon 9 --budget 2]
"""
from __future__ import annotations

import argparse
import json
import pathlib
import sys

import numpy as np
from scipy import sparse
from scipy.optimize import LinearConstraint, milp

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from firebreak.lattice import box_lattice
from firebreak.optimize.model import build_min_burn_model, var_name
from firebreak.simulation import FireState, PlacementSchedule, is_contained, run


def milp_solve(model, contain_by: int):
    names = model.variable_names()
    index = {name: i for i, name in enumerate(names)}
    rows, cols, vals, lo, hi = [], [], [], [], []

    def add_row(terms, sense, rhs):
        r = len(lo)
        for coef, name in terms:
            rows.append(r)
            cols.append(index[name])
            vals.append(coef)
        if sense == ">=":
            lo.append(rhs)
            hi.append(np.inf)
        elif sense == "<=":
            lo.append(-np.inf)
            hi.append(rhs)
        else:
            lo.append(rhs)
            hi.append(rhs)

    for row in model.constraints:
        add_row(row.terms, row.sense, row.rhs)
    for t in range(contain_by + 1, model.horizon + 1):
        terms = []
        for cell in model.cells:
            terms.append((1, var_name("d", cell, t)))
            terms.append((-1, var_name("d", cell, t - 1)))
        add_row(terms, "<=", 0)
        for cell in model.cells:
            add_row(
                [(1, var_name("b", cell, t)), (-1, var_name("b", cell, t - 1))],
                "<=",
                0,
            )

    n = len(names)
    c = np.zeros(n)
    for coef, name in model.objective_terms:
        c[index[name]] += coef
    A = sparse.csr_matrix((vals, (rows, cols)), shape=(len(lo), n))
    res = milp(
        c,
        constraints=LinearConstraint(A, np.array(lo), np.array(hi)),
        integrality=np.ones(n),
        bounds=(0, 1),
        options={"disp": True},
    )
    if res.status != 0:
        raise SystemExit(f"milp failed: status {res.status} {res.message}")
    values = {name: int(round(res.x[index[name]])) for name in names}
    return int(round(res.fun)), values


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--radius", type=int, default=6)
    ap.add_argument("--horizon", type=int, default=9)
    ap.add_argument("--budget", type=int, default=2)
    ap.add_argument("--contain-by", type=int, default=8)
    ap.add_argument("--out", default="src/firebreak/data/optimal_2d_schedule.json")
    ap.add_argument("--dry-run", action="store_true")
    args = ap.parse_args()

    model = build_min_burn_model(args.radius, args.horizon, args.budget)
    optimum, values = milp_solve(model, args.contain_by)
    print("optimum:", optimum)

    steps = []
    for t in range(1, model.horizon + 1):
        placed = [
            cell
            for cell in model.cells
            if values[var_name("d", cell, t)] == 1
            and values[var_name("d", cell, t - 1)] == 0
        ]
        steps.append(placed)
    while steps and not steps[-1]:
        steps.pop()
    schedule = PlacementSchedule.build(args.budget, steps)

    spec = box_lattice(2, args.radius)
    trace = run(spec, [spec.root], schedule, args.budget, args.horizon)
    burnt = len(trace.final_state.burnt)
    print("simulated burnt:", burnt)
    print("contained at:", trace.contained_at)
    print("total placements:", schedule.total_placed())
    assert burnt == optimum, (burnt, optimum)
    assert trace.contained_at is not None and trace.contained_at <= args.contain_by
    assert is_contained(trace.final_state)

    doc = schedule.to_json()
    doc["burnt_total"] = burnt
    doc["contained_at"] = trace.contained_at
    doc["note"] = (
        "exact optimum of the minimum-burn program on the radius-6 box, "
        "horizon 9, two defenders per step; regenerate with "
        "`firebreak solve min-burn` or this script"
    )
    if args.dry_run:
        print(json.dumps(doc, indent=2))
    else:
        out = pathlib.Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(doc, indent=2) + "\n")
        print("wrote", out)


if __name__ == "__main__":
    main()
