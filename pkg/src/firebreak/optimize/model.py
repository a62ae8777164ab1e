"""0-1 program construction for fire containment on the (2l+1) x (2l+1) box.

Binary variables b_{x,t} (burnt at or before t) and d_{x,t} (defended at or
before t) for every cell x and 0 <= t <= T.  The relaxation direction is
one-sided: the rows force fire to spread but permit extra combustion, so a
simulated schedule always burns at most what its b-variables claim.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from ..lattice import Coord, LatticeSpec, box_lattice
from ..simulation import FireState, PlacementSchedule, deploy, spread

LINE_WIDTH = 255


@dataclass(frozen=True)
class MinTotalBurn:
    """Minimize the number of cells burnt by the horizon."""


@dataclass(frozen=True)
class BoundaryReach:
    """Minimize burnt cells on the outer ring, defenses stopping at `deadline`."""

    deadline: int


@dataclass(frozen=True)
class Constraint:
    """One inequality row: sum of (coefficient, variable) terms vs rhs."""

    kind: str
    label: str
    terms: tuple[tuple[int, str], ...]
    sense: str  # ">=", "<=", "="
    rhs: int

    def evaluate(self, assignment: Mapping[str, int]) -> bool:
        lhs = sum(c * assignment[name] for c, name in self.terms)
        if self.sense == ">=":
            return lhs >= self.rhs
        if self.sense == "<=":
            return lhs <= self.rhs
        return lhs == self.rhs


def _cname(value: int) -> str:
    return f"m{-value}" if value < 0 else str(value)


def var_name(kind: str, cell: Coord, t: int) -> str:
    x, y = cell
    return f"{kind}_{_cname(x)}_{_cname(y)}_{t}"


@dataclass(frozen=True)
class IpModel:
    radius: int
    horizon: int
    budget: int
    objective: MinTotalBurn | BoundaryReach
    cells: tuple[Coord, ...]
    constraints: tuple[Constraint, ...]
    objective_terms: tuple[tuple[int, str], ...] = field(repr=False)
    burnt0: tuple[Coord, ...] = ((0, 0),)
    defended0: tuple[Coord, ...] = ()

    @property
    def variable_count(self) -> int:
        return 2 * len(self.cells) * (self.horizon + 1)

    def variable_names(self) -> list[str]:
        names = []
        for kind in ("b", "d"):
            for t in range(self.horizon + 1):
                for cell in self.cells:
                    names.append(var_name(kind, cell, t))
        return names

    def spec(self) -> LatticeSpec:
        return box_lattice(2, self.radius)


def _build(
    radius: int,
    horizon: int,
    budget: int,
    objective: MinTotalBurn | BoundaryReach,
    burnt0: Optional[Sequence[Coord]],
    defended0: Optional[Sequence[Coord]],
) -> IpModel:
    if radius < 1:
        raise ValueError("radius must be >= 1")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    spec = box_lattice(2, radius)
    cells = tuple(spec.vertices())
    burnt_set = frozenset(burnt0) if burnt0 is not None else frozenset([spec.root])
    defended_set = frozenset(defended0) if defended0 is not None else frozenset()
    if not burnt_set:
        raise ValueError("initial burnt set must be nonempty")
    for v in burnt_set | defended_set:
        spec.require(v)
    if burnt_set & defended_set:
        raise ValueError("initial burnt and defended sets overlap")
    rows: list[Constraint] = []

    for cell in cells:
        label = f"initburn_{_cname(cell[0])}_{_cname(cell[1])}"
        rows.append(
            Constraint(
                "init_burn",
                label,
                ((1, var_name("b", cell, 0)),),
                "=",
                1 if cell in burnt_set else 0,
            )
        )
    for cell in cells:
        label = f"initdef_{_cname(cell[0])}_{_cname(cell[1])}"
        rows.append(
            Constraint(
                "init_defend",
                label,
                ((1, var_name("d", cell, 0)),),
                "=",
                1 if cell in defended_set else 0,
            )
        )

    for t in range(1, horizon + 1):
        for cell in cells:
            cx, cy = _cname(cell[0]), _cname(cell[1])
            for nbr in spec.neighbors(cell):
                rows.append(
                    Constraint(
                        "spread",
                        f"spread_t{t}_{cx}_{cy}_from_{_cname(nbr[0])}_{_cname(nbr[1])}",
                        (
                            (1, var_name("b", cell, t)),
                            (1, var_name("d", cell, t)),
                            (-1, var_name("b", nbr, t - 1)),
                        ),
                        ">=",
                        0,
                    )
                )

    for t in range(horizon + 1):
        for cell in cells:
            cx, cy = _cname(cell[0]), _cname(cell[1])
            rows.append(
                Constraint(
                    "no_defend_burnt",
                    f"ndb_t{t}_{cx}_{cy}",
                    ((1, var_name("b", cell, t)), (1, var_name("d", cell, t))),
                    "<=",
                    1,
                )
            )

    for t in range(1, horizon + 1):
        for cell in cells:
            cx, cy = _cname(cell[0]), _cname(cell[1])
            rows.append(
                Constraint(
                    "burn_monotone",
                    f"burnmono_t{t}_{cx}_{cy}",
                    ((1, var_name("b", cell, t)), (-1, var_name("b", cell, t - 1))),
                    ">=",
                    0,
                )
            )
            rows.append(
                Constraint(
                    "defend_monotone",
                    f"defmono_t{t}_{cx}_{cy}",
                    ((1, var_name("d", cell, t)), (-1, var_name("d", cell, t - 1))),
                    ">=",
                    0,
                )
            )

    deadline = objective.deadline if isinstance(objective, BoundaryReach) else horizon
    for t in range(1, horizon + 1):
        terms = []
        for cell in cells:
            terms.append((1, var_name("d", cell, t)))
            terms.append((-1, var_name("d", cell, t - 1)))
        late = t > deadline
        rows.append(
            Constraint(
                "late_budget" if late else "budget",
                f"{'nolate' if late else 'budget'}_t{t}",
                tuple(terms),
                "<=",
                0 if late else budget,
            )
        )

    if isinstance(objective, BoundaryReach):
        ring = [c for c in cells if max(abs(c[0]), abs(c[1])) == radius]
        obj = tuple((1, var_name("b", cell, horizon)) for cell in ring)
    else:
        obj = tuple((1, var_name("b", cell, horizon)) for cell in cells)

    return IpModel(
        radius,
        horizon,
        budget,
        objective,
        cells,
        tuple(rows),
        obj,
        tuple(sorted(burnt_set)),
        tuple(sorted(defended_set)),
    )


def build_min_burn_model(
    radius: int,
    horizon: int,
    budget: int,
    *,
    burnt0: Optional[Sequence[Coord]] = None,
    defended0: Optional[Sequence[Coord]] = None,
) -> IpModel:
    """Program minimizing total burnt cells at the horizon.

    `burnt0`/`defended0` seed a mid-game position; the default is a single
    fire at the origin and no defenses.
    """
    return _build(radius, horizon, budget, MinTotalBurn(), burnt0, defended0)


def build_deadline_model(
    radius: int,
    horizon: int,
    budget: int,
    deadline: int,
    *,
    burnt0: Optional[Sequence[Coord]] = None,
    defended0: Optional[Sequence[Coord]] = None,
) -> IpModel:
    """Program minimizing outer-ring burns with no defenses after `deadline`."""
    if deadline < 0 or deadline > horizon:
        raise ValueError("deadline must lie within the horizon")
    return _build(radius, horizon, budget, BoundaryReach(deadline), burnt0, defended0)


# -- solutions ----------------------------------------------------------------


@dataclass(frozen=True)
class Solution:
    """Search outcome: exact optimum, or best incumbent plus a sound bound."""

    status: str  # "optimal" | "bound" | "infeasible"
    objective_value: Optional[int]
    lower_bound: int
    assignment: Optional[dict[str, int]]
    nodes: int
    wall_time: float

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"

    def to_json(self, model: Optional[IpModel] = None) -> dict:
        doc: dict = {
            "schema": 1,
            "status": self.status,
            "objective": self.objective_value,
            "lower_bound": self.lower_bound,
            "nodes": self.nodes,
            "wall_time": round(self.wall_time, 3),
        }
        if model is not None and self.assignment is not None:
            doc["schedule"] = extract_strategy(self, model).to_json()
        return doc


def assignment_from_schedule(model: IpModel, schedule: PlacementSchedule) -> dict[str, int]:
    """Exact-dynamics assignment: burnt/defended indicators per step."""
    if schedule.f > model.budget:
        raise ValueError("schedule exceeds the model budget")
    spec = model.spec()
    state = FireState.of(spec, model.burnt0, model.defended0)
    values: dict[str, int] = {}

    def snapshot(t: int) -> None:
        for cell in model.cells:
            values[var_name("b", cell, t)] = 1 if cell in state.burnt else 0
            values[var_name("d", cell, t)] = 1 if cell in state.defended else 0

    snapshot(0)
    for t in range(1, model.horizon + 1):
        state = spread(deploy(state, schedule.placements_at(t), model.budget))
        snapshot(t)
    return values


def schedule_from_assignment(model: IpModel, assignment: Mapping[str, int]) -> PlacementSchedule:
    """Read defense increments d_{x,t} - d_{x,t-1} into a schedule."""
    steps: list[tuple[Coord, ...]] = []
    for t in range(1, model.horizon + 1):
        placed = tuple(
            cell
            for cell in model.cells
            if assignment[var_name("d", cell, t)] == 1
            and assignment[var_name("d", cell, t - 1)] == 0
        )
        steps.append(placed)
    return PlacementSchedule.build(model.budget, steps)


def extract_strategy(solution: Solution, model: IpModel) -> PlacementSchedule:
    if solution.assignment is None:
        raise ValueError("solution carries no assignment to extract")
    return schedule_from_assignment(model, solution.assignment)


def objective_value(model: IpModel, assignment: Mapping[str, int]) -> int:
    return sum(c * assignment[name] for c, name in model.objective_terms)


def verify_solution(model: IpModel, assignment: Mapping[str, int]) -> bool:
    """Check every row, binariness, and the simulation cross-check."""
    try:
        for name in model.variable_names():
            if assignment[name] not in (0, 1):
                return False
        for row in model.constraints:
            if not row.evaluate(assignment):
                return False
        schedule = schedule_from_assignment(model, assignment)
        spec = model.spec()
        state = FireState.of(spec, model.burnt0, model.defended0)
        for t in range(1, model.horizon + 1):
            state = spread(deploy(state, schedule.placements_at(t), model.budget))
            claimed = sum(
                assignment[var_name("b", cell, t)] for cell in model.cells
            )
            if len(state.burnt) > claimed:
                return False
    except (KeyError, ValueError):
        return False
    return True


# -- plain-text export --------------------------------------------------------


def _format_terms(terms: Sequence[tuple[int, str]]) -> str:
    parts: list[str] = []
    for i, (coef, name) in enumerate(terms):
        if coef >= 0:
            sign = "+ " if i else ""
        else:
            sign = "- "
        mag = "" if abs(coef) == 1 else f"{abs(coef)} "
        parts.append(f"{sign}{mag}{name}")
    return " ".join(parts)


def _wrap(prefix: str, body: str, out: list[str]) -> None:
    line = prefix
    for token in body.split(" "):
        if len(line) + 1 + len(token) > LINE_WIDTH:
            out.append(line)
            line = "  " + token
        else:
            line = f"{line} {token}" if line else token
    out.append(line)


def export_lp(model: IpModel) -> str:
    """Emit the model in the plain-text LP interchange format, byte-stable."""
    out: list[str] = ["Minimize"]
    _wrap(" obj:", _format_terms(model.objective_terms), out)
    out.append("Subject To")
    for row in model.constraints:
        _wrap(f" {row.label}:", f"{_format_terms(row.terms)} {row.sense} {row.rhs}", out)
    out.append("Binaries")
    _wrap("", " ".join(model.variable_names()), out)
    out.append("End")
    return "\n".join(out) + "\n"
