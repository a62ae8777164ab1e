"""Deploy-then-spread fire dynamics on a lattice.

Each time step places at most f defenders, then the fire spreads from every
burnt vertex to every undefended neighbor. States are immutable values; all
operations return new states.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

from .lattice import Coord, LatticeSpec

class SimulationError(ValueError):
    """Base class for rule violations during play."""


class IllegalDefense(SimulationError):
    """Placement on a burnt or already-defended vertex."""


class BudgetViolation(SimulationError):
    """More placements in one step than the per-step budget allows."""


@dataclass(frozen=True)
class FireState:
    """Immutable snapshot of a burn in progress.

    `frontier` is the set of vertices that started burning on the most recent
    spread; for states produced by the dynamics every older burnt vertex has
    all its undefended neighbors burnt already, so spreading from the frontier
    alone reproduces the full-set spread formula. Hand-built states default to
    frontier == burnt, which makes no assumption.
    """

    spec: LatticeSpec
    burnt: frozenset[Coord]
    defended: frozenset[Coord]
    time: int
    frontier: frozenset[Coord]
    boundary_contaminated: bool = False

    @classmethod
    def from_outbreak(cls, spec: LatticeSpec, outbreak: Iterable[Coord]) -> "FireState":
        burnt = frozenset(outbreak)
        if not burnt:
            raise ValueError("outbreak must contain at least one vertex")
        for v in burnt:
            spec.require(v)
        contaminated = any(spec.is_guard_boundary(v) for v in burnt)
        return cls(spec, burnt, frozenset(), 0, burnt, contaminated)

    @classmethod
    def of(
        cls,
        spec: LatticeSpec,
        burnt: Iterable[Coord],
        defended: Iterable[Coord] = (),
        time: int = 0,
    ) -> "FireState":
        """Build an arbitrary (not necessarily reachable) state for analysis."""
        b = frozenset(burnt)
        d = frozenset(defended)
        for v in b | d:
            spec.require(v)
        if b & d:
            raise ValueError("burnt and defended sets overlap")
        return cls(spec, b, d, time, b, any(spec.is_guard_boundary(v) for v in b))


def deploy(state: FireState, placements: Sequence[Coord], f: int) -> FireState:
    """Place up to f defenders; anywhere unburnt and undefended is legal."""
    if f < 0:
        raise ValueError("budget must be nonnegative")
    if len(placements) > f:
        raise BudgetViolation(f"{len(placements)} placements exceed budget {f}")
    if len(set(placements)) != len(placements):
        raise BudgetViolation(f"duplicate placements in {placements}")
    for v in placements:
        state.spec.require(v)
        if v in state.burnt:
            raise IllegalDefense(f"{v} is already burnt")
        if v in state.defended:
            raise IllegalDefense(f"{v} is already defended")
    if not placements:
        return state
    contaminated = state.boundary_contaminated or any(
        state.spec.is_guard_boundary(v) for v in placements
    )
    return replace(
        state,
        defended=state.defended | frozenset(placements),
        boundary_contaminated=contaminated,
    )


def spread(state: FireState) -> FireState:
    """One spread: every undefended neighbor of a burnt vertex starts burning."""
    newly = set()
    for v in state.frontier:
        for u in state.spec.neighbors(v):
            if u not in state.burnt and u not in state.defended:
                newly.add(u)
    contaminated = state.boundary_contaminated or any(
        state.spec.is_guard_boundary(v) for v in newly
    )
    return replace(
        state,
        burnt=state.burnt | newly,
        frontier=frozenset(newly),
        time=state.time + 1,
        boundary_contaminated=contaminated,
    )


def step(state: FireState, placements: Sequence[Coord], f: int) -> FireState:
    return spread(deploy(state, placements, f))


def is_contained(state: FireState) -> bool:
    """True when no spread can ever add a vertex: N(burnt) is burnt or defended."""
    for v in state.frontier:
        for u in state.spec.neighbors(v):
            if u not in state.burnt and u not in state.defended:
                return False
    return True


def saved_vertices(state: FireState) -> frozenset[Coord]:
    """Vertices that are neither burnt nor defended and unreachable by fire.

    Reachability runs from the burnt set through undefended vertices only,
    complemented within the finite spec.
    """
    reached = set(state.burnt)
    stack = list(state.burnt)
    while stack:
        v = stack.pop()
        for u in state.spec.neighbors(v):
            if u not in reached and u not in state.defended:
                reached.add(u)
                stack.append(u)
    out = []
    for v in state.spec.vertices():
        if v not in reached and v not in state.defended:
            out.append(v)
    return frozenset(out)


# -- schedules ----------------------------------------------------------------


@dataclass(frozen=True)
class PlacementSchedule:
    """Per-step defender placements; step t uses steps[t-1]."""

    f: int
    steps: tuple[tuple[Coord, ...], ...]

    def __post_init__(self) -> None:
        if self.f < 0:
            raise ValueError("budget must be nonnegative")
        seen: set[Coord] = set()
        for t, group in enumerate(self.steps, start=1):
            if len(group) > self.f:
                raise BudgetViolation(
                    f"step {t} places {len(group)} > budget {self.f}"
                )
            for v in group:
                if v in seen:
                    raise BudgetViolation(f"{v} placed twice")
                seen.add(v)

    @classmethod
    def build(cls, f: int, steps: Iterable[Iterable[Coord]]) -> "PlacementSchedule":
        return cls(f, tuple(tuple(tuple(v) for v in group) for group in steps))

    def placements_at(self, t: int) -> tuple[Coord, ...]:
        if 1 <= t <= len(self.steps):
            return self.steps[t - 1]
        return ()

    def total_placed(self) -> int:
        return sum(len(g) for g in self.steps)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "f": self.f,
            "steps": [[list(v) for v in group] for group in self.steps],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "PlacementSchedule":
        return cls.build(
            int(doc["f"]),
            [[tuple(int(c) for c in v) for v in group] for group in doc["steps"]],
        )


# -- traces -------------------------------------------------------------------


@dataclass(frozen=True)
class StepRecord:
    """Accounting for a single step (step 0 is the outbreak itself).

    b_in_shell is |B_t|, the burnt vertices at distance exactly t at the end
    of step t; r_reserve is r_t, the defenders sitting in shells beyond t;
    p_in_next_shell and p_reserve_spent are the p_{t} / p_{<=t-1} counts from
    the reserve recurrence.
    """

    t: int
    placements: tuple[Coord, ...]
    p_in_next_shell: int
    p_reserve_spent: int
    b_in_shell: int
    r_reserve: int
    burnt_count: int
    defended_count: int


@dataclass(frozen=True)
class SimulationTrace:
    spec: LatticeSpec
    f: int
    horizon: int
    steps: tuple[StepRecord, ...]
    contained_at: Optional[int]
    boundary_contaminated: bool
    burnt_by_shell: tuple[int, ...]
    final_state: FireState = field(repr=False)

    def to_json(self) -> dict:
        from .lattice import spec_to_json

        return {
            "schema": 1,
            "spec": spec_to_json(self.spec),
            "f": self.f,
            "horizon": self.horizon,
            "contained_at": self.contained_at,
            "boundary_contaminated": self.boundary_contaminated,
            "burnt_by_shell": list(self.burnt_by_shell),
            "burnt_total": len(self.final_state.burnt),
            "defended_total": len(self.final_state.defended),
            "steps": [
                {
                    "t": r.t,
                    "placements": [list(v) for v in r.placements],
                    "p_in_next_shell": r.p_in_next_shell,
                    "p_reserve_spent": r.p_reserve_spent,
                    "b_in_shell": r.b_in_shell,
                    "r_reserve": r.r_reserve,
                    "burnt_count": r.burnt_count,
                    "defended_count": r.defended_count,
                }
                for r in self.steps
            ],
        }


def run(
    spec: LatticeSpec,
    outbreak: Iterable[Coord],
    schedule: Optional[PlacementSchedule],
    f: int,
    horizon: int,
) -> SimulationTrace:
    """Simulate `horizon` steps and record the shell/reserve accounting.

    The reserve recurrence r_t <= r_{t-1} + f - p_t - p_{<=t-1} is asserted on
    every step; it is an accounting identity and a violation means a bug.
    """
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    if schedule is not None and schedule.f > f:
        raise BudgetViolation(f"schedule budget {schedule.f} exceeds {f}")
    state = FireState.from_outbreak(spec, outbreak)
    dist = spec.distance
    placed: list[tuple[int, Coord]] = []  # (step placed, vertex)

    def record(t: int, placements: tuple[Coord, ...]) -> StepRecord:
        p_next = sum(1 for v in placements if dist(v) == t)
        p_spent = sum(1 for s, v in placed if s < t and dist(v) == t)
        b_t = sum(1 for v in state.burnt if dist(v) == t)
        r_t = sum(1 for _, v in placed if dist(v) > t)
        return StepRecord(
            t,
            placements,
            p_next,
            p_spent,
            b_t,
            r_t,
            len(state.burnt),
            len(state.defended),
        )

    records = [record(0, ())]
    contained_at: Optional[int] = 0 if is_contained(state) else None
    for t in range(1, horizon + 1):
        placements = schedule.placements_at(t) if schedule else ()
        state = deploy(state, placements, f)
        placed.extend((t, v) for v in placements)
        state = spread(state)
        rec = record(t, placements)
        prev = records[-1]
        assert rec.r_reserve <= prev.r_reserve + f - rec.p_in_next_shell - rec.p_reserve_spent
        records.append(rec)
        if contained_at is None and is_contained(state):
            contained_at = t
    max_shell = max((dist(v) for v in state.burnt), default=0)
    by_shell = [0] * (max_shell + 1)
    for v in state.burnt:
        by_shell[dist(v)] += 1
    return SimulationTrace(
        spec,
        f,
        horizon,
        tuple(records),
        contained_at,
        state.boundary_contaminated,
        tuple(by_shell),
        state,
    )


# -- random policies ----------------------------------------------------------


def random_policy(
    spec: LatticeSpec,
    f: int,
    seed: int,
    horizon: int,
    outbreak: Optional[Iterable[Coord]] = None,
) -> PlacementSchedule:
    """A legal, deterministic-per-seed schedule of up to f placements per step.

    Three seed-dependent temperaments: pure scatter within the fire's reach,
    frontier hugging, and a mix with occasional reserves. Legality (never on a
    burnt vertex) is guaranteed by simulating while generating.
    """
    rng = random.Random(seed)
    state = FireState.from_outbreak(spec, outbreak if outbreak is not None else [spec.root])
    mode = seed % 3
    steps: list[tuple[Coord, ...]] = []
    for t in range(1, horizon + 1):
        adjacent = sorted(
            {
                u
                for v in state.frontier
                for u in spec.neighbors(v)
                if u not in state.burnt and u not in state.defended
            }
        )
        max_dist = spec.distance(max(state.burnt, key=spec.distance)) if state.burnt else 0
        pool_far = sorted(
            v
            for k in range(max_dist + 1, min(max_dist + 3, horizon + 2))
            for v in spec.sphere(k)
            if v not in state.defended
        )
        if mode == 0:
            pool = adjacent + pool_far
        elif mode == 1:
            pool = adjacent or pool_far
        else:
            pool = adjacent + (pool_far if rng.random() < 0.5 else [])
        # adjacent and pool_far overlap one shell beyond the front; sampling
        # must never return the same vertex twice
        pool = sorted(set(pool))
        count = min(f, len(pool), rng.randint(0, f))
        chosen = tuple(sorted(rng.sample(pool, count))) if count else ()
        state = step(state, chosen, f)
        steps.append(chosen)
    return PlacementSchedule.build(f, steps)
