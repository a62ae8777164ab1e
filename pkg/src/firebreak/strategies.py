"""Named defense strategies: the stored optimal 2D schedule, corner fire
walls in grid powers, and a greedy frontier baseline."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Iterable, Optional

from .lattice import Coord, LatticeSpec, path_grid
from .simulation import FireState, PlacementSchedule, step

_OPTIMAL_2D_RESOURCE = "optimal_2d_schedule.json"


def optimal_2d_strategy() -> PlacementSchedule:
    """The stored two-defender schedule that loses 18 vertices in the plane.

    Shipped as data because the optimum placements were produced by the
    optimizer; `solve min-burn --l 6 --T 9 --f 2` regenerates an equivalent
    schedule from scratch.
    """
    text = resources.files("firebreak.data").joinpath(_OPTIMAL_2D_RESOURCE).read_text()
    return PlacementSchedule.from_json(json.loads(text))


@dataclass(frozen=True)
class FirewallPlan:
    """A corner wall in P_n^3: defend one wall vertex per step, in turn.

    `predicted_saved` counts the vertices kept unburnt behind the wall, wall
    included: (k+1)(k+2)(k+3)/6.  The strictly-saved interior (defenders
    excluded) is k(k+1)(k+2)/6 and the wall itself has (k+1)(k+2)/2 vertices.
    """

    n: int
    k: int
    wall: tuple[Coord, ...]
    schedule: PlacementSchedule
    predicted_saved: int

    @property
    def predicted_strict_saved(self) -> int:
        return self.k * (self.k + 1) * (self.k + 2) // 6

    @property
    def wall_size(self) -> int:
        return (self.k + 1) * (self.k + 2) // 2


def firewall_strategy(n: int) -> FirewallPlan:
    """Plan the deepest completable corner wall in P_n^3 with one defender.

    The wall is the shell at l1 distance k from the far corner (n-1, n-1, n-1);
    every wall vertex has coordinate sum 3(n-1) - k, so the fire reaches the
    wall on spread 3(n-1) - k exactly, leaving 3(n-1) - k deploy slots.  The
    largest completable k therefore satisfies (k+1)(k+2)/2 <= 3(n-1) - k.
    For degenerate small n no wall is completable and k = 0 stands for the
    bare far corner.
    """
    if n < 1:
        raise ValueError("side must be positive")
    k = 0
    while (k + 2) * (k + 3) // 2 <= 3 * (n - 1) - (k + 1):
        k += 1
    spec = path_grid(3, n)
    # every grid vertex with coordinate sum s is at distance s from the root
    # and at distance 3(n-1) - s from the far corner
    wall_sum = 3 * (n - 1) - k
    wall = spec.sphere(wall_sum).members
    completable = (k + 1) * (k + 2) // 2 <= wall_sum and spec.root not in wall
    steps: Iterable[Iterable[Coord]] = ([v] for v in wall) if completable else ()
    schedule = PlacementSchedule.build(1, steps)
    predicted = (k + 1) * (k + 2) * (k + 3) // 6
    return FirewallPlan(n, k, wall if completable else (), schedule, predicted)


def greedy_frontier_policy(
    spec: LatticeSpec,
    f: int,
    horizon: int,
    outbreak: Optional[Iterable[Coord]] = None,
) -> PlacementSchedule:
    """Defend the first f fire-adjacent vertices each step, lexicographically."""
    state = FireState.from_outbreak(
        spec, outbreak if outbreak is not None else [spec.root]
    )
    steps = []
    for _ in range(horizon):
        adjacent = sorted(
            {
                u
                for v in state.frontier
                for u in spec.neighbors(v)
                if u not in state.burnt and u not in state.defended
            }
        )
        chosen = tuple(adjacent[:f])
        state = step(state, chosen, f)
        steps.append(chosen)
    return PlacementSchedule.build(f, steps)


@dataclass(frozen=True)
class NamedStrategy:
    name: str
    description: str
    build: Callable[..., object]


REGISTRY: dict[str, NamedStrategy] = {
    "optimal-2d": NamedStrategy(
        "optimal-2d",
        "stored optimal two-defender plane schedule (18 burnt, contained at 8)",
        optimal_2d_strategy,
    ),
    "firewall": NamedStrategy(
        "firewall",
        "single-defender corner wall in P_n^3; pass n",
        firewall_strategy,
    ),
    "greedy": NamedStrategy(
        "greedy",
        "defend the lexicographically first fire-adjacent vertices",
        greedy_frontier_policy,
    ),
}
