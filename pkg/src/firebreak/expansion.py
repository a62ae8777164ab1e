"""Shell-expansion checkers and Hall-style burn lower bounds.

Every checker measures |N(A) cap D_{k+1}| for subsets A of a distance shell
D_k and compares against the lemma bound in force.  Exhaustive enumeration is
used whenever the subset count fits the budget; otherwise deterministic seeded
sampling plus structured extremal families (axis slices and cross-orthant
unions) stand in, and the report says so.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Optional, Sequence

from .lattice import BoxLattice, Coord, LatticeSpec, box_lattice, orthant_of
from .simulation import PlacementSchedule, random_policy, run
from .strategies import greedy_frontier_policy

DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class ExpansionReport:
    """Outcome of a subset-expansion check."""

    d: int
    k: int
    size_min: int
    size_max: int
    orthant_only: bool
    exhaustive: bool
    subsets_checked: int
    counterexample: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "d": self.d,
            "k": self.k,
            "sizes": [self.size_min, self.size_max],
            "orthant_only": self.orthant_only,
            "exhaustive": self.exhaustive,
            "subsets_checked": self.subsets_checked,
            "counterexample": self.counterexample,
        }


def expansion_size(
    A: Iterable[Coord], k: int, spec: LatticeSpec, orthant_only: bool = False
) -> int:
    """|N(A) cap D_{k+1}| (or the orthant-restricted version) for A in D_k."""
    members = list(A)
    if not members:
        raise ValueError("A must be nonempty")
    if isinstance(spec.geometry, BoxLattice) and spec.geometry.radius < k + 1:
        raise ValueError("box radius too small to hold the next shell")
    for v in members:
        if spec.distance(v) != k:
            raise ValueError(f"{v} is not in shell {k}")
        if orthant_only and any(c < 0 for c in v):
            raise ValueError(f"{v} has a negative coordinate")
    out = set()
    for v in members:
        for u in spec.neighbors(v):
            if spec.distance(u) == k + 1:
                if orthant_only and any(c < 0 for c in u):
                    continue
                out.add(u)
    return len(out)


def _shell_masks(
    d: int, k: int, orthant_only: bool
) -> tuple[list[Coord], list[int]]:
    """Shell members plus, per member, a bitmask of its next-shell neighbors."""
    spec = box_lattice(d, k + 2)
    shell = spec.sphere_positive(k) if orthant_only else spec.sphere(k)
    nxt = spec.sphere_positive(k + 1) if orthant_only else spec.sphere(k + 1)
    bit = {v: i for i, v in enumerate(nxt.members)}
    masks = []
    for v in shell.members:
        m = 0
        for u in spec.neighbors(v):
            i = bit.get(u)
            if i is not None:
                m |= 1 << i
        masks.append(m)
    return list(shell.members), masks


def _scan_combinations(
    masks: Sequence[int], size: int, slack: int
) -> tuple[int, Optional[tuple[int, ...]]]:
    """Count subsets of one size; return the first one expanding < size + slack."""
    required = size + slack
    checked = 0
    for combo in itertools.combinations(range(len(masks)), size):
        checked += 1
        m = 0
        for i in combo:
            m |= masks[i]
        if m.bit_count() < required:
            return checked, combo
    return checked, None


def _structured_subsets(
    members: Sequence[Coord], size_min: int, size_max: int
) -> Iterable[tuple[int, ...]]:
    """Axis slices and cross-orthant unions, the lemma proofs' extremal shapes."""
    d = len(members[0])
    index = {v: i for i, v in enumerate(members)}
    values = sorted({c for v in members for c in v})
    for axis in range(d):
        for val in values:
            slice_idx = tuple(i for v, i in index.items() if v[axis] == val)
            for size in range(size_min, min(size_max, len(slice_idx)) + 1):
                yield slice_idx[:size]
    by_orthant: dict[tuple[int, ...], list[int]] = {}
    for v, i in index.items():
        by_orthant.setdefault(orthant_of(v), []).append(i)
    parts = [tuple(sorted(p)) for p in by_orthant.values() if p]
    for q in range(2, min(len(parts), 4) + 1):
        for chosen in itertools.combinations(parts, q):
            merged: tuple[int, ...] = tuple(sorted(set().union(*map(set, chosen))))
            take = min(len(merged), size_max)
            if take >= size_min:
                yield merged[:take]


def check_front_growth(
    d: int,
    k: int,
    size_min: int,
    size_max: int,
    budget: int = DEFAULT_BUDGET,
    orthant_only: bool = False,
    seed: int = 0,
    workers: int = 1,
) -> ExpansionReport:
    """Verify |N(A) cap D_{k+1}| >= |A| + 2d - 2 for A in D_k, |A| >= 2d - 2.

    Subset sizes below 2d - 2 fall outside the hypothesis and are skipped.
    """
    if d < 3:
        raise ValueError("the front-growth bound needs d >= 3")
    if k < 1:
        raise ValueError("shell index must be >= 1")
    slack = 2 * d - 2
    lo = max(size_min, slack)
    members, masks = _shell_masks(d, k, orthant_only)
    hi = min(size_max, len(members))
    if hi < lo:
        return ExpansionReport(d, k, size_min, size_max, orthant_only, True, 0)
    planned = sum(comb(len(members), s) for s in range(lo, hi + 1))
    exhaustive = planned <= budget
    checked = 0
    bad: Optional[tuple[int, ...]] = None
    if exhaustive:
        for size in range(lo, hi + 1):
            if workers > 1:
                n, combo = _scan_parallel(masks, size, slack, workers)
            else:
                n, combo = _scan_combinations(masks, size, slack)
            checked += n
            if combo is not None:
                bad = combo
                break
    else:
        rng = random.Random(seed)
        per_size = max(1, budget // max(1, hi - lo + 1))
        seen: set[tuple[int, ...]] = set()
        for size in range(lo, hi + 1):
            for _ in range(per_size):
                combo = tuple(sorted(rng.sample(range(len(members)), size)))
                if combo in seen:
                    continue
                seen.add(combo)
                checked += 1
                m = 0
                for i in combo:
                    m |= masks[i]
                if m.bit_count() < size + slack:
                    bad = combo
                    break
            if bad:
                break
        if bad is None:
            for combo in _structured_subsets(members, lo, hi):
                checked += 1
                m = 0
                for i in combo:
                    m |= masks[i]
                if m.bit_count() < len(combo) + slack:
                    bad = combo
                    break
    counterexample = None
    if bad is not None:
        subset = [list(members[i]) for i in bad]
        m = 0
        for i in bad:
            m |= masks[i]
        counterexample = {
            "set": subset,
            "expansion": m.bit_count(),
            "required": len(bad) + slack,
        }
    return ExpansionReport(
        d, k, size_min, size_max, orthant_only, exhaustive, checked, counterexample
    )


def _scan_chunk(args: tuple) -> tuple[int, Optional[tuple[int, ...]]]:
    masks, size, slack, firsts = args
    required = size + slack
    checked = 0
    n = len(masks)
    for first in firsts:
        base = masks[first]
        for rest in itertools.combinations(range(first + 1, n), size - 1):
            checked += 1
            m = base
            for i in rest:
                m |= masks[i]
            if m.bit_count() < required:
                return checked, (first,) + rest
    return checked, None


def _scan_parallel(
    masks: Sequence[int], size: int, slack: int, workers: int
) -> tuple[int, Optional[tuple[int, ...]]]:
    """Chunk by leading index; deterministic merge keeps the first-by-order hit."""
    from concurrent.futures import ProcessPoolExecutor

    n = len(masks)
    firsts = list(range(n - size + 1))
    chunks = [
        (list(masks), size, slack, firsts[i::workers]) for i in range(workers)
    ]
    checked = 0
    hits: list[tuple[int, ...]] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for c, combo in pool.map(_scan_chunk, chunks):
            checked += c
            if combo is not None:
                hits.append(combo)
    return checked, min(hits) if hits else None


def check_first_shell(d: int) -> ExpansionReport:
    """Verify |N(A) cap D_2| >= |A| + 4d - 6 for every A in D_1 with |A| >= 2.

    D_1 has 2d members, so there are 2^(2d) - (2d + 1) qualifying subsets.
    """
    if d < 3:
        raise ValueError("the first-shell bound needs d >= 3")
    members, masks = _shell_masks(d, 1, orthant_only=False)
    slack = 4 * d - 6
    checked = 0
    for size in range(2, len(members) + 1):
        n, combo = _scan_combinations(masks, size, slack)
        checked += n
        if combo is not None:
            subset = [list(members[i]) for i in combo]
            m = 0
            for i in combo:
                m |= masks[i]
            return ExpansionReport(
                d,
                1,
                2,
                len(members),
                False,
                True,
                checked,
                {"set": subset, "expansion": m.bit_count(), "required": size + slack},
            )
    return ExpansionReport(d, 1, 2, len(members), False, True, checked)


def check_growth_L3(
    f: int, k: int, size_cap: int, budget: int = DEFAULT_BUDGET
) -> ExpansionReport:
    """Verify the orthant growth bound in d = 3: subsets of D_k^+ larger than
    (f-1)(f-2)/2 expand into D_{k+1}^+ by at least f."""
    if f < 1:
        raise ValueError("f must be positive")
    if k < 1:
        raise ValueError("shell index must be >= 1")
    threshold = (f - 1) * (f - 2) // 2
    members, masks = _shell_masks(3, k, orthant_only=True)
    lo = threshold + 1
    hi = min(size_cap, len(members))
    checked = 0
    for size in range(lo, hi + 1):
        required = size + f
        for combo in itertools.combinations(range(len(members)), size):
            checked += 1
            m = 0
            for i in combo:
                m |= masks[i]
            if m.bit_count() < required:
                subset = [list(members[i]) for i in combo]
                return ExpansionReport(
                    3,
                    k,
                    lo,
                    hi,
                    True,
                    True,
                    checked,
                    {
                        "set": subset,
                        "expansion": m.bit_count(),
                        "required": required,
                    },
                )
    return ExpansionReport(3, k, lo, hi, True, True, checked)


# -- sigma sequences ----------------------------------------------------------


def sigma_excess(sigma: Sequence[int]) -> int:
    """g(sigma) = sum of max(0, sigma_r + 1 - sigma_{r-1}) with sigma_{t-1} = 0."""
    if not sigma:
        raise ValueError("sequence must be nonempty")
    if any(s < 1 for s in sigma):
        raise ValueError("all entries must be >= 1")
    g = 0
    prev = 0
    for s in sigma:
        g += max(0, s + 1 - prev)
        prev = s
    return g


@dataclass(frozen=True)
class SigmaReport:
    f: int
    max_len: int
    max_val: int
    sequences_checked: int
    counterexample: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "f": self.f,
            "max_len": self.max_len,
            "max_val": self.max_val,
            "sequences_checked": self.sequences_checked,
            "counterexample": self.counterexample,
        }


def check_sigma_claim(f: int, max_len: int, max_val: int) -> SigmaReport:
    """Exhaustively verify: g(sigma) < f implies sum(sigma) <= (f-1)(f-2)/2."""
    if f < 1:
        raise ValueError("f must be positive")
    bound = (f - 1) * (f - 2) // 2
    checked = 0
    for length in range(1, max_len + 1):
        for sigma in itertools.product(range(1, max_val + 1), repeat=length):
            checked += 1
            if sigma_excess(sigma) < f and sum(sigma) > bound:
                return SigmaReport(
                    f,
                    max_len,
                    max_val,
                    checked,
                    {"sigma": list(sigma), "g": sigma_excess(sigma), "sum": sum(sigma)},
                )
    return SigmaReport(f, max_len, max_val, checked)


# -- Hall-style lower bounds --------------------------------------------------


@dataclass(frozen=True)
class HallHypothesis:
    """Expansion constants for the shell lower bound.

    a[i] is the guaranteed expansion surplus for shell i (i <= h); every shell
    beyond h reuses a[h].  The bound is vacuous unless each a[i] >= f.
    """

    f: int
    a: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.f < 1:
            raise ValueError("f must be positive")
        if not self.a:
            raise ValueError("need at least one expansion constant")
        if any(x < self.f for x in self.a):
            raise ValueError(
                f"hypothesis requires every a_i >= f; got a={self.a}, f={self.f}"
            )

    @property
    def h(self) -> int:
        return len(self.a) - 1


def hall_lower_bound(hyp: HallHypothesis, n: int, r_n: int) -> int:
    """Minimum burnt count in shell n after step n, given r_n reserves beyond."""
    if n < 0:
        raise ValueError("step index must be nonnegative")
    if r_n < 0:
        raise ValueError("reserve count must be nonnegative")
    if n == 0:
        return 1
    cut = min(n - 1, hyp.h)
    surplus = sum(hyp.a[i] - hyp.f for i in range(cut + 1))
    return 1 + r_n + surplus


@dataclass(frozen=True)
class TrajectoryReport:
    seeds: int
    horizon: int
    traces_run: int
    steps_checked: int
    violations: tuple[dict, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "seeds": self.seeds,
            "horizon": self.horizon,
            "traces_run": self.traces_run,
            "steps_checked": self.steps_checked,
            "violations": list(self.violations),
        }


def check_hall_trajectory(
    spec: LatticeSpec,
    hyp: HallHypothesis,
    seeds: Iterable[int],
    horizon: int,
    include_greedy: bool = True,
) -> TrajectoryReport:
    """Run seeded policies with budget f and check B_n >= the shell bound."""
    seed_list = list(seeds)
    schedules: list[tuple[str, PlacementSchedule]] = [
        (f"random:{s}", random_policy(spec, hyp.f, s, horizon)) for s in seed_list
    ]
    if include_greedy:
        schedules.append(("greedy", greedy_frontier_policy(spec, hyp.f, horizon)))
    violations = []
    steps_checked = 0
    for label, schedule in schedules:
        trace = run(spec, [spec.root], schedule, hyp.f, horizon)
        for rec in trace.steps:
            steps_checked += 1
            bound = hall_lower_bound(hyp, rec.t, rec.r_reserve)
            if rec.b_in_shell < bound:
                violations.append(
                    {
                        "policy": label,
                        "step": rec.t,
                        "b_in_shell": rec.b_in_shell,
                        "r_reserve": rec.r_reserve,
                        "bound": bound,
                    }
                )
    return TrajectoryReport(
        len(seed_list), horizon, len(schedules), steps_checked, tuple(violations)
    )


def check_octant_claim(
    n: int, seeds: Iterable[int], include_greedy: bool = True
) -> TrajectoryReport:
    """Single-defender octant bound: |B_t| - r_t >= (t^2 + t + 2) / 2.

    Runs on the octant graph of radius 3n, the horizon by which every vertex
    has had its chance to burn.
    """
    from .lattice import octant_graph

    if n < 1:
        raise ValueError("n must be positive")
    spec = octant_graph(3, 3 * n)
    horizon = 3 * n
    seed_list = list(seeds)
    schedules = [
        (f"random:{s}", random_policy(spec, 1, s, horizon)) for s in seed_list
    ]
    if include_greedy:
        schedules.append(("greedy", greedy_frontier_policy(spec, 1, horizon)))
    violations = []
    steps_checked = 0
    for label, schedule in schedules:
        trace = run(spec, [spec.root], schedule, 1, horizon)
        for rec in trace.steps:
            steps_checked += 1
            bound = (rec.t * rec.t + rec.t + 2) // 2
            if rec.b_in_shell - rec.r_reserve < bound:
                violations.append(
                    {
                        "policy": label,
                        "step": rec.t,
                        "b_in_shell": rec.b_in_shell,
                        "r_reserve": rec.r_reserve,
                        "bound": bound,
                    }
                )
    return TrajectoryReport(
        len(seed_list), horizon, len(schedules), steps_checked, tuple(violations)
    )
