"""Reference optimizers for the tests, independent of the package search code.

Plain coordinate sets, dict memoization, per-step placement enumeration.  Two
layers: `exhaustive_opt` tries every placement subset of size at most f with
no reductions at all (only feasible on the radius-1 box), and `dp_opt` scales
to radius 2 by adding three value-preserving reductions that `exhaustive_opt`
is used to vouch for.
"""
from __future__ import annotations

import itertools

Cell = tuple[int, int]


def _neighbors(cell: Cell, radius: int) -> list[Cell]:
    x, y = cell
    out = []
    for nx, ny in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
        if max(abs(nx), abs(ny)) <= radius:
            out.append((nx, ny))
    return out


def _spread(burnt: frozenset, defended: frozenset, radius: int) -> frozenset:
    new = {
        n
        for c in burnt
        for n in _neighbors(c, radius)
        if n not in burnt and n not in defended
    }
    return burnt | new


def _ring_count(burnt: frozenset, radius: int) -> int:
    return sum(1 for x, y in burnt if max(abs(x), abs(y)) == radius)


def exhaustive_opt(radius: int, horizon: int, f: int, deadline=None) -> int:
    """Minimum over every legal play, partial placements included."""
    all_cells = [
        (x, y)
        for x in range(-radius, radius + 1)
        for y in range(-radius, radius + 1)
    ]

    def rec(burnt: frozenset, defended: frozenset, t: int) -> int:
        if t > horizon:
            if deadline is None:
                return len(burnt)
            return _ring_count(burnt, radius)
        free = [c for c in all_cells if c not in burnt and c not in defended]
        budget = 0 if (deadline is not None and t > deadline) else f
        best = None
        for k in range(min(budget, len(free)) + 1):
            for placed in itertools.combinations(free, k):
                d2 = defended | frozenset(placed)
                value = rec(_spread(burnt, d2, radius), d2, t + 1)
                if best is None or value < best:
                    best = value
        return best

    return rec(frozenset([(0, 0)]), frozenset(), 1)


_TRANSFORMS = tuple(
    (sx, sy, swap) for sx in (1, -1) for sy in (1, -1) for swap in (False, True)
)


def _canon(burnt: frozenset, defended: frozenset):
    best = None
    for sx, sy, swap in _TRANSFORMS:

        def t(c):
            x, y = c
            x, y = x * sx, y * sy
            return (y, x) if swap else (x, y)

        key = (tuple(sorted(map(t, burnt))), tuple(sorted(map(t, defended))))
        if best is None or key < best:
            best = key
    return best


def _reachable(burnt: frozenset, defended: frozenset, radius: int, steps: int):
    """Free cells the fire can still touch within `steps` spreads."""
    seen = set(burnt)
    frontier = burnt
    out = set()
    for _ in range(steps):
        nxt = set()
        for c in frontier:
            for n in _neighbors(c, radius):
                if n in seen or n in defended:
                    continue
                seen.add(n)
                nxt.add(n)
        out |= nxt
        frontier = nxt
    return out


def dp_opt(
    radius: int,
    horizon: int,
    f: int,
    deadline=None,
    initial_burnt=((0, 0),),
    initial_defended=(),
) -> int:
    """Memoized minimum burn / boundary-burn value.

    Reductions, each value-preserving:
    - placements drawn only from cells the fire can still reach (defending
      any other cell never changes which cells burn);
    - exactly min(f, pool) placements per step (extra defense never hurts
      either objective);
    - states identified up to the square's eight symmetries (spread commutes
      with them);
    - the final placement step scored in closed form (each defender there
      saves exactly one about-to-burn cell, independently).
    """
    memo: dict = {}

    def leaf(burnt: frozenset) -> int:
        if deadline is None:
            return len(burnt)
        return _ring_count(burnt, radius)

    def rec(burnt: frozenset, defended: frozenset, t: int) -> int:
        if t > horizon:
            return leaf(burnt)
        budget = 0 if (deadline is not None and t > deadline) else f
        remaining = horizon - t + 1
        if t == horizon:
            about = {
                n
                for c in burnt
                for n in _neighbors(c, radius)
                if n not in burnt and n not in defended
            }
            if deadline is not None:
                about = {c for c in about if max(abs(c[0]), abs(c[1])) == radius}
            return leaf(burnt) + max(0, len(about) - budget)
        pool = sorted(_reachable(burnt, defended, radius, remaining))
        if not pool:
            return leaf(burnt)
        key = (_canon(burnt, defended), t)
        hit = memo.get(key)
        if hit is not None:
            return hit
        best = None
        for placed in itertools.combinations(pool, min(budget, len(pool))):
            d2 = defended | frozenset(placed)
            b2 = _spread(burnt, d2, radius)
            value = rec(b2, d2, t + 1)
            if best is None or value < best:
                best = value
        memo[key] = best
        return best

    return rec(frozenset(initial_burnt), frozenset(initial_defended), 1)
