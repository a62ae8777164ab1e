"""Branch-and-bound over defender schedules on the two-dimensional box.

Nodes are partial placement schedules, not raw variable assignments: the
burnt set evolves deterministically once placements are fixed, so branching
on anything else wastes work.  Bitboards make spread, reachability, and
bound evaluation cheap.  Pruning: admissible counting bounds (defender
deficits in the total-burn mode, surplus disjoint escape routes to the
ring in the boundary mode, straight and bent), a per-node lookahead that
scores each cell by the
rays it can kill and enumerates only placement sets that could still beat
the incumbent, a table of proven lower bounds per (burnt, defended, step),
placements restricted to cells the fire can still reach, and canonical
placement orbits under the square's symmetries that fix the state built
so far.
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from ..simulation import PlacementSchedule
from ..strategies import REGISTRY
from .model import IpModel, MinTotalBurn, Solution, assignment_from_schedule

INF = 10**9
TT_CAP = 4_000_000

Steps = tuple[tuple[tuple[int, int], ...], ...]


@dataclass(frozen=True)
class SearchBudget:
    """Optional node and wall-clock limits; exceeding either yields a bound."""

    node_limit: Optional[int] = None
    time_limit: Optional[float] = None


class _Abort(Exception):
    pass


class _Geometry:
    """Bit-level layout of the (2r+1) x (2r+1) box, row-major from (-r,-r)."""

    def __init__(self, radius: int):
        self.radius = radius
        w = 2 * radius + 1
        self.width = w
        self.count = w * w
        self.full = (1 << self.count) - 1
        self.row_mask = (1 << w) - 1
        left = 0
        right = 0
        for row in range(w):
            left |= 1 << (row * w)
            right |= 1 << (row * w + w - 1)
        self.not_left = self.full & ~left
        self.not_right = self.full & ~right
        self.coords = tuple(self.cell(i) for i in range(self.count))
        self.origin_bit = 1 << self.index((0, 0))
        ring = 0
        for i, (x, y) in enumerate(self.coords):
            if max(abs(x), abs(y)) == radius:
                ring |= 1 << i
        self.ring = ring
        self.col_masks = tuple(
            sum(1 << (row * w + col) for row in range(w)) for col in range(w)
        )
        self.row_masks = tuple(self.row_mask << (row * w) for row in range(w))
        self.above = tuple(
            self.col_masks[i % w] & ~((1 << (i + 1)) - 1) for i in range(self.count)
        )
        self.below = tuple(
            self.col_masks[i % w] & ((1 << i) - 1) for i in range(self.count)
        )
        self.right_of = tuple(
            self.row_masks[i // w] & ~((1 << (i + 1)) - 1) for i in range(self.count)
        )
        self.left_of = tuple(
            self.row_masks[i // w] & ((1 << i) - 1) for i in range(self.count)
        )

    def index(self, cell: tuple[int, int]) -> int:
        x, y = cell
        return (y + self.radius) * self.width + (x + self.radius)

    def cell(self, i: int) -> tuple[int, int]:
        y, x = divmod(i, self.width)
        return (x - self.radius, y - self.radius)

    def nbr(self, m: int) -> int:
        return (
            ((m & self.not_right) << 1)
            | ((m & self.not_left) >> 1)
            | ((m << self.width) & self.full)
            | (m >> self.width)
        )

    def transforms(self) -> tuple[tuple[int, ...], ...]:
        """The 8 symmetries of the square as index permutations."""
        perms = []
        for sx, sy, swap in itertools.product((1, -1), (1, -1), (False, True)):
            perm = []
            for x, y in self.coords:
                nx, ny = (sy * y, sx * x) if swap else (sx * x, sy * y)
                perm.append(self.index((nx, ny)))
            perms.append(tuple(perm))
        return tuple(perms)

    def occupancy(self, m: int) -> tuple[int, int]:
        """Masks of occupied column indices and row indices."""
        cols = 0
        rows = 0
        r = 0
        while m:
            chunk = m & self.row_mask
            if chunk:
                cols |= chunk
                rows |= 1 << r
            m >>= self.width
            r += 1
        return cols, rows

    def bits(self, m: int) -> list[int]:
        out = []
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out


class _Searcher:
    def __init__(
        self,
        geo: _Geometry,
        horizon: int,
        f: int,
        minburn: bool,
        deadline: int,
        limits: Optional[SearchBudget],
    ):
        self.geo = geo
        self.T = horizon
        self.f = f
        self.minburn = minburn
        self.deadline = deadline
        self.limits = limits
        self.nodes = 0
        self.tt: dict[tuple[int, int, int], int] = {}
        self.tt_old: dict[tuple[int, int, int], int] = {}
        self.incumbent_value = INF
        self.incumbent_steps: Steps = ()
        self.started = time.perf_counter()

    # -- evaluation helpers ---------------------------------------------------

    def final_value(self, burnt: int) -> int:
        if self.minburn:
            return burnt.bit_count()
        return (burnt & self.geo.ring).bit_count()

    def rollout(self, burnt: int, defended: int, t: int) -> int:
        geo = self.geo
        for _ in range(self.T - t + 1):
            new = geo.nbr(burnt) & ~burnt & ~defended & geo.full
            if new == 0:
                break
            burnt |= new
        return burnt

    def reachable(self, burnt: int, defended: int, steps: int) -> int:
        geo = self.geo
        visited = burnt
        frontier = burnt
        reach = 0
        for _ in range(steps):
            frontier = geo.nbr(frontier) & ~visited & ~defended & geo.full
            if frontier == 0:
                break
            reach |= frontier
            visited |= frontier
        return reach

    def _deficit(self, lens: list, slots: int, percap: int) -> int:
        """Worst shortfall of placement capacity against ray due dates.

        A ray of length L is crossed L-1 placement steps from now, so its
        defender must arrive by then (or by the last step placements are
        allowed at all).  Sweeping the steps in order, rays due so far minus
        capacity accrued so far is a sound count of rays that burn through.
        """
        buck = [0] * slots
        last = slots - 1
        for L in lens:
            k = L - 1
            if k > last:
                k = last
            buck[k] += 1
        worst = 0
        have = 0
        cap = 0
        for c in buck:
            have += c
            cap += percap
            if have - cap > worst:
                worst = have - cap
        return worst

    def ray_deficit(self, burnt: int, defended: int, t: int) -> int:
        """Escape rays the remaining placements cannot cover.

        For each column, the cells strictly above its topmost burnt cell (and
        below its bottommost) form a candidate path to the ring: the first
        cell is fire-adjacent, the rest are unburnt, so the fire walks the
        path unless some cell of it gets defended, and one defender kills at
        most one path per family because the counted paths of a family share
        no cells.  Paths too long to finish before the horizon are skipped.
        A row path may cross a column path, so the families never add in
        full; interior paths, though, end on distinct ring edges (top or
        bottom against left or right), so those combine against doubled
        capacity.  The best of the three figures wins.
        """
        geo = self.geo
        w = geo.width
        span = 2 * geo.radius
        steps_left = self.T - t + 1
        edge = w - 1
        vlens = []
        ilens = []
        for x in range(w):
            cm = geo.col_masks[x]
            bc = burnt & cm
            if bc == 0:
                continue
            interior = 0 < x < edge
            hi = bc.bit_length() - 1
            up = span - hi // w
            if 0 < up <= steps_left:
                if defended & cm & ~((1 << (hi + 1)) - 1) == 0:
                    vlens.append(up)
                    if interior:
                        ilens.append(up)
            lo = (bc & -bc).bit_length() - 1
            down = lo // w
            if 0 < down <= steps_left:
                if defended & cm & ((1 << lo) - 1) == 0:
                    vlens.append(down)
                    if interior:
                        ilens.append(down)
        hlens = []
        for y in range(w):
            rm = geo.row_masks[y]
            br = burnt & rm
            if br == 0:
                continue
            interior = 0 < y < edge
            hi = br.bit_length() - 1
            up = span - hi % w
            if 0 < up <= steps_left:
                if defended & rm & ~((1 << (hi + 1)) - 1) == 0:
                    hlens.append(up)
                    if interior:
                        ilens.append(up)
            lo = (br & -br).bit_length() - 1
            down = lo % w
            if 0 < down <= steps_left:
                if defended & rm & ((1 << lo) - 1) == 0:
                    hlens.append(down)
                    if interior:
                        ilens.append(down)
        slots = self.deadline - t + 1
        f = self.f
        return max(
            self._deficit(vlens, slots, f),
            self._deficit(hlens, slots, f),
            self._deficit(ilens, slots, 2 * f),
        )

    def escape_deficit(self, burnt: int, defended: int, t: int) -> int:
        """Disjoint escape paths of any shape that must burn through.

        Straight rays miss fire that slips around a defended wall, so this
        repeatedly extracts a shortest free path from the fire boundary to
        the ring, drops its cells from the free region, and runs the same
        due-date sweep over the collected lengths.  Extracted paths share no
        cells, so one defender still kills at most one of them, and an
        unkilled path of length L still hands fire to a ring cell of its own
        after L spreads.  Any packing the extraction reaches is therefore a
        sound floor; a maximum one is not required.  Extraction stops once
        the floor is decided or no countable path remains.
        """
        geo = self.geo
        steps_left = self.T - t + 1
        slots = self.deadline - t + 1
        free = geo.full & ~burnt & ~defended
        ring = geo.ring
        base = (burnt & ring).bit_count()
        enough = self.f * slots + self.incumbent_value - base
        lens: list = []
        while len(lens) < enough:
            frontier = geo.nbr(burnt) & free
            seen = 0
            layers = []
            depth = 0
            hit = 0
            while frontier and depth < steps_left:
                depth += 1
                hit = frontier & ring
                if hit:
                    break
                layers.append(frontier)
                seen |= frontier
                frontier = geo.nbr(frontier) & free & ~seen
            if not hit:
                break
            cell = hit & -hit
            path = cell
            for layer in reversed(layers):
                prev = geo.nbr(cell) & layer
                cell = prev & -prev
                path |= cell
            free &= ~path
            lens.append(depth)
        if not lens:
            return 0
        return self._deficit(lens, slots, self.f)

    def _line_survey(
        self,
        spread: int,
        new: int,
        defended: int,
        steps_after: int,
        vertical: bool,
        kills: list,
        lens: list,
        ilens: list,
    ) -> tuple[int, int, int]:
        """Counted rays of the one-spread state along one axis.

        `lens` collects the length of every counted ray for the due-date
        sweep, `ilens` only those of interior lines (usable in the combined
        two-family sweep).  `kills` receives, per cell, how many counted
        rays defending that cell removes: every cell of a ray segment blocks
        it, and so does the newly burnt span end the segment hangs off,
        because the reverted segment then runs through the defended cell
        itself.  Scores are exact per cell and only overcount jointly when
        two placements hit one ray.  Returns the best-scoring cell with the
        two best scores on distinct cells, maintained as the scores grow.
        """
        geo = self.geo
        span = 2 * geo.radius
        w = geo.width
        if vertical:
            masks = geo.col_masks
            unit = w
            up_seg = geo.above
            down_seg = geo.below
        else:
            masks = geo.row_masks
            unit = 1
            up_seg = geo.right_of
            down_seg = geo.left_of
        edge = w - 1
        # within one family a cell sits on one line, and the up and down
        # segments of a line are disjoint, so a score above 1 only arises
        # when both refunds land on the single burnt cell of a line; the
        # two best scores then follow from the double and touch counts
        t1c = -1
        scored = 0
        doubles = 0
        dcell = -1
        for k, lm in enumerate(masks):
            bc = spread & lm
            if bc == 0:
                continue
            interior = 0 < k < edge
            hi = bc.bit_length() - 1
            pos = hi // w if vertical else hi - k * w
            up = span - pos
            if 0 < up <= steps_after:
                if defended & up_seg[hi] == 0:
                    lens.append(up)
                    if interior:
                        ilens.append(up)
                    t1c = hi + unit
                    for bit in range(t1c, hi + up * unit + 1, unit):
                        kills[bit] = 1
                    scored += up
                    if (1 << hi) & new:
                        v = kills[hi] + 1
                        kills[hi] = v
                        if v == 1:
                            scored += 1
                            t1c = hi
                        else:
                            doubles += 1
                            dcell = hi
            lo = (bc & -bc).bit_length() - 1
            pos = lo // w if vertical else lo - k * w
            if 0 < pos <= steps_after:
                if defended & down_seg[lo] == 0:
                    lens.append(pos)
                    if interior:
                        ilens.append(pos)
                    t1c = lo - unit
                    for bit in range(t1c, lo - pos * unit - 1, -unit):
                        kills[bit] = 1
                    scored += pos
                    if (1 << lo) & new:
                        v = kills[lo] + 1
                        kills[lo] = v
                        if v == 1:
                            scored += 1
                            t1c = lo
                        else:
                            doubles += 1
                            dcell = lo
        if doubles:
            t1 = 2
            t1c = dcell
            t2 = 2 if doubles >= 2 else (1 if scored >= 2 else 0)
        elif scored:
            t1 = 1
            t2 = 1 if scored >= 2 else 0
        else:
            t1 = t2 = 0
        return t1c, t1, t2

    def deadline_guides(
        self, burnt: int, defended: int, new1: int, t: int
    ) -> tuple:
        """Per-family objective floors for the children of this node, with
        the per-cell reduction scores a placement can claim against each and
        the two best scores per family on distinct cells."""
        geo = self.geo
        spread = burnt | new1
        steps_after = self.T - t
        vkills = [0] * geo.count
        hkills = [0] * geo.count
        vlens: list = []
        hlens: list = []
        ilens: list = []
        vt1c, vt1, vt2 = self._line_survey(
            spread, new1, defended, steps_after, True, vkills, vlens, ilens,
        )
        ht1c, ht1, ht2 = self._line_survey(
            spread, new1, defended, steps_after, False, hkills, hlens, ilens,
        )
        base = (spread & geo.ring).bit_count()
        for bit in geo.bits(new1 & geo.ring):
            v = vkills[bit] + 1
            vkills[bit] = v
            if bit == vt1c:
                vt1 = v
            elif v > vt1:
                vt2 = vt1
                vt1 = v
                vt1c = bit
            elif v > vt2:
                vt2 = v
            v = hkills[bit] + 1
            hkills[bit] = v
            if bit == ht1c:
                ht1 = v
            elif v > ht1:
                ht2 = ht1
                ht1 = v
                ht1c = bit
            elif v > ht2:
                ht2 = v
        slots = self.deadline - t
        f = self.f
        if slots > 0:
            vfloor = base + self._deficit(vlens, slots, f)
            hfloor = base + self._deficit(hlens, slots, f)
            cfloor = base + self._deficit(ilens, slots, 2 * f)
        else:
            vfloor = base + len(vlens)
            hfloor = base + len(hlens)
            cfloor = base + len(ilens)
        return vfloor, vkills, vt1, vt2, hfloor, hkills, ht1, ht2, cfloor

    def _qualifying(
        self, order: list, width: int, lead: list, lead_need: int
    ) -> Iterator[tuple[int, ...]]:
        """Placement sets whose kill scores could close the leading gap.

        `order` is sorted by descending lead score, so once the best
        remaining combination falls short the rest of the enumeration is
        dropped without touching it.
        """
        n = len(order)
        if width == 2:
            scores = [lead[i] for i in order]
            for a in range(n - 1):
                ka = scores[a]
                if ka + scores[a + 1] < lead_need:
                    return
                ia = order[a]
                for b in range(a + 1, n):
                    if ka + scores[b] < lead_need:
                        break
                    yield ia, order[b]
        elif width == 1:
            for i in order:
                if lead[i] < lead_need:
                    return
                yield (i,)
        else:
            for P in itertools.combinations(order, width):
                if sum(lead[i] for i in P) >= lead_need:
                    yield P

    def static_lb(self, burnt: int, defended: int, new1: int, t: int) -> int:
        """Admissible lower bound on the final objective from this node."""
        geo = self.geo
        if not self.minburn:
            base = (burnt & geo.ring).bit_count()
            if self.f == 0 or t > self.deadline:
                return base
            return base + self.ray_deficit(burnt, defended, t)
        base = burnt.bit_count()
        n1 = new1.bit_count()
        # While the burnt region avoids the outer ring, containment needs two
        # defenders per occupied column (or row): one above and one below each
        # column's burnt span, distinct across columns.  Fire leaning on the
        # box wall escapes that count, so the guaranteed-uncontained window is
        # also capped by the steps needed to touch the ring.
        cols, rows = geo.occupancy(burnt)
        need = 2 * max(cols.bit_count(), rows.bit_count())
        have = defended.bit_count()
        if need <= have:
            s_min = 0
        elif self.f == 0:
            s_min = INF
        else:
            s_min = -(-(need - have) // self.f)
        spans = (
            abs(cols.bit_length() - 1 - geo.radius),
            abs((cols & -cols).bit_length() - 1 - geo.radius),
            abs(rows.bit_length() - 1 - geo.radius),
            abs((rows & -rows).bit_length() - 1 - geo.radius),
        )
        s_ring = geo.radius - max(spans)
        remaining = self.T - t + 1
        window = min(s_min, max(s_ring, 0), remaining)
        first = n1 - self.f
        if window >= 1 and first < 1:
            first = 1
        if first < 0:
            first = 0
        return base + first + max(0, window - 1)

    def _tt_store(self, key: tuple, value: int) -> None:
        """Record a proven lower bound, rotating generations at capacity so
        fresh subtrees keep their entries instead of finding the table shut."""
        self.tt[key] = value
        if len(self.tt) >= TT_CAP:
            self.tt_old = self.tt
            self.tt = {}

    def _check_limits(self) -> None:
        if self.limits is None:
            return
        if self.limits.node_limit is not None and self.nodes >= self.limits.node_limit:
            raise _Abort
        if (
            self.limits.time_limit is not None
            and self.nodes % 1024 == 0
            and time.perf_counter() - self.started > self.limits.time_limit
        ):
            raise _Abort

    def _leaf(self, burnt: int, trail: Steps) -> int:
        value = self.final_value(burnt)
        if value < self.incumbent_value:
            self.incumbent_value = value
            self.incumbent_steps = trail + ((),) * (self.T - len(trail))
        return value

    def _orbit(
        self, P: tuple[int, ...], sym: Sequence[tuple[int, ...]]
    ) -> tuple[tuple[tuple[int, ...], ...], bool]:
        coords = self.geo.coords
        pc = tuple(sorted(coords[i] for i in P))
        stab = []
        for g in sym:
            gc = tuple(sorted(coords[g[i]] for i in P))
            if gc < pc:
                return (), False
            if gc == pc:
                stab.append(g)
        return tuple(stab), True

    # -- the search -----------------------------------------------------------

    def search(
        self,
        burnt: int,
        defended: int,
        t: int,
        sym: Sequence[tuple[int, ...]],
        trail: Steps,
    ) -> int:
        self.nodes += 1
        self._check_limits()
        geo = self.geo
        new1 = geo.nbr(burnt) & ~burnt & ~defended & geo.full
        if new1 == 0 or t > self.T:
            return self._leaf(burnt, trail)
        if self.f == 0 or t > self.deadline:
            return self._leaf(self.rollout(burnt, defended, t), trail)
        key = (burnt, defended, t)
        cached = self.tt.get(key)
        if cached is None and self.tt_old:
            cached = self.tt_old.get(key)
            if cached is not None and cached >= self.incumbent_value:
                # keep entries that still cut across a generation turnover
                self._tt_store(key, cached)
                return cached
        if cached is not None and cached >= self.incumbent_value:
            return cached
        f = self.f
        if self.minburn or f > 2:
            bound = self.static_lb(burnt, defended, new1, t)
        else:
            # with the sharper one-spread floors and their top-score test
            # below, a separate static ray scan no longer pays its way
            bound = (burnt & geo.ring).bit_count()
        if bound >= self.incumbent_value:
            return bound
        vneed = hneed = cneed = 0
        tails: tuple = ()
        if not self.minburn:
            # every child starts from the same one-spread state; placements
            # can lower each family floor by at most their kill scores, so a
            # set that cannot pull every floor under the incumbent never
            # recurses
            (
                vfloor, vkills, vt1, vt2,
                hfloor, hkills, ht1, ht2,
                cfloor,
            ) = self.deadline_guides(burnt, defended, new1, t)
            cut = self.incumbent_value - 1
            vneed = vfloor - cut
            hneed = hfloor - cut
            cneed = cfloor - cut
            if f <= 2:
                # scored cells are always placeable, so the family tops cap
                # what any placement set can still remove; the verdict is a
                # proven bound for this state, so cache it like any other
                if vneed > 0:
                    cap = vt1 + vt2 if f == 2 else vt1
                    if cap < vneed:
                        value = max(bound, vfloor - cap)
                        self._tt_store(key, value)
                        return value
                if hneed > 0:
                    cap = ht1 + ht2 if f == 2 else ht1
                    if cap < hneed:
                        value = max(bound, hfloor - cap)
                        self._tt_store(key, value)
                        return value
                if cneed > 0:
                    cap = vt1 + ht1 + (vt2 + ht2 if f == 2 else 0)
                    if cap < cneed:
                        value = max(bound, cfloor - cap)
                        self._tt_store(key, value)
                        return value
            # walls bend the escape routes out of the straight families'
            # sight, so before paying for an expansion check the packing
            # bound, which follows the bends
            deficit = self.escape_deficit(burnt, defended, t)
            if deficit:
                floor = (burnt & geo.ring).bit_count() + deficit
                if floor >= self.incumbent_value:
                    self._tt_store(key, floor)
                    return floor
        useful = self.reachable(burnt, defended, self.T - t + 1)
        if useful == 0:
            return self._leaf(self.rollout(burnt, defended, t), trail)
        cand = sorted(geo.bits(useful), key=lambda i: geo.coords[i])
        width = min(f, len(cand))
        best = INF
        if vneed > 0 or hneed > 0 or cneed > 0:
            # every set the enumeration withholds is proven to land on or
            # above the incumbent, so it is accounted for here
            best = self.incumbent_value
            combo = None
            if cneed > 0:
                combo = [vkills[i] + hkills[i] for i in range(geo.count)]
            # lead with the tightest slack between its best two scores and
            # its need; a tight lead cuts the pair enumeration soonest
            lead = None
            lead_need = slack = 0
            if vneed > 0:
                lead, lead_need = vkills, vneed
                slack = vt1 + vt2 - vneed
            if hneed > 0:
                hs = ht1 + ht2 - hneed
                if lead is None or hs < slack:
                    lead, lead_need, slack = hkills, hneed, hs
            if lead is None:
                lead, lead_need = combo, cneed
            rest = []
            if vneed > 0 and vkills is not lead:
                rest.append((vkills, vneed))
            if hneed > 0 and hkills is not lead:
                rest.append((hkills, hneed))
            if combo is not None and combo is not lead:
                rest.append((combo, cneed))
            tails = tuple(rest)
            order = sorted(cand, key=lambda i: (-lead[i], i))
            picks = self._qualifying(order, width, lead, lead_need)
        else:
            picks = itertools.combinations(cand, width)
        for P in picks:
            ok = True
            for karr, kneed in tails:
                got = 0
                for i in P:
                    got += karr[i]
                if got < kneed:
                    ok = False
                    break
            if not ok:
                continue
            if len(sym) > 1:
                stab, canonical = self._orbit(P, sym)
                if not canonical:
                    continue
            else:
                stab = sym
            mask = 0
            for i in P:
                mask |= 1 << i
            d2 = defended | mask
            b2 = burnt | (new1 & ~mask)
            placed = tuple(geo.coords[i] for i in P)
            r = self.search(b2, d2, t + 1, stab, trail + (placed,))
            if r < best:
                best = r
        prior = self.tt.get(key, -1)
        if best > prior:
            self._tt_store(key, best)
        return best


# -- schedule evaluation ------------------------------------------------------


def _steps_from_schedule(schedule: PlacementSchedule, horizon: int) -> Steps:
    return tuple(schedule.placements_at(t) for t in range(1, horizon + 1))


def _evaluate_steps(
    geo: _Geometry,
    steps: Steps,
    horizon: int,
    deadline: int,
    minburn: bool,
    burnt0: int,
    defended0: int,
) -> int:
    burnt = burnt0
    defended = defended0
    for t in range(1, horizon + 1):
        placed = steps[t - 1] if t <= len(steps) else ()
        if placed and t > deadline:
            raise ValueError("placements after the deadline")
        for cell in placed:
            bit = 1 << geo.index(cell)
            if bit & burnt:
                raise ValueError(f"placement on a burnt cell {cell}")
            if bit & defended:
                raise ValueError(f"placement on a defended cell {cell}")
            defended |= bit
        burnt |= geo.nbr(burnt) & ~burnt & ~defended & geo.full
    if minburn:
        return burnt.bit_count()
    return (burnt & geo.ring).bit_count()


def _reference_steps(model: IpModel, deadline: int) -> list[Steps]:
    """Registry schedules that fit the model, truncated at the deadline.

    Only zero-argument builders yielding a plain schedule participate; the
    caller still has to simulate each candidate, which rejects collisions
    with a nonstandard initial state.
    """
    out = []
    for entry in REGISTRY.values():
        try:
            built = entry.build()
        except TypeError:
            continue
        if not isinstance(built, PlacementSchedule) or built.f > model.budget:
            continue
        steps = tuple(
            built.placements_at(t) if t <= deadline else ()
            for t in range(1, model.horizon + 1)
        )
        inside = all(
            max(abs(x), abs(y)) <= model.radius for group in steps for x, y in group
        )
        if inside:
            out.append(steps)
    return out


def _greedy_steps(
    geo: _Geometry, horizon: int, f: int, deadline: int, burnt0: int, defended0: int
) -> Steps:
    """Defend the lexicographically first about-to-burn cells each step."""
    burnt = burnt0
    defended = defended0
    steps = []
    for t in range(1, horizon + 1):
        placed: tuple[tuple[int, int], ...] = ()
        if t <= deadline and f > 0:
            new1 = geo.nbr(burnt) & ~burnt & ~defended & geo.full
            cells = sorted((geo.coords[i] for i in geo.bits(new1)))[:f]
            for cell in cells:
                defended |= 1 << geo.index(cell)
            placed = tuple(cells)
        steps.append(placed)
        burnt |= geo.nbr(burnt) & ~burnt & ~defended & geo.full
    return tuple(steps)


# -- driver -------------------------------------------------------------------


def _model_mode(model: IpModel) -> tuple[bool, int]:
    minburn = isinstance(model.objective, MinTotalBurn)
    deadline = model.horizon if minburn else model.objective.deadline
    return minburn, deadline


def _mask(geo: _Geometry, cells: Sequence[tuple[int, int]]) -> int:
    m = 0
    for cell in cells:
        m |= 1 << geo.index(cell)
    return m


def _apply(g: tuple[int, ...], mask: int) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << g[low.bit_length() - 1]
        mask ^= low
    return out


def _state_symmetries(geo: _Geometry, burnt0: int, defended0: int):
    """Square symmetries that fix the initial position, hence the dynamics."""
    return tuple(
        g
        for g in geo.transforms()
        if _apply(g, burnt0) == burnt0 and _apply(g, defended0) == defended0
    )


def _baseline(
    geo: _Geometry,
    model: IpModel,
    warm_start: Optional[PlacementSchedule],
    burnt0: int,
    defended0: int,
) -> tuple[int, Steps]:
    minburn, deadline = _model_mode(model)
    options: list[tuple[int, Steps]] = []
    empty: Steps = ((),) * model.horizon
    options.append(
        (
            _evaluate_steps(
                geo, empty, model.horizon, deadline, minburn, burnt0, defended0
            ),
            empty,
        )
    )
    if model.budget > 0:
        greedy = _greedy_steps(
            geo, model.horizon, model.budget, deadline, burnt0, defended0
        )
        options.append(
            (
                _evaluate_steps(
                    geo, greedy, model.horizon, deadline, minburn, burnt0, defended0
                ),
                greedy,
            )
        )
        for steps in _reference_steps(model, deadline):
            try:
                value = _evaluate_steps(
                    geo, steps, model.horizon, deadline, minburn, burnt0, defended0
                )
            except ValueError:
                continue
            options.append((value, steps))
    if warm_start is not None:
        if warm_start.f > model.budget:
            raise ValueError("warm start exceeds the model budget")
        steps = _steps_from_schedule(warm_start, model.horizon)
        options.append(
            (
                _evaluate_steps(
                    geo, steps, model.horizon, deadline, minburn, burnt0, defended0
                ),
                steps,
            )
        )
    return min(options, key=lambda pair: pair[0])


def _root_branches(
    searcher: _Searcher, burnt0: int, defended0: int, sym0
) -> list[tuple[tuple[int, ...], Steps, int, int]]:
    """Canonical first placements with the resulting state, in search order."""
    geo = searcher.geo
    new1 = geo.nbr(burnt0) & ~burnt0 & ~defended0 & geo.full
    useful = searcher.reachable(burnt0, defended0, searcher.T)
    cand = sorted(geo.bits(useful), key=lambda i: geo.coords[i])
    branches = []
    for P in itertools.combinations(cand, min(searcher.f, len(cand))):
        stab, canonical = searcher._orbit(P, sym0)
        if not canonical:
            continue
        mask = 0
        for i in P:
            mask |= 1 << i
        placed = tuple(geo.coords[i] for i in P)
        branches.append(
            (P, (placed,), burnt0 | (new1 & ~mask), defended0 | mask)
        )
    return branches


def _solve_branch(args: tuple) -> tuple[int, Steps, int]:
    (
        radius,
        horizon,
        f,
        minburn,
        deadline,
        inc_value,
        inc_steps,
        trail,
        b2,
        d2,
        burnt0,
        defended0,
    ) = args
    geo = _Geometry(radius)
    searcher = _Searcher(geo, horizon, f, minburn, deadline, None)
    searcher.incumbent_value = inc_value
    searcher.incumbent_steps = inc_steps
    placed_bits = tuple(geo.index(c) for c in trail[0])
    stab = [
        g
        for g in _state_symmetries(geo, burnt0, defended0)
        if tuple(sorted(geo.coords[g[i]] for i in placed_bits))
        == tuple(geo.coords[i] for i in placed_bits)
    ]
    searcher.search(b2, d2, 2, tuple(stab), trail)
    return searcher.incumbent_value, searcher.incumbent_steps, searcher.nodes


def solve(
    model: IpModel,
    budget: Optional[SearchBudget] = None,
    *,
    warm_start: Optional[PlacementSchedule] = None,
    workers: int = 1,
) -> Solution:
    """Exact optimum, or incumbent plus a sound bound when a limit trips.

    The optimum and the returned schedule are independent of `workers`; node
    counts are not.  Limits are honored sequentially, so `workers` is ignored
    whenever a budget is set.
    """
    geo = _Geometry(model.radius)
    minburn, deadline = _model_mode(model)
    started = time.perf_counter()
    burnt0 = _mask(geo, model.burnt0)
    defended0 = _mask(geo, model.defended0)
    sym0 = _state_symmetries(geo, burnt0, defended0)
    inc_value, inc_steps = _baseline(geo, model, warm_start, burnt0, defended0)
    searcher = _Searcher(geo, model.horizon, model.budget, minburn, deadline, budget)
    searcher.incumbent_value = inc_value
    searcher.incumbent_steps = inc_steps
    new1 = geo.nbr(burnt0) & ~burnt0 & ~defended0 & geo.full
    root_lb = searcher.static_lb(burnt0, defended0, new1, 1)

    completed = True
    if workers > 1 and budget is None and model.budget > 0 and deadline >= 1:
        branches = _root_branches(searcher, burnt0, defended0, sym0)
        jobs = [
            (
                model.radius,
                model.horizon,
                model.budget,
                minburn,
                deadline,
                inc_value,
                inc_steps,
                trail,
                b2,
                d2,
                burnt0,
                defended0,
            )
            for (_, trail, b2, d2) in branches
        ]
        total_nodes = 1
        outcomes = [(inc_value, inc_steps)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for value, steps, nodes in pool.map(_solve_branch, jobs):
                outcomes.append((value, steps))
                total_nodes += nodes
        best_value, best_steps = min(outcomes)
        searcher.incumbent_value = best_value
        searcher.incumbent_steps = best_steps
        searcher.nodes = total_nodes
    else:
        try:
            searcher.search(burnt0, defended0, 1, sym0, ())
        except _Abort:
            completed = False

    value = searcher.incumbent_value
    schedule = PlacementSchedule.build(model.budget, searcher.incumbent_steps)
    assignment = assignment_from_schedule(model, schedule)
    elapsed = time.perf_counter() - started
    if completed:
        return Solution("optimal", value, value, assignment, searcher.nodes, elapsed)
    return Solution(
        "bound", value, min(root_lb, value), assignment, searcher.nodes, elapsed
    )
