"""Square-lattice geometry: boxes, octants, path grids and a quotient graph.

Vertices are integer coordinate tuples. Distance is always the l1 distance to
the root, computed arithmetically; the test suite cross-checks it once against
a breadth-first search so the closed forms can be trusted everywhere else.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Union

Coord = tuple[int, ...]


class OutsideLattice(ValueError):
    """Raised when a coordinate is not a vertex of the lattice at hand."""


@dataclass(frozen=True)
class BoxLattice:
    """All v with |v_i| <= radius; finite stand-in for the infinite lattice."""

    radius: int


@dataclass(frozen=True)
class OctantGraph:
    """Nonnegative coordinates with coordinate sum at most radius."""

    radius: int


@dataclass(frozen=True)
class PathGrid:
    """The grid power P_n^d: all v with 0 <= v_i <= side - 1."""

    side: int


@dataclass(frozen=True)
class QuotientRoot:
    """Octant vertices beyond shell k, with all of D_k^+ identified to one root.

    `guard` is the number of shells kept past the root; like the box radius it
    truncates an infinite graph, and touching the last shell is flagged.
    """

    shell: int
    guard: int


Geometry = Union[BoxLattice, OctantGraph, PathGrid, QuotientRoot]


@dataclass(frozen=True)
class LatticeSpec:
    """A concrete finite lattice: dimension, geometry variant and root vertex."""

    dimension: int
    geometry: Geometry
    root: Coord

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError(f"dimension must be positive, got {self.dimension}")
        if len(self.root) != self.dimension:
            raise ValueError(
                f"root {self.root} does not have {self.dimension} coordinates"
            )
        g = self.geometry
        if isinstance(g, (BoxLattice, OctantGraph)) and g.radius < 1:
            raise ValueError("radius must be positive")
        if isinstance(g, PathGrid) and g.side < 1:
            raise ValueError("side must be positive")
        if isinstance(g, QuotientRoot):
            if g.shell < 1:
                raise ValueError("identified shell index must be positive")
            if g.guard < 1:
                raise ValueError("guard must keep at least one shell")
        if not self._contains_no_raise(self.root):
            raise ValueError(f"root {self.root} lies outside the lattice")

    # -- membership -----------------------------------------------------------

    def _contains_no_raise(self, v: Coord) -> bool:
        if len(v) != self.dimension:
            return False
        g = self.geometry
        if isinstance(g, BoxLattice):
            return all(abs(c) <= g.radius for c in v)
        if isinstance(g, OctantGraph):
            return all(c >= 0 for c in v) and sum(v) <= g.radius
        if isinstance(g, PathGrid):
            return all(0 <= c < g.side for c in v)
        if v == self.root:
            return True
        return all(c >= 0 for c in v) and g.shell < sum(v) <= g.shell + g.guard

    def contains(self, v: Coord) -> bool:
        return self._contains_no_raise(v)

    def require(self, v: Coord) -> None:
        if not self._contains_no_raise(v):
            raise OutsideLattice(f"{v} is not a vertex of {self.geometry}")

    # -- metric ---------------------------------------------------------------

    def distance(self, v: Coord) -> int:
        """l1 distance from v to the root."""
        self.require(v)
        g = self.geometry
        if isinstance(g, QuotientRoot):
            if v == self.root:
                return 0
            return sum(v) - g.shell
        return sum(abs(a - b) for a, b in zip(v, self.root))

    def is_guard_boundary(self, v: Coord) -> bool:
        """True when v sits on a truncation boundary of an infinite graph.

        Only BoxLattice and the QuotientRoot guard are truncations; octant and
        path-grid boundaries belong to the graphs themselves.
        """
        g = self.geometry
        if isinstance(g, BoxLattice):
            return max(abs(c) for c in v) == g.radius
        if isinstance(g, QuotientRoot):
            return v != self.root and sum(v) == g.shell + g.guard
        return False

    # -- adjacency ------------------------------------------------------------

    def neighbors(self, v: Coord) -> tuple[Coord, ...]:
        """Sorted tuple of lattice neighbors (unit moves, quotient-aware)."""
        self.require(v)
        g = self.geometry
        if isinstance(g, QuotientRoot):
            if v == self.root:
                return self.sphere(1).members
            out = set()
            for u in _unit_moves(v):
                if all(c >= 0 for c in u):
                    s = sum(u)
                    if s == g.shell:
                        out.add(self.root)
                    elif g.shell < s <= g.shell + g.guard:
                        out.add(u)
            return tuple(sorted(out))
        return tuple(u for u in _unit_moves(v) if self._contains_no_raise(u))

    # -- shells ---------------------------------------------------------------

    def sphere(self, k: int) -> "Shell":
        """The shell D_k of vertices at distance exactly k from the root."""
        if k < 0:
            raise ValueError("shell index must be nonnegative")
        g = self.geometry
        if isinstance(g, QuotientRoot):
            if k == 0:
                return Shell(0, (self.root,))
            if k > g.guard:
                return Shell(k, ())
            members = _sum_shell(self.dimension, g.shell + k)
            return Shell(k, tuple(sorted(members)))
        if isinstance(g, BoxLattice):
            lo = (-g.radius,) * self.dimension
            hi = (g.radius,) * self.dimension
        elif isinstance(g, OctantGraph):
            lo = (0,) * self.dimension
            hi = (g.radius,) * self.dimension
        else:
            lo = (0,) * self.dimension
            hi = (g.side - 1,) * self.dimension
        members = list(_l1_shell(self.root, lo, hi, k))
        if isinstance(g, OctantGraph):
            members = [v for v in members if sum(v) <= g.radius]
        return Shell(k, tuple(sorted(members)))

    def sphere_positive(self, k: int) -> "Shell":
        """The orthant-restricted shell D_k^+ (all coordinates nonnegative)."""
        base = self.sphere(k)
        return Shell(k, tuple(v for v in base.members if all(c >= 0 for c in v)))

    def vertices(self) -> Iterator[Coord]:
        """All vertices in lexicographic order."""
        g = self.geometry
        if isinstance(g, BoxLattice):
            rng = range(-g.radius, g.radius + 1)
            yield from itertools.product(rng, repeat=self.dimension)
        elif isinstance(g, OctantGraph):
            rng = range(0, g.radius + 1)
            for v in itertools.product(rng, repeat=self.dimension):
                if sum(v) <= g.radius:
                    yield v
        elif isinstance(g, PathGrid):
            rng = range(0, g.side)
            yield from itertools.product(rng, repeat=self.dimension)
        else:
            seen_root = False
            for s in range(g.shell, g.shell + g.guard + 1):
                if s == g.shell:
                    yield self.root
                    seen_root = True
                else:
                    for v in sorted(_sum_shell(self.dimension, s)):
                        yield v
            assert seen_root

    def vertex_count(self) -> int:
        return sum(1 for _ in self.vertices())


@dataclass(frozen=True)
class Shell:
    """A distance shell: its index and the sorted tuple of member vertices."""

    index: int
    members: tuple[Coord, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Coord]:
        return iter(self.members)

    def __contains__(self, v: object) -> bool:
        return v in self.members


def _unit_moves(v: Coord) -> Iterator[Coord]:
    for i in range(len(v)):
        for delta in (-1, 1):
            yield v[:i] + (v[i] + delta,) + v[i + 1 :]


def _sum_shell(dimension: int, total: int) -> list[Coord]:
    """Nonnegative vectors of the given length with the given coordinate sum."""
    if dimension == 1:
        return [(total,)] if total >= 0 else []
    out = []
    for first in range(total + 1):
        for rest in _sum_shell(dimension - 1, total - first):
            out.append((first,) + rest)
    return out


def _l1_shell(root: Coord, lo: Coord, hi: Coord, k: int) -> Iterator[Coord]:
    """Vectors within the per-axis bounds at l1 distance exactly k from root."""
    d = len(root)

    def rec(axis: int, remaining: int, prefix: tuple[int, ...]) -> Iterator[Coord]:
        if axis == d - 1:
            for value in (root[axis] - remaining, root[axis] + remaining):
                if lo[axis] <= value <= hi[axis]:
                    yield prefix + (value,)
                if remaining == 0:
                    break
            return
        for value in range(lo[axis], hi[axis] + 1):
            used = abs(value - root[axis])
            if used <= remaining:
                yield from rec(axis + 1, remaining - used, prefix + (value,))

    yield from rec(0, k, ())


# -- constructors -------------------------------------------------------------


def box_lattice(dimension: int, radius: int, root: Coord | None = None) -> LatticeSpec:
    return LatticeSpec(dimension, BoxLattice(radius), root or (0,) * dimension)


def octant_graph(dimension: int, radius: int) -> LatticeSpec:
    return LatticeSpec(dimension, OctantGraph(radius), (0,) * dimension)


def path_grid(dimension: int, side: int, root: Coord | None = None) -> LatticeSpec:
    return LatticeSpec(dimension, PathGrid(side), root or (0,) * dimension)


def quotient_root(dimension: int, shell: int, guard: int) -> LatticeSpec:
    root = (0,) * (dimension - 1) + (shell,)
    return LatticeSpec(dimension, QuotientRoot(shell, guard), root)


# -- coordinate helpers -------------------------------------------------------


def advance_toward(v: Coord, axis: int) -> Coord:
    """Move one step away from the origin along the given axis (0-based).

    On-axis zeros move in the positive direction, so repeated application
    walks outward shell by shell.
    """
    if not 0 <= axis < len(v):
        raise ValueError(f"axis {axis} out of range for {v}")
    delta = 1 if v[axis] >= 0 else -1
    return v[:axis] + (v[axis] + delta,) + v[axis + 1 :]


def orthant_of(v: Coord) -> tuple[int, ...]:
    """Sign pattern of v under the x_i = -1/2 cut: 0 for >= 0, 1 for < 0."""
    return tuple(1 if c < 0 else 0 for c in v)


# -- serialization ------------------------------------------------------------

_GEOMETRY_TAGS = {
    BoxLattice: "box",
    OctantGraph: "octant",
    PathGrid: "grid",
    QuotientRoot: "quotient",
}


def spec_to_json(spec: LatticeSpec) -> dict:
    g = spec.geometry
    doc: dict = {
        "schema": 1,
        "geometry": _GEOMETRY_TAGS[type(g)],
        "dimension": spec.dimension,
        "root": list(spec.root),
    }
    if isinstance(g, (BoxLattice, OctantGraph)):
        doc["radius"] = g.radius
    elif isinstance(g, PathGrid):
        doc["side"] = g.side
    else:
        doc["shell"] = g.shell
        doc["guard"] = g.guard
    return doc


def spec_from_json(doc: dict) -> LatticeSpec:
    tag = doc["geometry"]
    dimension = int(doc["dimension"])
    root = tuple(int(c) for c in doc["root"])
    if tag == "box":
        geometry: Geometry = BoxLattice(int(doc["radius"]))
    elif tag == "octant":
        geometry = OctantGraph(int(doc["radius"]))
    elif tag == "grid":
        geometry = PathGrid(int(doc["side"]))
    elif tag == "quotient":
        geometry = QuotientRoot(int(doc["shell"]), int(doc["guard"]))
    else:
        raise ValueError(f"unknown geometry tag {tag!r}")
    return LatticeSpec(dimension, geometry, root)
