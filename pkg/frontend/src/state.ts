/** Board view-model and turn staging. Staging performs only the advisory
 * legality pre-checks that mirror the server's deploy rules; the committed
 * turn is always re-validated server-side and the next view wins. */

import type { SessionView, SessionSpec } from "./api.js";

export type CellKind = "empty" | "burnt" | "defended" | "staged" | "hint";

export interface BoardCell {
  coord: number[];
  kind: CellKind;
  /** burn step for burnt cells, placement turn for defended ones */
  label: string;
}

export interface Slice {
  axis: number;
  level: number;
}

export interface BoardModel {
  /** column coordinate values, left to right */
  xs: number[];
  /** row coordinate values, top to bottom */
  ys: number[];
  rows: BoardCell[][];
  slice: Slice | null;
}

export function axisRange(spec: SessionSpec): { lo: number; hi: number } {
  if (spec.geometry === "grid") {
    return { lo: 0, hi: (spec.side ?? 1) - 1 };
  }
  const r = spec.radius ?? 0;
  return { lo: -r, hi: r };
}

export function sliceLevels(spec: SessionSpec): number[] {
  const { lo, hi } = axisRange(spec);
  const levels: number[] = [];
  for (let v = lo; v <= hi; v += 1) levels.push(v);
  return levels;
}

export function defaultSlice(spec: SessionSpec): Slice | null {
  if (spec.dimension <= 2) return null;
  const root = spec.root[spec.dimension - 1] ?? 0;
  return { axis: spec.dimension - 1, level: root };
}

export function keyOf(coord: number[]): string {
  return coord.join(",");
}

function inLattice(spec: SessionSpec, coord: number[]): boolean {
  if (coord.length !== spec.dimension) return false;
  const { lo, hi } = axisRange(spec);
  return coord.every((c) => Number.isInteger(c) && c >= lo && c <= hi);
}

/** Split a labelled server cell [x, y, .., t] into coordinate and label. */
function splitLabelled(entry: number[]): { coord: number[]; t: number } {
  return { coord: entry.slice(0, -1), t: entry[entry.length - 1] };
}

function planeCoord(coord: number[], slice: Slice | null): [number, number] | null {
  if (slice === null) return [coord[0], coord[1]];
  if (coord[slice.axis] !== slice.level) return null;
  const rest = coord.filter((_, i) => i !== slice.axis);
  return [rest[0], rest[1]];
}

export function buildBoard(
  view: SessionView,
  staged: number[][] = [],
  hints: number[][] = [],
  slice: Slice | null = null,
): BoardModel {
  const spec = view.spec;
  if (spec.dimension > 2 && slice === null) {
    slice = defaultSlice(spec);
  }
  const { lo, hi } = axisRange(spec);
  const xs: number[] = [];
  for (let v = lo; v <= hi; v += 1) xs.push(v);
  const ys = xs.slice().reverse();

  const kinds = new Map<string, { kind: CellKind; label: string }>();
  const put = (coord: number[], kind: CellKind, label: string) => {
    const plane = planeCoord(coord, slice);
    if (plane !== null) kinds.set(keyOf(plane), { kind, label });
  };
  for (const entry of view.burnt) {
    const { coord, t } = splitLabelled(entry);
    put(coord, "burnt", String(t));
  }
  for (const entry of view.defended) {
    const { coord, t } = splitLabelled(entry);
    put(coord, "defended", String(t));
  }
  for (const coord of staged) put(coord, "staged", "+");
  for (const coord of hints) {
    const plane = planeCoord(coord, slice);
    if (plane === null) continue;
    const key = keyOf(plane);
    if (!kinds.has(key)) kinds.set(key, { kind: "hint", label: "?" });
  }

  const rows: BoardCell[][] = ys.map((y) =>
    xs.map((x) => {
      const found = kinds.get(keyOf([x, y]));
      const coord = fullCoord([x, y], slice);
      return found
        ? { coord, kind: found.kind, label: found.label }
        : { coord, kind: "empty", label: "" };
    }),
  );
  return { xs, ys, rows, slice };
}

/** Re-insert the sliced axis so a clicked plane cell maps back to the
 * lattice coordinate the server expects. */
export function fullCoord(plane: [number, number], slice: Slice | null): number[] {
  if (slice === null) return [plane[0], plane[1]];
  const coord = [...plane];
  coord.splice(slice.axis, 0, slice.level);
  return coord;
}

export type StageResult = { ok: true } | { ok: false; reason: string };

export class Staging {
  private placements: number[][] = [];

  list(): number[][] {
    return this.placements.map((p) => [...p]);
  }

  count(): number {
    return this.placements.length;
  }

  clear(): void {
    this.placements = [];
  }

  /** Click semantics: staging an already-staged cell unstages it. */
  toggle(coord: number[], view: SessionView): StageResult {
    const key = keyOf(coord);
    const index = this.placements.findIndex((p) => keyOf(p) === key);
    if (index >= 0) {
      this.placements.splice(index, 1);
      return { ok: true };
    }
    if (view.phase !== "AwaitingPlacements") {
      return { ok: false, reason: `session is ${view.phase}` };
    }
    if (!inLattice(view.spec, coord)) {
      return { ok: false, reason: `${key} is outside the lattice` };
    }
    if (view.burnt.some((e) => keyOf(e.slice(0, -1)) === key)) {
      return { ok: false, reason: `${key} is already burnt` };
    }
    if (view.defended.some((e) => keyOf(e.slice(0, -1)) === key)) {
      return { ok: false, reason: `${key} is already defended` };
    }
    if (this.placements.length >= view.f) {
      return { ok: false, reason: `budget is ${view.f} per turn` };
    }
    this.placements.push([...coord]);
    return { ok: true };
  }
}
