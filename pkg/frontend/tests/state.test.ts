import { describe, expect, it } from "vitest";

import type { SessionView } from "../src/api.js";
import {
  Staging,
  axisRange,
  buildBoard,
  defaultSlice,
  fullCoord,
  sliceLevels,
} from "../src/state.js";
import replay from "./fixtures/replay.json";
import cube from "./fixtures/cube.json";

const views = replay.views as unknown as SessionView[];
const finalView = views[8];
const cubeView = cube.after_turn as unknown as SessionView;

describe("geometry", () => {
  it("box range is centered", () => {
    expect(axisRange(views[0].spec)).toEqual({ lo: -6, hi: 6 });
  });

  it("grid range starts at zero", () => {
    expect(axisRange(cubeView.spec)).toEqual({ lo: 0, hi: 4 });
    expect(sliceLevels(cubeView.spec)).toEqual([0, 1, 2, 3, 4]);
  });

  it("2d games have no slice", () => {
    expect(defaultSlice(views[0].spec)).toBeNull();
  });

  it("3d games slice the last axis at the root level", () => {
    expect(defaultSlice(cubeView.spec)).toEqual({ axis: 2, level: 0 });
  });

  it("fullCoord reinserts the sliced axis", () => {
    expect(fullCoord([1, 3], { axis: 2, level: 4 })).toEqual([1, 3, 4]);
    expect(fullCoord([1, 3], { axis: 0, level: 2 })).toEqual([2, 1, 3]);
    expect(fullCoord([1, 3], null)).toEqual([1, 3]);
  });
});

describe("board model", () => {
  it("final replay view renders 18 burnt cells with their burn times", () => {
    const model = buildBoard(finalView);
    expect(model.xs).toHaveLength(13);
    expect(model.rows).toHaveLength(13);
    const burnt = model.rows.flat().filter((c) => c.kind === "burnt");
    expect(burnt).toHaveLength(18);
    const byKey = new Map(
      finalView.burnt.map((e) => [e.slice(0, 2).join(","), String(e[2])]),
    );
    for (const cell of burnt) {
      expect(cell.label).toBe(byKey.get(cell.coord.join(",")));
    }
  });

  it("defended cells show their placement turn", () => {
    const model = buildBoard(finalView);
    const defended = model.rows.flat().filter((c) => c.kind === "defended");
    expect(defended).toHaveLength(16);
    const labels = defended.map((c) => Number(c.label)).sort((a, b) => a - b);
    expect(labels[0]).toBe(1);
    expect(labels[labels.length - 1]).toBe(8);
  });

  it("staged and hint markers overlay empty cells only", () => {
    const model = buildBoard(views[0], [[0, 1]], [[0, 1], [1, 0]]);
    const flat = model.rows.flat();
    expect(flat.filter((c) => c.kind === "staged")).toHaveLength(1);
    // the staged cell shadows the hint on the same square
    expect(flat.filter((c) => c.kind === "hint")).toHaveLength(1);
  });

  it("slicing the cube isolates one plane", () => {
    const z0 = buildBoard(cubeView, [], [], { axis: 2, level: 0 });
    const z1 = buildBoard(cubeView, [], [], { axis: 2, level: 1 });
    const burntAt = (m: typeof z0) =>
      m.rows.flat().filter((c) => c.kind === "burnt").length;
    // outbreak corner plus two in-plane neighbours at z=0, one at z=1
    expect(burntAt(z0)).toBe(3);
    expect(burntAt(z1)).toBe(1);
    const defended = z0.rows.flat().filter((c) => c.kind === "defended");
    expect(defended.map((c) => c.coord)).toEqual([[2, 0, 0]]);
  });
});

describe("staging pre-checks", () => {
  const fresh = views[0];

  it("accepts legal cells up to the budget and toggles them off", () => {
    const staging = new Staging();
    expect(staging.toggle([0, 1], fresh)).toEqual({ ok: true });
    expect(staging.toggle([1, 0], fresh)).toEqual({ ok: true });
    expect(staging.count()).toBe(2);
    const third = staging.toggle([0, -1], fresh);
    expect(third.ok).toBe(false);
    if (!third.ok) expect(third.reason).toContain("budget");
    expect(staging.toggle([1, 0], fresh)).toEqual({ ok: true });
    expect(staging.list()).toEqual([[0, 1]]);
  });

  it("rejects burnt, defended, and off-board cells", () => {
    const midGame = views[3];
    const staging = new Staging();
    const onBurnt = staging.toggle([0, 0], midGame);
    expect(onBurnt.ok).toBe(false);
    if (!onBurnt.ok) expect(onBurnt.reason).toContain("burnt");
    const defendedCell = midGame.defended[0].slice(0, 2);
    const onDefended = staging.toggle(defendedCell, midGame);
    expect(onDefended.ok).toBe(false);
    if (!onDefended.ok) expect(onDefended.reason).toContain("defended");
    const outside = staging.toggle([99, 0], midGame);
    expect(outside.ok).toBe(false);
    if (!outside.ok) expect(outside.reason).toContain("outside");
    expect(staging.count()).toBe(0);
  });

  it("refuses staging once the game is over", () => {
    const staging = new Staging();
    const verdict = staging.toggle([6, 6], finalView);
    expect(verdict.ok).toBe(false);
    if (!verdict.ok) expect(verdict.reason).toContain("Contained");
  });
});
