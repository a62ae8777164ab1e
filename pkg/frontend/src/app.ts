/** Wires the board to the service: new game, click-to-stage, commit, undo,
 * hint overlay, and the slice scrubber for 3D games. One mutation in flight
 * at a time; a new view always clears staging and hint highlights. */

import { ApiError, Client, type GameApi, type SessionView } from "./api.js";
import { renderBoard, renderCounters, renderStatus } from "./board.js";
import {
  Staging,
  buildBoard,
  defaultSlice,
  sliceLevels,
  type Slice,
} from "./state.js";

const HINT_TIMEOUT_MS = 20_000;

interface Elements {
  board: HTMLElement;
  counters: HTMLElement;
  status: HTMLElement;
  newGame: HTMLButtonElement;
  commit: HTMLButtonElement;
  undo: HTMLButtonElement;
  hint: HTMLButtonElement;
  geometry: HTMLSelectElement;
  size: HTMLInputElement;
  budget: HTMLInputElement;
  sliceControls: HTMLElement;
  sliceAxis: HTMLSelectElement;
  sliceLevel: HTMLInputElement;
  sliceReadout: HTMLElement;
}

export class App {
  private view: SessionView | null = null;
  private staging = new Staging();
  private hints: number[][] = [];
  private slice: Slice | null = null;
  private busy = false;
  private hintAbort: AbortController | null = null;

  constructor(
    private readonly client: GameApi,
    private readonly el: Elements,
  ) {
    el.newGame.addEventListener("click", () => void this.newGame());
    el.commit.addEventListener("click", () => void this.commit());
    el.undo.addEventListener("click", () => void this.undo());
    el.hint.addEventListener("click", () => void this.hint());
    el.sliceAxis.addEventListener("change", () => this.moveSlice());
    el.sliceLevel.addEventListener("input", () => this.moveSlice());
  }

  private adopt(view: SessionView, note = ""): void {
    this.view = view;
    this.staging.clear();
    this.hints = [];
    this.hintAbort?.abort();
    if (this.slice === null || view.spec.dimension <= 2) {
      this.slice = defaultSlice(view.spec);
    }
    this.syncSliceControls();
    this.paint();
    renderStatus(this.el.status, note || view.phase);
  }

  private paint(): void {
    if (this.view === null) return;
    const model = buildBoard(
      this.view,
      this.staging.list(),
      this.hints,
      this.slice,
    );
    renderBoard(this.el.board, model, (coord) => this.clickCell(coord));
    renderCounters(this.el.counters, this.view);
  }

  private syncSliceControls(): void {
    const spec = this.view?.spec;
    const show = spec !== undefined && spec.dimension > 2;
    this.el.sliceControls.hidden = !show;
    if (!show || spec === undefined || this.slice === null) return;
    const levels = sliceLevels(spec);
    this.el.sliceAxis.value = String(this.slice.axis);
    this.el.sliceLevel.min = String(levels[0]);
    this.el.sliceLevel.max = String(levels[levels.length - 1]);
    this.el.sliceLevel.value = String(this.slice.level);
    this.el.sliceReadout.textContent = `axis ${this.slice.axis} = ${this.slice.level}`;
  }

  private moveSlice(): void {
    if (this.view === null || this.view.spec.dimension <= 2) return;
    this.slice = {
      axis: Number(this.el.sliceAxis.value),
      level: Number(this.el.sliceLevel.value),
    };
    this.syncSliceControls();
    this.paint();
  }

  private clickCell(coord: number[]): void {
    if (this.view === null || this.busy) return;
    const verdict = this.staging.toggle(coord, this.view);
    if (!verdict.ok) {
      renderStatus(this.el.status, verdict.reason, true);
      return;
    }
    renderStatus(
      this.el.status,
      `staged ${this.staging.count()}/${this.view.f}`,
    );
    this.paint();
  }

  private async mutate(
    action: () => Promise<SessionView>,
    note: string,
  ): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    try {
      this.adopt(await action(), note);
    } catch (err) {
      if (err instanceof ApiError) {
        // staging survives a rejection so the player can fix the turn
        renderStatus(this.el.status, err.detail, true);
      } else {
        renderStatus(this.el.status, String(err), true);
      }
    } finally {
      this.busy = false;
    }
  }

  async newGame(): Promise<void> {
    const geometry = this.el.geometry.value;
    const size = Number(this.el.size.value);
    const f = Number(this.el.budget.value);
    const spec =
      geometry === "grid3"
        ? {
            schema: 1,
            geometry: "grid",
            dimension: 3,
            root: [0, 0, 0],
            side: size,
          }
        : {
            schema: 1,
            geometry: "box",
            dimension: 2,
            root: [0, 0],
            radius: size,
          };
    this.slice = null;
    await this.mutate(
      () => this.client.createSession({ spec, f }),
      "new game",
    );
  }

  async commit(): Promise<void> {
    if (this.view === null) return;
    const id = this.view.id;
    const placements = this.staging.list();
    await this.mutate(
      () => this.client.submitTurn(id, placements),
      `turn ${this.view.turn + 1} committed`,
    );
  }

  async undo(): Promise<void> {
    if (this.view === null) return;
    const id = this.view.id;
    await this.mutate(() => this.client.undo(id), "undone");
  }

  async hint(): Promise<void> {
    if (this.view === null || this.busy) return;
    this.hintAbort?.abort();
    const abort = new AbortController();
    this.hintAbort = abort;
    const timer = setTimeout(() => abort.abort(), HINT_TIMEOUT_MS);
    renderStatus(this.el.status, "thinking...");
    try {
      const hint = await this.client.hint(this.view.id, 200_000, abort.signal);
      this.hints = hint.placements;
      this.paint();
      if (hint.placements.length > 0) {
        renderStatus(
          this.el.status,
          `hint: ${hint.status}, burns ${hint.objective} (bound ${hint.lower_bound})`,
        );
      } else if (hint.bound !== undefined) {
        renderStatus(this.el.status, hint.bound.note);
      } else {
        renderStatus(this.el.status, hint.note ?? "no hint");
      }
    } catch (err) {
      if (abort.signal.aborted) {
        renderStatus(this.el.status, "no hint within budget", true);
      } else if (err instanceof ApiError) {
        renderStatus(this.el.status, err.detail, true);
      } else {
        renderStatus(this.el.status, String(err), true);
      }
    } finally {
      clearTimeout(timer);
    }
  }
}

export function grabElements(root: Document): Elements {
  const byId = <T extends HTMLElement>(id: string): T => {
    const found = root.getElementById(id);
    if (found === null) throw new Error(`missing #${id}`);
    return found as T;
  };
  return {
    board: byId("board"),
    counters: byId("counters"),
    status: byId("status"),
    newGame: byId("new-game"),
    commit: byId("commit"),
    undo: byId("undo"),
    hint: byId("hint"),
    geometry: byId("geometry"),
    size: byId("size"),
    budget: byId("budget"),
    sliceControls: byId("slice-controls"),
    sliceAxis: byId("slice-axis"),
    sliceLevel: byId("slice-level"),
    sliceReadout: byId("slice-readout"),
  };
}

export function boot(root: Document = document): App {
  const app = new App(new Client(""), grabElements(root));
  void app.newGame();
  return app;
}

declare global {
  interface Window {
    firebreakApp?: App;
  }
}

if (typeof document !== "undefined" && document.getElementById("board")) {
  window.firebreakApp = boot(document);
}
