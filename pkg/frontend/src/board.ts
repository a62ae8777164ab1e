/** DOM rendering for the board and the side panel. Render is total: it
 * rebuilds the grid from the model on every call, no incremental patching. */

import type { SessionView } from "./api.js";
import type { BoardModel } from "./state.js";

export type CellHandler = (coord: number[]) => void;

export function renderBoard(
  container: HTMLElement,
  model: BoardModel,
  onCell: CellHandler | null = null,
): void {
  container.textContent = "";
  container.style.setProperty("--cols", String(model.xs.length));
  for (const row of model.rows) {
    for (const cell of row) {
      const el = container.ownerDocument.createElement("button");
      el.type = "button";
      el.className = `cell cell--${cell.kind}`;
      el.dataset.coord = cell.coord.join(",");
      el.textContent = cell.label;
      el.title = cell.coord.join(", ");
      if (onCell !== null) {
        const coord = cell.coord;
        el.addEventListener("click", () => onCell(coord));
      }
      container.appendChild(el);
    }
  }
}

export function renderCounters(container: HTMLElement, view: SessionView): void {
  const c = view.counters;
  const parts = [
    ["turn", view.turn],
    ["phase", view.phase],
    ["burnt", c.burnt],
    ["defended", c.defended],
    ["saved", c.saved],
    ["budget", view.f],
  ] as const;
  container.textContent = "";
  for (const [name, value] of parts) {
    const dt = container.ownerDocument.createElement("dt");
    dt.textContent = name;
    const dd = container.ownerDocument.createElement("dd");
    dd.textContent = String(value);
    dd.dataset.counter = name;
    container.appendChild(dt);
    container.appendChild(dd);
  }
}

export function renderStatus(
  container: HTMLElement,
  text: string,
  isError = false,
): void {
  container.textContent = text;
  container.classList.toggle("status--error", isError);
}
