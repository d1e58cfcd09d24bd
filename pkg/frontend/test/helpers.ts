import { App } from "../src/app.js";
import { FakeServer } from "./fake-server.js";

export function mount(server: FakeServer): App {
  document.body.innerHTML = '<div id="app"></div>';
  return new App(document.getElementById("app")!, server.fetch);
}

/** Let queued promise chains and handlers settle. */
export async function flush(rounds = 8): Promise<void> {
  for (let i = 0; i < rounds; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

export function cellAt(row: number, col: number): HTMLElement {
  const cell = document.querySelector<HTMLElement>(
    `.cell[data-row="${row}"][data-col="${col}"]`,
  );
  if (!cell) throw new Error(`no cell at (${row}, ${col})`);
  return cell;
}

export function click(el: HTMLElement): void {
  el.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

export function clickChip(label: string): void {
  const chips = Array.from(document.querySelectorAll<HTMLElement>(".chip"));
  const chip = chips.find((c) => c.textContent === label);
  if (!chip) {
    throw new Error(
      `no shape chip ${label}; have ${chips.map((c) => c.textContent).join(" ")}`,
    );
  }
  click(chip);
}

export function text(selector: string): string {
  return document.querySelector(selector)?.textContent ?? "";
}

/** Place through the UI: pick the shape chip, then click the anchor cell. */
export async function place(
  h: number,
  v: number,
  x: number,
  y: number,
): Promise<void> {
  clickChip(`${h}×${v}`);
  await flush();
  click(cellAt(y, x));
  await flush();
}
