/** Board rendering: a pure function of server state plus local hover. */

import type { GameStateDto, PlacementDto } from "./api.js";

export const PALETTE_SIZE = 12;

export function turnColorClass(turn: number): string {
  return `c${(turn - 1) % PALETTE_SIZE}`;
}

export interface Ghost {
  h: number;
  v: number;
  x: number;
  y: number;
  kind: "pending" | "hint";
}

export interface BoardView {
  state: GameStateDto;
  /** "x,y" anchors that are legal for the currently selected shape */
  anchors: Set<string>;
  ghost: Ghost | null;
}

function ghostCovers(ghost: Ghost | null, row: number, col: number): boolean {
  if (!ghost) return false;
  return (
    col >= ghost.x &&
    col < ghost.x + ghost.h &&
    row >= ghost.y &&
    row < ghost.y + ghost.v
  );
}

export function renderBoard(root: HTMLElement, view: BoardView): void {
  const { state, anchors, ghost } = view;
  root.innerHTML = "";
  root.style.setProperty("--cols", String(state.cols));
  for (let r = 0; r < state.rows; r++) {
    for (let c = 0; c < state.cols; c++) {
      const cell = document.createElement("div");
      cell.className = "cell";
      cell.dataset.row = String(r);
      cell.dataset.col = String(c);
      const turn = state.cells[r][c];
      if (turn === state.prefilled_tag && turn !== null) {
        cell.classList.add("prefilled");
      } else if (turn !== null) {
        cell.classList.add("filled", turnColorClass(turn));
        cell.textContent = String(turn);
      } else {
        if (anchors.has(`${c},${r}`)) cell.classList.add("anchor");
        if (ghostCovers(ghost, r, c)) {
          cell.classList.add(ghost!.kind === "hint" ? "ghost-hint" : "ghost");
        }
      }
      root.appendChild(cell);
    }
  }
}

/** Distinct shapes among the legal placements, widest-first per area. */
export function shapeChoices(placements: PlacementDto[]): Array<[number, number]> {
  const seen = new Set<string>();
  const shapes: Array<[number, number]> = [];
  for (const p of placements) {
    const key = `${p.h}x${p.v}`;
    if (!seen.has(key)) {
      seen.add(key);
      shapes.push([p.h, p.v]);
    }
  }
  shapes.sort((a, b) => a[0] * a[1] - b[0] * b[1] || b[0] - a[0]);
  return shapes;
}

export function anchorsForShape(
  placements: PlacementDto[],
  h: number,
  v: number,
): Set<string> {
  const anchors = new Set<string>();
  for (const p of placements) {
    if (p.h === h && p.v === v) anchors.add(`${p.x},${p.y}`);
  }
  return anchors;
}
