import { describe, expect, it } from "vitest";

import type { GameStateDto } from "../src/api.js";
import {
  anchorsForShape,
  renderBoard,
  shapeChoices,
  turnColorClass,
} from "../src/board.js";

function stateWith(cells: (number | null)[][]): GameStateDto {
  return {
    schema_version: 1,
    id: "t",
    mode: "solitaire",
    rows: cells.length,
    cols: cells[0].length,
    turn: 1,
    cells,
    prefilled_tag: 0,
    transcript: [],
    covered: 0,
    full: false,
    perfect: false,
    movable: true,
  };
}

function render(cells: (number | null)[][], anchors = new Set<string>(), ghost = null as any) {
  const root = document.createElement("div");
  renderBoard(root, { state: stateWith(cells), anchors, ghost });
  return root;
}

describe("turn colors", () => {
  it("cycles a fixed palette", () => {
    expect(turnColorClass(1)).toBe("c0");
    expect(turnColorClass(12)).toBe("c11");
    expect(turnColorClass(13)).toBe("c0");
  });
});

describe("renderBoard", () => {
  it("draws one element per cell in row-major order", () => {
    const root = render([
      [null, 1],
      [2, null],
    ]);
    const cells = root.querySelectorAll(".cell");
    expect(cells).toHaveLength(4);
    expect((cells[1] as HTMLElement).dataset).toMatchObject({ row: "0", col: "1" });
  });

  it("colors filled cells by their turn and labels them", () => {
    const root = render([[1, 14]]);
    const [a, b] = Array.from(root.querySelectorAll(".cell"));
    expect(a.classList.contains("c0")).toBe(true);
    expect(a.textContent).toBe("1");
    expect(b.classList.contains("c1")).toBe(true);
  });

  it("marks prefilled cells distinctly, without a label", () => {
    const root = render([[0, null]]);
    const cell = root.querySelector(".cell")!;
    expect(cell.classList.contains("prefilled")).toBe(true);
    expect(cell.classList.contains("filled")).toBe(false);
    expect(cell.textContent).toBe("");
  });

  it("marks anchors only on empty cells", () => {
    const root = render([[1, null]], new Set(["0,0", "1,0"]));
    const [a, b] = Array.from(root.querySelectorAll(".cell"));
    expect(a.classList.contains("anchor")).toBe(false);
    expect(b.classList.contains("anchor")).toBe(true);
  });

  it("shades the ghost rectangle over its whole footprint", () => {
    const root = render(
      [
        [null, null, null],
        [null, null, null],
      ],
      new Set(),
      { h: 2, v: 1, x: 1, y: 1, kind: "pending" },
    );
    const ghosts = Array.from(root.querySelectorAll(".ghost")).map(
      (el) => `${(el as HTMLElement).dataset.col},${(el as HTMLElement).dataset.row}`,
    );
    expect(ghosts).toEqual(["1,1", "2,1"]);
  });

  it("uses a separate class for hint ghosts", () => {
    const root = render([[null]], new Set(), { h: 1, v: 1, x: 0, y: 0, kind: "hint" });
    expect(root.querySelector(".ghost-hint")).not.toBeNull();
    expect(root.querySelector(".ghost")).toBeNull();
  });
});

describe("shape helpers", () => {
  const legal = [
    { turn: 2, h: 1, v: 2, x: 0, y: 0 },
    { turn: 2, h: 1, v: 2, x: 1, y: 0 },
    { turn: 2, h: 2, v: 1, x: 0, y: 0 },
    { turn: 2, h: 3, v: 1, x: 0, y: 0 },
    { turn: 2, h: 1, v: 3, x: 2, y: 0 },
  ];

  it("deduplicates shapes and sorts by area then width", () => {
    expect(shapeChoices(legal)).toEqual([
      [2, 1],
      [1, 2],
      [3, 1],
      [1, 3],
    ]);
  });

  it("collects the anchors of one shape", () => {
    expect(anchorsForShape(legal, 1, 2)).toEqual(new Set(["0,0", "1,0"]));
    expect(anchorsForShape(legal, 5, 5).size).toBe(0);
  });
});
