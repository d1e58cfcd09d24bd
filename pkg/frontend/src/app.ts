/** Interactive shell: one App wires the controls, board and service calls.
 *
 * The server response is the only thing that ever changes board state;
 * everything here re-renders from the last GameStateDto.
 */

import { Api, ApiError, FetchLike } from "./api.js";
import type { GameStateDto, HintDto, PlacementDto } from "./api.js";
import {
  anchorsForShape,
  Ghost,
  renderBoard,
  shapeChoices,
} from "./board.js";

const BANNER_TEXT: Record<string, string> = {
  Open: "verdict: Open, a perfect game may exist",
  SmallGapImpossible: "no perfect game exists (small-gap impossibility)",
  LargeGapImpossible: "no perfect game exists (large-gap impossibility)",
};

export class App {
  readonly api: Api;
  state: GameStateDto | null = null;
  legal: PlacementDto[] = [];
  shape: [number, number] | null = null;
  hover: { x: number; y: number } | null = null;
  hintGhost: Ghost | null = null;
  busy = false;
  hintAbort: AbortController | null = null;

  private boardEl: HTMLElement;
  private bannerEl: HTMLElement;
  private statusEl: HTMLElement;
  private shapesEl: HTMLElement;
  private hintEl: HTMLElement;
  private toastsEl: HTMLElement;
  private sizeInput: HTMLInputElement;
  private modeSelect: HTMLSelectElement;

  constructor(readonly root: HTMLElement, fetchLike: FetchLike) {
    this.api = new Api(fetchLike);
    root.innerHTML = `
      <div class="topbar">
        <label>size <input id="size" type="number" min="1" max="50" value="5"></label>
        <select id="mode">
          <option value="solitaire">solitaire</option>
          <option value="two-player">two player</option>
        </select>
        <button id="new-game">new game</button>
      </div>
      <div id="banner" class="banner" hidden></div>
      <div id="status" class="status"></div>
      <div class="controls">
        <span id="shapes" class="shapes"></span>
        <button id="rotate" title="swap width and height">rotate</button>
        <button id="undo">undo</button>
        <button id="hint">hint</button>
        <button id="hint-cancel" hidden>cancel</button>
      </div>
      <div id="hint-box" class="hint" hidden></div>
      <div id="board" class="board"></div>
      <div id="toasts" class="toasts"></div>
    `;
    this.boardEl = this.el("#board");
    this.bannerEl = this.el("#banner");
    this.statusEl = this.el("#status");
    this.shapesEl = this.el("#shapes");
    this.hintEl = this.el("#hint-box");
    this.toastsEl = this.el("#toasts");
    this.sizeInput = this.el("#size");
    this.modeSelect = this.el("#mode");

    this.el("#new-game").addEventListener("click", () => {
      void this.newGame(Number(this.sizeInput.value), this.modeSelect.value);
    });
    this.el("#rotate").addEventListener("click", () => this.rotate());
    this.el("#undo").addEventListener("click", () => void this.undo());
    this.el("#hint").addEventListener("click", () => void this.requestHint());
    this.el("#hint-cancel").addEventListener("click", () => this.cancelHint());
    this.boardEl.addEventListener("mousemove", (ev) => this.onHover(ev));
    this.boardEl.addEventListener("mouseleave", () => {
      this.hover = null;
      this.render();
    });
    this.boardEl.addEventListener("click", (ev) => void this.onClick(ev));
  }

  private el<T extends HTMLElement>(selector: string): T {
    const found = this.root.querySelector<T>(selector);
    if (!found) throw new Error(`missing element ${selector}`);
    return found;
  }

  async newGame(n: number, mode: string): Promise<void> {
    this.clearHint();
    let banner = "";
    try {
      const word = await this.api.verdict(n, n);
      banner = BANNER_TEXT[word.kind] ?? word.kind;
    } catch (err) {
      this.toast(err);
    }
    try {
      const state = await this.api.createGame(n, mode);
      this.setBanner(banner, "verdict");
      await this.applyState(state);
    } catch (err) {
      this.toast(err);
    }
  }

  /** Repaint from a fresh server state and re-fetch the legal moves. */
  async applyState(state: GameStateDto): Promise<void> {
    this.state = state;
    this.hintGhost = null;
    if (state.movable) {
      try {
        const legal = await this.api.legal(state.id);
        this.legal = legal.placements;
      } catch (err) {
        this.legal = [];
        this.toast(err);
      }
    } else {
      this.legal = [];
    }
    const shapes = shapeChoices(this.legal);
    const kept = this.shape
      ? shapes.find(([h, v]) => h === this.shape![0] && v === this.shape![1])
      : undefined;
    this.shape = kept ?? shapes[0] ?? null;
    if (state.full) {
      this.setBanner("perfect game", "victory");
    } else if (state.finished && state.mode === "two-player") {
      this.setBanner(`no move for player ${state.loser}: player ${state.loser} loses`, "loss");
    } else if (state.finished) {
      this.setBanner("no legal moves remain", "loss");
    }
    this.render();
  }

  rotate(): void {
    if (!this.shape) return;
    this.shape = [this.shape[1], this.shape[0]];
    this.render();
  }

  selectShape(h: number, v: number): void {
    this.shape = [h, v];
    this.render();
  }

  private cellFromEvent(ev: Event): { x: number; y: number } | null {
    const target = ev.target as HTMLElement | null;
    if (!target || target.dataset.row === undefined) return null;
    return { x: Number(target.dataset.col), y: Number(target.dataset.row) };
  }

  private onHover(ev: Event): void {
    const cell = this.cellFromEvent(ev);
    if (!cell) return;
    this.hover = cell;
    this.render();
  }

  private async onClick(ev: Event): Promise<void> {
    const cell = this.cellFromEvent(ev);
    if (!cell || !this.state || !this.shape || this.busy) return;
    const [h, v] = this.shape;
    const move = { turn: this.state.turn, h, v, x: cell.x, y: cell.y };
    this.busy = true;
    try {
      const state = await this.api.move(this.state.id, move);
      await this.applyState(state);
    } catch (err) {
      this.toast(err);
    } finally {
      this.busy = false;
    }
  }

  async undo(): Promise<void> {
    if (!this.state || this.busy) return;
    this.busy = true;
    this.clearHint();
    try {
      const state = await this.api.undo(this.state.id);
      this.setBanner("", "none");
      await this.applyState(state);
    } catch (err) {
      this.toast(err);
    } finally {
      this.busy = false;
    }
  }

  async requestHint(budgetS = 5.0): Promise<void> {
    if (!this.state || this.hintAbort) return;
    this.hintAbort = new AbortController();
    this.el("#hint-cancel").hidden = false;
    this.hintEl.hidden = false;
    this.hintEl.className = "hint hint-waiting";
    this.hintEl.textContent = "thinking...";
    try {
      const hint = await this.api.hint(
        this.state.id,
        budgetS,
        this.hintAbort.signal,
      );
      this.showHint(hint);
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") {
        this.hintEl.hidden = true;
      } else if (err instanceof ApiError && err.status === 503) {
        this.hintEl.hidden = true;
        this.toast("solver unavailable");
      } else {
        this.hintEl.hidden = true;
        this.toast(err);
      }
    } finally {
      this.hintAbort = null;
      this.el("#hint-cancel").hidden = true;
    }
  }

  private showHint(hint: HintDto): void {
    if (hint.answer === "Yes" && hint.suggestion) {
      const s = hint.suggestion;
      this.hintEl.className = "hint hint-yes";
      this.hintEl.textContent = `completable: try ${s.h}x${s.v} at (${s.x}, ${s.y})`;
      this.hintGhost = { h: s.h, v: s.v, x: s.x, y: s.y, kind: "hint" };
    } else if (hint.answer === "No") {
      this.hintEl.className = "hint hint-no";
      this.hintEl.textContent = "dead position: no perfect completion exists";
      this.hintGhost = null;
    } else {
      this.hintEl.className = "hint hint-unknown";
      this.hintEl.textContent = "no answer within the budget";
      this.hintGhost = null;
    }
    this.render();
  }

  cancelHint(): void {
    this.hintAbort?.abort();
  }

  private clearHint(): void {
    this.cancelHint();
    this.hintGhost = null;
    this.hintEl.hidden = true;
  }

  private setBanner(text: string, kind: "verdict" | "victory" | "loss" | "none"): void {
    if (!text || kind === "none") {
      this.bannerEl.hidden = true;
      this.bannerEl.textContent = "";
      this.bannerEl.className = "banner";
      return;
    }
    this.bannerEl.hidden = false;
    this.bannerEl.textContent = text;
    this.bannerEl.className = `banner banner-${kind}`;
  }

  toast(err: unknown): void {
    const div = document.createElement("div");
    div.className = "toast";
    if (err instanceof ApiError) {
      div.classList.add(`toast-${err.code}`);
      div.textContent = `${err.code}: ${err.message}`;
    } else {
      div.textContent = String(err);
    }
    this.toastsEl.appendChild(div);
    setTimeout(() => div.remove(), 4000);
  }

  render(): void {
    const state = this.state;
    if (!state) return;
    const parts = [`turn ${state.turn}`];
    if (state.movable) parts.push(`area ${state.turn} or ${state.turn + 1}`);
    if (state.mode === "two-player" && !state.finished) {
      parts.push(`player ${state.mover}`);
    }
    parts.push(`${state.covered}/${state.rows * state.cols} covered`);
    this.statusEl.textContent = parts.join(", ");

    this.shapesEl.innerHTML = "";
    const [sh, sv] = this.shape ?? [0, 0];
    for (const [h, v] of shapeChoices(this.legal)) {
      const chip = document.createElement("button");
      chip.className = "chip";
      if (h === sh && v === sv) chip.classList.add("chip-active");
      chip.textContent = `${h}×${v}`;
      chip.addEventListener("click", () => this.selectShape(h, v));
      this.shapesEl.appendChild(chip);
    }

    const anchors = this.shape
      ? anchorsForShape(this.legal, this.shape[0], this.shape[1])
      : new Set<string>();
    let ghost: Ghost | null = this.hintGhost;
    if (!ghost && this.hover && this.shape) {
      const key = `${this.hover.x},${this.hover.y}`;
      if (anchors.has(key)) {
        ghost = {
          h: this.shape[0],
          v: this.shape[1],
          x: this.hover.x,
          y: this.hover.y,
          kind: "pending",
        };
      }
    }
    renderBoard(this.boardEl, { state, anchors, ghost });
  }
}
