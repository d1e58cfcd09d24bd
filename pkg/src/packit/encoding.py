"""CNF encoding of "pack exactly these rectangles into the grid".

Each rectangle gets, per axis, three indicator vectors over the axis
positions: a *prefix* vector true up to the rectangle's last covered
index, a *suffix* vector true from its first covered index, and a *span*
vector marking the covered indices themselves (span = prefix AND
suffix). Keeping prefixes and suffixes monotone costs O(N) binary
clauses per vector and makes every span a contiguous interval, so the
whole formula stays cubic in the board side instead of the quartic size
a direct cell-based encoding needs.

Clause families, numbered as reported by clause_stats:

1. suffix monotone      suffix[i] -> suffix[i+1]
2. prefix monotone      prefix[i] -> prefix[i-1]
3. span conjunction     span[i] <-> prefix[i] AND suffix[i]
4. extent length        the span interval has exactly the extent length
                        (upper clauses forbid longer, first-suffix-index
                        clauses forbid shorter, one anchor clause keeps
                        the interval inside the axis)
5. nonemptiness         prefix[0] and suffix[N-1] hold
6. pair channel         a shared column forces the pair's channel
                        variable true, a shared row forces it false, so
                        no pair shares both
7. blocked cells        span_x[col] AND span_y[row] forbidden (only for
                        completion queries on partially filled boards)

Rectangles with different side lengths get one rotation literal guarding
their family-4 clauses: unrotated means the x-extent is h, rotated means
the extents swap. Orientations that cannot fit the board pin the
rotation literal instead.

The variable order is fixed (all x prefixes, all x suffixes, all x
spans, then the y blocks, then rotations, then channels; each block
ordered by rectangle then position) so identical inputs produce
byte-identical DIMACS files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .core import GridDims, Placement
from .errors import DecodeError, InvalidInputError
from .selection import RectangleSelection

#: family numbers used by clause_stats
SUFFIX_MONOTONE, PREFIX_MONOTONE, CONJUNCTION, LENGTH, NONEMPTY, CHANNEL, BLOCKED = (
    1,
    2,
    3,
    4,
    5,
    6,
    7,
)


@dataclass
class CnfFormula:
    """Clause list with per-family bookkeeping."""

    num_vars: int
    clauses: list[list[int]] = field(default_factory=list)
    family_counts: dict[int, int] = field(default_factory=dict)

    def add(self, literals: Sequence[int], family: int) -> None:
        clause = list(literals)
        if not clause:
            raise InvalidInputError("refusing to add an empty clause")
        for lit in clause:
            if lit == 0 or abs(lit) > self.num_vars:
                raise InvalidInputError(f"literal {lit} outside 1..{self.num_vars}")
        self.clauses.append(clause)
        self.family_counts[family] = self.family_counts.get(family, 0) + 1


class VariableMap:
    """Dense DIMACS indices for every variable of one encoding.

    Total count = 6 * K * axis lengths summed + one rotation literal per
    non-square rectangle + K*(K-1)/2 channel variables:

        3*K*cols + 3*K*rows + len(rotatable) + K*(K-1)//2
    """

    def __init__(self, dims: GridDims, selection: RectangleSelection):
        self.dims = dims
        self.shapes = selection.rects
        self.turns = tuple(selection.turn_of(i) for i in range(len(selection.rects)))
        k = len(self.shapes)
        rows, cols = dims.rows, dims.cols
        self._cols = cols
        self._rows = rows
        self._prefix_x = 0
        self._suffix_x = k * cols
        self._span_x = 2 * k * cols
        self._prefix_y = 3 * k * cols
        self._suffix_y = 3 * k * cols + k * rows
        self._span_y = 3 * k * cols + 2 * k * rows
        base = 3 * k * cols + 3 * k * rows
        self._rotation: dict[int, int] = {}
        for r, (h, v) in enumerate(self.shapes):
            if h != v:
                base += 1
                self._rotation[r] = base
        self._channel_base = base
        self.num_vars = base + k * (k - 1) // 2

    @property
    def rect_count(self) -> int:
        return len(self.shapes)

    def prefix_x(self, rect: int, i: int) -> int:
        return self._prefix_x + rect * self._cols + i + 1

    def suffix_x(self, rect: int, i: int) -> int:
        return self._suffix_x + rect * self._cols + i + 1

    def span_x(self, rect: int, i: int) -> int:
        return self._span_x + rect * self._cols + i + 1

    def prefix_y(self, rect: int, j: int) -> int:
        return self._prefix_y + rect * self._rows + j + 1

    def suffix_y(self, rect: int, j: int) -> int:
        return self._suffix_y + rect * self._rows + j + 1

    def span_y(self, rect: int, j: int) -> int:
        return self._span_y + rect * self._rows + j + 1

    def rotation(self, rect: int) -> Optional[int]:
        """Rotation literal, or None for square rectangles."""
        return self._rotation.get(rect)

    def channel(self, rect_a: int, rect_b: int) -> int:
        """Channel variable for a pair, rect_a < rect_b."""
        if not 0 <= rect_a < rect_b < self.rect_count:
            raise InvalidInputError(f"bad channel pair ({rect_a}, {rect_b})")
        k = self.rect_count
        offset = rect_a * k - rect_a * (rect_a + 1) // 2 + (rect_b - rect_a - 1)
        return self._channel_base + offset + 1


@dataclass(frozen=True)
class DecodedPacking:
    """Per-rectangle covered intervals read off a model."""

    dims: GridDims
    turns: tuple[int, ...]
    x_intervals: tuple[tuple[int, int], ...]
    y_intervals: tuple[tuple[int, int], ...]

    def to_placements(self) -> list[Placement]:
        moves = []
        for idx, turn in enumerate(self.turns):
            x0, x1 = self.x_intervals[idx]
            y0, y1 = self.y_intervals[idx]
            moves.append(Placement(turn, x1 - x0 + 1, y1 - y0 + 1, x0, y0))
        moves.sort(key=lambda p: p.turn)
        return moves


def _length_clauses(f, guard, prefix, suffix, extent, axis_len):
    """Family 4 for one rectangle, one axis, one orientation.

    ``guard`` is [] or a single literal that is true whenever this
    orientation is NOT selected (so the clauses only bite under the
    right rotation). Upper clauses stop the span exceeding ``extent``;
    the first-suffix-index clauses force the prefix to reach far enough
    past wherever the suffix starts; the anchor clause keeps the suffix
    start early enough to leave room.
    """
    for i in range(extent, axis_len):
        f.add(guard + [-prefix(i), -suffix(i - extent)], LENGTH)
    f.add(guard + [-suffix(0), prefix(extent - 1)], LENGTH)
    for i in range(1, axis_len - extent + 1):
        f.add(guard + [-suffix(i), suffix(i - 1), prefix(i + extent - 1)], LENGTH)
    f.add(guard + [suffix(axis_len - extent)], LENGTH)


def encode(
    dims: GridDims,
    selection: RectangleSelection,
    blocked_cells: Iterable[tuple[int, int]] = (),
) -> tuple[CnfFormula, VariableMap]:
    """Build the CNF whose models are exactly the valid packings.

    ``blocked_cells`` (row, col) pairs exclude already occupied cells for
    completion queries; plain full-board encodings leave it empty.
    """
    if selection.dims != dims:
        raise InvalidInputError(
            f"selection was computed for {selection.dims}, board is {dims}"
        )
    rows, cols = dims.rows, dims.cols
    vm = VariableMap(dims, selection)
    f = CnfFormula(num_vars=vm.num_vars)

    for rect, (h, v) in enumerate(vm.shapes):
        for axis_len, prefix, suffix, span in (
            (cols, vm.prefix_x, vm.suffix_x, vm.span_x),
            (rows, vm.prefix_y, vm.suffix_y, vm.span_y),
        ):
            pre = lambda i, rect=rect, fn=prefix: fn(rect, i)
            suf = lambda i, rect=rect, fn=suffix: fn(rect, i)
            spn = lambda i, rect=rect, fn=span: fn(rect, i)
            for i in range(axis_len - 1):
                f.add([-suf(i), suf(i + 1)], SUFFIX_MONOTONE)
            for i in range(1, axis_len):
                f.add([-pre(i), pre(i - 1)], PREFIX_MONOTONE)
            for i in range(axis_len):
                f.add([-spn(i), pre(i)], CONJUNCTION)
                f.add([-spn(i), suf(i)], CONJUNCTION)
                f.add([spn(i), -pre(i), -suf(i)], CONJUNCTION)
            f.add([pre(0)], NONEMPTY)
            f.add([suf(axis_len - 1)], NONEMPTY)

        rot = vm.rotation(rect)
        unrotated_fits = h <= cols and v <= rows
        rotated_fits = v <= cols and h <= rows
        if rot is None:
            if not unrotated_fits:
                raise InvalidInputError(f"rectangle {h}x{v} cannot fit {dims}")
            px = lambda i, rect=rect: vm.prefix_x(rect, i)
            sx = lambda i, rect=rect: vm.suffix_x(rect, i)
            py = lambda j, rect=rect: vm.prefix_y(rect, j)
            sy = lambda j, rect=rect: vm.suffix_y(rect, j)
            _length_clauses(f, [], px, sx, h, cols)
            _length_clauses(f, [], py, sy, v, rows)
        else:
            if not unrotated_fits and not rotated_fits:
                raise InvalidInputError(f"rectangle {h}x{v} cannot fit {dims}")
            px = lambda i, rect=rect: vm.prefix_x(rect, i)
            sx = lambda i, rect=rect: vm.suffix_x(rect, i)
            py = lambda j, rect=rect: vm.prefix_y(rect, j)
            sy = lambda j, rect=rect: vm.suffix_y(rect, j)
            if unrotated_fits:
                # clauses hold whenever the rotation literal is false
                _length_clauses(f, [rot], px, sx, h, cols)
                _length_clauses(f, [rot], py, sy, v, rows)
            else:
                f.add([rot], LENGTH)
            if rotated_fits:
                _length_clauses(f, [-rot], px, sx, v, cols)
                _length_clauses(f, [-rot], py, sy, h, rows)
            else:
                f.add([-rot], LENGTH)

    for a in range(vm.rect_count):
        for b in range(a + 1, vm.rect_count):
            chan = vm.channel(a, b)
            for i in range(cols):
                f.add([-vm.span_x(a, i), -vm.span_x(b, i), chan], CHANNEL)
            for j in range(rows):
                f.add([-vm.span_y(a, j), -vm.span_y(b, j), -chan], CHANNEL)

    blocked = sorted(set(blocked_cells))
    for rect in range(vm.rect_count):
        for (r, c) in blocked:
            f.add([-vm.span_x(rect, c), -vm.span_y(rect, r)], BLOCKED)

    return f, vm


def emit_dimacs(f: CnfFormula) -> str:
    """Standard DIMACS CNF text, byte-stable for identical formulas."""
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    for clause in f.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def clause_stats(f: CnfFormula, vm: Optional[VariableMap] = None) -> dict:
    """Variable/clause totals plus the per-family breakdown."""
    stats = {
        "vars": f.num_vars,
        "clauses": len(f.clauses),
        "by_family": dict(sorted(f.family_counts.items())),
    }
    assert sum(stats["by_family"].values()) == stats["clauses"]
    return stats


def _true_indices(model: set[int], var_of, count: int) -> list[int]:
    return [i for i in range(count) if var_of(i) in model]


def decode_model(vm: VariableMap, model: set[int]) -> DecodedPacking:
    """Read rectangle intervals off a satisfying assignment.

    ``model`` is the set of true variable indices. Every structural
    assumption (prefixes are prefixes, suffixes are suffixes, spans are
    contiguous with the right length) is asserted here; a violation
    raises DecodeError because it means the encoder is wrong, and a
    silently repaired board would hide that.
    """
    x_intervals = []
    y_intervals = []
    for rect, (h, v) in enumerate(vm.shapes):
        axes = []
        for axis_len, prefix, suffix, span in (
            (vm.dims.cols, vm.prefix_x, vm.suffix_x, vm.span_x),
            (vm.dims.rows, vm.prefix_y, vm.suffix_y, vm.span_y),
        ):
            pre = _true_indices(model, lambda i: prefix(rect, i), axis_len)
            suf = _true_indices(model, lambda i: suffix(rect, i), axis_len)
            spn = _true_indices(model, lambda i: span(rect, i), axis_len)
            if pre != list(range(len(pre))):
                raise DecodeError(f"rectangle {rect}: prefix vector is not a prefix")
            if suf != list(range(axis_len - len(suf), axis_len)):
                raise DecodeError(f"rectangle {rect}: suffix vector is not a suffix")
            if not spn:
                raise DecodeError(f"rectangle {rect}: empty span")
            if spn != list(range(spn[0], spn[0] + len(spn))):
                raise DecodeError(f"rectangle {rect}: span not contiguous")
            axes.append((spn[0], spn[-1]))
        (x0, x1), (y0, y1) = axes
        got = (x1 - x0 + 1, y1 - y0 + 1)
        if got not in ((h, v), (v, h)):
            raise DecodeError(
                f"rectangle {rect}: span is {got[0]}x{got[1]}, expected {h}x{v}"
            )
        x_intervals.append((x0, x1))
        y_intervals.append((y0, y1))
    return DecodedPacking(
        dims=vm.dims,
        turns=vm.turns,
        x_intervals=tuple(x_intervals),
        y_intervals=tuple(y_intervals),
    )


# ---------------------------------------------------------------------------
# Naive reference encoding. One variable per concrete placement, quartic
# clause growth; only used to cross-check the compact encoding on boards
# of at most a few dozen cells. Not a supported solving path.
# ---------------------------------------------------------------------------

class NaivePlacementMap:
    """Variable map for the reference encoding: one var per placement."""

    def __init__(self, dims: GridDims, selection: RectangleSelection):
        self.dims = dims
        self.turns = tuple(selection.turn_of(i) for i in range(len(selection.rects)))
        self.placements: list[list[Placement]] = []
        for idx, (h, v) in enumerate(selection.rects):
            turn = self.turns[idx]
            options = []
            seen = set()
            for hh, vv in ((h, v), (v, h)):
                if (hh, vv) in seen:
                    continue
                seen.add((hh, vv))
                if hh > dims.cols or vv > dims.rows:
                    continue
                for y in range(dims.rows - vv + 1):
                    for x in range(dims.cols - hh + 1):
                        options.append(Placement(turn, hh, vv, x, y))
            self.placements.append(options)
        self.offsets = []
        total = 0
        for options in self.placements:
            self.offsets.append(total)
            total += len(options)
        self.num_vars = total

    def var(self, rect: int, option: int) -> int:
        return self.offsets[rect] + option + 1


def encode_naive(
    dims: GridDims, selection: RectangleSelection
) -> tuple[CnfFormula, NaivePlacementMap]:
    """Reference encoding: exactly one placement per rectangle, no overlaps."""
    if selection.dims != dims:
        raise InvalidInputError(
            f"selection was computed for {selection.dims}, board is {dims}"
        )
    nm = NaivePlacementMap(dims, selection)
    f = CnfFormula(num_vars=nm.num_vars)
    cells: list[list[list[int]]] = []
    for rect, options in enumerate(nm.placements):
        if not options:
            raise InvalidInputError(
                f"rectangle {selection.rects[rect]} cannot fit {dims}"
            )
        f.add([nm.var(rect, k) for k in range(len(options))], 1)
        for a in range(len(options)):
            for b in range(a + 1, len(options)):
                f.add([-nm.var(rect, a), -nm.var(rect, b)], 2)
        per_cell = [set(p.cells()) for p in options]
        cells.append(per_cell)
    for ra in range(len(nm.placements)):
        for rb in range(ra + 1, len(nm.placements)):
            for a, cells_a in enumerate(cells[ra]):
                for b, cells_b in enumerate(cells[rb]):
                    if cells_a & cells_b:
                        f.add([-nm.var(ra, a), -nm.var(rb, b)], 3)
    return f, nm


def decode_naive(nm: NaivePlacementMap, model: set[int]) -> list[Placement]:
    moves = []
    for rect, options in enumerate(nm.placements):
        chosen = [options[k] for k in range(len(options)) if nm.var(rect, k) in model]
        if len(chosen) != 1:
            raise DecodeError(
                f"rectangle {rect}: model selects {len(chosen)} placements"
            )
        moves.append(chosen[0])
    moves.sort(key=lambda p: p.turn)
    return moves
