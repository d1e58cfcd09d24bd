"""Hard partially filled boards built from 3-partition instances.

A 4-restricted 3-partition instance is a set A of 3k distinct positive
multiples of 4 that should be split into k triples, each summing to
T = sum(A)/k; the restriction T/4 < a < T/2 forces every group to have
exactly three elements. Deciding such instances is NP-hard, and this
module carries that hardness over to PackIt! completions: build_grid
lays out a mostly filled (T+n) x (T+n) board whose perfect completions
correspond exactly to valid partitions.

The board is a row of three-column gadgets, holes only ever in middle
columns:

* one E-gadget per triple, its middle column entirely empty (the three
  chosen elements stack there as vertical strips),
* an S(1) gadget whose single hole takes the opening 1x1,
* for each later turn pair, a D(m) gadget with two m-cell holes (an
  expansion turn and the following plain turn), except that the turn
  right after an element of A gets its own single-hole S gadget.

forward_pack turns a certificate (the triples) into the transcript the
board design promises; replaying it is how the construction is tested.
brute_force_three_partition is the exact reference for small instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import GridDims, Placement
from .errors import (
    DuplicateError,
    FormatError,
    PartitionError,
    RangeError,
    SizeError,
)


@dataclass(frozen=True)
class PartitionInstance:
    """Validated 4-restricted 3-partition input.

    ``values`` is strictly increasing; ``target`` is the common triple
    sum T.
    """

    values: tuple[int, ...]
    target: int

    @property
    def count(self) -> int:
        return len(self.values)

    @property
    def triples(self) -> int:
        return len(self.values) // 3


@dataclass(frozen=True)
class Gadget:
    """One three-column block. ``col`` is its middle (hole) column.

    kind "E": hole spans all ``target`` rows, takes one triple.
    kind "S": a single hole of ``hole`` rows at the top.
    kind "D": two ``hole``-row holes separated by one filled cell.
    """

    kind: str
    col: int
    hole: int

    def empty_cells(self, col_height: int) -> list[tuple[int, int]]:
        """(row, col) holes this gadget leaves in its middle column."""
        if self.kind == "E":
            return [(r, self.col) for r in range(col_height)]
        if self.kind == "S":
            return [(r, self.col) for r in range(self.hole)]
        rows = list(range(self.hole)) + list(range(self.hole + 1, 2 * self.hole + 1))
        return [(r, self.col) for r in rows]


@dataclass(frozen=True)
class ReducedInstance:
    """Partially filled board plus the gadget layout that produced it."""

    instance: PartitionInstance
    dims: GridDims
    filled: frozenset[tuple[int, int]]
    gadgets: tuple[Gadget, ...]
    start_turn: int = 1

    @property
    def holes(self) -> int:
        return self.dims.area - len(self.filled)


def validate_partition_instance(values: Sequence[int]) -> PartitionInstance:
    """Check the 4-restricted 3-partition side conditions.

    Raises SizeError, FormatError, DuplicateError or RangeError with the
    first violation; returns the normalized instance otherwise.
    """
    items = list(values)
    if not items or len(items) % 3:
        raise SizeError(
            f"need a positive multiple of 3 elements, got {len(items)}"
        )
    for a in items:
        if a < 1 or a % 4:
            raise FormatError(f"every element must be a positive multiple of 4; {a} is not")
    if len(set(items)) != len(items):
        dupe = next(a for a in items if items.count(a) > 1)
        raise DuplicateError(f"elements must be distinct; {dupe} repeats")
    triples = len(items) // 3
    total = sum(items)
    if total % triples:
        raise RangeError(
            f"total {total} does not split into {triples} equal triple sums"
        )
    target = total // triples
    for a in items:
        if not (4 * a > target and 2 * a < target):
            raise RangeError(
                f"element {a} outside the open range ({target}/4, {target}/2)"
            )
    return PartitionInstance(values=tuple(sorted(items)), target=target)


def _gadget_plan(inst: PartitionInstance) -> list[tuple[str, int]]:
    """(kind, hole) blocks left to right, before columns are assigned."""
    plan = [("E", inst.target)] * inst.triples
    plan.append(("S", 1))
    elements = set(inst.values)
    for m in range(3, max(inst.values), 2):
        if m - 1 in elements:
            plan.append(("S", m + 1))
        else:
            plan.append(("D", m))
    return plan


def build_grid(inst: PartitionInstance) -> ReducedInstance:
    """Lay the gadgets out and fill everything else.

    The board is (T+n) square: gadget columns on the left of the top T
    rows, filled padding to the right, and n filled rows at the bottom.
    """
    n = inst.count
    side = inst.target + n
    dims = GridDims(side, side)
    gadgets = tuple(
        Gadget(kind=kind, col=3 * i + 1, hole=hole)
        for i, (kind, hole) in enumerate(_gadget_plan(inst))
    )
    gadget_cols = 3 * len(gadgets)
    assert gadget_cols < side, "gadgets must leave room for right padding"
    empty = set()
    for gadget in gadgets:
        empty.update(gadget.empty_cells(inst.target))
    filled = frozenset(
        (r, c)
        for r in range(side)
        for c in range(side)
        if (r, c) not in empty
    )
    return ReducedInstance(instance=inst, dims=dims, filled=filled, gadgets=gadgets)


def _check_partition(inst: PartitionInstance, partition: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    triples = [tuple(sorted(group)) for group in partition]
    flat = sorted(itertools.chain.from_iterable(triples))
    if flat != list(inst.values):
        raise PartitionError(
            "partition does not use exactly the instance elements"
        )
    for group in triples:
        if len(group) != 3:
            raise PartitionError(f"group {group} does not have three elements")
        if sum(group) != inst.target:
            raise PartitionError(
                f"group {group} sums to {sum(group)}, target is {inst.target}"
            )
    return triples


def forward_pack(
    inst: PartitionInstance, partition: Sequence[Sequence[int]]
) -> list[Placement]:
    """Transcript certifying a partition on the reduced board.

    Turn t places a vertical strip into the gadget that was built for
    it: elements of A stack inside their triple's E-gadget, the turn
    after an element fills its S gadget, and each remaining even/odd
    turn pair fills the two holes of its D gadget. The caller replays
    the result on build_grid's board to check it is perfect.
    """
    triples = _check_partition(inst, partition)
    reduced = build_grid(inst)
    by_kind: dict[tuple[str, int], Gadget] = {
        (g.kind, g.hole): g for g in reduced.gadgets if g.kind != "E"
    }
    element_spot: dict[int, tuple[int, int]] = {}
    e_gadgets = [g for g in reduced.gadgets if g.kind == "E"]
    for gadget, group in zip(e_gadgets, triples):
        row = 0
        for a in group:
            element_spot[a] = (gadget.col, row)
            row += a
    elements = set(inst.values)
    moves = []
    for t in range(1, max(inst.values) + 1):
        if t == 1:
            gadget = by_kind[("S", 1)]
            moves.append(Placement(1, 1, 1, gadget.col, 0))
        elif t in elements:
            col, row = element_spot[t]
            moves.append(Placement(t, 1, t, col, row))
        elif t % 2 == 0:
            gadget = by_kind[("D", t + 1)]
            moves.append(Placement(t, 1, t + 1, gadget.col, 0))
        elif t - 1 in elements:
            gadget = by_kind[("S", t + 1)]
            moves.append(Placement(t, 1, t + 1, gadget.col, 0))
        else:
            gadget = by_kind[("D", t)]
            moves.append(Placement(t, 1, t, gadget.col, gadget.hole + 1))
    return moves


def brute_force_three_partition(
    inst: PartitionInstance,
) -> Optional[list[tuple[int, int, int]]]:
    """Exact partition search; fine for the instance sizes tests use.

    Always groups the smallest remaining element, which prunes hard and
    keeps the answer deterministic.
    """
    values = list(inst.values)
    target = inst.target

    def split(remaining: list[int]) -> Optional[list[tuple[int, int, int]]]:
        if not remaining:
            return []
        first = remaining[0]
        rest = remaining[1:]
        for i in range(len(rest)):
            b = rest[i]
            if first + b >= target:
                break
            need = target - first - b
            if need <= b:
                continue
            if need in rest[i + 1:]:
                left = rest[:i] + rest[i + 1:]
                left.remove(need)
                tail = split(left)
                if tail is not None:
                    return [(first, b, need)] + tail
        return None

    return split(values)
