"""3-partition to PackIt! reduction: gadgets, packing, hardness plumbing."""

import pytest

from packit.core import (
    Placement,
    format_grid,
    parse_grid,
    verify_transcript,
)
from packit.errors import (
    DuplicateError,
    FormatError,
    PartitionError,
    RangeError,
    SizeError,
)
from packit.reduction import (
    brute_force_three_partition,
    build_grid,
    forward_pack,
    validate_partition_instance,
)

SMALL = [16, 20, 24]
BIG = [36, 40, 44, 48, 52, 60]
# passes every side condition (target 126, all elements inside
# (31.5, 63)) yet no three elements reach the target
UNSAT = [32, 36, 40, 44, 48, 52]


class TestValidation:
    def test_small_instance(self):
        inst = validate_partition_instance(SMALL)
        assert inst.values == (16, 20, 24)
        assert inst.target == 60
        assert inst.triples == 1

    def test_sorts_input(self):
        inst = validate_partition_instance([24, 16, 20])
        assert inst.values == (16, 20, 24)

    def test_empty_is_size_error(self):
        with pytest.raises(SizeError):
            validate_partition_instance([])

    def test_count_must_be_multiple_of_three(self):
        with pytest.raises(SizeError):
            validate_partition_instance([16, 20, 24, 28])

    def test_elements_must_be_multiples_of_four(self):
        with pytest.raises(FormatError):
            validate_partition_instance([16, 20, 25])

    def test_elements_must_be_positive(self):
        with pytest.raises(FormatError):
            validate_partition_instance([-4, 20, 24])

    def test_duplicates_rejected(self):
        with pytest.raises(DuplicateError):
            validate_partition_instance([16, 16, 24])

    def test_total_must_split_evenly(self):
        # nine elements whose total is not a multiple of three
        values = [4, 8, 12, 16, 20, 24, 28, 32, 40]
        assert sum(values) % 3
        with pytest.raises(RangeError):
            validate_partition_instance(values)

    def test_small_elements_out_of_range(self):
        with pytest.raises(RangeError):
            validate_partition_instance([8, 24, 28])

    def test_quarter_boundary_is_excluded(self):
        # 12 = target/4 exactly, and the bound is strict
        with pytest.raises(RangeError):
            validate_partition_instance([12, 16, 20])


class TestBuildGrid:
    def test_small_dimensions(self):
        red = build_grid(validate_partition_instance(SMALL))
        assert red.dims.rows == 63 and red.dims.cols == 63
        assert red.holes == 311
        assert red.start_turn == 1

    def test_small_gadget_sequence(self):
        red = build_grid(validate_partition_instance(SMALL))
        assert [(g.kind, g.hole) for g in red.gadgets] == [
            ("E", 60),
            ("S", 1),
            ("D", 3),
            ("D", 5),
            ("D", 7),
            ("D", 9),
            ("D", 11),
            ("D", 13),
            ("D", 15),
            ("S", 18),
            ("D", 19),
            ("S", 22),
            ("D", 23),
        ]

    def test_gadgets_get_every_third_column(self):
        red = build_grid(validate_partition_instance(SMALL))
        assert [g.col for g in red.gadgets] == [3 * i + 1 for i in range(13)]

    def test_holes_only_in_middle_columns(self):
        red = build_grid(validate_partition_instance(SMALL))
        middle = {g.col for g in red.gadgets}
        for r in range(red.dims.rows):
            for c in range(red.dims.cols):
                if (r, c) not in red.filled:
                    assert c in middle and r < red.instance.target

    def test_holes_match_turn_areas(self):
        # the open cells must take exactly the areas turns 1..24 play
        red = build_grid(validate_partition_instance(SMALL))
        areas = []
        for t in range(1, 25):
            if t == 1 or t in (16, 20, 24):
                areas.append(t)
            elif t % 2 == 0 or t - 1 in (16, 20, 24):
                areas.append(t + 1)
            else:
                areas.append(t)
        assert sum(areas) == red.holes

    def test_big_dimensions(self):
        red = build_grid(validate_partition_instance(BIG))
        assert red.dims.rows == 146 and red.dims.cols == 146
        assert red.holes == 1859


class TestForwardPack:
    def test_small_round_trip(self):
        inst = validate_partition_instance(SMALL)
        red = build_grid(inst)
        moves = forward_pack(inst, [[16, 20, 24]])
        report = verify_transcript(
            red.dims, moves, prefilled=red.filled, start_turn=red.start_turn
        )
        assert report.valid and report.perfect

    def test_small_move_count_and_turns(self):
        inst = validate_partition_instance(SMALL)
        moves = forward_pack(inst, [[16, 20, 24]])
        assert [p.turn for p in moves] == list(range(1, 25))
        assert all(p.h == 1 for p in moves)

    def test_big_round_trip(self):
        inst = validate_partition_instance(BIG)
        red = build_grid(inst)
        moves = forward_pack(inst, [[36, 44, 60], [40, 48, 52]])
        report = verify_transcript(
            red.dims, moves, prefilled=red.filled, start_turn=red.start_turn
        )
        assert report.valid and report.perfect

    def test_wrong_elements_rejected(self):
        inst = validate_partition_instance(SMALL)
        with pytest.raises(PartitionError):
            forward_pack(inst, [[16, 20, 28]])

    def test_wrong_sum_rejected(self):
        inst = validate_partition_instance(BIG)
        with pytest.raises(PartitionError):
            forward_pack(inst, [[36, 40, 44], [48, 52, 60]])

    def test_tampered_board_breaks_round_trip(self):
        # plugging a single hole makes some move collide
        inst = validate_partition_instance(SMALL)
        red = build_grid(inst)
        moves = forward_pack(inst, [[16, 20, 24]])
        hole = min(
            (r, c)
            for r in range(red.dims.rows)
            for c in range(red.dims.cols)
            if (r, c) not in red.filled
        )
        tampered = red.filled | {hole}
        report = verify_transcript(
            red.dims, moves, prefilled=tampered, start_turn=red.start_turn
        )
        assert not report.perfect

    def test_opened_cell_breaks_round_trip(self):
        # extra hole leaves the board one cell short of full
        inst = validate_partition_instance(SMALL)
        red = build_grid(inst)
        moves = forward_pack(inst, [[16, 20, 24]])
        cell = next(iter(sorted(red.filled)))
        report = verify_transcript(
            red.dims, moves, prefilled=red.filled - {cell}, start_turn=red.start_turn
        )
        assert report.valid and not report.perfect

    def test_tampered_move_breaks_round_trip(self):
        inst = validate_partition_instance(SMALL)
        red = build_grid(inst)
        moves = forward_pack(inst, [[16, 20, 24]])
        bad = list(moves)
        shifted = bad[5]
        bad[5] = Placement(shifted.turn, shifted.h, shifted.v, shifted.x + 1, shifted.y)
        report = verify_transcript(
            red.dims, bad, prefilled=red.filled, start_turn=red.start_turn
        )
        assert not report.valid


class TestBruteForce:
    def test_single_triple(self):
        inst = validate_partition_instance(SMALL)
        assert brute_force_three_partition(inst) == [(16, 20, 24)]

    def test_two_triples(self):
        inst = validate_partition_instance(BIG)
        assert brute_force_three_partition(inst) == [(36, 44, 60), (40, 48, 52)]

    def test_unsatisfiable_instance(self):
        inst = validate_partition_instance(UNSAT)
        assert brute_force_three_partition(inst) is None

    def test_answer_feeds_forward_pack(self):
        inst = validate_partition_instance(BIG)
        partition = brute_force_three_partition(inst)
        red = build_grid(inst)
        moves = forward_pack(inst, partition)
        report = verify_transcript(
            red.dims, moves, prefilled=red.filled, start_turn=red.start_turn
        )
        assert report.perfect

    def test_unsat_board_still_builds(self):
        red = build_grid(validate_partition_instance(UNSAT))
        assert red.dims.rows == red.instance.target + 6


class TestGridIo:
    def test_reduced_board_round_trips(self):
        red = build_grid(validate_partition_instance(SMALL))
        text = format_grid(red.dims, red.filled, start_turn=red.start_turn)
        dims, filled, start = parse_grid(text)
        assert dims == red.dims
        assert filled == set(red.filled)
        assert start == red.start_turn
