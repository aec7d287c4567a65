from pathlib import Path

import pytest

from aktonc.atoms import GAP, PIN
from aktonc.exceptions import NonMetricAtom, OverlapDetected, PlugMismatch
from aktonc.layout import (
    EAST,
    SOUTH,
    LayoutGrid,
    Placement,
    can_shrink,
    layout,
    render_ascii,
    render_svg,
    shrunk_profile,
)
from aktonc.metric import (
    SideProfile,
    junction,
    metric_check,
    metric_multiple_fork,
    metric_multiple_join,
    metric_multiple_link,
    sides,
)
from aktonc.parser import parse
from aktonc.terms import Atom

P, G = PIN, GAP

GOLDEN = Path(__file__).resolve().parent / "golden"


def test_single_atom():
    grid = layout(Atom("L_s"))

    assert grid.size == (1, 1)
    assert grid.outputs == [((0, 0), EAST)]
    assert grid.as_dict() == {
        "rows": 1,
        "columns": 1,
        "cells": [{"row": 0, "column": 0, "atom": "L_s", "rotation": 0}],
    }


def test_next_places_the_right_operand_where_the_ports_point():
    grid = layout(parse("L_s > L_s"))

    assert grid.size == (1, 2)
    assert (0, 1) in grid
    assert grid.boundary_profile() == SideProfile((P,), (G, G), (P,), (G, G))


def test_tilted_atoms_turn_their_ports():
    grid = layout(parse("L_r > tr(L_s)"))

    assert grid.size == (2, 1)
    assert grid.cells[(1, 0)] == Placement(Atom("L_s"), 1)
    assert grid.outputs == [((1, 0), SOUTH)]


@pytest.mark.parametrize("depth", range(9))
@pytest.mark.parametrize("kind", ["l", "r"])
def test_turning_strips_are_square(kind, depth):
    grid = layout(metric_multiple_link(depth, kind))

    assert grid.size == (depth + 1, depth + 1)
    assert len(grid) == (depth + 1) ** 2


def test_straight_strip_is_a_column():
    assert layout(metric_multiple_link(2, "s")).size == (3, 1)


@pytest.mark.parametrize(
    "term",
    [
        metric_multiple_fork(0, "ls"),
        metric_multiple_fork(0, "sr"),
        metric_multiple_join(0, "ls"),
        metric_multiple_join(0, "sr"),
    ],
)
def test_single_lane_constructions_fill_two_by_two(term):
    assert layout(term).size == (2, 2)


def test_two_lane_fork():
    grid = layout(metric_multiple_fork(1, "ls"))

    assert grid.size == (3, 3)
    assert len(grid) == 9


@pytest.mark.parametrize("name", ["F_ld", "F_rd", "J_lu"])
def test_junction_bodies_shrink_to_their_unit_square(name):
    grid = layout(junction(name).body)

    assert grid.size == (2, 2)
    assert can_shrink(grid)
    assert shrunk_profile(grid) == sides(name)


def test_right_up_junction_body_cannot_be_laid_out():
    with pytest.raises(PlugMismatch):
        layout(junction("J_ru").body)


def test_mismatched_plugs_are_rejected():
    with pytest.raises(PlugMismatch):
        layout(parse("F_ls > L_s"))


def test_non_metric_atoms_are_rejected():
    with pytest.raises(NonMetricAtom):
        layout(parse("L_s > Link"))


def test_wide_sides_do_not_shrink():
    grid = layout(metric_multiple_link(1, "s"))

    assert not can_shrink(grid)
    with pytest.raises(ValueError):
        shrunk_profile(grid)


def test_ascii_rendering():
    assert render_ascii(layout(parse("L_s > L_s"))) == "      \n-L--L-\n      \n"
    assert render_ascii(layout(Atom("CS"))) == "   \n . \n   \n"


def test_ascii_leaves_empty_cells_blank():
    grid = LayoutGrid({(0, 0): Placement(Atom("Exit"), 0)}, rows=1, columns=2)
    assert render_ascii(grid) == "      \n-X    \n      \n"


def test_svg_rendering():
    svg = render_svg(layout(parse("L_s > L_s")))

    assert svg.startswith('<svg xmlns="http://www.w3.org/2000/svg" width="64" height="32"')
    assert svg.count("<rect") == 2
    assert "<title>L_s rotated 0</title>" in svg


@pytest.mark.parametrize(
    ("name", "term"),
    [
        ("link_l_depth2", metric_multiple_link(2, "l")),
        ("fork_ls_depth2", metric_multiple_fork(2, "ls")),
    ],
)
def test_renderings_match_golden_files(name, term):
    grid = layout(term)

    assert render_ascii(grid) == (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")
    assert render_svg(grid) == (GOLDEN / f"{name}.svg").read_text(encoding="utf-8")


def test_renderings_are_stable():
    term = metric_multiple_fork(2, "ls")

    assert render_svg(layout(term)) == render_svg(layout(term))
    assert render_ascii(layout(term)) == render_ascii(layout(term))


def test_leading_gaps_on_the_left_shift_the_successor_down():
    term = parse("CS/L_s > L_s")
    grid = layout(term)

    assert metric_check(term.left, term.right) == 1
    assert grid.cells == {
        (0, 0): Placement(Atom("CS"), 0),
        (1, 0): Placement(Atom("L_s"), 0),
        (1, 1): Placement(Atom("L_s"), 0),
    }


def test_leading_gaps_on_the_right_shift_the_successor_up():
    term = parse("L_s > CS/L_s")
    grid = layout(term)

    assert metric_check(term.left, term.right) == -1
    assert grid.cells == {
        (1, 0): Placement(Atom("L_s"), 0),
        (0, 1): Placement(Atom("CS"), 0),
        (1, 1): Placement(Atom("L_s"), 0),
    }


@pytest.mark.parametrize(
    ("source", "cells"),
    [
        ("CS/CS > CS", {(0, 0), (1, 0), (1, 1)}),
        ("CS > CS/CS", {(1, 0), (0, 1), (1, 1)}),
        ("CS > CS", {(0, 0), (0, 1)}),
    ],
)
def test_gap_plugs_line_up_by_their_offset(source, cells):
    grid = layout(parse(source))

    assert set(grid.cells) == cells
    assert grid.size == (max(r for r, _ in cells) + 1, 2)


def test_single_lane_side_fork_keeps_its_filler_inside_the_square():
    term = metric_multiple_fork(0, "sr")

    assert term == parse("F_rd > Up/tr(CS/L_s)")
    assert layout(term).cells == {
        (0, 0): Placement(Atom("F_rd"), 0),
        (0, 1): Placement(Atom("Up"), 0),
        (1, 0): Placement(Atom("L_s"), 1),
        (1, 1): Placement(Atom("CS"), 1),
    }
    with pytest.raises(OverlapDetected):
        layout(parse("F_rd > Up/tr(L_s/CS)"))
