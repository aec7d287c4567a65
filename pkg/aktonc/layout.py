"""Greedy placement of metric terms on the square grid.

Every atom occupies one unit cell. A Next places its right operand where the
ports of its left operand point, or by the plug offset when there are none;
a Juxta lays out the part whose inputs are already known first and anchors
the other part beside it.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from .atoms import GAP, JUNCTIONS, PIN, Interface
from .exceptions import OverlapDetected, PlugMismatch
from .metric import SideProfile, metric_atom, metric_check, metric_in, sides, trim
from .sorts import format_interface
from .terms import Atom, Juxta, Next, Term, Tilt, to_text

logger = logging.getLogger(__name__)

WEST, NORTH, EAST, SOUTH = 0, 1, 2, 3
DIRECTION_NAMES = ("W", "N", "E", "S")
VECTORS = ((0, -1), (-1, 0), (0, 1), (1, 0))

TOP = "top"
BOTTOM = "bottom"

CELL_SIZE = 32

Cell = tuple[int, int]
Port = tuple[Cell, int]
Anchor = tuple[Cell, str]


class Placement(NamedTuple):
    atom: Atom
    turns: int

    @property
    def profile(self) -> SideProfile:
        return sides(self.atom.name, self.turns)

    def side(self, direction: int) -> str:
        return self.profile[direction]

    @property
    def glyph(self) -> str:
        name = self.atom.name
        if name == "CS":
            return "."
        if name == "Exit":
            return "X"
        if name in JUNCTIONS:
            return name[0].lower()
        return name[0]


def _step(cell: Cell, direction: int) -> Cell:
    row, column = VECTORS[direction]
    return (cell[0] + row, cell[1] + column)


def _shift(cell: Cell, direction: int, count: int) -> Cell:
    """``count`` cells toward ``direction``, or away from it when negative."""
    if count < 0:
        direction, count = (direction + 2) % 4, -count
    for _ in range(count):
        cell = _step(cell, direction)
    return cell


def _dot(direction: int, cell: Cell) -> int:
    row, column = VECTORS[direction]
    return row * cell[0] + column * cell[1]


def _pins(term: Term) -> int:
    return metric_in(term).count(PIN)


def _describe(ports: Iterable[Port]) -> str:
    return ", ".join(f"{cell[0]},{cell[1]}{DIRECTION_NAMES[d]}" for cell, d in ports) or "ε"


@dataclass
class LayoutGrid:
    cells: dict[Cell, Placement]
    rows: int
    columns: int
    outputs: list[Port] = field(default_factory=list)

    def __contains__(self, cell: Cell) -> bool:
        return cell in self.cells

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def size(self) -> tuple[int, int]:
        return self.rows, self.columns

    def side_at(self, cell: Cell, direction: int) -> str:
        placement = self.cells.get(cell)
        return placement.side(direction) if placement else GAP

    def boundary(self, direction: int) -> Interface:
        """The grid side facing ``direction``, numbered from its top or left corner."""
        if direction in (WEST, EAST):
            column = 0 if direction == WEST else self.columns - 1
            slots = [(row, column) for row in range(self.rows)]
        else:
            row = 0 if direction == NORTH else self.rows - 1
            slots = [(row, column) for column in range(self.columns)]
        return tuple(self.side_at(cell, direction) for cell in slots)

    def boundary_profile(self) -> SideProfile:
        return SideProfile(*(self.boundary(direction) for direction in range(4)))

    def as_dict(self) -> dict[str, Any]:
        return {
            "rows": self.rows,
            "columns": self.columns,
            "cells": [
                {
                    "row": row,
                    "column": column,
                    "atom": str(placement.atom),
                    "rotation": placement.turns * 90,
                }
                for (row, column), placement in sorted(self.cells.items())
            ],
        }


class Layouter:
    def __init__(self) -> None:
        self.cells: dict[Cell, Placement] = {}

    def run(self, term: Term) -> LayoutGrid:
        outputs = self.place(term, None, ((0, 0), TOP), 0)
        self._check_adjacency()
        return self._normalized(outputs)

    def place(self, term: Term, ins: list[Port] | None, anchor: Anchor, turns: int) -> list[Port]:
        if isinstance(term, Atom):
            return self._atom(term, ins, anchor, turns)
        if isinstance(term, Tilt):
            return self.place(term.body, ins, anchor, turns + term.turns)
        if isinstance(term, Next):
            return self._next(term, ins, anchor, turns)
        return self._juxta(term, ins, anchor, turns)

    def _put(self, cell: Cell, placement: Placement) -> None:
        if cell in self.cells:
            raise OverlapDetected(cell[0], cell[1], str(self.cells[cell].atom))
        self.cells[cell] = placement

    def _atom(self, atom: Atom, ins: list[Port] | None, anchor: Anchor,
              turns: int) -> list[Port]:
        spec = metric_atom(atom.name)
        turns %= 4
        if ins:
            if len(ins) != len(spec.inputs):
                raise PlugMismatch(_describe(ins), f"{atom} with {len(spec.inputs)} input(s)")
            targets = {_step(cell, direction) for cell, direction in ins}
            facing = [(side + turns) % 4 for side in spec.inputs]
            if len(targets) != 1 or any(
                face != (direction + 2) % 4 for face, (_, direction) in zip(facing, ins, strict=True)
            ):
                raise PlugMismatch(_describe(ins), f"{atom} turned {turns * 90}")
            cell = targets.pop()
        else:
            cell = anchor[0]
        self._put(cell, Placement(atom, turns))
        return [(cell, (side + turns) % 4) for side in spec.outputs]

    def _next(self, term: Next, ins: list[Port] | None, anchor: Anchor,
              turns: int) -> list[Port]:
        offset = metric_check(term.left, term.right)
        before = set(self.cells)
        middle = self.place(term.left, ins, anchor, turns)
        if not middle:
            # No Pins to follow: the offset lines the two Gap sides up.
            forward = (2 + turns) % 4
            below = (3 + turns) % 4
            placed = [cell for cell in self.cells if cell not in before]
            last = max(placed, key=lambda cell: (_dot(forward, cell), -_dot(below, cell)))
            start = _shift(_step(last, forward), below, offset)
            return self.place(term.right, None, (start, anchor[1]), turns)
        return self.place(term.right, middle, anchor, turns)

    def _anchor(self, sibling: list[Cell], part: Term, turns: int, toward: int) -> Cell:
        forward = (2 + turns) % 4
        if _pins(part) == 0:
            chosen = max(sibling, key=lambda cell: (_dot(forward, cell), _dot(toward, cell)))
        else:
            chosen = min(sibling, key=lambda cell: (_dot(forward, cell), -_dot(toward, cell)))
        return _step(chosen, toward)

    def _placed(self, term: Term, ins: list[Port] | None, anchor: Anchor,
                turns: int) -> tuple[list[Port], list[Cell]]:
        before = set(self.cells)
        outputs = self.place(term, ins, anchor, turns)
        return outputs, [cell for cell in self.cells if cell not in before]

    def _juxta(self, term: Juxta, ins: list[Port] | None, anchor: Anchor,
               turns: int) -> list[Port]:
        upper_pins, lower_pins = _pins(term.upper), _pins(term.lower)
        if ins and len(ins) != upper_pins + lower_pins:
            raise PlugMismatch(_describe(ins), format_interface(trim(metric_in(term))))
        upper_ins = ins[:upper_pins] if ins else None
        lower_ins = ins[upper_pins:] if ins else None
        above, below = (1 + turns) % 4, (3 + turns) % 4

        if upper_ins or (not lower_ins and anchor[1] == TOP):
            upper_out, upper_cells = self._placed(term.upper, upper_ins, anchor, turns)
            if lower_ins:
                lower_out = self.place(term.lower, lower_ins, anchor, turns)
            else:
                cell = self._anchor(upper_cells, term.lower, turns, below)
                lower_out = self.place(term.lower, None, (cell, TOP), turns)
            return upper_out + lower_out

        lower_out, lower_cells = self._placed(term.lower, lower_ins, anchor, turns)
        cell = self._anchor(lower_cells, term.upper, turns, above)
        upper_out = self.place(term.upper, None, (cell, BOTTOM), turns)
        return upper_out + lower_out

    def _check_adjacency(self) -> None:
        for cell, placement in self.cells.items():
            for direction in (EAST, SOUTH):
                neighbour = self.cells.get(_step(cell, direction))
                if neighbour is None:
                    continue
                mine, theirs = placement.side(direction), neighbour.side((direction + 2) % 4)
                if mine != theirs:
                    raise PlugMismatch(
                        f"{placement.atom} at {cell[0]},{cell[1]} shows {mine}",
                        f"{neighbour.atom} beside it shows {theirs}",
                    )

    def _normalized(self, outputs: list[Port]) -> LayoutGrid:
        top = min(row for row, _ in self.cells)
        left = min(column for _, column in self.cells)
        bottom = max(row for row, _ in self.cells)
        right = max(column for _, column in self.cells)
        cells = {(row - top, column - left): p for (row, column), p in self.cells.items()}
        ports = [((row - top, column - left), d) for (row, column), d in outputs]
        return LayoutGrid(cells, bottom - top + 1, right - left + 1, ports)


def layout(term: Term) -> LayoutGrid:
    """Place ``term`` on the grid, or raise PlugMismatch / OverlapDetected."""
    grid = Layouter().run(term)
    logger.debug("laid out %s on %dx%d cells", to_text(term), grid.rows, grid.columns)
    return grid


def can_shrink(grid: LayoutGrid) -> bool:
    """True when every side keeps at most one Pin once trimmed, so a unit square can stand in."""
    return all(len(trim(side)) <= 1 for side in grid.boundary_profile())


def shrunk_profile(grid: LayoutGrid) -> SideProfile:
    if not can_shrink(grid):
        raise ValueError(f"a {grid.rows}x{grid.columns} layout cannot shrink to a unit square")
    return SideProfile(*(PIN if trim(side) else GAP for side in grid.boundary_profile()))


def render_ascii(grid: LayoutGrid) -> str:
    """Three by three characters per cell: the glyph with a tick on every Pin side."""
    lines: list[str] = []
    for row in range(grid.rows):
        band = ["", "", ""]
        for column in range(grid.columns):
            placement = grid.cells.get((row, column))
            if placement is None:
                band = [text + "   " for text in band]
                continue
            tick = {d: placement.side(d) == PIN for d in range(4)}
            band[0] += " " + ("|" if tick[NORTH] else " ") + " "
            band[1] += ("-" if tick[WEST] else " ") + placement.glyph + ("-" if tick[EAST] else " ")
            band[2] += " " + ("|" if tick[SOUTH] else " ") + " "
        lines.extend(band)
    return "\n".join(lines) + "\n"


def _ticks(x: int, y: int, placement: Placement) -> list[dict[str, int]]:
    half, quarter = CELL_SIZE // 2, CELL_SIZE // 4
    ends = {
        WEST: (x, y + half, x + quarter, y + half),
        NORTH: (x + half, y, x + half, y + quarter),
        EAST: (x + CELL_SIZE, y + half, x + CELL_SIZE - quarter, y + half),
        SOUTH: (x + half, y + CELL_SIZE, x + half, y + CELL_SIZE - quarter),
    }
    return [
        dict(zip(("x1", "y1", "x2", "y2"), ends[direction], strict=True))
        for direction in range(4)
        if placement.side(direction) == PIN
    ]


def render_svg(grid: LayoutGrid) -> str:
    from django.template.loader import render_to_string

    cells = []
    for (row, column), placement in sorted(grid.cells.items()):
        x, y = column * CELL_SIZE, row * CELL_SIZE
        cells.append(
            {
                "x": x,
                "y": y,
                "cx": x + CELL_SIZE // 2,
                "cy": y + CELL_SIZE // 2,
                "glyph": placement.glyph,
                "title": f"{placement.atom} rotated {placement.turns * 90}",
                "ticks": _ticks(x, y, placement),
            }
        )
    context = {
        "width": grid.columns * CELL_SIZE,
        "height": grid.rows * CELL_SIZE,
        "size": CELL_SIZE,
        "cells": cells,
    }
    return render_to_string("aktonc/layout.svg", context)
