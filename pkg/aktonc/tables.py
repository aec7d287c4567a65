from __future__ import annotations

import json
import logging
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from functools import cache
from importlib import resources
from types import MappingProxyType

logger = logging.getLogger(__name__)

JUXTA = "juxta"
NEXT = "next"
RELATIONS = (JUXTA, NEXT)
RELATION_SYMBOLS = {JUXTA: "/", NEXT: ">"}

FUNDAMENTAL = "fundamental"
# Lookup order for structural sorts; the first table defining a pair wins.
STRUCTURAL = ("spatial", "planarizing", "linearizing", "twin_cut")


class TableConflict(ValueError):
    pass


@dataclass(frozen=True)
class ProductionTable:
    name: str
    relation: str
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    cells: Mapping[tuple[str, str], str]

    def lookup(self, left: str, right: str) -> str | None:
        return self.cells.get((left, right))

    def grid(self) -> Iterator[tuple[str, str, str | None]]:
        """Every (row, column, result) of the printed grid; blanks yield ``None``."""
        for row in self.rows:
            for col in self.cols:
                yield row, col, self.cells.get((row, col))


@dataclass(frozen=True)
class ProductionTables:
    tables: Mapping[str, Mapping[str, ProductionTable]]
    twist: Mapping[str, str]

    def structural(self, relation: str) -> Iterator[ProductionTable]:
        for name in STRUCTURAL:
            yield self.tables[name][relation]

    def lookup(self, relation: str, left: str, right: str) -> str | None:
        for table in self.structural(relation):
            result = table.lookup(left, right)
            if result is not None:
                return result
        return None

    def fundamental(self, relation: str, left: str, right: str) -> str | None:
        return self.tables[FUNDAMENTAL][relation].lookup(left, right)

    def owner(self, relation: str, left: str, right: str) -> str | None:
        """Name of the first structural table that defines the pair."""
        for table in self.structural(relation):
            if table.lookup(left, right) is not None:
                return table.name
        return None


def _read_fixture(name: str) -> dict:
    source = resources.files("aktonc").joinpath("tables", f"{name}.json")
    return json.loads(source.read_text(encoding="utf-8"))


def _build_table(name: str, relation: str, payload: dict) -> ProductionTable:
    cells: dict[tuple[str, str], str] = {}
    for row, col, result in payload["cells"]:
        if (row, col) in cells:
            raise TableConflict(f"{name}: duplicate cell {row}{RELATION_SYMBOLS[relation]}{col}")
        cells[(row, col)] = result
    return ProductionTable(
        name=name,
        relation=relation,
        rows=tuple(payload["rows"]),
        cols=tuple(payload["cols"]),
        cells=MappingProxyType(cells),
    )


def _assert_agreement(tables: Mapping[str, Mapping[str, ProductionTable]]) -> None:
    for relation in RELATIONS:
        seen: dict[tuple[str, str], tuple[str, str]] = {}
        for name in STRUCTURAL:
            for pair, result in tables[name][relation].cells.items():
                previous = seen.setdefault(pair, (name, result))
                if previous[1] != result:
                    symbol = RELATION_SYMBOLS[relation]
                    raise TableConflict(
                        f"{pair[0]}{symbol}{pair[1]}: {previous[0]} gives {previous[1]}, "
                        f"{name} gives {result}"
                    )


@cache
def load_tables() -> ProductionTables:
    tables: dict[str, dict[str, ProductionTable]] = {}
    twist: dict[str, str] = {}
    for name in (FUNDAMENTAL, *STRUCTURAL):
        payload = _read_fixture(name)
        tables[name] = {
            relation: _build_table(name, relation, payload[relation]) for relation in RELATIONS
        }
        for direction, sorts in payload.get("twist", {}).items():
            twist.update(dict.fromkeys(sorts, direction))
        logger.debug(
            "loaded production table %s (%d juxta cells, %d next cells)",
            name,
            len(tables[name][JUXTA].cells),
            len(tables[name][NEXT].cells),
        )
    _assert_agreement(tables)
    return ProductionTables(
        tables=MappingProxyType({name: MappingProxyType(rel) for name, rel in tables.items()}),
        twist=MappingProxyType(twist),
    )
