from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

from .atoms import AtomRegistry, Interface, builtin_registry
from .conf import get_setting
from .exceptions import (
    AktonError,
    NextInterfaceMismatch,
    UndefinedComposition,
    UnknownAtom,
)
from .tables import JUXTA, NEXT, RELATION_SYMBOLS, ProductionTables, load_tables
from .terms import Atom, Juxta, Next, Path, Term, Tilt, format_path, juxta_column, leaves

if TYPE_CHECKING:
    from .cuts import CutBindings

logger = logging.getLogger(__name__)

# Sorts that behave as Link-neutral under Next once every table has failed.
CROSSING_SORTS = frozenset({"U", "D", "UB", "BU", "DB", "BD"})

_WITNESS_ATOMS = {
    "E": "Entry",
    "X": "Exit",
    "B": "Link",
    "CS": "CS",
    "U": "Up",
    "D": "Down",
    "S": "Set",
    "O": "Off",
    "H": "Entry",
    "T": "Exit",
}


def format_interface(interface: Interface) -> str:
    return "/".join(interface) if interface else "ε"


def witness(sort: str) -> Term:
    """Smallest term of ``sort``: a Juxta column of letters, or a Next of two halves."""
    if sort in _WITNESS_ATOMS:
        return Atom(_WITNESS_ATOMS[sort])
    if len(sort) == 4:
        return Next(witness(sort[:2]), witness(sort[2:]))
    return juxta_column(*(Atom(_WITNESS_ATOMS[letter]) for letter in sort))


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    path: Path = ()

    def as_dict(self) -> dict[str, str]:
        return {"code": self.code, "message": self.message, "path": format_path(self.path)}


@dataclass
class WellFormedReport:
    sort: str | None
    inputs: Interface
    outputs: Interface
    violations: list[Violation] = field(default_factory=list)
    cuts: CutBindings | None = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "sort": self.sort,
            "in": format_interface(self.inputs),
            "out": format_interface(self.outputs),
            "violations": [violation.as_dict() for violation in self.violations],
            "cuts": self.cuts.as_dict() if self.cuts is not None else None,
        }


class SortEngine:
    """Table-driven sort inference, interfaces and well-formedness."""

    def __init__(
        self,
        registry: AtomRegistry | None = None,
        *,
        spatial_identity: bool | None = None,
        tables: ProductionTables | None = None,
    ) -> None:
        self.registry = registry if registry is not None else builtin_registry()
        if spatial_identity is None:
            spatial_identity = bool(get_setting("AKTONC_SPATIAL_IDENTITY"))
        self.spatial_identity = spatial_identity
        self.tables = tables if tables is not None else load_tables()

    def compose(self, relation: str, left: str, right: str) -> str | None:
        result = self.tables.lookup(relation, left, right)
        if result is None and relation == NEXT and self.spatial_identity:
            if left == "B" and right in CROSSING_SORTS:
                return right
            if right == "B" and left in CROSSING_SORTS:
                return left
        return result

    def _compose_or_raise(self, relation: str, left: str, right: str) -> str:
        result = self.compose(relation, left, right)
        if result is None:
            raise UndefinedComposition(left, right, RELATION_SYMBOLS[relation])
        return result

    def sort_of(self, term: Term) -> str:
        if isinstance(term, Atom):
            return self.registry[term.name].sort
        if isinstance(term, Tilt):
            return self.sort_of(term.body)
        if isinstance(term, Next):
            return self._compose_or_raise(NEXT, self.sort_of(term.left), self.sort_of(term.right))
        return self._compose_or_raise(JUXTA, self.sort_of(term.upper), self.sort_of(term.lower))

    def in_of(self, term: Term) -> Interface:
        if isinstance(term, Atom):
            return self.registry[term.name].inputs
        if isinstance(term, Tilt):
            return self.in_of(term.body)
        if isinstance(term, Next):
            return self.in_of(term.left)
        return self.in_of(term.upper) + self.in_of(term.lower)

    def out_of(self, term: Term) -> Interface:
        if isinstance(term, Atom):
            return self.registry[term.name].outputs
        if isinstance(term, Tilt):
            return self.out_of(term.body)
        if isinstance(term, Next):
            return self.out_of(term.right)
        return self.out_of(term.upper) + self.out_of(term.lower)

    def fundamental_class(self, name: str) -> str:
        spec = self.registry[name]
        if spec.inputs and spec.outputs:
            return "B"
        if spec.outputs:
            return "H"
        if spec.inputs:
            return "T"
        return "CS"

    def fundamental_sort_of(self, term: Term) -> str:
        """Sort on the coarse Head/Body/Tail/closed-system layer."""
        if isinstance(term, Atom):
            return self.fundamental_class(term.name)
        if isinstance(term, Tilt):
            return self.fundamental_sort_of(term.body)
        relation = NEXT if isinstance(term, Next) else JUXTA
        first, second = (
            (term.left, term.right) if isinstance(term, Next) else (term.upper, term.lower)
        )
        left = self.fundamental_sort_of(first)
        right = self.fundamental_sort_of(second)
        result = self.tables.fundamental(relation, left, right)
        if result is None:
            raise UndefinedComposition(left, right, RELATION_SYMBOLS[relation])
        return result

    def _walk(
        self, term: Term, path: Path, violations: list[Violation]
    ) -> tuple[str | None, Interface, Interface]:
        if isinstance(term, Atom):
            spec = self.registry[term.name]
            return spec.sort, spec.inputs, spec.outputs
        if isinstance(term, Tilt):
            return self._walk(term.body, (*path, 0), violations)
        if isinstance(term, Next):
            left_sort, inputs, middle_out = self._walk(term.left, (*path, 0), violations)
            right_sort, middle_in, outputs = self._walk(term.right, (*path, 1), violations)
            relation = NEXT
            if middle_out != middle_in:
                error = NextInterfaceMismatch(
                    format_interface(middle_out), format_interface(middle_in)
                )
                violations.append(Violation(error.code_name, error.describe(), path))
        else:
            left_sort, upper_in, upper_out = self._walk(term.upper, (*path, 0), violations)
            right_sort, lower_in, lower_out = self._walk(term.lower, (*path, 1), violations)
            relation = JUXTA
            inputs, outputs = upper_in + lower_in, upper_out + lower_out
        if left_sort is None or right_sort is None:
            return None, inputs, outputs
        sort = self.compose(relation, left_sort, right_sort)
        if sort is None:
            error = UndefinedComposition(left_sort, right_sort, RELATION_SYMBOLS[relation])
            violations.append(Violation(error.code_name, error.describe(), path))
        return sort, inputs, outputs

    def check(self, term: Term, *, bind: bool = True) -> WellFormedReport:
        """Sort, interfaces and every violation found; never raises for ill-formed terms."""
        unknown = [
            Violation(UnknownAtom.code_name, UnknownAtom(atom.name).describe(), path)
            for path, atom in leaves(term)
            if atom.name not in self.registry
        ]
        if unknown:
            return WellFormedReport(None, (), (), unknown)
        violations: list[Violation] = []
        sort, inputs, outputs = self._walk(term, (), violations)
        report = WellFormedReport(sort, inputs, outputs, violations)
        if report.ok and bind:
            from .cuts import bind_cuts

            try:
                report.cuts = bind_cuts(term, self)
            except AktonError as exc:
                report.violations.append(Violation(exc.code_name, exc.describe(), ()))
        logger.debug("checked term: sort=%s violations=%d", sort, len(report.violations))
        return report
