from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from functools import cache
from types import MappingProxyType

from .exceptions import DuplicateAtom, IllFormedBody, UnknownAtom
from .terms import Atom, Juxta, Next, Term, Tilt, tl, tr

PIN = "Pin"
GAP = "Gap"

Interface = tuple[str, ...]

EPSILON: Interface = ()
ONE: Interface = (PIN,)
TWO: Interface = (PIN, PIN)

HEADS = frozenset({"Entry", "Up", "Set"})
TAILS = frozenset({"Exit", "Down", "Off"})
JUNCTIONS = ("F_ld", "F_rd", "J_lu", "J_ru")


@dataclass(frozen=True, slots=True)
class AtomSpec:
    name: str
    sort: str
    inputs: Interface
    outputs: Interface
    body: Term | None = None
    builtin: bool = True

    @property
    def concealed(self) -> bool:
        return self.body is not None


def _junction_bodies() -> dict[str, Term]:
    down, up = Atom("Down"), Atom("Up")
    l_s, l_l, l_r = Atom("L_s"), Atom("L_l"), Atom("L_r")
    return {
        "F_ld": Next(Atom("F_ls"), Juxta(tl(down), Next(l_l, tl(l_s)))),
        "F_rd": Next(Atom("F_sr"), Juxta(Next(l_r, tr(l_s)), tr(down))),
        "J_lu": Next(tr(Juxta(up, Next(l_s, l_l))), Atom("J_ls")),
        "J_ru": Next(tl(Juxta(Next(l_s, l_r), up)), Atom("J_sr")),
    }


def _builtin_specs() -> dict[str, AtomSpec]:
    specs: list[AtomSpec] = [
        AtomSpec("Entry", "E", EPSILON, ONE),
        AtomSpec("Exit", "X", ONE, EPSILON),
        AtomSpec("Up", "U", EPSILON, ONE),
        AtomSpec("Down", "D", ONE, EPSILON),
        AtomSpec("Set", "S", EPSILON, ONE),
        AtomSpec("Off", "O", ONE, EPSILON),
        AtomSpec("CS", "CS", EPSILON, EPSILON),
        AtomSpec("Fork", "B", ONE, TWO),
        AtomSpec("Join", "B", TWO, ONE),
        AtomSpec("Link", "B", ONE, ONE),
        AtomSpec("And", "B", TWO, ONE),
        AtomSpec("Or", "B", TWO, ONE),
        AtomSpec("Not", "B", ONE, ONE),
        AtomSpec("Wire", "B", ONE, ONE),
    ]
    specs += [AtomSpec(name, "B", ONE, TWO) for name in ("F_lr", "F_ls", "F_sr")]
    specs += [AtomSpec(name, "B", TWO, ONE) for name in ("J_lr", "J_ls", "J_sr")]
    specs += [AtomSpec(name, "B", ONE, ONE) for name in ("L_s", "L_l", "L_r")]
    junction_sorts = {"F_ld": "DB", "F_rd": "BD", "J_lu": "UB", "J_ru": "BU"}
    for name, body in _junction_bodies().items():
        specs.append(AtomSpec(name, junction_sorts[name], ONE, ONE, body=body))
    return {spec.name: spec for spec in specs}


@dataclass(frozen=True, eq=False)
class AtomRegistry(Mapping[str, AtomSpec]):
    """Immutable name to ``AtomSpec`` map; ``conceal`` returns an extended copy."""

    entries: Mapping[str, AtomSpec] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def __getitem__(self, name: str) -> AtomSpec:
        try:
            return self.entries[name]
        except KeyError:
            raise UnknownAtom(name) from None

    def __iter__(self) -> Iterator[str]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, name: object) -> bool:
        return name in self.entries

    def user_defined(self) -> list[AtomSpec]:
        return [spec for spec in self.entries.values() if not spec.builtin]

    def conceal(self, name: str, body: Term) -> AtomRegistry:
        """Register ``name`` as an atom hiding ``body`` behind its interfaces."""
        from .sorts import SortEngine

        if name in self.entries or isinstance(body, Atom):
            raise DuplicateAtom(name)
        report = SortEngine(self).check(body)
        if not report.ok:
            raise IllFormedBody(name, report.violations[0].message)
        spec = AtomSpec(
            name,
            report.sort or "B",
            report.inputs,
            report.outputs,
            body=body,
            builtin=False,
        )
        return AtomRegistry({**self.entries, name: spec})

    def expand(self, term: Term) -> Term:
        """Replace user-concealed atoms by their bodies, recursively."""
        if isinstance(term, Atom):
            spec = self[term.name]
            if spec.builtin or spec.body is None:
                return term
            return self.expand(spec.body)
        if isinstance(term, Next):
            return Next(self.expand(term.left), self.expand(term.right))
        if isinstance(term, Juxta):
            return Juxta(self.expand(term.upper), self.expand(term.lower))
        return Tilt(term.turns, self.expand(term.body))


@cache
def builtin_registry() -> AtomRegistry:
    return AtomRegistry(_builtin_specs())


def conceal(name: str, body: Term, registry: AtomRegistry | None = None) -> AtomRegistry:
    return (registry if registry is not None else builtin_registry()).conceal(name, body)
