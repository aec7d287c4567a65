from __future__ import annotations

from typing import NamedTuple

from .atoms import GAP, JUNCTIONS, PIN, AtomSpec, Interface, builtin_registry
from .exceptions import NegativeCount, NonMetricAtom, PlugMismatch
from .sorts import format_interface
from .terms import (
    TL,
    TR,
    Atom,
    Juxta,
    Next,
    Term,
    Tilt,
    next_chain,
    power,
    times,
    tilted,
    tl,
    tr,
)

P, G = PIN, GAP

LEFT, TOP, RIGHT, BOTTOM = 0, 1, 2, 3


class SideProfile(NamedTuple):
    """Clockwise sides, starting with the left-hand one."""

    left: str
    top: str
    right: str
    bottom: str

    def rotated(self, turns: int) -> SideProfile:
        """Quarter turns clockwise: the content of side i moves to side i + 1."""
        turns %= 4
        return SideProfile(*(self[(index - turns) % 4] for index in range(4)))


class MetricAtom(NamedTuple):
    profile: SideProfile
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]


_HEAD = MetricAtom(SideProfile(G, G, P, G), (), (RIGHT,))
_TAIL = MetricAtom(SideProfile(P, G, G, G), (LEFT,), ())

METRIC_ATOMS: dict[str, MetricAtom] = {
    "Entry": _HEAD,
    "Up": _HEAD,
    "Set": _HEAD,
    "Exit": _TAIL,
    "Down": _TAIL,
    "Off": _TAIL,
    "CS": MetricAtom(SideProfile(G, G, G, G), (), ()),
    "F_lr": MetricAtom(SideProfile(P, P, G, P), (LEFT,), (TOP, BOTTOM)),
    "F_ls": MetricAtom(SideProfile(P, P, P, G), (LEFT,), (TOP, RIGHT)),
    "F_sr": MetricAtom(SideProfile(P, G, P, P), (LEFT,), (RIGHT, BOTTOM)),
    "J_lr": MetricAtom(SideProfile(G, P, P, P), (TOP, BOTTOM), (RIGHT,)),
    "J_ls": MetricAtom(SideProfile(P, P, P, G), (TOP, LEFT), (RIGHT,)),
    "J_sr": MetricAtom(SideProfile(P, G, P, P), (LEFT, BOTTOM), (RIGHT,)),
    "L_s": MetricAtom(SideProfile(P, G, P, G), (LEFT,), (RIGHT,)),
    "L_l": MetricAtom(SideProfile(P, P, G, G), (LEFT,), (TOP,)),
    "L_r": MetricAtom(SideProfile(P, G, G, P), (LEFT,), (BOTTOM,)),
    # Junction unit squares: a tilted Link plus a via.
    "F_ld": MetricAtom(SideProfile(P, P, G, G), (LEFT,), (TOP,)),
    "F_rd": MetricAtom(SideProfile(P, G, G, P), (LEFT,), (BOTTOM,)),
    "J_lu": MetricAtom(SideProfile(G, P, P, G), (TOP,), (RIGHT,)),
    "J_ru": MetricAtom(SideProfile(G, G, P, P), (BOTTOM,), (RIGHT,)),
}


def metric_atom(name: str) -> MetricAtom:
    try:
        return METRIC_ATOMS[name]
    except KeyError:
        raise NonMetricAtom(name) from None


def sides(name: str, turns: int = 0) -> SideProfile:
    return metric_atom(name).profile.rotated(turns)


def atrim(interface: Interface) -> Interface:
    """Drop the Gaps above the first Pin."""
    start = 0
    while start < len(interface) and interface[start] == GAP:
        start += 1
    return tuple(interface[start:])


def btrim(interface: Interface) -> Interface:
    """Drop the Gaps below the last Pin."""
    end = len(interface)
    while end > 0 and interface[end - 1] == GAP:
        end -= 1
    return tuple(interface[:end])


def trim(interface: Interface) -> Interface:
    return atrim(btrim(interface))


def _atom_interface(name: str, which: str) -> Interface:
    atom = metric_atom(name)
    used = atom.inputs if which == "in" else atom.outputs
    return (PIN,) * len(used) if used else (GAP,)


def metric_in(term: Term) -> Interface:
    if isinstance(term, Atom):
        return _atom_interface(term.name, "in")
    if isinstance(term, Tilt):
        return metric_in(term.body)
    if isinstance(term, Next):
        return metric_in(term.left)
    return metric_in(term.upper) + metric_in(term.lower)


def metric_out(term: Term) -> Interface:
    if isinstance(term, Atom):
        return _atom_interface(term.name, "out")
    if isinstance(term, Tilt):
        return metric_out(term.body)
    if isinstance(term, Next):
        return metric_out(term.right)
    return metric_out(term.upper) + metric_out(term.lower)


def _leading_gaps(interface: Interface) -> int:
    return len(interface) - len(atrim(interface))


def plug_offset(output: Interface, input: Interface) -> int:  # noqa: A002
    """Signed Gap count aligning the first Pins of both plugs."""
    if trim(output) != trim(input):
        raise PlugMismatch(format_interface(trim(output)), format_interface(trim(input)))
    return _leading_gaps(output) - _leading_gaps(input)


def metric_check(left: Term, right: Term) -> int:
    """Gate ``left > right`` on trimmed interfaces; returns the alignment offset."""
    return plug_offset(metric_out(left), metric_in(right))


def tilt(term: Term, direction: str) -> Term:
    """Rotate every atom of ``term`` by a quarter turn (``tl`` or ``tr``)."""
    turns = {"tl": TL, "tr": TR}[direction]
    return _tilt(term, turns)


def _tilt(term: Term, turns: int) -> Term:
    if isinstance(term, Atom):
        metric_atom(term.name)
        return tilted(term, turns)
    if isinstance(term, Next):
        return Next(_tilt(term.left, turns), _tilt(term.right, turns))
    if isinstance(term, Juxta):
        return Juxta(_tilt(term.upper, turns), _tilt(term.lower, turns))
    return tilted(_tilt(term.body, turns), term.turns)


def profile_of(term: Term) -> SideProfile:
    """Side profile of an atom, possibly tilted."""
    turns = 0
    while isinstance(term, Tilt):
        turns += term.turns
        term = term.body
    if not isinstance(term, Atom):
        raise NonMetricAtom(str(term))
    return sides(term.name, turns)


def _check_depth(depth: int) -> None:
    if depth < 0:
        raise NegativeCount(depth)


def _chain(count: int) -> Term:
    chain = times(count, Atom("L_s"))
    assert chain is not None
    return chain


def _column(term: Term, count: int) -> Term:
    column = power(term, count)
    assert column is not None
    return column


def metric_multiple_link(depth: int, kind: str = "l") -> Term:
    """``depth + 1`` parallel chains running straight, turning left or turning right."""
    _check_depth(depth)
    if kind not in ("s", "l", "r"):
        raise ValueError(f"multiple Link kind must be s, l or r, not {kind!r}")
    term: Term = Atom({"s": "L_s", "l": "L_l", "r": "L_r"}[kind])
    for level in range(1, depth + 1):
        if kind == "s":
            term = Juxta(term, Atom("L_s"))
        elif kind == "l":
            term = Juxta(term, next_chain(_chain(level), Atom("L_l"), tl(_chain(level))))
        else:
            term = Juxta(next_chain(_chain(level), Atom("L_r"), tr(_chain(level))), term)
    return term


def _reject_lr(kind: str, what: str) -> None:
    if kind == "lr":
        raise ValueError(f"there is no multiple {what} of kind lr: its outputs are ordered reversely")
    if kind not in ("ls", "sr"):
        raise ValueError(f"multiple {what} kind must be ls or sr, not {kind!r}")


def metric_multiple_fork(depth: int, kind: str = "ls") -> Term:
    """``depth + 1`` lanes each forking straight and to one side."""
    _check_depth(depth)
    _reject_lr(kind, "Fork")
    lanes = depth + 1
    if kind == "ls":
        head: Term = Atom("F_ld")
        for level in range(1, lanes):
            step = next_chain(_chain(level), Atom("F_ld"), tl(_chain(level)))
            head = Juxta(head, step)
        tail = Juxta(tl(Juxta(_column(Atom("L_s"), lanes), Atom("CS"))), _column(Atom("Up"), lanes))
        return Next(head, tail)
    head = Atom("F_rd")
    for level in range(1, lanes):
        step = next_chain(_chain(level), Atom("F_rd"), tr(_chain(level)))
        head = Juxta(step, head)
    tail = Juxta(_column(Atom("Up"), lanes), tr(Juxta(Atom("CS"), _column(Atom("L_s"), lanes))))
    return Next(head, tail)


def metric_multiple_join(depth: int, kind: str = "ls") -> Term:
    """``depth + 1`` lane pairs each joined into one lane."""
    _check_depth(depth)
    _reject_lr(kind, "Join")
    lanes = depth + 1
    if kind == "ls":
        head = Juxta(tr(Juxta(_column(Atom("L_s"), lanes), Atom("CS"))), _column(Atom("Down"), lanes))
        tail: Term = Atom("J_lu")
        for level in range(1, lanes):
            tail = Juxta(tail, next_chain(tr(_chain(level)), Atom("J_lu"), _chain(level)))
        return Next(head, tail)
    head = Juxta(_column(Atom("Down"), lanes), tl(Juxta(Atom("CS"), _column(Atom("L_s"), lanes))))
    tail = Atom("J_ru")
    for level in range(1, lanes):
        tail = Juxta(next_chain(tl(_chain(level)), Atom("J_ru"), _chain(level)), tail)
    return Next(head, tail)


def junction(name: str) -> AtomSpec:
    """The unit-square junction atom, with its defining body retained."""
    if name not in JUNCTIONS:
        raise NonMetricAtom(name)
    return builtin_registry()[name]
