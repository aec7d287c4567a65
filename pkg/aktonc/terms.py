from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

from django.utils.translation import gettext_lazy as _

from .exceptions import InvalidCount, NegativeCount, NotANextTerm, NoMatch

Path = tuple[int, ...]

# Tilt turns are clockwise quarter turns: tr adds one, tl adds three.
TR = 1
TL = 3

CUT_SWAPS = {"Up": "Down", "Down": "Up", "Set": "Off", "Off": "Set"}


@dataclass(frozen=True, slots=True)
class Atom:
    name: str
    label: str | None = None

    def __str__(self) -> str:
        return f"{self.name}.{self.label}" if self.label else self.name


@dataclass(frozen=True, slots=True)
class Next:
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Juxta:
    upper: Term
    lower: Term


@dataclass(frozen=True, slots=True)
class Tilt:
    turns: int
    body: Term


Term = Atom | Next | Juxta | Tilt


def tilted(body: Term, turns: int) -> Term:
    """Wrap ``body`` in a tilt, merging nested tilts and dropping full turns."""
    if isinstance(body, Tilt):
        turns += body.turns
        body = body.body
    turns %= 4
    if turns == 0:
        return body
    return Tilt(turns, body)


def tl(body: Term) -> Term:
    return tilted(body, TL)


def tr(body: Term) -> Term:
    return tilted(body, TR)


def next_chain(*terms: Term) -> Term:
    """Left-nested Next of the given terms, as the parser builds ``a > b > c``."""
    if not terms:
        raise InvalidCount(0)
    result = terms[0]
    for term in terms[1:]:
        result = Next(result, term)
    return result


def juxta_column(*terms: Term) -> Term:
    """Left-nested Juxta of the given terms, as the parser builds ``a / b / c``."""
    if not terms:
        raise InvalidCount(0)
    result = terms[0]
    for term in terms[1:]:
        result = Juxta(result, term)
    return result


def times(count: int, term: Term) -> Term | None:
    """``count * term``: ``term > (count - 1) * term``; zero counts vanish."""
    if count < 0:
        raise NegativeCount(count)
    if count == 0:
        return None
    rest = times(count - 1, term)
    return term if rest is None else Next(term, rest)


def power(term: Term, count: int) -> Term | None:
    """``term ^ count``: ``term / term ^ (count - 1)``; zero counts vanish."""
    if count < 0:
        raise NegativeCount(count)
    if count == 0:
        return None
    rest = power(term, count - 1)
    return term if rest is None else Juxta(term, rest)


def join_next(left: Term | None, right: Term | None) -> Term | None:
    if left is None:
        return right
    if right is None:
        return left
    return Next(left, right)


def join_juxta(upper: Term | None, lower: Term | None) -> Term | None:
    if upper is None:
        return lower
    if lower is None:
        return upper
    return Juxta(upper, lower)


def children(term: Term) -> tuple[Term, ...]:
    if isinstance(term, Next):
        return (term.left, term.right)
    if isinstance(term, Juxta):
        return (term.upper, term.lower)
    if isinstance(term, Tilt):
        return (term.body,)
    return ()


def leaves(term: Term, path: Path = ()) -> Iterator[tuple[Path, Atom]]:
    """Atoms in pre-order (top to bottom, left to right) with their tree paths."""
    if isinstance(term, Atom):
        yield path, term
        return
    for index, child in enumerate(children(term)):
        yield from leaves(child, (*path, index))


def subterm(term: Term, path: Path) -> Term:
    for index in path:
        kids = children(term)
        if index >= len(kids):
            raise NoMatch(_("path"), format_path(path))
        term = kids[index]
    return term


def replace(term: Term, path: Path, new: Term) -> Term:
    if not path:
        return new
    index, rest = path[0], path[1:]
    if isinstance(term, Next) and index in (0, 1):
        if index == 0:
            return Next(replace(term.left, rest, new), term.right)
        return Next(term.left, replace(term.right, rest, new))
    if isinstance(term, Juxta) and index in (0, 1):
        if index == 0:
            return Juxta(replace(term.upper, rest, new), term.lower)
        return Juxta(term.upper, replace(term.lower, rest, new))
    if isinstance(term, Tilt) and index == 0:
        return tilted(replace(term.body, rest, new), term.turns)
    raise NoMatch(_("path"), format_path(path))


def parse_path(text: str) -> Path:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split("."))
    except ValueError as exc:
        raise NoMatch(_("path"), text) from exc


def format_path(path: Path) -> str:
    return ".".join(str(index) for index in path)


def size(term: Term) -> int:
    return sum(1 for _ in leaves(term))


def complement(term: Term) -> Term:
    """Swap Up with Down and Set with Off, keeping every other atom."""
    if isinstance(term, Atom):
        swapped = CUT_SWAPS.get(term.name)
        return Atom(swapped, term.label) if swapped else term
    if isinstance(term, Next):
        return Next(complement(term.left), complement(term.right))
    if isinstance(term, Juxta):
        return Juxta(complement(term.upper), complement(term.lower))
    return Tilt(term.turns, complement(term.body))


def pre(term: Term) -> Term:
    if not isinstance(term, Next):
        raise NotANextTerm(to_text(term))
    return term.left


def suc(term: Term) -> Term:
    if not isinstance(term, Next):
        raise NotANextTerm(to_text(term))
    return term.right


# Binding strength used by the printer: Next < Juxta < atoms and tilts.
_NEXT, _JUXTA, _PRIMARY = 1, 2, 3


def _level(term: Term) -> int:
    if isinstance(term, Next):
        return _NEXT
    if isinstance(term, Juxta):
        return _JUXTA
    return _PRIMARY


def _wrap(term: Term, minimum: int) -> str:
    text = to_text(term)
    return f"({text})" if _level(term) < minimum else text


def to_text(term: Term) -> str:
    """Print ``term`` with the fewest parentheses that still parse back to it."""
    if isinstance(term, Atom):
        return str(term)
    if isinstance(term, Next):
        return f"{_wrap(term.left, _NEXT)}>{_wrap(term.right, _JUXTA)}"
    if isinstance(term, Juxta):
        return f"{_wrap(term.upper, _JUXTA)}/{_wrap(term.lower, _PRIMARY)}"
    text = to_text(term.body)
    if term.turns == TL:
        return f"tl({text})"
    for _turn in range(term.turns):
        text = f"tr({text})"
    return text


def to_json(term: Term) -> dict:
    if isinstance(term, Atom):
        payload: dict = {"atom": term.name}
        if term.label:
            payload["label"] = term.label
        return payload
    if isinstance(term, Next):
        return {"next": [to_json(term.left), to_json(term.right)]}
    if isinstance(term, Juxta):
        return {"juxta": [to_json(term.upper), to_json(term.lower)]}
    return {"tilt": term.turns, "body": to_json(term.body)}
