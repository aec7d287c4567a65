"""Implicit cut binding.

Every Up/Down and Set/Off occurrence is paired with its partner by following
the production tables bottom-up: each subterm carries one group of unpaired
occurrences per cut letter of its sort, and a composition whose sort drops a
letter closes that letter's group against a complementary group. Labeled cut
atoms (``Up.k`` / ``Down.k``) bypass this and pair by label.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

from .atoms import JUNCTIONS
from .exceptions import AmbiguousCut, OpaqueCut, UndefinedComposition, UnmatchedCut
from .tables import JUXTA, NEXT, RELATION_SYMBOLS
from .terms import Atom, Next, Path, Term, Tilt, format_path

if TYPE_CHECKING:
    from .sorts import SortEngine

logger = logging.getLogger(__name__)

PARTNERS = {"U": "D", "D": "U", "S": "O", "O": "S"}
TAIL_LETTERS = frozenset({"D", "O"})
SPATIAL_LETTERS = frozenset({"U", "D"})

CROSSING = "crossing"
CYCLE = "cycle"
CROSSLINK = "crosslink"
TWIN_CUT = "twin-cut"

CUT_ATOMS = frozenset({"Up", "Down", "Set", "Off", *JUNCTIONS})


@dataclass(frozen=True)
class Occurrence:
    path: Path
    atom: str
    letter: str
    label: str | None = None

    def __str__(self) -> str:
        name = f"{self.atom}.{self.label}" if self.label else self.atom
        return f"{name}@{format_path(self.path) or 'root'}"

    @property
    def spatial(self) -> bool:
        return self.letter in SPATIAL_LETTERS


@dataclass(frozen=True)
class CutPair:
    tail: Occurrence
    head: Occurrence
    family: str
    twist: str = "n/a"

    @property
    def kind(self) -> str:
        return "cut-spatial" if self.tail.spatial else "cut-planar"

    def as_dict(self) -> dict[str, Any]:
        return {
            "tail": str(self.tail),
            "head": str(self.head),
            "family": self.family,
            "twist": self.twist,
        }


@dataclass(frozen=True)
class CutBindings:
    pairs: tuple[CutPair, ...] = ()

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[CutPair]:
        return iter(self.pairs)

    def families(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for pair in self.pairs:
            counts[pair.family] = counts.get(pair.family, 0) + 1
        return counts

    def as_dict(self) -> dict[str, Any]:
        return {"pairs": [pair.as_dict() for pair in self.pairs], "families": self.families()}


def cut_letters(sort: str) -> list[tuple[str, str]]:
    """Cut letters of ``sort`` with their side: above the first B, below it, or no B."""
    if sort == "CS":
        return []
    first_body = sort.find("B")
    letters = []
    for index, letter in enumerate(sort):
        if letter in PARTNERS:
            if first_body < 0:
                side = "n"
            else:
                side = "a" if index < first_body else "b"
            letters.append((letter, side))
    return letters


@dataclass
class _Bound:
    sort: str
    letters: list[tuple[str, str]]
    groups: list[list[Occurrence]]


@dataclass(frozen=True)
class _Choice:
    matches: tuple[tuple[int, int], ...]
    survivors: tuple[tuple[str, int], ...]
    merged: bool


def _side_ok(relation: str, letter: str, left_side: str, right_side: str) -> bool:
    if relation == JUXTA:
        return left_side in ("b", "n") and right_side in ("a", "n")
    if "n" in (left_side, right_side):
        return True
    if letter in SPATIAL_LETTERS:
        return left_side != right_side
    return left_side == right_side


def _matchings(left: _Bound, right: _Bound) -> Iterator[tuple[tuple[int, int], ...]]:
    options: list[list[int | None]] = []
    for letter, _side in left.letters:
        partners = [j for j, (other, _) in enumerate(right.letters) if other == PARTNERS[letter]]
        options.append([None, *partners])
    for picks in itertools.product(*options):
        chosen = [j for j in picks if j is not None]
        if len(chosen) != len(set(chosen)):
            continue
        yield tuple((i, j) for i, j in enumerate(picks) if j is not None)


class CutBinder:
    def __init__(self, engine: SortEngine) -> None:
        self.engine = engine
        self.pairs: list[CutPair] = []
        self.labeled: list[Occurrence] = []

    def bind(self, term: Term) -> CutBindings:
        root = self._visit(term, ())
        for group in root.groups:
            if group:
                raise UnmatchedCut(str(group[0]))
        self._pair_labels()
        return CutBindings(tuple(self.pairs))

    def _visit(self, term: Term, path: Path) -> _Bound:
        if isinstance(term, Atom):
            return self._leaf(term, path)
        if isinstance(term, Tilt):
            return self._visit(term.body, (*path, 0))
        if isinstance(term, Next):
            relation, first, second = NEXT, term.left, term.right
        else:
            relation, first, second = JUXTA, term.upper, term.lower
        left = self._visit(first, (*path, 0))
        right = self._visit(second, (*path, 1))
        return self._compose(relation, left, right)

    def _leaf(self, atom: Atom, path: Path) -> _Bound:
        spec = self.engine.registry[atom.name]
        letters = cut_letters(spec.sort)
        if not letters:
            return _Bound(spec.sort, [], [])
        if atom.name not in CUT_ATOMS or len(letters) != 1:
            raise OpaqueCut(atom.name)
        occurrence = Occurrence(path, atom.name, letters[0][0], atom.label)
        if atom.label:
            self.labeled.append(occurrence)
            return _Bound(spec.sort, letters, [[]])
        return _Bound(spec.sort, letters, [[occurrence]])

    def _choices(self, relation: str, left: _Bound, right: _Bound, result: str) -> list[_Choice]:
        wanted = [letter for letter, _side in cut_letters(result)]
        choices = []
        for matches in _matchings(left, right):
            paired_left = {i for i, _ in matches}
            paired_right = {j for _, j in matches}
            survivors = [("l", i) for i in range(len(left.letters)) if i not in paired_left]
            survivors += [("r", j) for j in range(len(right.letters)) if j not in paired_right]
            variants = [(tuple(survivors), False)]
            if relation == JUXTA:
                last_left = [s for s in survivors if s[0] == "l"][-1:]
                first_right = [s for s in survivors if s[0] == "r"][:1]
                if (
                    last_left
                    and first_right
                    and left.letters[last_left[0][1]][0] == right.letters[first_right[0][1]][0]
                ):
                    merged = tuple(s for s in survivors if s != first_right[0])
                    variants.append((merged, True))
            for kept, merged in variants:
                letters = [
                    (left.letters if side == "l" else right.letters)[index][0]
                    for side, index in kept
                ]
                if letters == wanted:
                    choices.append(_Choice(matches, kept, merged))
        return choices

    def _penalty(self, relation: str, table: str | None, left: _Bound, right: _Bound,
                 choice: _Choice) -> int:
        if table == "twin_cut":
            return 0
        return sum(
            not _side_ok(relation, left.letters[i][0], left.letters[i][1], right.letters[j][1])
            for i, j in choice.matches
        )

    def _compose(self, relation: str, left: _Bound, right: _Bound) -> _Bound:
        result = self.engine.compose(relation, left.sort, right.sort)
        symbol = RELATION_SYMBOLS[relation]
        if result is None:
            raise UndefinedComposition(left.sort, right.sort, symbol)
        if not left.letters and not right.letters:
            return _Bound(result, [], [])
        table = self.engine.tables.owner(relation, left.sort, right.sort)
        choices = self._choices(relation, left, right, result)
        if not choices:
            stray = next((group[0] for group in left.groups + right.groups if group), None)
            if stray is None:
                return _Bound(result, cut_letters(result), [[] for _ in cut_letters(result)])
            raise UnmatchedCut(str(stray))
        scored = sorted(
            (self._penalty(relation, table, left, right, choice), index)
            for index, choice in enumerate(choices)
        )
        best = scored[0][0]
        if len([score for score, _ in scored if score == best]) > 1:
            raise AmbiguousCut(left.sort, right.sort, symbol)
        choice = choices[scored[0][1]]
        logger.debug(
            "cut binding %s %s %s -> %s: matches=%s merged=%s",
            left.sort, symbol, right.sort, result, choice.matches, choice.merged,
        )
        for i, j in choice.matches:
            self._close(relation, table, left, right, i, j)
        groups = [
            list((left.groups if side == "l" else right.groups)[index])
            for side, index in choice.survivors
        ]
        if choice.merged:
            boundary = sum(1 for side, _ in choice.survivors if side == "l") - 1
            first_right = next(
                j for j in range(len(right.letters))
                if j not in {m[1] for m in choice.matches}
            )
            groups[boundary] = groups[boundary] + list(right.groups[first_right])
        return _Bound(result, cut_letters(result), groups)

    def _family(self, relation: str, table: str | None, letter: str) -> str:
        if table == "twin_cut":
            return TWIN_CUT
        if letter in SPATIAL_LETTERS:
            return CROSSING
        return CYCLE if relation == NEXT else CROSSLINK

    def _close(self, relation: str, table: str | None, left: _Bound, right: _Bound,
               i: int, j: int) -> None:
        upper, lower = left.groups[i], right.groups[j]
        if len(upper) != len(lower):
            longer = upper if len(upper) > len(lower) else lower
            raise UnmatchedCut(str(longer[min(len(upper), len(lower))]))
        family = self._family(relation, table, left.letters[i][0])
        twist = "n/a"
        if family == TWIN_CUT:
            twist = self.engine.tables.twist.get(left.sort, "n/a")
        elif family == CROSSING:
            side = left.letters[i][1] if left.letters[i][0] in TAIL_LETTERS else right.letters[j][1]
            twist = {"a": "left", "b": "right"}.get(side, "n/a")
        for first, second in zip(upper, lower, strict=True):
            tail, head = (first, second) if first.letter in TAIL_LETTERS else (second, first)
            self.pairs.append(CutPair(tail, head, family, twist))

    def _pair_labels(self) -> None:
        by_label: dict[str, list[Occurrence]] = {}
        for occurrence in self.labeled:
            by_label.setdefault(occurrence.label or "", []).append(occurrence)
        for occurrences in by_label.values():
            tails = [o for o in occurrences if o.letter in TAIL_LETTERS]
            heads = [o for o in occurrences if o.letter not in TAIL_LETTERS]
            if len(tails) != 1 or len(heads) != 1 or PARTNERS[tails[0].letter] != heads[0].letter:
                raise UnmatchedCut(str(occurrences[0]))
            family = CROSSING if tails[0].spatial else CYCLE
            self.pairs.append(CutPair(tails[0], heads[0], family))


def bind_cuts(term: Term, engine: SortEngine | None = None) -> CutBindings:
    """Pair every cut occurrence of ``term`` with its partner."""
    if engine is None:
        from .sorts import SortEngine

        engine = SortEngine()
    return CutBinder(engine).bind(term)
