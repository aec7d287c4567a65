from __future__ import annotations

import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass

from .atoms import Interface
from .exceptions import AktonError, ConstraintViolated, InvalidCount, NoMatch
from .sorts import SortEngine, format_interface
from .terms import (
    Atom,
    Juxta,
    Next,
    Path,
    Term,
    Tilt,
    children,
    format_path,
    juxta_column,
    leaves,
    power,
    pre,
    replace,
    subterm,
    suc,
)

logger = logging.getLogger(__name__)

FORWARD = "fwd"
BACKWARD = "bwd"

LINK = "link"
EXPANSION = "expansion"
ASSOCIATIVITY = "associativity"
DISTRIBUTIVITY = "distributivity"
CONNECTIVITY = "connectivity"
FAMILIES = (LINK, EXPANSION, ASSOCIATIVITY, DISTRIBUTIVITY, CONNECTIVITY)

# Distributivity only ever rewrites left to right.
_ONE_WAY = frozenset({DISTRIBUTIVITY})


@dataclass(frozen=True)
class RewriteRule:
    family: str
    direction: str = FORWARD
    variant: int = 1

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown rule family {self.family!r}")
        if self.direction not in (FORWARD, BACKWARD):
            raise ValueError(f"unknown rule direction {self.direction!r}")
        if self.variant not in (1, 2):
            raise ValueError(f"rule variant must be 1 or 2, not {self.variant}")
        if self.family in _ONE_WAY and self.direction == BACKWARD:
            raise ValueError(f"{self.family} has no backward direction")

    def __str__(self) -> str:
        return f"{self.family}:{self.direction}#{self.variant}"

    @classmethod
    def parse(cls, text: str) -> RewriteRule:
        """Read ``family[:fwd|bwd][#variant]``."""
        body, _, variant = text.strip().partition("#")
        family, _, direction = body.partition(":")
        return cls(
            family=family.strip().lower(),
            direction=(direction.strip().lower() or FORWARD),
            variant=int(variant) if variant else 1,
        )


def all_rules() -> list[RewriteRule]:
    rules = []
    for family in FAMILIES:
        directions = (FORWARD,) if family in _ONE_WAY else (FORWARD, BACKWARD)
        for direction in directions:
            for variant in (1, 2):
                rules.append(RewriteRule(family, direction, variant))
    return rules


def multiple_link(count: int) -> Term:
    """A column of ``count`` Links."""
    if count < 1:
        raise InvalidCount(count)
    column = power(Atom("Link"), count)
    assert column is not None
    return column


def _fork_base(handedness: str) -> Term:
    fork, link = Atom("Fork"), Atom("Link")
    if handedness == "l":
        return Next(Next(fork, Juxta(Atom("Down"), link)), Juxta(link, Atom("Up")))
    return Next(Next(fork, Juxta(link, Atom("Down"))), Juxta(Atom("Up"), link))


def _check_handedness(handedness: str) -> None:
    if handedness not in ("l", "r"):
        raise ValueError(f"handedness must be 'l' or 'r', not {handedness!r}")


def multiple_fork(count: int, handedness: str = "l") -> Term:
    """``count`` lanes forked into ``2 * count``, built by the pre/suc recursion."""
    _check_handedness(handedness)
    if count < 1:
        raise InvalidCount(count)
    term = _fork_base(handedness)
    link = Atom("Link")
    for _depth in range(1, count):
        head = pre(_fork_base(handedness))
        if handedness == "l":
            term = Next(
                Juxta(pre(term), head),
                juxta_column(link, suc(term), Atom("Up")),
            )
        else:
            term = Next(
                Juxta(pre(term), head),
                juxta_column(Atom("Up"), suc(term), link),
            )
    return term


def multiple_join(count: int, handedness: str = "l") -> Term:
    """``2 * count`` lanes joined into ``count``."""
    _check_handedness(handedness)
    if count < 1:
        raise InvalidCount(count)
    link, join = Atom("Link"), Atom("Join")
    if handedness == "l":
        tail = Next(Juxta(link, Atom("Up")), join)
        term: Term = Next(Juxta(Atom("Down"), link), tail)
    else:
        tail = Next(Juxta(Atom("Up"), link), join)
        term = Next(Juxta(link, Atom("Down")), tail)
    for _depth in range(1, count):
        if handedness == "l":
            first = juxta_column(Atom("Down"), pre(term), link)
        else:
            first = juxta_column(link, pre(term), Atom("Down"))
        term = Next(first, Juxta(suc(term), tail))
    return term


def normalize_assoc(term: Term) -> Term:
    """Right-nest every Next chain and every Juxta column."""
    if isinstance(term, Next):
        parts = _flatten(term, Next)
        result = normalize_assoc(parts[-1])
        for part in reversed(parts[:-1]):
            result = Next(normalize_assoc(part), result)
        return result
    if isinstance(term, Juxta):
        parts = _flatten(term, Juxta)
        result = normalize_assoc(parts[-1])
        for part in reversed(parts[:-1]):
            result = Juxta(normalize_assoc(part), result)
        return result
    if isinstance(term, Tilt):
        return Tilt(term.turns, normalize_assoc(term.body))
    return term


def _flatten(term: Term, kind: type) -> list[Term]:
    if isinstance(term, kind):
        return [part for child in children(term) for part in _flatten(child, kind)]
    return [term]


def is_link_column(term: Term) -> bool:
    if isinstance(term, Atom):
        return term.name == "Link"
    return isinstance(term, Juxta) and all(atom.name == "Link" for _, atom in leaves(term))


class Rewriter:
    """Single-step application of the dependency preserving replacement rules."""

    def __init__(self, engine: SortEngine | None = None) -> None:
        self.engine = engine if engine is not None else SortEngine()
        self._handlers: dict[str, Callable[[RewriteRule, Term, Term | None], Term]] = {
            LINK: self._link,
            EXPANSION: self._expansion,
            ASSOCIATIVITY: self._associativity,
            DISTRIBUTIVITY: self._distributivity,
            CONNECTIVITY: self._connectivity,
        }

    def apply(self, rule: RewriteRule, term: Term, path: Path = (),
              operand: Term | None = None) -> Term:
        target = subterm(term, path)
        try:
            replacement = self._handlers[rule.family](rule, target, operand)
        except NoMatch:
            raise NoMatch(str(rule), format_path(path)) from None
        result = replace(term, path, replacement)
        before = self.engine.check(term)
        if before.ok:
            after = self.engine.check(result)
            if not after.ok:
                raise ConstraintViolated(str(rule), after.violations[0].message)
        logger.debug("applied %s at '%s'", rule, format_path(path))
        return result

    def applicable(self, term: Term) -> Iterator[tuple[RewriteRule, Path]]:
        """Every (rule, path) whose shape, constraint and re-check all succeed."""
        for path in _paths(term):
            for rule in all_rules():
                try:
                    self.apply(rule, term, path)
                except AktonError:
                    continue
                yield rule, path

    def _mismatch(self, rule: RewriteRule, name: str, left: Interface, right: Interface) -> None:
        if left != right:
            raise ConstraintViolated(
                str(rule),
                f"{name}: {format_interface(left)} != {format_interface(right)}",
            )

    def _link(self, rule: RewriteRule, target: Term, operand: Term | None) -> Term:
        engine = self.engine
        if rule.direction == FORWARD:
            width = engine.in_of(target) if rule.variant == 1 else engine.out_of(target)
            column = operand
            if column is None:
                if not width:
                    raise ConstraintViolated(str(rule), "x has an empty interface on that side")
                column = multiple_link(len(width))
            if not is_link_column(column):
                raise ConstraintViolated(str(rule), "y must be a column of Links")
            if rule.variant == 1:
                self._mismatch(rule, "in(y) = in(x)", engine.in_of(column), width)
                return Next(column, target)
            self._mismatch(rule, "out(y) = out(x)", engine.out_of(column), width)
            return Next(target, column)
        if not isinstance(target, Next):
            raise NoMatch(str(rule), "")
        if rule.variant == 1:
            column, kept = target.left, target.right
            if not is_link_column(column):
                raise NoMatch(str(rule), "")
            self._mismatch(rule, "in(y) = in(x)", engine.in_of(column), engine.in_of(kept))
            return kept
        kept, column = target.left, target.right
        if not is_link_column(column):
            raise NoMatch(str(rule), "")
        self._mismatch(rule, "out(y) = out(x)", engine.out_of(column), engine.out_of(kept))
        return kept

    def _is_dead(self, term: Term) -> bool:
        try:
            sort = self.engine.sort_of(term)
        except AktonError:
            return False
        return sort == "CS" and not self.engine.in_of(term) and not self.engine.out_of(term)

    def _expansion(self, rule: RewriteRule, target: Term, operand: Term | None) -> Term:
        if rule.direction == FORWARD:
            dead = operand if operand is not None else Atom("CS")
            if not self._is_dead(dead):
                raise ConstraintViolated(str(rule), "y must be a closed system with ε interfaces")
            return Juxta(dead, target) if rule.variant == 1 else Juxta(target, dead)
        if not isinstance(target, Juxta):
            raise NoMatch(str(rule), "")
        dead, kept = (target.upper, target.lower) if rule.variant == 1 else (
            target.lower, target.upper
        )
        if not self._is_dead(dead):
            raise NoMatch(str(rule), "")
        return kept

    def _associativity(self, rule: RewriteRule, target: Term, operand: Term | None) -> Term:
        kind = Next if rule.variant == 1 else Juxta
        if not isinstance(target, kind):
            raise NoMatch(str(rule), "")
        first, second = children(target)
        if rule.direction == FORWARD:
            if not isinstance(first, kind):
                raise NoMatch(str(rule), "")
            x, y = children(first)
            return kind(x, kind(y, second))
        if not isinstance(second, kind):
            raise NoMatch(str(rule), "")
        y, z = children(second)
        return kind(kind(first, y), z)

    def _distributivity(self, rule: RewriteRule, target: Term, operand: Term | None) -> Term:
        if rule.variant == 1:
            if not (
                isinstance(target, Juxta)
                and isinstance(target.upper, Next)
                and isinstance(target.lower, Next)
            ):
                raise NoMatch(str(rule), "")
            w, x = target.upper.left, target.upper.right
            y, z = target.lower.left, target.lower.right
            return Next(Juxta(w, y), Juxta(x, z))
        if not (
            isinstance(target, Next)
            and isinstance(target.left, Juxta)
            and isinstance(target.right, Juxta)
        ):
            raise NoMatch(str(rule), "")
        w, y = target.left.upper, target.left.lower
        x, z = target.right.upper, target.right.lower
        self._mismatch(rule, "out(w) = in(x)", self.engine.out_of(w), self.engine.in_of(x))
        return Juxta(Next(w, x), Next(y, z))

    def _require_empty(self, rule: RewriteRule, name: str, interface: Interface) -> None:
        if interface:
            raise ConstraintViolated(str(rule), f"{name} = {format_interface(interface)} != ε")

    def _connectivity(self, rule: RewriteRule, target: Term, operand: Term | None) -> Term:
        engine = self.engine
        if rule.direction == FORWARD:
            if not (
                isinstance(target, Juxta)
                and isinstance(target.upper, Next)
                and isinstance(target.lower, Next)
            ):
                raise NoMatch(str(rule), "")
            w, x = target.upper.left, target.upper.right
            y, z = target.lower.left, target.lower.right
            if rule.variant == 1:
                self._require_empty(rule, "out(x)", engine.out_of(x))
                self._require_empty(rule, "in(y)", engine.in_of(y))
                return Next(Next(w, Juxta(x, y)), z)
            self._require_empty(rule, "in(w)", engine.in_of(w))
            self._require_empty(rule, "out(z)", engine.out_of(z))
            return Next(Next(y, Juxta(w, z)), x)
        if not (
            isinstance(target, Next)
            and isinstance(target.left, Next)
            and isinstance(target.left.right, Juxta)
        ):
            raise NoMatch(str(rule), "")
        middle = target.left.right
        if rule.variant == 1:
            w, x, y, z = target.left.left, middle.upper, middle.lower, target.right
            self._require_empty(rule, "out(x)", engine.out_of(x))
            self._require_empty(rule, "in(y)", engine.in_of(y))
        else:
            y, w, z, x = target.left.left, middle.upper, middle.lower, target.right
            self._require_empty(rule, "in(w)", engine.in_of(w))
            self._require_empty(rule, "out(z)", engine.out_of(z))
        return Juxta(Next(w, x), Next(y, z))


def _paths(term: Term, path: Path = ()) -> Iterator[Path]:
    yield path
    for index, child in enumerate(children(term)):
        yield from _paths(child, (*path, index))


def apply(rule: RewriteRule | str, term: Term, path: Path = (), operand: Term | None = None,
          engine: SortEngine | None = None) -> Term:
    if isinstance(rule, str):
        rule = RewriteRule.parse(rule)
    return Rewriter(engine).apply(rule, term, path, operand)
