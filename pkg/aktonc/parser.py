from __future__ import annotations

import logging
from functools import cache
from pathlib import Path
from typing import NamedTuple

from lark import Lark, Token, Transformer, Tree, v_args
from lark.exceptions import (
    UnexpectedCharacters,
    UnexpectedEOF,
    UnexpectedInput,
    UnexpectedToken,
    VisitError,
)

from .atoms import AtomRegistry, builtin_registry
from .exceptions import AktonError, InvalidCount, ParseError, UnknownAtom
from .terms import Atom, Term, join_juxta, join_next, power, times, tl, tr

logger = logging.getLogger(__name__)


class LoadedProgram(NamedTuple):
    registry: AtomRegistry
    term: Term
    definitions: tuple[tuple[str, Term], ...]


@cache
def _grammar() -> Lark:
    return Lark.open("grammar.lark", rel_to=__file__, parser="lalr", start="program")


@v_args(inline=True)
class TermBuilder(Transformer):
    """Turns a parse tree into a ``Term``; counts are desugared on the way up.

    A zero count makes its operand vanish, so intermediate results may be
    ``None`` until the enclosing Next or Juxta absorbs them.
    """

    def __init__(self, registry: AtomRegistry) -> None:
        super().__init__()
        self.registry = registry

    def atom(self, name: Token, label: Token | None = None) -> Atom:
        if str(name) not in self.registry:
            raise UnknownAtom(str(name), name.line or 0, name.column or 0)
        return Atom(str(name), str(label) if label is not None else None)

    def next(self, left: Term | None, right: Term | None) -> Term | None:
        return join_next(left, right)

    def juxta(self, upper: Term | None, lower: Term | None) -> Term | None:
        return join_juxta(upper, lower)

    def times(self, count: Token, body: Term | None) -> Term | None:
        return times(int(count), body) if body is not None else None

    def power(self, body: Term | None, count: Token) -> Term | None:
        return power(body, int(count)) if body is not None else None

    def tilt_left(self, body: Term | None) -> Term | None:
        return tl(body) if body is not None else None

    def tilt_right(self, body: Term | None) -> Term | None:
        return tr(body) if body is not None else None


def _describe(exc: UnexpectedInput) -> str:
    if isinstance(exc, UnexpectedCharacters):
        return f"unexpected character {exc.char!r}"
    if isinstance(exc, UnexpectedEOF):
        return "unexpected end of input"
    if isinstance(exc, UnexpectedToken):
        if exc.token.type == "$END":
            return "unexpected end of input"
        return f"unexpected {exc.token.type} {exc.token.value!r}"
    return exc.__class__.__name__


def _parse_tree(source: str) -> Tree:
    try:
        return _grammar().parse(source)
    except UnexpectedInput as exc:
        line = exc.line if exc.line and exc.line > 0 else source.count("\n") + 1
        column = exc.column if exc.column and exc.column > 0 else 1
        raise ParseError(line, column, _describe(exc)) from None


def _build(tree: Tree, registry: AtomRegistry) -> Term:
    try:
        term = TermBuilder(registry).transform(tree)
    except VisitError as exc:
        if isinstance(exc.orig_exc, AktonError):
            raise exc.orig_exc from None
        raise
    if term is None:
        raise InvalidCount(0)
    return term


def load_program(source: str, registry: AtomRegistry | None = None) -> LoadedProgram:
    """Parse definitions and the program term; definitions are concealed in order."""
    registry = registry if registry is not None else builtin_registry()
    *definition_trees, program_tree = _parse_tree(source).children
    definitions: list[tuple[str, Term]] = []
    for definition in definition_trees:
        name, body_tree = definition.children
        body = _build(body_tree, registry)
        registry = registry.conceal(str(name), body)
        definitions.append((str(name), body))
        logger.debug("concealed %s (sort %s)", name, registry[str(name)].sort)
    return LoadedProgram(registry, _build(program_tree, registry), tuple(definitions))


def load_file(path: str | Path, registry: AtomRegistry | None = None) -> LoadedProgram:
    return load_program(Path(path).read_text(encoding="utf-8"), registry)


def parse(source: str, registry: AtomRegistry | None = None) -> Term:
    return load_program(source, registry).term


def check_syntax(source: str) -> None:
    """Raise ParseError when ``source`` does not follow the grammar; atoms are not resolved."""
    _parse_tree(source)
