from __future__ import annotations

from typing import Any

from django.core.exceptions import ValidationError
from django.utils.translation import gettext_lazy as _


class AktonError(ValidationError):
    """Base class for every domain error raised by the toolchain.

    Subclasses ``ValidationError`` so model ``clean()`` and the admin can
    surface the message directly. ``code`` is stable and machine readable.
    """

    code_name = "akton_error"
    template = _("akton error")

    def __init__(self, **params: Any) -> None:
        self.details = params
        super().__init__(self.template, code=self.code_name, params=params)

    def __str__(self) -> str:
        return self.describe()

    def describe(self) -> str:
        return f"{self.code_name}: {self.messages[0]}"


class ParseError(AktonError):
    code_name = "syntax_error"
    template = _("syntax: line %(line)s, column %(column)s: %(detail)s")

    def __init__(self, line: int, column: int, detail: str) -> None:
        super().__init__(line=line, column=column, detail=detail)


class UnknownAtom(AktonError):
    code_name = "unknown_atom"
    template = _("atom-name: unknown atom %(name)s at line %(line)s, column %(column)s")

    def __init__(self, name: str, line: int = 0, column: int = 0) -> None:
        super().__init__(name=name, line=line, column=column)


class NegativeCount(AktonError):
    code_name = "negative_count"
    template = _("counting: count %(count)s is negative")

    def __init__(self, count: int) -> None:
        super().__init__(count=count)


class InvalidCount(AktonError):
    code_name = "invalid_count"
    template = _("counting: %(count)s is not a valid count here")

    def __init__(self, count: int) -> None:
        super().__init__(count=count)


class DuplicateAtom(AktonError):
    code_name = "duplicate_atom"
    template = _("conceal: atom %(name)s is already registered")

    def __init__(self, name: str) -> None:
        super().__init__(name=name)


class IllFormedBody(AktonError):
    code_name = "ill_formed_body"
    template = _("conceal: body of %(name)s is not well formed: %(reason)s")

    def __init__(self, name: str, reason: str) -> None:
        super().__init__(name=name, reason=reason)


class UndefinedComposition(AktonError):
    code_name = "undefined_composition"
    template = _("production-table: %(left)s %(relation)s %(right)s is not defined by any table")

    def __init__(self, left: str, right: str, relation: str) -> None:
        super().__init__(left=left, right=right, relation=relation)


class NextInterfaceMismatch(AktonError):
    code_name = "next_interface"
    template = _("next-interface: out(x) = %(output)s does not match in(y) = %(input)s")

    def __init__(self, output: str, input: str) -> None:  # noqa: A002
        super().__init__(output=output, input=input)


class UnmatchedCut(AktonError):
    code_name = "unmatched_cut"
    template = _("cut-binding: no partner for %(occurrence)s")

    def __init__(self, occurrence: str) -> None:
        super().__init__(occurrence=occurrence)


class AmbiguousCut(AktonError):
    code_name = "ambiguous_cut"
    template = _("cut-binding: %(left)s %(relation)s %(right)s admits several equally good pairings")

    def __init__(self, left: str, right: str, relation: str) -> None:
        super().__init__(left=left, right=right, relation=relation)


class OpaqueCut(AktonError):
    code_name = "opaque_cut"
    template = _("cut-binding: concealed atom %(name)s carries a cut that cannot be bound")

    def __init__(self, name: str) -> None:
        super().__init__(name=name)


class NotOrientable(AktonError):
    code_name = "not_orientable"
    template = _("linearize: network cannot be oriented: %(reason)s")

    def __init__(self, reason: str) -> None:
        super().__init__(reason=reason)


class NotANextTerm(AktonError):
    code_name = "not_a_next_term"
    template = _("pre-suc: %(term)s is not a Next term")

    def __init__(self, term: str) -> None:
        super().__init__(term=term)


class NoMatch(AktonError):
    code_name = "no_match"
    template = _("rewrite: %(rule)s does not match at path '%(path)s'")

    def __init__(self, rule: str, path: str) -> None:
        super().__init__(rule=rule, path=path)


class ConstraintViolated(AktonError):
    code_name = "constraint_violated"
    template = _("rewrite: %(rule)s constraint fails: %(detail)s")

    def __init__(self, rule: str, detail: str) -> None:
        super().__init__(rule=rule, detail=detail)


class NonDigitalAtom(AktonError):
    code_name = "non_digital_atom"
    template = _("digital: %(name)s has no digital meaning")

    def __init__(self, name: str) -> None:
        super().__init__(name=name)


class ArityMismatch(AktonError):
    code_name = "arity_mismatch"
    template = _("digital: %(name)s expects %(expected)s inputs, got %(received)s")

    def __init__(self, name: str, expected: int, received: int) -> None:
        super().__init__(name=name, expected=expected, received=received)


class NonMetricAtom(AktonError):
    code_name = "non_metric_atom"
    template = _("metric: %(name)s has no side profile")

    def __init__(self, name: str) -> None:
        super().__init__(name=name)


class PlugMismatch(AktonError):
    code_name = "plug_mismatch"
    template = _("metric-plug: trim(out(x)) = %(output)s does not fit trim(in(y)) = %(input)s")

    def __init__(self, output: str, input: str) -> None:  # noqa: A002
        super().__init__(output=output, input=input)


class OverlapDetected(AktonError):
    code_name = "overlap_detected"
    template = _("layout: cell (%(row)s, %(column)s) is occupied by %(existing)s")

    def __init__(self, row: int, column: int, existing: str) -> None:
        super().__init__(row=row, column=column, existing=existing)
