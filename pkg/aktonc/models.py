from __future__ import annotations

import re
from typing import TYPE_CHECKING, Any, Protocol

from django.core.exceptions import ValidationError
from django.db import models, transaction
from django.utils.translation import gettext_lazy as _

from .exceptions import AktonError
from .schema_types import ProgramReport

if TYPE_CHECKING:
    from .parser import LoadedProgram

    class _ConcealedAtomQuerySet(Protocol):
        def order_by(self, *fields: str) -> list[ConcealedAtom]: ...

    class _ConcealedAtomManager(Protocol):
        def all(self) -> _ConcealedAtomQuerySet: ...


ATOM_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class Program(models.Model):
    class ProgramStatus(models.TextChoices):
        DRAFT = "draft", _("Draft")
        CHECKED = "checked", _("Checked")
        INVALID = "invalid", _("Invalid")

    name = models.CharField(max_length=255)
    slug = models.SlugField(unique=True)
    description = models.TextField(blank=True)
    source = models.TextField(help_text="Program term; definitions belong to concealed atoms")
    status = models.CharField(
        max_length=20,
        choices=ProgramStatus.choices,
        default=ProgramStatus.DRAFT,
    )
    report = models.JSONField(default=dict, blank=True)
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    if TYPE_CHECKING:
        concealed_atoms: _ConcealedAtomManager

    class Meta:
        ordering = ("name",)

    def __str__(self) -> str:  # pragma: no cover - trivial
        return self.name

    def clean(self) -> None:
        super().clean()
        self._validate_source_syntax()

    def save(self, *args: Any, **kwargs: Any) -> None:
        update_report = kwargs.pop("update_report", True)
        self.full_clean()
        with transaction.atomic():
            super().save(*args, **kwargs)
            if update_report:
                self.generate_report(commit=True)

    def full_source(self) -> str:
        """Source text with every concealed atom prepended as ``name := body ;``."""
        lines: list[str] = []
        if self.pk:
            lines = [
                f"{atom.name} := {atom.body} ;"
                for atom in self.concealed_atoms.all().order_by("position", "id")
            ]
        return "\n".join([*lines, self.source])

    def load(self) -> LoadedProgram:
        from .parser import load_program

        return load_program(self.full_source())

    def generate_report(self, commit: bool = True) -> ProgramReport:
        from .services.report_builder import ReportBuilder

        report = ReportBuilder().build(self)
        status = report["program"]["status"]
        if commit and self.pk:
            type(self).objects.filter(pk=self.pk).update(report=report, status=status)
            self.report = report
            self.status = status
        return report

    def _validate_source_syntax(self) -> None:
        from .parser import check_syntax

        try:
            check_syntax(self.source)
        except AktonError as error:
            raise ValidationError({"source": error.messages[0]}) from error


class ConcealedAtom(models.Model):
    program = models.ForeignKey(
        Program,
        related_name="concealed_atoms",
        on_delete=models.CASCADE,
    )
    name = models.CharField(max_length=64, help_text="Name the program uses for this block")
    body = models.TextField(help_text="Term hidden behind the new atom")
    position = models.PositiveIntegerField(default=1)

    class Meta:
        ordering = ("position", "id")
        constraints = [
            models.UniqueConstraint(
                fields=("program", "name"),
                name="unique_concealed_atom_name_per_program",
            ),
            models.UniqueConstraint(
                fields=("program", "position"),
                name="unique_concealed_atom_position_per_program",
            ),
        ]

    def __str__(self) -> str:  # pragma: no cover - trivial
        return f"{self.name} ({self.program.slug})"

    def clean(self) -> None:
        super().clean()
        self._validate_name()
        self._validate_body_syntax()

    def save(self, *args: Any, **kwargs: Any) -> None:
        self.full_clean()
        with transaction.atomic():
            super().save(*args, **kwargs)
            self.program.generate_report(commit=True)

    def delete(self, *args: Any, **kwargs: Any) -> tuple[int, dict[str, int]]:
        program = self.program
        deleted = super().delete(*args, **kwargs)
        program.generate_report(commit=True)
        return deleted

    def _validate_name(self) -> None:
        from .atoms import builtin_registry

        if not ATOM_NAME.match(self.name or ""):
            raise ValidationError(
                {"name": _("%(name)s is not a valid atom name.") % {"name": self.name}}
            )
        if self.name in builtin_registry():
            raise ValidationError(
                {"name": _("%(name)s is a built-in atom and cannot be redefined.") % {"name": self.name}}
            )

    def _validate_body_syntax(self) -> None:
        from .parser import check_syntax

        if ";" in (self.body or ""):
            raise ValidationError({"body": _("The body is a single term without ';'.")})
        try:
            check_syntax(self.body)
        except AktonError as error:
            raise ValidationError({"body": error.messages[0]}) from error
