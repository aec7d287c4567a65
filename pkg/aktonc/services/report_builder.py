from __future__ import annotations

from typing import TYPE_CHECKING

from ..exceptions import AktonError
from ..metric import METRIC_ATOMS
from ..network import HEAL, reconstruct
from ..parser import LoadedProgram, load_program
from ..schema_types import (
    CheckPayload,
    DefinitionPayload,
    NetworkPayload,
    ProgramMetadata,
    ProgramReport,
)
from ..sorts import SortEngine, Violation, format_interface
from ..terms import leaves, to_text

if TYPE_CHECKING:
    from ..models import Program

CHECKED = "checked"
INVALID = "invalid"


def _failed_check(error: AktonError) -> CheckPayload:
    return {
        "ok": False,
        "sort": None,
        "in": "",
        "out": "",
        "violations": [Violation(error.code_name, str(error.messages[0])).as_dict()],
        "cuts": None,
    }


class ReportBuilder:
    """Builds the JSON report snapshot stored on ``Program``."""

    def build(self, program: Program) -> ProgramReport:
        metadata: ProgramMetadata = {
            "name": program.name,
            "slug": program.slug,
            "description": program.description,
            "status": INVALID,
        }
        try:
            loaded = load_program(program.full_source())
        except AktonError as error:
            return {
                "program": metadata,
                "term": None,
                "definitions": [],
                "check": _failed_check(error),
                "network": None,
                "metric": False,
            }

        engine = SortEngine(loaded.registry)
        report = engine.check(loaded.term)
        check: CheckPayload = report.as_dict()  # type: ignore[assignment]
        network: NetworkPayload | None = None
        if report.ok:
            try:
                network = reconstruct(loaded.term, HEAL, engine).to_json()  # type: ignore[assignment]
            except AktonError as error:
                check = _failed_check(error)
        metadata["status"] = CHECKED if check["ok"] else INVALID
        return {
            "program": metadata,
            "term": to_text(loaded.term),
            "definitions": self._serialize_definitions(loaded),
            "check": check,
            "network": network,
            "metric": self._is_metric(loaded),
        }

    def _serialize_definitions(self, loaded: LoadedProgram) -> list[DefinitionPayload]:
        payload: list[DefinitionPayload] = []
        for name, _body in loaded.definitions:
            spec = loaded.registry[name]
            payload.append(
                {
                    "name": name,
                    "sort": spec.sort,
                    "in": format_interface(spec.inputs),
                    "out": format_interface(spec.outputs),
                }
            )
        return payload

    def _is_metric(self, loaded: LoadedProgram) -> bool:
        expanded = loaded.registry.expand(loaded.term)
        return all(atom.name in METRIC_ATOMS for _path, atom in leaves(expanded))
