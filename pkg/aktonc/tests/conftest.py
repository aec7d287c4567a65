from pathlib import Path

import pytest

from aktonc.models import Program

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

DIAMOND = "Entry > Fork > Link/Link > Join > Exit"


def corpus_file(name: str) -> Path:
    return CORPUS / f"{name}.akt"


@pytest.fixture()
def program(db) -> Program:
    return Program.objects.create(name="Diamond", slug="diamond", source=DIAMOND)


@pytest.fixture()
def metric_program(db) -> Program:
    return Program.objects.create(name="Straight strip", slug="straight-strip", source="L_s > L_s")
