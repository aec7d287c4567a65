import pytest
from django.core.exceptions import ValidationError

from aktonc.models import ConcealedAtom, Program


def test_program_report_is_generated_on_save(program: Program):
    program.refresh_from_db()

    assert program.status == Program.ProgramStatus.CHECKED
    assert program.report["program"]["slug"] == "diamond"
    assert program.report["term"] == "Entry>Fork>Link/Link>Join>Exit"
    assert program.report["check"]["ok"] is True
    assert program.report["check"]["sort"] == "CS"
    assert len(program.report["network"]["nodes"]) == 6
    assert program.report["metric"] is False


def test_syntax_errors_block_saving(db):
    with pytest.raises(ValidationError) as excinfo:
        Program.objects.create(name="Broken", slug="broken", source="Entry >")

    assert "source" in excinfo.value.message_dict
    assert not Program.objects.exists()


def test_ill_formed_programs_are_stored_as_invalid(db):
    program = Program.objects.create(name="Dangling", slug="dangling", source="Entry > Join")
    program.refresh_from_db()

    assert program.status == Program.ProgramStatus.INVALID
    assert program.report["network"] is None
    assert [v["code"] for v in program.report["check"]["violations"]] == ["next_interface"]


def test_concealed_atoms_complete_the_program(db):
    program = Program.objects.create(name="Split", slug="split", source="Entry > Split > Exit")
    program.refresh_from_db()

    assert program.status == Program.ProgramStatus.INVALID
    assert program.report["check"]["violations"][0]["code"] == "unknown_atom"

    atom = ConcealedAtom.objects.create(program=program, name="Split", body="Fork > Join")
    program.refresh_from_db()

    assert program.status == Program.ProgramStatus.CHECKED
    assert program.full_source() == "Split := Fork > Join ;\nEntry > Split > Exit"
    assert [d["name"] for d in program.report["definitions"]] == ["Split"]
    assert program.report["definitions"][0]["sort"] == "B"

    atom.delete()
    program.refresh_from_db()

    assert program.status == Program.ProgramStatus.INVALID


@pytest.mark.parametrize(
    ("name", "body", "field"),
    [
        ("Fork", "Link", "name"),
        ("2nd", "Link", "name"),
        ("Pair", "Link ; Link", "body"),
        ("Pair", "Link >", "body"),
    ],
)
def test_concealed_atom_validation(program: Program, name, body, field):
    with pytest.raises(ValidationError) as excinfo:
        ConcealedAtom.objects.create(program=program, name=name, body=body)

    assert field in excinfo.value.message_dict


def test_metric_programs_are_flagged(metric_program: Program):
    metric_program.refresh_from_db()

    assert metric_program.status == Program.ProgramStatus.CHECKED
    assert metric_program.report["metric"] is True


def test_generate_report_without_commit_leaves_the_row(program: Program):
    Program.objects.filter(pk=program.pk).update(report={}, status=Program.ProgramStatus.DRAFT)
    program.refresh_from_db()

    report = program.generate_report(commit=False)
    program.refresh_from_db()

    assert report["program"]["status"] == "checked"
    assert program.status == Program.ProgramStatus.DRAFT
    assert program.report == {}
