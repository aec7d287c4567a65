from unittest import mock

import pytest
from django.contrib import admin, auth
from django.test import Client
from django.urls import reverse

from aktonc.admin import ProgramAdmin
from aktonc.models import Program


class _DummyForm:
    def __init__(self, instance: Program):
        self.instance = instance

    def save_m2m(self):  # pragma: no cover - trivial helper
        pass


@pytest.fixture()
def admin_client(db) -> Client:
    auth.get_user_model().objects.create_superuser(
        username="admin", email="admin@example.com", password="pass"
    )
    client = Client()
    assert client.login(username="admin", password="pass")
    return client


def test_admin_save_related_regenerates_report(program: Program):
    site = admin.sites.AdminSite()
    admin_view = ProgramAdmin(Program, site)
    mocked_generate = mock.MagicMock()
    program.generate_report = mocked_generate  # type: ignore[method-assign]
    form = _DummyForm(instance=program)

    admin_view.save_related(request=None, form=form, formsets=[], change=False)

    mocked_generate.assert_called_once_with(commit=True)


def test_preview_view_returns_json(program: Program, admin_client: Client):
    url = reverse("admin:aktonc_program_preview", args=[program.pk])
    response = admin_client.get(url)

    assert response.status_code == 200
    assert response.json()["check"]["sort"] == "CS"


def test_preview_view_forbidden_without_view_permission(program: Program, db):
    """Staff user without view_program permission should get 403."""
    auth.get_user_model().objects.create_user(
        username="staffuser", email="staff@example.com", password="pass", is_staff=True
    )
    client = Client()
    assert client.login(username="staffuser", password="pass")

    url = reverse("admin:aktonc_program_preview", args=[program.pk])
    response = client.get(url)

    assert response.status_code == 403


def test_layout_view_renders_ascii(metric_program: Program, admin_client: Client):
    url = reverse("admin:aktonc_program_layout", args=[metric_program.pk])
    response = admin_client.get(url, {"format": "ascii"})

    assert response.status_code == 200
    assert response["Content-Type"].startswith("text/plain")
    assert response.content.decode() == "      \n-L--L-\n      \n"


def test_layout_view_renders_svg(metric_program: Program, admin_client: Client):
    url = reverse("admin:aktonc_program_layout", args=[metric_program.pk])
    response = admin_client.get(url)

    assert response.status_code == 200
    assert response["Content-Type"] == "image/svg+xml"
    assert b"<svg" in response.content


def test_layout_view_needs_a_metric_program(program: Program, admin_client: Client):
    url = reverse("admin:aktonc_program_layout", args=[program.pk])

    assert admin_client.get(url).status_code == 404


def test_changelist_shows_the_sort(program: Program, admin_client: Client):
    response = admin_client.get(reverse("admin:aktonc_program_changelist"))

    assert response.status_code == 200
    assert b"Preview JSON" in response.content
