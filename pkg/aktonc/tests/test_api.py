from django.test import override_settings
from rest_framework.test import APIClient

from aktonc.models import Program


def test_api_returns_report(program: Program):
    client = APIClient()
    response = client.get("/api/programs/diamond/")

    assert response.status_code == 200
    payload = response.json()
    assert payload["program"]["status"] == "checked"
    assert payload["check"]["sort"] == "CS"
    assert len(payload["network"]["edges"]) == 6


@override_settings(AKTONC_API_ENABLED=False)
def test_api_disabled_returns_404(program: Program):
    client = APIClient()
    response = client.get("/api/programs/diamond/")

    assert response.status_code == 404


def test_api_filters_invalid_programs(db):
    Program.objects.create(name="Dangling", slug="dangling", source="Entry > Join")

    client = APIClient()
    response = client.get("/api/programs/dangling/")

    assert response.status_code == 404


@override_settings(
    AKTONC_API_ANONYMOUS=False,
    REST_FRAMEWORK={
        "DEFAULT_RENDERER_CLASSES": ["rest_framework.renderers.JSONRenderer"],
        "DEFAULT_PERMISSION_CLASSES": ["rest_framework.permissions.IsAuthenticated"],
    },
)
def test_api_requires_authentication_when_not_anonymous(program: Program):
    client = APIClient()
    response = client.get("/api/programs/diamond/")

    assert response.status_code == 403
