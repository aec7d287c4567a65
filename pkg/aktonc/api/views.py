from __future__ import annotations

from django.http import Http404
from django.shortcuts import get_object_or_404
from drf_spectacular.utils import extend_schema
from rest_framework.response import Response
from rest_framework.settings import api_settings
from rest_framework.views import APIView

from ..conf import get_setting
from ..models import Program
from .serializers import ProgramReportSerializer


class ProgramReportView(APIView):
    # Authentication and permission classes come from the host project's
    # REST_FRAMEWORK settings unless AKTONC_API_ANONYMOUS is set.

    def get_authenticators(self):
        if get_setting("AKTONC_API_ANONYMOUS"):
            return []
        return [auth() for auth in api_settings.DEFAULT_AUTHENTICATION_CLASSES]

    def get_permissions(self):
        if get_setting("AKTONC_API_ANONYMOUS"):
            return []
        return [permission() for permission in api_settings.DEFAULT_PERMISSION_CLASSES]

    @extend_schema(responses=ProgramReportSerializer)
    def get(self, request, slug: str, *args, **kwargs):
        if not get_setting("AKTONC_API_ENABLED"):
            raise Http404("Akton program API is disabled")

        program = get_object_or_404(
            Program,
            slug=slug,
            status=Program.ProgramStatus.CHECKED,
        )
        serializer = ProgramReportSerializer(instance=program.report)
        return Response(serializer.data)
