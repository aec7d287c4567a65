from __future__ import annotations

from django.urls import path

from .views import ProgramReportView

urlpatterns = [
    path("<slug:slug>/", ProgramReportView.as_view(), name="program-report"),
]
