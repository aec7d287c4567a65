from __future__ import annotations

from django import forms
from django.contrib import admin
from django.core.exceptions import PermissionDenied
from django.db import models
from django.http import Http404, HttpResponse, HttpResponseBadRequest, JsonResponse
from django.shortcuts import get_object_or_404
from django.urls import path, reverse
from django.utils.html import format_html

from .exceptions import AktonError
from .models import ConcealedAtom, Program

_MONOSPACE = {"rows": 6, "style": "font-family: monospace; font-size: 13px;"}


class ConcealedAtomInline(admin.TabularInline):
    model = ConcealedAtom
    extra = 0
    fields = ("position", "name", "body")
    ordering = ("position", "id")
    formfield_overrides = {
        models.TextField: {
            "widget": forms.Textarea(attrs={**_MONOSPACE, "rows": 2}),
        },
    }


class ProgramForm(forms.ModelForm):
    source = forms.CharField(
        help_text=(
            "One term, e.g. Entry > Fork > Link/Link > Join > Exit. "
            "Put reusable blocks in the concealed atoms below and refer to them by name."
        ),
        widget=forms.Textarea(attrs=_MONOSPACE),
    )

    class Meta:
        model = Program
        fields = ["name", "slug", "description", "source"]


@admin.register(Program)
class ProgramAdmin(admin.ModelAdmin):
    form = ProgramForm
    list_display = ("name", "slug", "status", "sort", "updated_at", "preview_link")
    search_fields = ("name", "slug", "source")
    list_filter = ("status",)
    prepopulated_fields = {"slug": ("name",)}
    inlines = (ConcealedAtomInline,)
    readonly_fields = ("status", "preview_link", "layout_link")

    fieldsets = (
        (None, {"fields": (("name", "slug"), "description", "source")}),
        (
            "Report",
            {
                "fields": ("status", "preview_link", "layout_link"),
                "description": "Regenerated every time the program or its concealed atoms change",
            },
        ),
    )

    def save_related(self, request, form, formsets, change):
        super().save_related(request, form, formsets, change)
        form.instance.generate_report(commit=True)

    def get_urls(self):
        urls = super().get_urls()
        custom_urls = [
            path(
                "<int:pk>/preview/",
                self.admin_site.admin_view(self.preview_view),
                name="aktonc_program_preview",
            ),
            path(
                "<int:pk>/layout/",
                self.admin_site.admin_view(self.layout_view),
                name="aktonc_program_layout",
            ),
        ]
        return custom_urls + urls

    def sort(self, obj: Program) -> str:
        return (obj.report.get("check") or {}).get("sort") or "-"

    sort.short_description = "Sort"

    def preview_link(self, obj: Program) -> str:
        if not obj.pk:
            return "Preview available after saving"
        url = reverse("admin:aktonc_program_preview", args=[obj.pk])
        return format_html('<a href="{}" target="_blank">Preview JSON</a>', url)

    preview_link.short_description = "JSON Report"

    def layout_link(self, obj: Program) -> str:
        if not obj.pk or not obj.report.get("metric"):
            return "-"
        url = reverse("admin:aktonc_program_layout", args=[obj.pk])
        return format_html(
            '<a href="{}" target="_blank">SVG</a> / <a href="{}?format=ascii" target="_blank">ASCII</a>',
            url,
            url,
        )

    layout_link.short_description = "Layout"

    def _get_program(self, request, pk) -> Program:
        program = get_object_or_404(Program, pk=pk)
        if not self.has_view_permission(request, program):
            raise PermissionDenied
        return program

    def preview_view(self, request, pk, *args, **kwargs):
        program = self._get_program(request, pk)
        if not program.report:
            program.generate_report(commit=True)
        return JsonResponse(program.report)

    def layout_view(self, request, pk, *args, **kwargs):
        from .layout import layout, render_ascii, render_svg

        program = self._get_program(request, pk)
        if not program.report.get("metric"):
            raise Http404("Only programs built from metric atoms have a layout")
        try:
            loaded = program.load()
            grid = layout(loaded.registry.expand(loaded.term))
        except AktonError as error:
            return HttpResponseBadRequest(error.describe(), content_type="text/plain")
        if request.GET.get("format") == "ascii":
            return HttpResponse(render_ascii(grid), content_type="text/plain; charset=utf-8")
        return HttpResponse(render_svg(grid), content_type="image/svg+xml")
