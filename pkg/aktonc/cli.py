"""``aktonc`` console script: the management command without a Django project."""

from __future__ import annotations

import logging
import sys

from django.conf import settings


def _configure() -> None:
    if settings.configured:
        return
    settings.configure(
        INSTALLED_APPS=["aktonc"],
        TEMPLATES=[
            {
                "BACKEND": "django.template.backends.django.DjangoTemplates",
                "APP_DIRS": True,
            }
        ],
        USE_I18N=True,
    )


def main(argv: list[str] | None = None) -> None:
    import django
    from django.core.management import execute_from_command_line

    _configure()
    django.setup()
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
    args = sys.argv[1:] if argv is None else argv
    execute_from_command_line(["aktonc", "aktonc", *args])


if __name__ == "__main__":  # pragma: no cover
    main()
