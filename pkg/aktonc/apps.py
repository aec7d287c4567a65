from django.apps import AppConfig


class AktoncConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "aktonc"
    verbose_name = "Akton programs"

    def ready(self) -> None:
        from .tables import load_tables

        load_tables()
