from __future__ import annotations

from typing import Any

from django.conf import settings

DEFAULTS: dict[str, Any] = {
    "AKTONC_SPATIAL_IDENTITY": True,
    "AKTONC_SIM_TIMING": "settle",
    "AKTONC_SIM_MAX_STEPS": 256,
    "AKTONC_API_ENABLED": False,
    "AKTONC_API_ANONYMOUS": False,
}


def get_setting(name: str) -> Any:
    """Project setting ``name``, or its default when Django is not configured."""
    if not settings.configured:
        return DEFAULTS[name]
    return getattr(settings, name, DEFAULTS[name])
