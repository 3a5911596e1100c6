"""Enumeration budgets; ``CGL_BUDGET`` in the environment overrides the defaults."""

from __future__ import annotations

import os

DEFAULT_BUDGET = 10**8


def budget(default: int = DEFAULT_BUDGET) -> int:
    raw = os.environ.get("CGL_BUDGET")
    if raw is None or not raw.strip():
        return default
    value = int(raw)
    if value <= 0:
        raise ValueError("CGL_BUDGET must be a positive integer")
    return value
