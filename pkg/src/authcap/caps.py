"""Enumeration caps.

Everything in this package is exact enumeration over finite tables; these caps
are the guard rails that make operations refuse (rather than approximate or
thrash) when a request would materialize too large a table.  The environment
variable ``AUTHCAP_MAX_TABLE`` overrides both caps with a single value.
"""

from __future__ import annotations

import os

from .errors import SizeCapError

# n-fold channel extensions: |X|^n * |Y|^n entries.
DEFAULT_PRODUCT_CAP = 1 << 20
# code evaluation tables (encoder/decoder products, attack tables).
DEFAULT_CODE_CAP = 1 << 24

_ENV_VAR = "AUTHCAP_MAX_TABLE"


def product_cap() -> int:
    return _from_env(DEFAULT_PRODUCT_CAP)


def code_cap() -> int:
    return _from_env(DEFAULT_CODE_CAP)


def _from_env(default: int) -> int:
    raw = os.environ.get(_ENV_VAR)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{_ENV_VAR} must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError(f"{_ENV_VAR} must be positive, got {value}")
    return value


def check_entries(needed: int, cap: int, what: str) -> None:
    """Raise SizeCapError when an exact table of `needed` entries exceeds `cap`."""
    if needed > cap:
        raise SizeCapError(needed, cap, what)
