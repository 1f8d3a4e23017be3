"""Desk-scale resource limits.

Every exhaustive routine checks its workload against these bounds and raises
:class:`~magball.errors.ResourceLimitError` instead of silently degrading to a
partial answer.  Defaults can be overridden by the ``MAGBALL_LIMITS``
environment variable (a JSON object mapping field names to integers) or
programmatically via :func:`set_limits`.
"""

from __future__ import annotations

import contextlib
import json
import os
from dataclasses import dataclass, fields, replace

from .errors import ResourceLimitError

ENV_VAR = "MAGBALL_LIMITS"


@dataclass(frozen=True)
class Limits:
    group_order: int = 1 << 24
    field_size: int = 1 << 20
    enumeration: int = 10**6
    pairs: int = 10**7
    cosets: int = 10**7
    syndrome_table: int = 10**6


def _from_env() -> Limits:
    raw = os.environ.get(ENV_VAR)
    if not raw:
        return Limits()
    try:
        overrides = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ResourceLimitError(f"cannot parse {ENV_VAR}: {exc}") from exc
    known = {f.name for f in fields(Limits)}
    bad = set(overrides) - known
    if bad:
        raise ResourceLimitError(f"unknown {ENV_VAR} keys: {sorted(bad)}")
    return replace(Limits(), **{k: int(v) for k, v in overrides.items()})


_current: Limits | None = None


def get_limits() -> Limits:
    global _current
    if _current is None:
        _current = _from_env()
    return _current


def set_limits(limits: Limits) -> None:
    global _current
    _current = limits


@contextlib.contextmanager
def limits_overridden(**kwargs: int):
    """Temporarily replace selected limits (used by tests and the CLI)."""
    global _current
    previous = get_limits()
    _current = replace(previous, **kwargs)
    try:
        yield _current
    finally:
        _current = previous


def check(kind: str, value: int) -> None:
    """Raise unless ``value`` fits under the limit named ``kind``."""
    bound = getattr(get_limits(), kind)
    if value > bound:
        raise ResourceLimitError(f"{kind} workload {value} exceeds limit {bound}")
