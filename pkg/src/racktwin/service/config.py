"""Service runtime configuration and bind-address resolution."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 8787
BIND_ENV = "RACKTWIN_BIND"


class ServiceConfigError(ValueError):
    """Unusable service configuration (bad bind address, missing file)."""


@dataclass(frozen=True)
class ServiceConfig:
    host: str = DEFAULT_HOST
    port: int = DEFAULT_PORT
    scene_path: Optional[Path] = None
    rules_path: Optional[Path] = None
    tick_limit: Optional[int] = None
    interval_s: Optional[float] = None


def resolve_bind(
    host: str = DEFAULT_HOST,
    port: int = DEFAULT_PORT,
    env: Optional[Mapping[str, str]] = None,
) -> tuple[str, int]:
    """Apply the RACKTWIN_BIND=HOST:PORT override if present."""
    value = (os.environ if env is None else env).get(BIND_ENV, "").strip()
    if not value:
        return host, port
    if ":" not in value:
        raise ServiceConfigError(f"{BIND_ENV} must look like HOST:PORT, got {value!r}")
    host_part, port_part = value.rsplit(":", 1)
    try:
        port_num = int(port_part)
    except ValueError as exc:
        raise ServiceConfigError(f"{BIND_ENV} port is not a number: {port_part!r}") from exc
    if not 0 < port_num < 65536:
        raise ServiceConfigError(f"{BIND_ENV} port out of range: {port_num}")
    return (host_part or host), port_num
