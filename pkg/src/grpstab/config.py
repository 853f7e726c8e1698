"""Run-wide size caps, scoped with a context variable."""

from __future__ import annotations

import contextlib
from contextvars import ContextVar
from dataclasses import dataclass, replace

from .errors import InputError


@dataclass(frozen=True)
class RunConfig:
    homology_cap: int = 24  # largest group order for degree-2 homology
    lattice_cap: int = 32   # largest group order for quotient-stabilization searches
    format: str = "text"
    corpus: str | None = None
    seed: int | None = None  # sweep ordering only

    def __post_init__(self):
        if self.homology_cap < 1 or self.lattice_cap < 1:
            raise InputError("caps must be positive")
        if self.format not in ("text", "json"):
            raise InputError(f"format must be text or json, got {self.format!r}")


_current: ContextVar[RunConfig] = ContextVar("grpstab_config", default=RunConfig())


def current() -> RunConfig:
    return _current.get()


@contextlib.contextmanager
def using(config: RunConfig | None = None, **overrides):
    """Temporarily replace the active config (``with using(homology_cap=27): ...``)."""
    cfg = config or current()
    if overrides:
        cfg = replace(cfg, **overrides)
    token = _current.set(cfg)
    try:
        yield cfg
    finally:
        _current.reset(token)
