"""Run configuration shared by the CLI and the acceptance suite."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields

from .errors import DomainError

__all__ = ["RunConfig"]


@dataclass(frozen=True)
class RunConfig:
    """Tolerances, sampling density, output options, RNG seed.

    Defaults match the documented contract: all tolerances 1e-10 and
    512 points per arc.
    """

    quadrature_tol: float = 1e-10
    root_tol: float = 1e-10
    ode_tol: float = 1e-10
    points_per_arc: int = 512
    format: str = "json"
    output: str | None = None  # None means standard output
    seed: int = 0
    max_arcs: int = 64

    def __post_init__(self):
        if self.format not in ("json", "csv"):
            raise DomainError(f"format must be 'json' or 'csv', got {self.format!r}")
        if self.points_per_arc < 64:
            raise DomainError("points_per_arc must be at least 64")
        for name in ("quadrature_tol", "root_tol", "ode_tol"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be positive")

    @classmethod
    def from_file(cls, path: str, **overrides) -> "RunConfig":
        """Load a JSON config file holding any subset of the field names."""
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        data.update(overrides)
        return cls(**data)
