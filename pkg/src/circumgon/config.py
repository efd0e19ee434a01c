"""Numerical tolerances shared by every module.

All tolerances are scale-free: geometry is rescaled to unit diameter
before any comparison is made.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Config:
    eps_geom: float = 1e-9
    eps_angle: float = 1e-9
    tie_tol: float = 1e-12
    max_optional_slots: int = 20
    seed: int = 0

    def __post_init__(self):
        for name in ("eps_geom", "eps_angle", "tie_tol"):
            value = getattr(self, name)
            if not (0.0 < value < 1e-3):
                raise ValueError(f"{name} must lie in (0, 1e-3), got {value!r}")
        if self.max_optional_slots < 0:
            raise ValueError("max_optional_slots must be non-negative")

    def with_overrides(self, **kwargs) -> "Config":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs)


DEFAULT = Config()
