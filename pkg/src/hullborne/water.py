"""Still or sinusoidally oscillating water level."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class WaterSurface:
    """Horizontal water plane whose height may oscillate in time.

    The level is uniform over (x, y): ``base_level + amplitude*sin(2*pi*f*t + phase)``.
    """

    base_level: float = 0.0
    amplitude: float = 0.3
    frequency: float = 0.5
    phase: float = 0.0
    enabled: bool = False

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError(f"amplitude must be >= 0, got {self.amplitude}")
        if self.frequency < 0:
            raise ValueError(f"frequency must be >= 0, got {self.frequency}")

    @classmethod
    def still(cls, level: float = 0.0) -> "WaterSurface":
        return cls(base_level=level, enabled=False)

    @classmethod
    def waves(cls, level: float = 0.0, amplitude: float = 0.3, frequency: float = 0.5,
              phase: float = 0.0) -> "WaterSurface":
        return cls(level, amplitude, frequency, phase, True)

    def level_at(self, t: float) -> float:
        return level_at(self, t)


def level_at(surface: WaterSurface, t: float) -> float:
    if not surface.enabled:
        return surface.base_level
    return surface.base_level + surface.amplitude * math.sin(
        2.0 * math.pi * surface.frequency * t + surface.phase
    )
