"""Color primitives and the gradient stops used by the metric encoders.

Red is reserved for high-impact signals (alert strips, over-temperature
outlines, power overload segments), so none of the metric gradients may
produce a color inside the configured red region. The stop values below
keep both gradients well clear of it; tests sweep the full input range to
enforce this.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Color:
    r: float
    g: float
    b: float

    def validate(self) -> None:
        for name, c in (("r", self.r), ("g", self.g), ("b", self.b)):
            if not 0.0 <= c <= 1.0:
                raise ValueError(f"color component {name} out of [0,1]: {c}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.r, self.g, self.b)


def lerp_color(a: Color, b: Color, t: float) -> Color:
    # a*(1-t) + b*t is exact at both endpoints (t=0 gives a, t=1 gives b
    # bit-for-bit), unlike the a + (b-a)*t form
    return Color(
        a.r * (1.0 - t) + b.r * t,
        a.g * (1.0 - t) + b.g * t,
        a.b * (1.0 - t) + b.b * t,
    )


BLACK = Color(0.0, 0.0, 0.0)
GRAY = Color(0.5, 0.5, 0.5)
RED = Color(1.0, 0.0, 0.0)

# CPU load gradient: dark blue (low) to orange (high)
NODE_LOAD_STOPS = (Color(0.05, 0.10, 0.35), Color(1.0, 0.55, 0.10))

# GPU metric gradient: dark purple (low) to white (high)
GPU_METRIC_STOPS = (Color(0.20, 0.05, 0.30), Color(1.0, 1.0, 1.0))


@dataclass(frozen=True)
class RedRegion:
    """The corner of RGB space treated as 'red' for reservation checks."""

    min_r: float = 0.85
    max_g: float = 0.30
    max_b: float = 0.30


DEFAULT_RED_REGION = RedRegion()


def in_red_region(color: Color, region: RedRegion = DEFAULT_RED_REGION) -> bool:
    return color.r >= region.min_r and color.g <= region.max_g and color.b <= region.max_b
