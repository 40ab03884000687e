"""Scripted signal sources for scenarios: waveforms and step schedules."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Waveform:
    """Fully parameterized waveform: constant or sine.

    sine: offset + amplitude*sin(2*pi*frequency*t + phase)
    constant: offset
    """

    kind: str = "constant"
    amplitude: float = 0.0
    frequency: float = 0.0
    phase: float = 0.0
    offset: float = 0.0

    def validate(self) -> None:
        if self.kind not in ("constant", "sine"):
            raise ValueError(f"unknown waveform kind {self.kind!r}")
        for name in ("amplitude", "frequency", "phase", "offset"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"waveform {name} must be finite")

    def value(self, t: float) -> float:
        if self.kind == "sine":
            return self.offset + self.amplitude * math.sin(
                2.0 * math.pi * self.frequency * t + self.phase)
        return self.offset

    def rate(self, t: float) -> float:
        if self.kind == "sine":
            w = 2.0 * math.pi * self.frequency
            return self.amplitude * w * math.cos(w * t + self.phase)
        return 0.0

    def accel(self, t: float) -> float:
        if self.kind == "sine":
            w = 2.0 * math.pi * self.frequency
            return -self.amplitude * w * w * math.sin(w * t + self.phase)
        return 0.0


@dataclass(frozen=True)
class StepSchedule:
    """Piecewise-constant schedule; value(t) holds the last step at or
    before t (the first value before the first step time)."""

    times: tuple[float, ...]
    values: tuple[float, ...]

    def validate(self) -> None:
        if not self.times or len(self.times) != len(self.values):
            raise ValueError("schedule needs matching, non-empty times/values")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("schedule times must be strictly increasing")
        if not all(map(math.isfinite, self.times + self.values)):
            raise ValueError("schedule entries must be finite")

    def value(self, t: float) -> float:
        i = bisect.bisect_right(self.times, t) - 1
        return self.values[max(i, 0)]
