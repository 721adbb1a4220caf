"""Exact accumulation and the least-squares backend for exponential fits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EmptyHistogramError, FitError


@dataclass
class ExactAccumulator:
    sum: Fraction = field(default_factory=Fraction)
    count: int = 0

    def add(self, value) -> None:
        self.sum += Fraction(value)
        self.count += 1

    def extend(self, values) -> None:
        for v in values:
            self.add(v)

    def merge(self, other: "ExactAccumulator") -> "ExactAccumulator":
        return ExactAccumulator(self.sum + other.sum, self.count + other.count)

    def mean(self) -> Fraction:
        return mean(self)


def mean(acc: ExactAccumulator) -> Fraction:
    if acc.count == 0:
        raise EmptyHistogramError("mean of an empty accumulator")
    return acc.sum / acc.count


def least_squares(points) -> tuple[float, float, float]:
    """Ordinary least squares line through ``points``.

    Returns ``(slope, intercept, r2)``. When every y is equal the fit is exact
    and r2 is taken to be 1.
    """
    pts = [(float(x), float(y)) for x, y in points]
    if len({x for x, _ in pts}) < 2:
        raise FitError("least squares needs at least two distinct x values")
    k = len(pts)
    mx = math.fsum(x for x, _ in pts) / k
    my = math.fsum(y for _, y in pts) / k
    sxx = math.fsum((x - mx) ** 2 for x, _ in pts)
    sxy = math.fsum((x - mx) * (y - my) for x, y in pts)
    syy = math.fsum((y - my) ** 2 for _, y in pts)
    slope = sxy / sxx
    intercept = my - slope * mx
    # y constant up to rounding: exact fit by convention
    if syy <= 1e-24 * max(1.0, math.fsum(y * y for _, y in pts)):
        return slope, intercept, 1.0
    ss_res = math.fsum((y - (slope * x + intercept)) ** 2 for x, y in pts)
    r2 = min(1.0, max(0.0, 1.0 - ss_res / syy))
    return slope, intercept, r2


def round_half_away(x: float) -> int:
    """Round to the nearest integer, ties away from zero (tolerant to float noise)."""
    r = math.floor(abs(x) + 0.5 + 1e-9)
    return int(r if x >= 0 else -r)
