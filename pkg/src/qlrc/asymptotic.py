"""Leading-order rate bounds for quantum codes with locality ``r`` as ``n -> infinity``.

All three bounds are affine in the relative distance; they are evaluated with
``Fraction`` so intercepts and crossovers are exact, then clamped at zero.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

CSV_HEADER = ("delta", "r_dim", "r_dist", "r_cm")


def _check(r: int, q: int):
    if r < 1 or q < 2:
        raise ValueError("need r >= 1 and q >= 2")


def coefficients(r: int, q: int) -> dict[str, tuple[Fraction, Fraction]]:
    """``(intercept, slope)`` of each unclamped bound."""
    _check(r, q)
    r_, q_ = Fraction(r), Fraction(q)
    dist0 = r_ / (r_ + 2)
    dist_slope = -2 * r_ / (r_ + 2)
    return {
        "r_dim": ((r_ / (r_ + 1)) ** 2, -r_ * (2 * r_ + 1) / (r_ + 1) ** 2),
        "r_dist": (dist0, dist_slope),
        "r_cm": (dist0, dist_slope * q_ / (q_ - 1)),
    }


@dataclass(frozen=True)
class AsymptoticPoint:
    r: int
    q: int
    delta: Fraction
    r_dim: Fraction
    r_dist: Fraction
    r_cm: Fraction


def asym_bounds(r: int, q: int, delta) -> AsymptoticPoint:
    delta = Fraction(delta)
    if not 0 <= delta <= 1:
        raise ValueError("relative distance must lie in [0, 1]")
    vals = {k: max(Fraction(0), a + b * delta) for k, (a, b) in coefficients(r, q).items()}
    return AsymptoticPoint(r, q, delta, **vals)


def crossover_delta(r: int, q: int) -> Fraction:
    """Relative distance above which the CM form is the tighter of the dimension and CM bounds."""
    _check(r, q)
    den = 2 * q * (r + 1) ** 2 - (q - 1) * (r + 2) * (2 * r + 1)
    if den <= 0:
        raise ValueError(f"crossover denominator {den} is not positive")
    return Fraction(q - 1, den)


def delta_grid(step, stop=Fraction(1, 2), start=Fraction(0)) -> list[Fraction]:
    step, stop, start = Fraction(step), Fraction(stop), Fraction(start)
    if step <= 0:
        raise ValueError("grid step must be positive")
    count = int((stop - start) / step)
    return [start + i * step for i in range(count + 1)]


def emit_curves(r: int, q: int, grid) -> list[AsymptoticPoint]:
    return [asym_bounds(r, q, d) for d in grid]


def curves_csv(points) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in points:
        w.writerow([f"{float(x):.12f}" for x in (p.delta, p.r_dim, p.r_dist, p.r_cm)])
    return buf.getvalue()
