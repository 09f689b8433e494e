"""Closed formulas for the arithmetic-mean ratio at k = 2, 3, 4.

Every formula has the shape::

    z = (1/2k) * (sqrt(4 r_h + D**2) + sum_{i != h} (r_i + 1))

where ``h`` is the coordinate left unfilled and ``D = 2 xi_h`` is a signed
sum of the deficits ``r_i - 1``. For k = 3 and 4 the right ``(h, D)`` depends
on how ``r_1 - 1`` compares with sums of the other deficits.
"""

from __future__ import annotations

import enum
import math
from typing import NamedTuple, Sequence

from amccr.core import DomainError, ProblemInstance
from amccr.solver import RatioResult, make_config


class Regime(str, enum.Enum):
    R1_DOMINANT = "R1_DOMINANT"  # k=3: d1 >= d2 + d3
    R1_SUBDOMINANT = "R1_SUBDOMINANT"  # k=3: d1 < d2 + d3
    R1_GE_SUM3 = "R1_GE_SUM3"  # k=4: d1 >= d2 + d3 + d4
    MIDDLE_BAND = "MIDDLE_BAND"  # k=4: d2 + d3 - d4 <= d1 < d2 + d3 + d4
    R1_LT_DIFF = "R1_LT_DIFF"  # k=4: d1 < d2 + d3 - d4


class RegimeTag(NamedTuple):
    k: int
    label: Regime


# (free index h, J+, J-) of the attaining configuration, 0-based on sorted r
_WITNESS = {
    None: (0, (), (1,)),
    Regime.R1_DOMINANT: (0, (), (1, 2)),
    Regime.R1_SUBDOMINANT: (2, (0,), (1,)),
    Regime.R1_GE_SUM3: (0, (), (1, 2, 3)),
    Regime.MIDDLE_BAND: (3, (0,), (1, 2)),
    Regime.R1_LT_DIFF: (2, (1,), (0, 3)),
}

FORMULA_IDS = {
    None: "k2",
    Regime.R1_DOMINANT: "k3-r1-dominant",
    Regime.R1_SUBDOMINANT: "k3-r1-subdominant",
    Regime.R1_GE_SUM3: "k4-r1-ge-sum",
    Regime.MIDDLE_BAND: "k4-middle-band",
    Regime.R1_LT_DIFF: "k4-r1-lt-diff",
}


def _normalize(r: Sequence[float], k: int) -> tuple[list[float], bool]:
    r = [float(x) for x in r]
    if len(r) != k:
        raise DomainError(f"expected {k} fluctuation ratios, got {len(r)}")
    for x in r:
        if not (math.isfinite(x) and x >= 1.0):
            raise DomainError(f"fluctuation ratios must be finite and >= 1, got {x}")
    s = sorted(r, reverse=True)
    return s, s != r


def _shape(rh: float, d: float, rest: Sequence[float], k: int) -> float:
    return (math.sqrt(4.0 * rh + d * d) + sum(x + 1.0 for x in rest)) / (2 * k)


def regime_of(r: Sequence[float]) -> Regime | None:
    """Regime of a sorted r-tuple (None for k = 2). Boundaries go to the >= side."""
    d = [x - 1.0 for x in r]
    if len(r) == 2:
        return None
    if len(r) == 3:
        return Regime.R1_DOMINANT if d[0] >= d[1] + d[2] else Regime.R1_SUBDOMINANT
    if len(r) == 4:
        if d[0] >= d[1] + d[2] + d[3]:
            return Regime.R1_GE_SUM3
        if d[0] >= d[1] + d[2] - d[3]:
            return Regime.MIDDLE_BAND
        return Regime.R1_LT_DIFF
    raise DomainError(f"closed formulas exist for k in (2, 3, 4), got k={len(r)}")


def evaluate_regime(regime: Regime | None, r: Sequence[float]) -> float:
    """Evaluate one regime's formula on a sorted r-tuple, ignoring its conditions.

    Used to check continuity across regime boundaries.
    """
    d = [x - 1.0 for x in r]
    if regime is None:
        r1, r2 = r
        return _shape(r1, d[1], [r2], 2)
    if regime is Regime.R1_DOMINANT:
        return _shape(r[0], d[1] + d[2], r[1:], 3)
    if regime is Regime.R1_SUBDOMINANT:
        return _shape(r[2], r[0] - r[1], r[:2], 3)
    if regime is Regime.R1_GE_SUM3:
        return _shape(r[0], d[1] + d[2] + d[3], r[1:], 4)
    if regime is Regime.MIDDLE_BAND:
        return _shape(r[3], d[0] - d[1] - d[2], r[:3], 4)
    if regime is Regime.R1_LT_DIFF:
        return _shape(r[2], d[0] - d[1] + d[3], [r[0], r[1], r[3]], 4)
    raise DomainError(f"unknown regime {regime!r}")


def _result(r_sorted, reordered, regime) -> RatioResult:
    k = len(r_sorted)
    z = evaluate_regime(regime, r_sorted)
    inst = ProblemInstance.from_ratios(r_sorted)
    h, jp, jm = _WITNESS[regime]
    witness = make_config(inst, h, jp, jm)
    tag = RegimeTag(k, regime) if regime is not None else None
    notes = ("input reordered by descending r",) if reordered else ()
    return RatioResult(z, FORMULA_IDS[regime], witness, tag, notes)


def z2(r1: float, r2: float) -> RatioResult:
    """``(1/4) * (sqrt(4 r1 + (r2 - 1)^2) + r2 + 1)`` for ``r1 >= r2 >= 1``."""
    r, moved = _normalize((r1, r2), 2)
    return _result(r, moved, None)


def z3(r1: float, r2: float, r3: float) -> RatioResult:
    r, moved = _normalize((r1, r2, r3), 3)
    return _result(r, moved, regime_of(r))


def z4(r1: float, r2: float, r3: float, r4: float) -> RatioResult:
    r, moved = _normalize((r1, r2, r3, r4), 4)
    return _result(r, moved, regime_of(r))


def closed_form(instance: ProblemInstance) -> RatioResult:
    """Dispatch on ``instance.k``; only k in (2, 3, 4) is supported."""
    fn = {2: z2, 3: z3, 4: z4}.get(instance.k)
    if fn is None:
        raise DomainError(f"no closed formula for k={instance.k}; use the solver")
    res = fn(*instance.r)
    if instance.reordered:
        res = RatioResult(res.z, res.formula_id, res.witness, res.regime, ("input reordered by descending r",))
    return res


def f3_gap(x: float, y: float, z: float) -> float:
    """``sqrt(4y + (x-z)^2) + (x - y) - sqrt(4x + (y-z)^2)``."""
    return math.sqrt(4.0 * y + (x - z) ** 2) + (x - y) - math.sqrt(4.0 * x + (y - z) ** 2)


def f4_gap(x: float, y: float, z: float, p: float) -> float:
    """``sqrt(4y + (z-x-p)^2) + (x - y) - sqrt(4x + (z-y-p)^2)``; equals ``f3_gap(x, y, z - p)``."""
    return math.sqrt(4.0 * y + (z - x - p) ** 2) + (x - y) - math.sqrt(4.0 * x + (z - y - p) ** 2)
