"""Exact maximization of G over the balanced xi-polytope, plus a grid oracle.

A maximizer has at most one coordinate strictly inside its box; every other
coordinate sits at ``+beta_i`` (set J+) or ``-beta_i`` (set J-), and the free
coordinate ``h`` absorbs the balance::

    xi_h = sum(beta[J-]) - sum(beta[J+])

The exact solver enumerates every ``(h, J+, J-)``, keeping one representative
of each sign-mirrored pair. That is exponential in ``k``, which is expected:
deciding the structure is as hard as PARTITION.

:func:`grid_oracle` is an independent check that uses none of that structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator, Optional

import numpy as np
from scipy import ndimage

from amccr import _fallback
from amccr._backend import kernels
from amccr.core import CapacityError, DomainError, ProblemInstance

if TYPE_CHECKING:
    from amccr.closedform import RegimeTag

DEFAULT_CAP = 24
# int64 bitmasks and a 2**(k-2) work buffer
HARD_CAP = 40
ORACLE_MAX_POINTS = 200_000_000

ALL_FILLED = "all-filled"
SINGLE_UNFILLED = "single-unfilled"


@dataclass(frozen=True)
class MaximizerConfig:
    """Candidate maximizer: filled sets ``j_plus``/``j_minus`` and free index ``h``."""

    h: int
    j_plus: frozenset
    j_minus: frozenset
    xi_h: float
    value: float
    feasible: bool

    @property
    def plus_mask(self) -> int:
        return sum(1 << i for i in self.j_plus)

    def xi_vector(self, instance: ProblemInstance) -> np.ndarray:
        xi = np.zeros(instance.k)
        for i in self.j_plus:
            xi[i] = instance.beta[i]
        for i in self.j_minus:
            xi[i] = -instance.beta[i]
        # clamp the rounding slack allowed by the feasibility test
        b = instance.beta[self.h]
        xi[self.h] = min(max(self.xi_h, -b), b)
        return xi

    def is_all_filled(self, instance: ProblemInstance) -> bool:
        return abs(self.xi_h) >= instance.beta[self.h] - feasibility_slack(instance)


@dataclass(frozen=True)
class RatioResult:
    """Competitive ratio with the configuration that attains it."""

    z: float
    formula_id: str
    witness: MaximizerConfig
    regime: Optional["RegimeTag"] = None
    notes: tuple = field(default=())


def feasibility_slack(instance: ProblemInstance) -> float:
    return 1e-9 * (1.0 + float(np.sum(instance.beta)))


def _tie_eps(instance: ProblemInstance) -> float:
    return 1e-12 * (1.0 + float(np.sum(instance.beta)))


def _signed_xi(instance: ProblemInstance, h: int, j_plus) -> float:
    # same operation order as the kernels: ascending index, 0.0 seed
    beta = instance.beta
    others = [i for i in range(instance.k) if i != h]
    acc = 0.0
    for i in others[:-1]:
        acc = acc - beta[i] if i in j_plus else acc + beta[i]
    last = others[-1]
    return float(acc - beta[last] if last in j_plus else acc + beta[last])


def config_value(instance: ProblemInstance, cfg: MaximizerConfig) -> float:
    """``(1/2k) * (sqrt(4 r_h + (2 xi_h)^2) + sum_{i != h} (r_i + 1))``.

    Computed whether or not the configuration is feasible.
    """
    r = instance.r
    rest = math.fsum(r[i] + 1.0 for i in range(instance.k) if i != cfg.h)
    return (math.sqrt(4.0 * r[cfg.h] + (2.0 * cfg.xi_h) ** 2) + rest) / (2 * instance.k)


def make_config(instance: ProblemInstance, h: int, j_plus, j_minus=None) -> MaximizerConfig:
    """Build a configuration, deriving ``xi_h``, its value and feasibility.

    ``j_minus`` defaults to every index outside ``j_plus`` and ``h``.
    """
    k = instance.k
    if not 0 <= h < k:
        raise DomainError(f"free index {h} out of range for k={k}")
    j_plus = frozenset(int(i) for i in j_plus)
    rest = frozenset(range(k)) - {h}
    if j_minus is None:
        j_minus = rest - j_plus
    j_minus = frozenset(int(i) for i in j_minus)
    if j_plus & j_minus or (j_plus | j_minus) != rest:
        raise DomainError("J+ and J- must partition the indices other than h")
    xi = _signed_xi(instance, h, j_plus)
    feasible = abs(xi) <= instance.beta[h] + feasibility_slack(instance)
    proto = MaximizerConfig(h, j_plus, j_minus, xi, 0.0, feasible)
    return MaximizerConfig(h, j_plus, j_minus, xi, config_value(instance, proto), feasible)


def _check_cap(k: int, cap: int):
    if k > cap:
        raise CapacityError(f"k={k} exceeds the enumeration cap {cap}")
    if k > HARD_CAP:
        raise CapacityError(f"k={k} exceeds the hard limit {HARD_CAP}")


def _from_compact(instance: ProblemInstance, h: int, compact: int) -> frozenset:
    others = [i for i in range(instance.k) if i != h]
    return frozenset(others[p] for p in range(len(others) - 1) if compact >> p & 1)


def enumerate_configs(instance: ProblemInstance, cap: int = DEFAULT_CAP) -> Iterator[MaximizerConfig]:
    """Yield every candidate configuration, one per sign-mirrored pair.

    Order: ascending ``h``, then ascending J+ bitmask. The representative of
    each mirrored pair is the one whose J+ mask is smaller, i.e. the largest
    index other than ``h`` sits in J-. ``k * 2**(k-2)`` configurations.
    """
    k = instance.k
    _check_cap(k, cap)
    for h in range(k):
        for compact in range(1 << (k - 2)):
            yield make_config(instance, h, _from_compact(instance, h, compact))


def solve_amccr(instance: ProblemInstance, cap: int = DEFAULT_CAP) -> RatioResult:
    """Maximize G over the balanced polytope by exhaustive structure search.

    Ties (values within a relative 1e-12) go to the smallest ``h``, then the
    smallest J+ bitmask.
    """
    _check_cap(instance.k, cap)
    masks, _, found = kernels.best_per_h(
        instance.beta, feasibility_slack(instance), _tie_eps(instance)
    )
    candidates = [
        make_config(instance, h, _from_compact(instance, h, int(masks[h])))
        for h in range(instance.k)
        if found[h]
    ]
    if not candidates:
        raise RuntimeError("no feasible configuration; instance data is corrupt")
    top = max(c.value for c in candidates)
    best = next(c for c in candidates if c.value >= top - 1e-12 * top)
    formula = ALL_FILLED if best.is_all_filled(instance) else SINGLE_UNFILLED
    notes = ("input reordered by descending r",) if instance.reordered else ()
    return RatioResult(best.value, formula, best, None, notes)


def _refine(r, beta, x0, step0, slack, width=4, shrink=3.0, max_rounds=60):
    n = x0.shape[0]
    bound = beta[:n]
    offs = np.arange(-width, width + 1, dtype=float)
    mesh = np.stack(np.meshgrid(*([offs] * n), indexing="ij"), axis=-1).reshape(-1, n)
    x = x0.copy()
    step = step0.copy()
    best = _fallback.reduced_values(r, beta, x[None, :], slack)[0]
    floor = 1e-15 * (1.0 + bound)
    for _ in range(max_rounds):
        if np.all(step <= floor):
            break
        pts = np.clip(x + mesh * step, -bound, bound)
        vals = _fallback.reduced_values(r, beta, pts, slack)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, x = vals[i], pts[i]
        step = step / shrink
    return best


def grid_oracle(
    instance: ProblemInstance, resolution: int = 2001, refine: bool = True, n_starts: int = 32
) -> float:
    """Maximize G over the balanced polytope by grid search.

    The first ``k-2`` coordinates are gridded at ``resolution`` points per
    axis (box endpoints included). For each grid point the last two
    coordinates must sum to minus the rest; G is convex along that segment, so
    its maximum is at one of the two segment endpoints. The best grid-local
    maxima are then polished by a shrinking local search. Cost grows as
    ``resolution**(k-2)``.
    """
    k = instance.k
    if not 2 <= k <= 5:
        raise CapacityError(f"grid oracle supports 2 <= k <= 5, got k={k}")
    if resolution < 2:
        raise DomainError("resolution must be at least 2")
    n_axes = k - 2
    if resolution**n_axes > ORACLE_MAX_POINTS:
        raise CapacityError(f"{resolution}**{n_axes} grid points exceed {ORACLE_MAX_POINTS}")
    r, beta = instance.r, instance.beta
    slack = 1e-12 * (1.0 + float(np.sum(beta)))
    coords = np.array([np.linspace(-beta[j], beta[j], resolution) for j in range(n_axes)])
    vals = kernels.grid_values(r, beta, coords.reshape(n_axes, resolution), slack)
    best = float(np.max(vals))
    if not refine or n_axes == 0 or not np.isfinite(best):
        return best

    grid = vals.reshape((resolution,) * n_axes)
    peaks = (ndimage.maximum_filter(grid, size=3, mode="constant", cval=-np.inf) == grid) & np.isfinite(grid)
    flat = np.flatnonzero(peaks.ravel())
    order = np.argsort(-vals[flat], kind="stable")[:n_starts]
    step0 = 2.0 * beta[:n_axes] / (resolution - 1)
    for idx in flat[order]:
        digits = np.unravel_index(idx, grid.shape)
        x0 = coords[np.arange(n_axes), digits]
        best = max(best, float(_refine(r, beta, x0, step0, slack)))
    return best
