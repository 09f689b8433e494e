"""Domain types and the price <-> transformed-coordinate machinery.

A problem instance is a list of ``k`` price intervals ``[m_i, M_i]``. Every
quantity the library computes depends on the fluctuation ratios
``r_i = M_i / m_i`` only, but the game simulator needs actual prices, so the
intervals are kept.

The change of variables ``xi_i = alpha_i * phi(x_i / sqrt(m_i M_i))`` maps the
price box onto the symmetric box ``[-beta_i, beta_i]`` and turns the balance
condition ``sum(x_i/m_i - M_i/x_i) = 0`` into the hyperplane ``sum(xi_i) = 0``.
On that hyperplane the scalarized ratio becomes
``G(xi) = mean(sqrt(alpha_i**2 + xi_i**2))``.

All indices in this package refer to the *normalized* instance, sorted by
non-increasing fluctuation ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

#: absolute slack on the zero-sum constraint
SUM_TOL = 1e-9
#: relative slack on box bounds
BOX_RTOL = 1e-12


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class CapacityError(RuntimeError):
    """A request exceeds a configured size limit."""


@dataclass(frozen=True)
class PriceInterval:
    """Price range ``[m, M]`` of one objective."""

    m: float
    M: float

    def __post_init__(self):
        m, M = float(self.m), float(self.M)
        if not (math.isfinite(m) and math.isfinite(M)):
            raise DomainError(f"interval bounds must be finite, got [{m}, {M}]")
        if not 0.0 < m <= M:
            raise DomainError(f"need 0 < m <= M, got [{m}, {M}]")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "M", M)

    @property
    def r(self) -> float:
        return self.M / self.m

    @property
    def alpha(self) -> float:
        return math.sqrt(self.r)

    @property
    def beta(self) -> float:
        return (self.r - 1.0) / 2.0


@dataclass(frozen=True)
class ProblemInstance:
    """``k >= 2`` intervals sorted so that ``r_1 >= ... >= r_k``.

    ``permutation[j]`` is the position in the caller's input of the interval
    now at sorted position ``j``. ``has_prices`` is False when the instance was
    built from ratios alone (then ``m_i = 1`` and ``M_i = r_i``).
    """

    intervals: tuple[PriceInterval, ...]
    permutation: tuple[int, ...]
    has_prices: bool = True

    def __post_init__(self):
        if len(self.intervals) < 2:
            raise DomainError(f"need k >= 2 objectives, got {len(self.intervals)}")
        if sorted(self.permutation) != list(range(len(self.intervals))):
            raise DomainError("permutation must be a permutation of range(k)")
        rs = [iv.r for iv in self.intervals]
        if any(a < b for a, b in zip(rs, rs[1:])):
            raise DomainError("intervals must be sorted by non-increasing r; use a constructor")

    @classmethod
    def from_intervals(cls, intervals: Sequence[PriceInterval], has_prices=True) -> ProblemInstance:
        intervals = list(intervals)
        order = sorted(range(len(intervals)), key=lambda i: -intervals[i].r)
        return cls(tuple(intervals[i] for i in order), tuple(order), has_prices)

    @classmethod
    def from_bounds(cls, m: Sequence[float], M: Sequence[float]) -> ProblemInstance:
        if len(m) != len(M):
            raise DomainError(f"got {len(m)} lower bounds but {len(M)} upper bounds")
        return cls.from_intervals([PriceInterval(lo, hi) for lo, hi in zip(m, M)])

    @classmethod
    def from_ratios(cls, r: Sequence[float]) -> ProblemInstance:
        for x in r:
            if not (math.isfinite(x) and x >= 1.0):
                raise DomainError(f"fluctuation ratios must be finite and >= 1, got {x}")
        return cls.from_intervals([PriceInterval(1.0, x) for x in r], has_prices=False)

    @property
    def k(self) -> int:
        return len(self.intervals)

    @property
    def reordered(self) -> bool:
        """True when normalization changed the caller's order."""
        return self.permutation != tuple(range(self.k))

    @cached_property
    def m(self) -> np.ndarray:
        return np.array([iv.m for iv in self.intervals])

    @cached_property
    def M(self) -> np.ndarray:
        return np.array([iv.M for iv in self.intervals])

    @cached_property
    def r(self) -> np.ndarray:
        return np.array([iv.r for iv in self.intervals])

    @cached_property
    def alpha(self) -> np.ndarray:
        return np.sqrt(self.r)

    @cached_property
    def beta(self) -> np.ndarray:
        return (self.r - 1.0) / 2.0

    @cached_property
    def center(self) -> np.ndarray:
        """Geometric midpoints ``sqrt(m_i M_i)``; they map to ``xi = 0``."""
        return np.sqrt(self.m * self.M)

    def to_user_order(self, values: Sequence) -> list:
        out = [None] * self.k
        for j, i in enumerate(self.permutation):
            out[i] = values[j]
        return out


def phi(x):
    """``(x - 1/x) / 2`` for ``x > 0``."""
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"phi is defined for x > 0 only, got {x!r}")
    out = (arr - 1.0 / arr) / 2.0
    return float(out) if out.ndim == 0 else out


def _as_vector(instance: ProblemInstance, v, what: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (instance.k,):
        raise DomainError(f"{what} must have {instance.k} components, got shape {arr.shape}")
    return arr


def _price_in_box(instance: ProblemInstance, x: np.ndarray) -> bool:
    lo = instance.m * (1.0 - BOX_RTOL)
    hi = instance.M * (1.0 + BOX_RTOL)
    return bool(np.all((x >= lo) & (x <= hi)))


def _xi_in_box(instance: ProblemInstance, q: np.ndarray, tol: float = 0.0) -> bool:
    b = instance.beta
    return bool(np.all(np.abs(q) <= b * (1.0 + BOX_RTOL) + tol))


def to_xi(instance: ProblemInstance, p) -> np.ndarray:
    """Map prices in the box to transformed coordinates in ``[-beta, beta]``."""
    x = _as_vector(instance, p, "price point")
    if not _price_in_box(instance, x):
        raise DomainError(f"price point {x.tolist()} is outside the box")
    x = np.clip(x, instance.m, instance.M)
    return instance.alpha * phi(x / instance.center)


def from_xi(instance: ProblemInstance, q) -> np.ndarray:
    """Inverse of :func:`to_xi`."""
    xi = _as_vector(instance, q, "xi point")
    if not _xi_in_box(instance, xi, tol=1e-15):
        raise DomainError(f"xi point {xi.tolist()} is outside [-beta, beta]")
    t = xi / instance.alpha
    s = np.sqrt(t * t + 1.0)
    # t + sqrt(t^2+1) cancels for t << 0; use its reciprocal form there
    u = np.where(t >= 0, t + s, 1.0 / (s - t))
    return np.clip(instance.center * u, instance.m, instance.M)


def objective_H(instance: ProblemInstance, p) -> float:
    """``(1/2k) * sum(x_i/m_i + M_i/x_i)`` on the price box."""
    x = _as_vector(instance, p, "price point")
    if not _price_in_box(instance, x):
        raise DomainError(f"price point {x.tolist()} is outside the box")
    return float(np.sum(x / instance.m + instance.M / x) / (2 * instance.k))


def objective_G(instance: ProblemInstance, q) -> float:
    """``(1/k) * sum(sqrt(alpha_i^2 + xi_i^2))`` on the xi-box."""
    xi = _as_vector(instance, q, "xi point")
    if not _xi_in_box(instance, xi, tol=1e-15):
        raise DomainError(f"xi point {xi.tolist()} is outside [-beta, beta]")
    return float(np.sum(np.sqrt(instance.r + xi * xi)) / instance.k)


def in_S(instance: ProblemInstance, p, tol: float = 2 * SUM_TOL) -> bool:
    """Price point lies in the box and balances ``mean(x/m) = mean(M/x)``.

    The balance residual is twice the xi-sum, hence the default tolerance.
    """
    x = np.asarray(p, dtype=float)
    if x.shape != (instance.k,) or np.any(~(x > 0)) or not _price_in_box(instance, x):
        return False
    return bool(abs(np.sum(x / instance.m - instance.M / x)) <= tol)


def in_T(instance: ProblemInstance, q, tol: float = SUM_TOL) -> bool:
    """xi point lies in ``[-beta, beta]`` (slack ``tol``) and sums to zero."""
    xi = np.asarray(q, dtype=float)
    if xi.shape != (instance.k,) or not np.all(np.isfinite(xi)):
        return False
    if np.any(np.abs(xi) > instance.beta + tol):
        return False
    return bool(abs(np.sum(xi)) <= tol)
