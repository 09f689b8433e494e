"""PARTITION reduces to finding the maximizer structure.

Setting ``beta_i = a_i`` (so ``r_i = 2 a_i + 1``), a PARTITION instance is
positive exactly when the maximizer of G has every coordinate filled. The
decision procedure :func:`alg_p` reads that off the exact solver's witness;
:func:`dp_oracle` and :func:`exhaustive` decide the same question directly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from amccr.core import CapacityError, DomainError, PriceInterval, ProblemInstance
from amccr.solver import DEFAULT_CAP, solve_amccr

DP_BUDGET = 10**6
EXHAUSTIVE_CAP = 24


class Method(str, enum.Enum):
    ALG_P = "ALG_P"
    DP_ORACLE = "DP_ORACLE"
    EXHAUSTIVE = "EXHAUSTIVE"


@dataclass(frozen=True)
class PartitionInstance:
    """Positive integers sorted non-increasingly; ``permutation`` maps back to input order."""

    a: tuple
    permutation: tuple

    @classmethod
    def from_values(cls, values: Sequence[int]) -> PartitionInstance:
        vals = list(values)
        for v in vals:
            if isinstance(v, bool) or int(v) != v or v < 1:
                raise DomainError(f"PARTITION items must be positive integers, got {v!r}")
        vals = [int(v) for v in vals]
        if len(vals) < 2:
            raise DomainError(f"need at least 2 items, got {len(vals)}")
        order = sorted(range(len(vals)), key=lambda i: -vals[i])
        return cls(tuple(vals[i] for i in order), tuple(order))

    @property
    def k(self) -> int:
        return len(self.a)

    @property
    def total(self) -> int:
        return sum(self.a)


@dataclass(frozen=True)
class PartitionVerdict:
    """Decision plus, when positive, one side ``J`` of an equal-sum split.

    ``witness`` holds sorted-order indices and always contains index 0.
    ``detail`` carries method-specific diagnostics.
    """

    is_positive: bool
    witness: Optional[frozenset]
    method: Method
    detail: Optional[dict] = None

    def check(self, p: PartitionInstance) -> bool:
        if not self.is_positive or self.witness is None:
            return True
        inside = sum(p.a[i] for i in self.witness)
        return 2 * inside == p.total


def _canonical(side, k: int) -> frozenset:
    side = frozenset(side)
    return side if 0 in side else frozenset(range(k)) - side


def reduce_to_amccr(p: PartitionInstance) -> ProblemInstance:
    """Instance with ``m_i = 1``, ``M_i = 2 a_i + 1``, hence ``beta_i = a_i``."""
    intervals = [PriceInterval(1.0, 2.0 * ai + 1.0) for ai in p.a]
    return ProblemInstance.from_intervals(intervals, has_prices=False)


def alg_p(p: PartitionInstance, cap: int = DEFAULT_CAP) -> PartitionVerdict:
    """Decide PARTITION from the maximizer structure of the reduced instance.

    The filled/unfilled test is an integer comparison: ``xi_h`` is recomputed
    exactly from the witness sets.
    """
    inst = reduce_to_amccr(p)
    # a is already sorted, so no reordering happens
    assert not inst.reordered
    w = solve_amccr(inst, cap=cap).witness
    xi = sum(p.a[i] for i in w.j_minus) - sum(p.a[i] for i in w.j_plus)
    detail = {"h": w.h, "xi_h": xi, "beta_h": p.a[w.h]}
    if abs(xi) != p.a[w.h]:
        return PartitionVerdict(False, None, Method.ALG_P, detail)
    # xi_h = +a_h puts h with J+, xi_h = -a_h puts it with J-
    side = w.j_plus | {w.h} if xi > 0 else w.j_plus
    return PartitionVerdict(True, _canonical(side, p.k), Method.ALG_P, detail)


def dp_oracle(p: PartitionInstance, budget: int = DP_BUDGET) -> PartitionVerdict:
    """Reachable-subset-sum dynamic program with parent pointers."""
    total = p.total
    if total > budget:
        raise CapacityError(f"sum {total} exceeds the DP budget {budget}")
    if total % 2:
        return PartitionVerdict(False, None, Method.DP_ORACLE)
    target = total // 2
    reach = np.zeros(target + 1, dtype=bool)
    reach[0] = True
    parent = np.full(target + 1, -1, dtype=np.int64)
    for i, ai in enumerate(p.a):
        if ai > target:
            continue
        shifted = np.zeros_like(reach)
        shifted[ai:] = reach[: target + 1 - ai]
        new = shifted & ~reach
        parent[new] = i
        reach |= shifted
        if reach[target]:
            break
    if not reach[target]:
        return PartitionVerdict(False, None, Method.DP_ORACLE)
    side, s = set(), target
    while s > 0:
        i = int(parent[s])
        side.add(i)
        s -= p.a[i]
    return PartitionVerdict(True, _canonical(side, p.k), Method.DP_ORACLE)


def exhaustive(p: PartitionInstance, cap: int = EXHAUSTIVE_CAP) -> PartitionVerdict:
    """Check all ``2**(k-1)`` subsets containing index 0."""
    if p.k > cap:
        raise CapacityError(f"k={p.k} exceeds the exhaustive cap {cap}")
    total = p.total
    if total % 2 == 0:
        # subset sums over indices 1..k-1, with a[0] always included
        sums = np.zeros(1, dtype=np.int64)
        for ai in p.a[1:]:
            sums = np.concatenate((sums, sums + ai))
        hits = np.flatnonzero(2 * (sums + p.a[0]) == total)
        if hits.size:
            mask = int(hits[0])
            side = {0} | {j + 1 for j in range(p.k - 1) if mask >> j & 1}
            return PartitionVerdict(True, frozenset(side), Method.EXHAUSTIVE)
    return PartitionVerdict(False, None, Method.EXHAUSTIVE)
