"""Round-based simulator for the k-objective time series search game.

Each round offers a price vector. The player may accept exactly one; if it
never accepts, it is paid the minimum vector ``m``. The offline optimum gets
the per-component maxima over the whole sequence, so the realized ratio is
``mean(best_i / return_i)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from amccr.core import BOX_RTOL, DomainError, ProblemInstance, from_xi
from amccr.solver import solve_amccr

UPPER_TOL = 1e-9
LOWER_TOL = 1e-6
MAX_LEN = 50


@dataclass(frozen=True)
class GameTranscript:
    offers: tuple
    accepted_at: Optional[int]
    return_vector: tuple
    realized_ratio: float

    def to_dict(self) -> dict:
        return {
            "offers": [list(p) for p in self.offers],
            "accepted_at": self.accepted_at,
            "return_vector": list(self.return_vector),
            "realized_ratio": self.realized_ratio,
        }


@dataclass(frozen=True)
class CertifyReport:
    z: float
    trials: int
    seed: int
    upper: float
    lower: float
    upper_ok: bool
    lower_ok: bool
    # first random sequence whose ratio exceeded z + UPPER_TOL, if any
    violation: Optional[tuple] = None
    violations: int = 0

    @property
    def ok(self) -> bool:
        return self.upper_ok and self.lower_ok

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.violation is not None:
            d["violation"] = [list(p) for p in self.violation]
        d["ok"] = self.ok
        return d


def _offer(instance: ProblemInstance, p) -> np.ndarray:
    x = np.asarray(p, dtype=float)
    if x.shape != (instance.k,):
        raise DomainError(f"offer must have {instance.k} components, got shape {x.shape}")
    if not np.all((x >= instance.m * (1.0 - BOX_RTOL)) & (x <= instance.M * (1.0 + BOX_RTOL))):
        raise DomainError(f"offer {x.tolist()} is outside the price box")
    return x


def _threshold_stat(instance: ProblemInstance, x: np.ndarray) -> float:
    return math.fsum(instance.M / x) / instance.k


def threshold_player(instance: ProblemInstance, z_target: float, offer) -> bool:
    """Accept iff ``mean(M_i / p_i) <= z_target``."""
    return _threshold_stat(instance, _offer(instance, offer)) <= z_target


def realized_ratio(instance: ProblemInstance, offers, return_vector) -> float:
    """``mean(best_i / return_i)`` with ``best_i = max(m_i, max_t p_t^i)``."""
    best = instance.m.copy()
    for p in offers:
        best = np.maximum(best, np.asarray(p, dtype=float))
    return math.fsum(best / np.asarray(return_vector, dtype=float)) / instance.k


def play(instance: ProblemInstance, player_threshold: float, offers: Sequence) -> GameTranscript:
    """Run the threshold player over ``offers``; later offers still count toward the maxima."""
    xs = [_offer(instance, p) for p in offers]
    accepted = None
    for t, x in enumerate(xs):
        if _threshold_stat(instance, x) <= player_threshold:
            accepted = t
            break
    ret = xs[accepted] if accepted is not None else instance.m
    ratio = realized_ratio(instance, xs, ret)
    return GameTranscript(
        tuple(tuple(float(v) for v in x) for x in xs),
        accepted,
        tuple(float(v) for v in ret),
        ratio,
    )


def adversary_point(instance: ProblemInstance) -> np.ndarray:
    """Price vector ``x*`` of the solver's maximizer; it lies on the balance set."""
    w = solve_amccr(instance).witness
    return from_xi(instance, w.xi_vector(instance))


def adversary_sequence(instance: ProblemInstance) -> tuple[list, list]:
    """``(accept_branch, reject_branch)``: ``[x*, M]`` and ``[x*]``."""
    x = adversary_point(instance)
    return [x, instance.M.copy()], [x]


def adversary_lower(instance: ProblemInstance) -> float:
    """Smallest ratio any deterministic player can secure against the adversary.

    Accepting ``x*`` is answered by the maxima; rejecting it ends the game.
    """
    accept_branch, reject_branch = adversary_sequence(instance)
    x = accept_branch[0]
    if_accept = realized_ratio(instance, accept_branch, x)
    if_reject = realized_ratio(instance, reject_branch, instance.m)
    return min(if_accept, if_reject)


def random_sequence(instance: ProblemInstance, rng: np.random.Generator, max_len: int = MAX_LEN) -> np.ndarray:
    """Offers log-uniform over each ``[m_i, M_i]``; length uniform in ``[1, max_len]``."""
    n = int(rng.integers(1, max_len + 1))
    u = rng.random((n, instance.k))
    x = instance.m * np.exp(u * np.log(instance.r))
    return np.clip(x, instance.m, instance.M)


def _fast_ratio(instance: ProblemInstance, seq: np.ndarray, z: float) -> float:
    stats = (instance.M / seq).sum(axis=1) / instance.k
    hit = np.flatnonzero(stats <= z)
    best = np.maximum(instance.m, seq.max(axis=0))
    ret = seq[hit[0]] if hit.size else instance.m
    return math.fsum(best / ret) / instance.k


def certify(instance: ProblemInstance, trials: int = 1000, seed: int = 0) -> CertifyReport:
    """Two-sided empirical check of the ratio from :func:`solve_amccr`.

    Upper side: the threshold player at ``z`` over ``trials`` random sequences
    must stay within ``z + 1e-9``. Lower side: both decisions at ``x*`` must
    cost at least ``z - 1e-6``. Trial ``i`` draws from the ``i``-th child of
    ``SeedSequence(seed)``, so the report depends only on the arguments.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    z = solve_amccr(instance).z
    upper = -math.inf
    violation, n_bad = None, 0
    for child in np.random.SeedSequence(seed).spawn(trials):
        seq = random_sequence(instance, np.random.default_rng(child))
        # same decision rule as play(), vectorized; offers are in-box by construction
        ratio = _fast_ratio(instance, seq, z)
        if ratio > z + UPPER_TOL:
            # confirm through the reference path before reporting
            ratio = play(instance, z, seq).realized_ratio
        if ratio > z + UPPER_TOL:
            n_bad += 1
            if violation is None:
                violation = tuple(tuple(float(v) for v in x) for x in seq)
        upper = max(upper, ratio)
    lower = adversary_lower(instance)
    return CertifyReport(
        z=z,
        trials=trials,
        seed=seed,
        upper=upper,
        lower=lower,
        upper_ok=upper <= z + UPPER_TOL,
        lower_ok=lower >= z - LOWER_TOL,
        violation=violation,
        violations=n_bad,
    )
