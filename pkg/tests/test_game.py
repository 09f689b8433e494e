import math

import numpy as np
import pytest

from amccr.core import DomainError, ProblemInstance, in_S
from amccr.game import (
    adversary_lower,
    adversary_sequence,
    certify,
    play,
    random_sequence,
    threshold_player,
)
from amccr.solver import solve_amccr

from conftest import random_bounds

R44 = ProblemInstance.from_bounds([1.0, 1.0], [4.0, 4.0])


def test_threshold_player_examples():
    assert threshold_player(R44, 1.0, [4.0, 4.0])
    assert not threshold_player(R44, 2.5, [1.0, 1.0])
    assert threshold_player(R44, 2.5, [1.0, 4.0])
    with pytest.raises(DomainError):
        threshold_player(R44, 2.5, [0.5, 4.0])


def test_play_empty():
    t = play(R44, 2.5, [])
    assert t.accepted_at is None
    assert t.return_vector == (1.0, 1.0)
    assert t.realized_ratio == 1.0


def test_adversary_examples():
    flat = ProblemInstance.from_bounds([2.0, 3.0], [2.0, 3.0])
    acc, rej = adversary_sequence(flat)
    np.testing.assert_array_equal(rej[0], flat.m)
    assert adversary_lower(flat) == 1.0

    acc, rej = adversary_sequence(R44)
    assert sorted(acc[0].tolist()) == [1.0, 4.0]
    assert adversary_lower(R44) == 2.5
    t = play(R44, 2.5, acc)
    assert t.accepted_at == 0 and t.realized_ratio == 2.5
    t = play(R44, 0.0, rej)
    assert t.accepted_at is None and t.realized_ratio == 2.5

    inst = ProblemInstance.from_bounds([1.0, 1.0, 1.0], [9.0, 2.0, 2.0])
    z = (math.sqrt(40) + 6) / 6
    assert abs(adversary_lower(inst) - z) <= 1e-12


def test_adversary_point_is_balanced(rng):
    for _ in range(200):
        inst = random_bounds(rng, int(rng.integers(2, 6)))
        x = adversary_sequence(inst)[1][0]
        assert in_S(inst, x, tol=1e-8 * (1 + inst.r.sum()))
        assert adversary_lower(inst) >= solve_amccr(inst).z - 1e-6


def _independent_ratio(inst, offers, accepted_at):
    best = [max([inst.m[i]] + [p[i] for p in offers]) for i in range(inst.k)]
    ret = offers[accepted_at] if accepted_at is not None else inst.m
    return math.fsum(b / x for b, x in zip(best, ret)) / inst.k


def test_transcript_accounting(rng):
    for _ in range(300):
        inst = random_bounds(rng, int(rng.integers(2, 5)))
        seq = random_sequence(inst, rng)
        t = play(inst, float(rng.uniform(1, 3)), seq)
        assert t.realized_ratio == _independent_ratio(inst, t.offers, t.accepted_at)
        if t.accepted_at is None:
            assert t.return_vector == tuple(inst.m)


def test_random_offers_r44(rng):
    for _ in range(50):
        u = rng.random((100, 2))
        offers = np.exp(u * np.log(4.0))
        assert play(R44, 2.5, offers).realized_ratio <= 2.5 + 1e-9


def test_threshold_policy_can_exceed_z():
    # both offers are rejected, yet their maxima come from different rounds
    t = play(R44, 2.5, [[1.0, 3.9], [3.9, 1.0]])
    assert t.accepted_at is None
    assert t.realized_ratio == pytest.approx(3.9)


def test_certify_examples():
    flat = ProblemInstance.from_bounds([1.0, 1.0, 1.0], [1.0, 1.0, 1.0])
    rep = certify(flat, trials=200, seed=1)
    assert rep.upper == rep.lower == 1.0 and rep.ok
    rep = certify(ProblemInstance.from_bounds([1.0, 1.0], [4.0, 1.0]), trials=1000, seed=0)
    assert rep.z == 1.5 and rep.ok
    rep = certify(ProblemInstance.from_bounds([1.0] * 4, [3.0] * 4), trials=1000, seed=0)
    assert rep.z == 2.0 and rep.ok


def test_certify_reports_violations():
    inst = ProblemInstance.from_bounds([1.0, 1.0, 1.0], [9.0, 2.0, 2.0])
    rep = certify(inst, trials=1000, seed=0)
    assert rep.lower_ok
    assert not rep.upper_ok and rep.violations >= 1
    replay = play(inst, rep.z, rep.violation)
    assert replay.realized_ratio > rep.z + 1e-9


def test_certify_deterministic():
    inst = ProblemInstance.from_bounds([1.0, 2.0, 0.5], [5.0, 3.0, 4.0])
    assert certify(inst, 300, 7) == certify(inst, 300, 7)
    with pytest.raises(DomainError):
        certify(inst, 0, 7)
