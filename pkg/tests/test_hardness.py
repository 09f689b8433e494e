import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amccr.core import CapacityError, DomainError
from amccr.hardness import Method, PartitionInstance, alg_p, dp_oracle, exhaustive, reduce_to_amccr
from amccr.solver import enumerate_configs, solve_amccr


def P(*a):
    return PartitionInstance.from_values(a)


@pytest.mark.parametrize(
    "a, r",
    [((1, 1), [3, 3]), ((3, 2, 1), [7, 5, 3]), ((5, 5, 5, 3), [11, 11, 11, 7])],
)
def test_reduction_examples(a, r):
    inst = reduce_to_amccr(P(*a))
    assert inst.r.tolist() == r
    assert inst.beta.tolist() == list(a)


def test_alg_p_examples():
    v = alg_p(P(1, 1))
    assert v.is_positive and v.witness == {0} and v.method is Method.ALG_P
    v = alg_p(P(3, 2, 1))
    assert v.is_positive and v.witness == {0}
    assert not alg_p(P(3, 2, 2)).is_positive


def test_dp_examples():
    assert dp_oracle(P(1, 1)).is_positive
    assert not dp_oracle(P(2, 2, 2)).is_positive
    v = dp_oracle(P(8, 7, 6, 5, 4))
    assert v.is_positive and v.check(P(8, 7, 6, 5, 4))


def test_validation_and_caps():
    for bad in [(1,), (0, 1), (1.5, 2), (True, 1)]:
        with pytest.raises(DomainError):
            PartitionInstance.from_values(bad)
    with pytest.raises(CapacityError):
        dp_oracle(P(10**6, 10**6))
    with pytest.raises(CapacityError):
        exhaustive(P(*([1] * 30)))


def test_witness_maps_back_to_input_order():
    p = P(1, 2, 3)
    v = alg_p(p)
    user = {p.permutation[i] for i in v.witness}
    assert user == {2}


@settings(max_examples=400, deadline=None)
@given(st.lists(st.integers(1, 20), min_size=2, max_size=9))
def test_three_deciders_agree(a):
    p = PartitionInstance.from_values(a)
    va, vd, ve = alg_p(p), dp_oracle(p), exhaustive(p)
    assert va.is_positive == vd.is_positive == ve.is_positive
    for v in (va, vd, ve):
        assert v.check(p)
        if v.is_positive:
            assert 0 in v.witness


def _xi(p, w):
    return sum(p.a[i] for i in w.j_minus) - sum(p.a[i] for i in w.j_plus)


def test_witness_structure_small_exhaustive():
    for k in range(2, 6):
        for a in itertools.combinations_with_replacement(range(8, 0, -1), k):
            p = PartitionInstance.from_values(a)
            w = solve_amccr(reduce_to_amccr(p)).witness
            xi = _xi(p, w)
            assert w.xi_h == xi  # float path is exact on integers
            if dp_oracle(p).is_positive:
                assert abs(xi) == p.a[w.h]
            else:
                assert abs(xi) < p.a[w.h]


def test_negative_can_have_zero_xi():
    # a negative instance whose unique maximizer has xi_h = 0, not a nonzero integer
    p = P(8, 8, 7)
    assert not dp_oracle(p).is_positive
    inst = reduce_to_amccr(p)
    w = solve_amccr(inst).witness
    assert (w.h, w.xi_h) == (2, 0.0)
    top = [c for c in enumerate_configs(inst) if c.feasible and c.value >= w.value * (1 - 1e-12)]
    assert len(top) == 1


def test_exhaustive_matches_bruteforce(rng):
    for _ in range(300):
        a = rng.integers(1, 15, int(rng.integers(2, 9))).tolist()
        p = PartitionInstance.from_values(a)
        total = sum(a)
        expect = any(
            2 * sum(c) == total for n in range(1, len(a)) for c in itertools.combinations(a, n)
        )
        assert exhaustive(p).is_positive == expect
