import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amccr.core import (
    DomainError,
    PriceInterval,
    ProblemInstance,
    from_xi,
    in_S,
    in_T,
    objective_G,
    objective_H,
    phi,
    to_xi,
)

from conftest import random_bounds

ratios = st.floats(min_value=1.0, max_value=200.0, allow_nan=False)
unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@st.composite
def instance_and_point(draw, kmin=2, kmax=6):
    k = draw(st.integers(kmin, kmax))
    m = [draw(st.floats(0.05, 20.0)) for _ in range(k)]
    r = [draw(ratios) for _ in range(k)]
    inst = ProblemInstance.from_bounds(m, [a * b for a, b in zip(m, r)])
    u = np.array([draw(unit) for _ in range(k)])
    p = inst.m * np.exp(u * np.log(inst.r))
    return inst, np.clip(p, inst.m, inst.M)


def test_phi_examples():
    assert phi(1.0) == 0.0
    assert phi(2.0) == 0.75
    assert phi(0.5) == -0.75
    with pytest.raises(DomainError):
        phi(0.0)


def test_interval_validation():
    with pytest.raises(DomainError):
        PriceInterval(2.0, 1.0)
    with pytest.raises(DomainError):
        PriceInterval(0.0, 1.0)
    assert PriceInterval(1.0, 4.0).beta == 1.5


def test_instance_sorting_and_user_order():
    inst = ProblemInstance.from_ratios([2.0, 9.0, 3.0])
    assert inst.r.tolist() == [9.0, 3.0, 2.0]
    assert inst.permutation == (1, 2, 0)
    assert inst.reordered
    assert inst.to_user_order(list(inst.r)) == [2.0, 9.0, 3.0]
    with pytest.raises(DomainError):
        ProblemInstance.from_ratios([2.0])
    with pytest.raises(DomainError):
        ProblemInstance.from_ratios([0.5, 2.0])


def test_to_xi_endpoints():
    inst = ProblemInstance.from_bounds([1.0, 2.0], [4.0, 18.0])
    np.testing.assert_allclose(to_xi(inst, inst.m), -inst.beta, rtol=1e-15)
    np.testing.assert_allclose(to_xi(inst, inst.M), inst.beta, rtol=1e-15)
    np.testing.assert_allclose(to_xi(inst, inst.center), 0.0, atol=1e-15)
    with pytest.raises(DomainError):
        to_xi(inst, [0.5, 3.0])


def test_from_xi_examples():
    inst = ProblemInstance.from_bounds([1.0, 1.0], [4.0, 4.0])
    np.testing.assert_allclose(from_xi(inst, [1.5, 0.0]), [4.0, 2.0], rtol=1e-15)
    np.testing.assert_allclose(from_xi(inst, [-1.5, 1.5]), [1.0, 4.0], rtol=1e-15)
    with pytest.raises(DomainError):
        from_xi(inst, [1.6, 0.0])


def test_objective_examples():
    flat = ProblemInstance.from_ratios([1.0, 1.0, 1.0])
    assert objective_H(flat, [1.0, 1.0, 1.0]) == 1.0
    assert objective_G(flat, [0.0, 0.0, 0.0]) == 1.0
    inst = ProblemInstance.from_bounds([1.0, 1.0], [4.0, 1.0])
    assert objective_H(inst, [2.0, 1.0]) == 1.5
    assert math.isclose(objective_G(inst, to_xi(inst, [2.0, 1.0])), 1.5, rel_tol=1e-15)
    inst = ProblemInstance.from_bounds([1.0, 1.0], [4.0, 4.0])
    assert objective_H(inst, [1.0, 4.0]) == 2.5


def test_membership_examples():
    inst = ProblemInstance.from_bounds([1.0, 1.0], [4.0, 4.0])
    assert in_S(inst, inst.center)
    assert in_S(inst, [1.0, 4.0])
    assert not in_S(inst, inst.M)
    assert in_T(inst, [0.0, 0.0])
    assert in_T(inst, [1.5, -1.5])
    degenerate = ProblemInstance.from_ratios([4.0, 1.0])
    assert not in_T(degenerate, [1.5, -1.5])


@settings(max_examples=300, deadline=None)
@given(instance_and_point())
def test_round_trip(data):
    inst, p = data
    np.testing.assert_allclose(from_xi(inst, to_xi(inst, p)), p, rtol=1e-10)


@settings(max_examples=300, deadline=None)
@given(instance_and_point())
def test_H_equals_G(data):
    inst, p = data
    h = objective_H(inst, p)
    assert abs(h - objective_G(inst, to_xi(inst, p))) <= 1e-10 * h


@settings(max_examples=300, deadline=None)
@given(instance_and_point())
def test_S_iff_T_on_projected_points(data):
    # random points almost never balance; project onto the hyperplane first
    inst, p = data
    xi = to_xi(inst, p)
    free = inst.beta > 0
    if not free.any():
        return
    shift = xi.sum() / free.sum()
    q = np.clip(xi - np.where(free, shift, 0.0), -inst.beta, inst.beta)
    x = from_xi(inst, q)
    assert in_S(inst, x) == in_T(inst, to_xi(inst, x))
    assert in_S(inst, p) == in_T(inst, xi)


def test_S_iff_T_random(rng):
    for _ in range(2000):
        inst = random_bounds(rng, int(rng.integers(2, 6)))
        u = rng.random(inst.k)
        p = inst.m * np.exp(u * np.log(inst.r))
        assert in_S(inst, p) == in_T(inst, to_xi(inst, p))


@settings(max_examples=200, deadline=None)
@given(instance_and_point())
def test_G_even(data):
    inst, p = data
    q = to_xi(inst, p)
    assert objective_G(inst, q) == objective_G(inst, -q)


def _h(a, b, c, d, x):
    return math.hypot(a, b + x) + math.hypot(c, d - x)


def test_derivative_sign_of_two_hypot_sum(rng):
    # h(x) = sqrt(a^2+(b+x)^2) + sqrt(c^2+(d-x)^2); sign h'(0) = sign(cb - ad), h''(0) > 0
    step = 1e-5
    checked = 0
    for _ in range(10_000):
        a, b, c, d = rng.uniform(0.01, 10.0, size=4)
        d1 = (_h(a, b, c, d, step) - _h(a, b, c, d, -step)) / (2 * step)
        d2 = (_h(a, b, c, d, step) - 2 * _h(a, b, c, d, 0.0) + _h(a, b, c, d, -step)) / step**2
        assert d2 > 0
        s = c * b - a * d
        # skip near-ties where finite-difference noise could flip the sign
        if abs(s) > 1e-3 * (1.0 + abs(a * d) + abs(c * b)):
            assert np.sign(d1) == np.sign(s)
            checked += 1
    assert checked > 9000
