import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import D4_WEIGHTS, all_tours, tour_cost
from tourbench import (
    InstanceError,
    arc,
    arc_weight,
    euclidean_from_points,
    is_metric,
    make_instance,
)


def test_arc_canonical_order():
    assert arc(3, 1) == arc(1, 3)
    assert arc(0, 2).u == 0 and arc(0, 2).v == 2


def test_arc_rejects_self_loop():
    with pytest.raises(InstanceError):
        arc(2, 2)


def test_arc_rejects_negative_vertex():
    with pytest.raises(InstanceError):
        arc(-1, 0)


def test_d4_basics(d4):
    assert d4.n == 4
    assert d4.name == "d4"
    assert d4.integral
    assert d4.weight(0, 3) == 10
    assert d4.weight(3, 0) == 10
    assert d4.absent == frozenset()
    # largest finite weight is 10, so the sentinel is 4 * 10 + 1
    assert d4.beta == 41


def test_weights_are_read_only(d4):
    with pytest.raises(ValueError):
        d4.weights[0, 1] = 99


def test_weight_rejects_diagonal_and_range(d4):
    with pytest.raises(InstanceError):
        d4.weight(1, 1)
    with pytest.raises(InstanceError):
        d4.weight(0, 4)
    with pytest.raises(InstanceError):
        d4.weight(-1, 2)


def test_weight_returns_python_scalar(d4):
    w = d4.weight(0, 1)
    assert type(w) is int


def test_make_instance_rejects_small_n():
    with pytest.raises(InstanceError):
        make_instance(2, [[0, 1], [1, 0]])


def test_make_instance_rejects_non_square():
    with pytest.raises(InstanceError):
        make_instance(3, [[0, 1], [1, 0]])


def test_make_instance_rejects_asymmetry():
    w = [[0, 1, 2], [1, 0, 3], [2, 4, 0]]
    with pytest.raises(InstanceError):
        make_instance(3, w)


def test_make_instance_rejects_negative():
    w = [[0, 1, -2], [1, 0, 3], [-2, 3, 0]]
    with pytest.raises(InstanceError):
        make_instance(3, w)


def test_make_instance_rejects_bool_entries():
    w = [[0, True, 1], [True, 0, 1], [1, 1, 0]]
    with pytest.raises(InstanceError):
        make_instance(3, w)


def test_make_instance_rejects_huge_ints():
    big = 2**70
    w = [[0, big, 1], [big, 0, 1], [1, 1, 0]]
    with pytest.raises(InstanceError):
        make_instance(3, w)


def test_nonzero_diagonal_is_zeroed():
    w = [[5, 1, 2], [1, 5, 3], [2, 3, 5]]
    inst = make_instance(3, w)
    assert inst.weight_of(arc(0, 1)) == 1
    assert np.all(np.diag(inst.weights) == 0)


def test_absent_arcs_get_sentinel():
    w = [[0, None, 2], [None, 0, 3], [2, 3, 0]]
    inst = make_instance(3, w)
    assert inst.absent == frozenset({arc(0, 1)})
    # sentinel exceeds n times the largest finite weight
    assert inst.beta == 3 * 3 + 1
    assert inst.weight(0, 1) == inst.beta
    assert not is_metric(inst)


def test_absent_must_be_mirrored():
    w = [[0, None, 2], [4, 0, 3], [2, 3, 0]]
    with pytest.raises(InstanceError):
        make_instance(3, w)


def test_fraction_weights_become_floats():
    q = Fraction(1, 3)
    w = [[0, q, 1], [q, 0, 1], [1, 1, 0]]
    inst = make_instance(3, w)
    assert not inst.integral
    assert inst.weight(0, 1) == pytest.approx(1 / 3)


def test_instance_equality():
    a = make_instance(4, D4_WEIGHTS, name="d4")
    b = make_instance(4, D4_WEIGHTS, name="d4")
    c = make_instance(4, D4_WEIGHTS, name="other")
    assert a == b
    assert a != c


def test_euclidean_triangle():
    inst = euclidean_from_points([(0, 0), (3, 0), (0, 4)], name="tri")
    assert inst.weight(0, 1) == 3
    assert inst.weight(0, 2) == 4
    assert inst.weight(1, 2) == 5
    assert inst.integral
    assert is_metric(inst)


def test_euclidean_rounds_to_nearest():
    inst = euclidean_from_points([(0, 0), (1, 1), (1, 3)])
    assert inst.weight(0, 1) == 1  # sqrt(2) ~ 1.414
    assert inst.weight(0, 2) == 3  # sqrt(10) ~ 3.162
    assert inst.weight(1, 2) == 2


def test_euclidean_needs_three_points():
    with pytest.raises(InstanceError):
        euclidean_from_points([(0, 0), (1, 1)])


def test_coincident_points_yield_zero_weight():
    inst = euclidean_from_points([(2, 2), (2, 2), (5, 6)])
    assert inst.weight(0, 1) == 0


def test_is_metric_fails_on_d4(d4):
    # 0-3 direct is 10 but 0-1-3 costs 3
    assert not is_metric(d4)


def test_is_metric_on_ones(ones6):
    assert is_metric(ones6)


def test_beta_dominates_every_tour():
    for n in (5, 6, 7):
        pts = [(i * 7 % 13, i * 11 % 17) for i in range(n)]
        inst = euclidean_from_points(pts)
        worst = max(tour_cost(inst, t) for t in all_tours(n))
        assert inst.beta > worst


def test_arc_weight_matches_weight(d4):
    for u in range(4):
        for v in range(u + 1, 4):
            assert arc_weight(d4, arc(u, v)) == d4.weight(u, v)


@given(
    st.lists(
        st.tuples(st.integers(0, 500), st.integers(0, 500)),
        min_size=3,
        max_size=7,
    )
)
@settings(max_examples=60, deadline=None)
def test_rounded_euclidean_almost_metric(pts):
    # nearest-int rounding can break the triangle inequality by at most 1
    inst = euclidean_from_points(pts)
    w = inst.weights
    n = inst.n
    for u in range(n):
        for v in range(n):
            for k in range(n):
                assert w[u, v] <= w[u, k] + w[k, v] + 1


@given(st.integers(3, 8), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_random_metric_matrix_symmetric_view(n, seed):
    rng = np.random.default_rng(seed)
    raw = rng.integers(1, 50, size=(n, n))
    sym = np.triu(raw, 1)
    sym = sym + sym.T
    inst = make_instance(n, sym)
    assert np.array_equal(inst.weights, inst.weights.T)
    assert math.isclose(float(inst.weights.sum()), float(sym.sum()))
