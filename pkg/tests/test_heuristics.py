from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import ones_instance, slow_optimum
from tourbench import (
    CHEAPEST_INSERTION,
    GREEDY,
    HEURISTICS,
    NN,
    InstanceError,
    arc,
    cheapest_insertion,
    euclidean_from_points,
    greedy_edge,
    make_instance,
    nearest_neighbor,
    validate_trace,
)
from tourbench.tsplib import gen_random_euclidean, gen_random_metric


def test_registry_contents():
    assert set(HEURISTICS) == {NN, CHEAPEST_INSERTION, GREEDY}
    assert HEURISTICS[NN] is nearest_neighbor


def test_nn_on_d4(d4):
    trace = nearest_neighbor(d4)
    assert trace.heuristic == NN
    assert trace.final_weight == 13
    assert [s.delta_a for s in trace.steps] == [1, 1, 1, 10]
    assert [s.i for s in trace.steps] == [0, 1, 2, 3]
    assert all(s.m == 1 for s in trace.steps)
    assert trace.final_arcs == (arc(0, 1), arc(0, 3), arc(1, 2), arc(2, 3))
    assert not trace.beta_used
    assert validate_trace(trace, d4) == []


def test_nn_start_changes_trace(d4):
    trace = nearest_neighbor(d4, start=2)
    assert trace.steps[0].a_new == (arc(1, 2),)
    assert trace.final_weight == 13


def test_nn_tie_breaks_to_lowest_vertex():
    # from 0 both 1 and 2 are at distance 1; the lower index must win
    w = [[0, 1, 1, 5], [1, 0, 5, 1], [1, 5, 0, 1], [5, 1, 1, 0]]
    inst = make_instance(4, w)
    trace = nearest_neighbor(inst)
    assert trace.steps[0].a_new == (arc(0, 1),)


def test_nn_rejects_bad_start(d4):
    with pytest.raises(InstanceError):
        nearest_neighbor(d4, start=4)
    with pytest.raises(InstanceError):
        nearest_neighbor(d4, start=-1)


def test_cheapest_insertion_on_d4(d4):
    trace = cheapest_insertion(d4)
    assert trace.final_weight == 6
    assert len(trace.steps) == 4
    seed, c1, c2, ins = trace.steps
    assert seed.a_new == (arc(0, 1),) and seed.delta_a == 1
    assert c1.a_new == (arc(0, 2),) and c1.delta_a == 2
    assert c2.a_new == (arc(1, 2),) and c2.delta_a == 1
    assert ins.a_new == (arc(1, 3), arc(2, 3))
    assert ins.a_old == (arc(1, 2),)
    assert ins.delta_a == 2
    assert all(s.m == 1 for s in trace.steps)
    assert validate_trace(trace, d4) == []


def test_cheapest_insertion_step_count():
    for n in (5, 7, 9):
        inst = gen_random_euclidean(n, seed=n)
        trace = cheapest_insertion(inst)
        assert len(trace.steps) == n
        assert all(s.m == 1 for s in trace.steps)
        insertions = [s for s in trace.steps if s.a_old]
        assert len(insertions) == n - 3


def test_greedy_on_d4(d4):
    trace = greedy_edge(d4)
    assert trace.final_weight == 13
    taken = [s.a_new[0] for s in trace.steps]
    assert taken == [arc(0, 1), arc(1, 2), arc(2, 3), arc(0, 3)]
    assert arc(0, 2) not in trace.final_arcs
    assert arc(1, 3) not in trace.final_arcs
    assert validate_trace(trace, d4) == []


def test_greedy_skips_early_cycle():
    # arcs (0,1) and (0,2) are taken first; (1,2) would close a 3-cycle
    # and must be skipped even though it is cheaper than the rest
    w = [
        [0, 1, 1, 9, 9],
        [1, 0, 1, 9, 9],
        [1, 1, 0, 9, 9],
        [9, 9, 9, 0, 9],
        [9, 9, 9, 9, 0],
    ]
    inst = make_instance(5, w)
    trace = greedy_edge(inst)
    assert arc(1, 2) not in trace.final_arcs
    assert trace.steps[0].a_new == (arc(0, 1),)
    assert trace.steps[1].a_new == (arc(0, 2),)
    assert validate_trace(trace, inst) == []


def test_all_heuristics_on_uniform_weights():
    inst = ones_instance(7)
    for build in HEURISTICS.values():
        trace = build(inst)
        assert trace.final_weight == 7
        assert validate_trace(trace, inst) == []


def test_triangle_instance_has_no_insertions():
    inst = euclidean_from_points([(0, 0), (3, 0), (0, 4)])
    trace = cheapest_insertion(inst)
    assert len(trace.steps) == 3
    assert all(not s.a_old for s in trace.steps)
    assert trace.final_weight == 12


def test_nn_crosses_sentinel_when_forced():
    w = [
        [0, 1, 2, None],
        [1, 0, 1, 2],
        [2, 1, 0, 1],
        [None, 2, 1, 0],
    ]
    inst = make_instance(4, w)
    trace = nearest_neighbor(inst)
    assert trace.beta_used
    assert trace.final_weight == 3 + inst.beta
    assert validate_trace(trace, inst) == []


def test_determinism_same_input_same_trace():
    inst = gen_random_metric(9, seed=123)
    for build in HEURISTICS.values():
        assert build(inst) == build(inst)


def test_heuristics_never_beat_enumeration():
    for seed in range(6):
        inst = gen_random_euclidean(6, seed=seed)
        opt = slow_optimum(inst)
        for build in HEURISTICS.values():
            assert build(inst).final_weight >= opt


@given(st.integers(0, 10**6), st.integers(5, 9), st.sampled_from(sorted(HEURISTICS)))
@settings(max_examples=40, deadline=None)
def test_random_traces_validate(seed, n, name):
    inst = gen_random_metric(n, seed=seed) if seed % 2 else gen_random_euclidean(n, seed=seed)
    trace = HEURISTICS[name](inst)
    assert trace.n == n
    assert len(trace.final_arcs) == n
    assert validate_trace(trace, inst) == []
    assert not trace.beta_used


def test_nn_ratio_example(d4):
    trace = nearest_neighbor(d4)
    assert trace.steps[-1].r == Fraction(13, 3)
