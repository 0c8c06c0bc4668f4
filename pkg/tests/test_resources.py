from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import resource_tables as ref
from paldus.errors import InvalidK, ValidationError
from paldus.resources import (
    CostEstimate,
    Strategy,
    comparison,
    crossover,
    data_lookup_cost,
    double_index_cost,
    givens_rotation_cost,
    incrementer_cost,
    n_allowed,
    n_elements,
    phase_gradient_cost,
    q_from_epsilon,
    rotation_lookup_cost,
    total_paldus_cost,
)

LOOKUP_STRATEGIES = [Strategy.UnaryIteration, Strategy.CleanSelectSwap, Strategy.DirtySelectSwap]


def test_counts_of_elements():
    assert n_allowed(4) == 15
    assert n_elements(3) == 91


def test_givens_example():
    assert givens_rotation_cost(2, 16, 1, Strategy.UnaryIteration).toffoli == 138


def test_lookup_examples():
    u = data_lookup_cost(100, 8, 1, Strategy.UnaryIteration)
    assert (u.toffoli, u.cleanQubits) == (100, 2 * 7 + 8 - 1)
    assert data_lookup_cost(64, 8, 4, Strategy.CleanSelectSwap).toffoli == 40
    assert data_lookup_cost(64, 8, 4, Strategy.DirtySelectSwap, "uncompute").toffoli == 48


def test_incrementer_examples():
    assert incrementer_cost(3).toffoli == 78
    assert incrementer_cost(1).toffoli == 60
    assert incrementer_cost(3).conditionallyCleanQubits == 3


def test_total_example_and_monotone():
    assert total_paldus_cost(1, 8, 1, Strategy.UnaryIteration).toffoli == 114
    for s in Strategy:
        vals = [total_paldus_cost(d, 17, 4, s).toffoli for d in range(1, 20)]
        assert vals == sorted(vals)


def test_rotation_examples():
    assert rotation_lookup_cost(45, 16, 1, Strategy.UnaryIteration).toffoli == 122
    assert rotation_lookup_cost(64, 8, 2, Strategy.DirtySelectSwap).toffoli == 136
    # clean row with k=1 loses the q(k-1) term
    clean = rotation_lookup_cost(64, 8, 1, Strategy.CleanSelectSwap).toffoli
    assert clean == 2 * 64 + 1 + 2 * 8


def test_invalid_k():
    for s in (Strategy.CleanSelectSwap, Strategy.DirtySelectSwap, Strategy.MultiIndexData):
        with pytest.raises(InvalidK):
            givens_rotation_cost(3, 8, 3, s)
    with pytest.raises(InvalidK):
        data_lookup_cost(64, 8, 6, Strategy.CleanSelectSwap)
    with pytest.raises(InvalidK):
        rotation_lookup_cost(64, 8, 0, Strategy.DirtySelectSwap)
    # unary iteration ignores k
    assert givens_rotation_cost(3, 8, 3, Strategy.UnaryIteration).toffoli == 2 * 91 + 24


def test_input_validation():
    with pytest.raises(ValidationError):
        givens_rotation_cost(0, 8, 1, "unary")
    with pytest.raises(ValidationError):
        givens_rotation_cost(2, 0, 1, "unary")
    with pytest.raises(ValidationError):
        Strategy.parse("quantum-magic")
    with pytest.raises(ValidationError):
        CostEstimate(-1, 0, 0, Strategy.UnaryIteration)


def test_strategy_parse_aliases():
    assert Strategy.parse("unary") is Strategy.UnaryIteration
    assert Strategy.parse("dirty-select-swap") is Strategy.DirtySelectSwap
    assert Strategy.parse("MultiIndexData") is Strategy.MultiIndexData


def test_q_from_epsilon():
    assert q_from_epsilon(1e-5) == 17
    assert q_from_epsilon(0.5) == 1
    assert phase_gradient_cost(17, 1e-5) == 17 * 17


@given(st.integers(1, 64), st.integers(1, 64), st.sampled_from([1, 2, 4, 8]), st.sampled_from(list(Strategy)))
def test_t_gates_are_four_times_toffoli(d, q, k, s):
    c = givens_rotation_cost(d, q, k, s)
    assert c.tGates == 4 * c.toffoli
    assert min(c.toffoli, c.cleanQubits, c.dirtyQubits) >= 0


def test_two_transcriptions_agree_on_grid():
    rnd = random.Random(0)
    grid = [(rnd.randint(1, 64), rnd.randint(1, 64), rnd.choice([1, 2, 4, 8]), rnd.choice(list(Strategy))) for _ in range(200)]
    for d, q, k, s in grid:
        got = givens_rotation_cost(d, q, k, s)
        assert got.toffoli == ref.GIVENS_TOFFOLI[s.value](d, q, k)
        assert got.cleanQubits == ref.GIVENS_CLEAN[s.value](d, q, k)
        assert got.dirtyQubits == ref.GIVENS_DIRTY[s.value](d, q, k)
        assert total_paldus_cost(min(d, 24), q, k, s).toffoli == ref.total(min(d, 24), q, k, s.value)
        assert incrementer_cost(d).toffoli == ref.c_inc(d)
        if s in LOOKUP_STRATEGIES:
            I = n_elements(d)
            for phase in ("compute", "uncompute"):
                lk = data_lookup_cost(I, q, k, s, phase)
                assert lk.toffoli == ref.LOOKUP_TOFFOLI[(s.value, phase)](I, q, k)
                assert lk.cleanQubits == ref.LOOKUP_CLEAN[s.value](I, q, k)
            rot = rotation_lookup_cost(I, q, k, s)
            assert rot.toffoli == ref.ROTATION_TOFFOLI[s.value](I, q, k)
            assert rot.cleanQubits == ref.ROTATION_CLEAN[s.value](I, q, k)


def test_double_index_totals():
    for I, L, q, kc, kd in itertools.product((5, 17, 91), (3, 15, 66), (4, 17), (1, 2, 4), (1, 4, 8)):
        assert double_index_cost(I, L, q, kc, kd) == ref.double_index_star(I, L, q, kc, kd)
        assert double_index_cost(I, L, q, kc, kd, unary_first=True) == ref.double_index_unary(I, L, q, kd)


def _ratio(dmax, k, s):
    return total_paldus_cost(dmax, 17, k, s).toffoli / dmax**3


def test_cubic_scaling_single_index_rows():
    for s in LOOKUP_STRATEGIES:
        r16, r32 = _ratio(16, 1, s), _ratio(32, 1, s)
        assert abs(r32 - r16) / r32 < 0.2
    r16, r32 = _ratio(16, 4, Strategy.UnaryIteration), _ratio(32, 4, Strategy.UnaryIteration)
    assert abs(r32 - r16) / r32 < 0.2


def test_multi_index_ratio_converges_slowly():
    # lower-order terms dominate at small dMax; the ratio still settles as dMax grows
    ratios = [_ratio(d, 1, Strategy.MultiIndexData) for d in (16, 32, 64, 128, 256)]
    steps = [a - b for a, b in zip(ratios, ratios[1:])]
    assert all(x > 0 for x in steps)
    assert all(b < a for a, b in zip(steps, steps[1:]))
    assert (ratios[-2] - ratios[-1]) / ratios[-1] < 0.2


def test_crossover():
    d = crossover(17, 4)
    assert d is not None
    for dm in range(d, d + 40):
        assert total_paldus_cost(dm, 17, 4, Strategy.MultiIndexData).toffoli < total_paldus_cost(dm, 17, 1, Strategy.UnaryIteration).toffoli
    assert total_paldus_cost(d - 1, 17, 4, Strategy.MultiIndexData).toffoli >= total_paldus_cost(d - 1, 17, 1, Strategy.UnaryIteration).toffoli


def test_comparison_rows():
    rows = comparison(3, 17, 4)
    assert [r["strategy"] for r in rows] == [s.value for s in Strategy]
    assert all(r["totalT"] == 4 * r["totalToffoli"] for r in rows)
