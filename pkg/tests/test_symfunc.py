from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paldus.combinatorics import allowed_sectors, dim_irrep
from paldus.errors import DegenerateVariables
from paldus.symfunc import (
    Partition,
    Tableau,
    branching_interleave,
    check_dual_cauchy,
    dual_cauchy_sides,
    dual_pieri_expand,
    elementary,
    identity_suite,
    schur_bialternant,
    schur_ssyt,
    ssyt,
    weyl_dimension,
)


def s21_printed(x1, x2, x3):
    # the expanded polynomial for s_(2,1) in three variables
    return x1**2 * x2 + x1**2 * x3 + x1 * x2**2 + 2 * x1 * x2 * x3 + x1 * x3**2 + x2**2 * x3 + x2 * x3**2


def test_partition_normalises():
    assert Partition((2, 1, 0, 0)).parts == (2, 1)
    assert Partition((3, 1)).conjugate() == Partition((2, 1, 1))
    with pytest.raises(ValueError):
        Partition((1, 2))


def test_tableau_validation():
    Tableau(Partition((2, 1)), ((1, 1), (2,)))
    with pytest.raises(ValueError):
        Tableau(Partition((2, 1)), ((1, 1), (1,)))
    with pytest.raises(ValueError):
        Tableau(Partition((2,)), ((2, 1),))


def test_eight_tableaux_of_21():
    assert len(ssyt((2, 1), 3)) == 8
    assert schur_ssyt((2, 1), [1, 1, 1]) == 8


def test_s21_matches_expanded_polynomial():
    assert schur_ssyt((2, 1), [2, 1, 1]) == pytest.approx(s21_printed(2, 1, 1))
    assert schur_ssyt((2, 1), [2, 1, 1]) == pytest.approx(18.0)
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = rng.uniform(-1, 2, 3)
        assert schur_ssyt((2, 1), x) == pytest.approx(s21_printed(*x))


def test_single_box_and_column():
    x = [0.3, 1.7, 2.2, 0.9]
    assert schur_ssyt((1,), x) == pytest.approx(sum(x))
    assert schur_bialternant((1, 1), [1.5, 2.5]) == pytest.approx(1.5 * 2.5)
    assert schur_bialternant((), [1.5, 2.5]) == pytest.approx(1.0)
    assert schur_ssyt((1, 1, 1), x) == pytest.approx(elementary(3, x))


def test_bialternant_degenerate():
    with pytest.raises(DegenerateVariables):
        schur_bialternant((2, 1), [1.0, 1.0, 0.5])


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(0, 3), min_size=1, max_size=3),
    st.lists(st.floats(0.1, 2.0), min_size=3, max_size=3, unique=True),
)
def test_ssyt_equals_bialternant(parts, x):
    lam = Partition(tuple(sorted(parts, reverse=True)))
    if min(abs(a - b) for i, a in enumerate(x) for b in x[i + 1 :]) < 1e-3:
        return
    a = schur_ssyt(lam, x)
    b = schur_bialternant(lam, x)
    assert a == pytest.approx(b, rel=1e-8, abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.permutations([0.4, 1.1, 1.9, 0.7]))
def test_schur_is_symmetric(perm):
    ref = schur_ssyt((3, 1, 1), [0.4, 1.1, 1.9, 0.7])
    assert schur_ssyt((3, 1, 1), perm) == pytest.approx(ref, rel=1e-12)


def test_weyl_dimension_matches_principal_specialisation():
    for lam in [(2, 1), (3, 2, 1), (2, 2), (4,), (1, 1, 1)]:
        for n in (3, 4):
            assert weyl_dimension(lam, n) == round(schur_ssyt(lam, [1.0] * n))


def test_two_column_dimension_is_irrep_dimension():
    # a two-column shape with N boxes and 2S = rows of length 1 has the transposed shape (N/2+S, N/2-S)
    for d in range(1, 6):
        for n, two_s in allowed_sectors(d):
            rows = [2] * ((n - two_s) // 2) + [1] * two_s
            assert weyl_dimension(rows, d) == dim_irrep(d, two_s, n)


def test_dual_cauchy_small_cases():
    assert check_dual_cauchy(3, 2, [0, 0, 0], [0, 0]) == 0.0
    lhs, rhs = dual_cauchy_sides(1, 1, [0.7], [0.4])
    assert lhs == pytest.approx(1 + 0.28) and rhs == pytest.approx(lhs)
    rng = np.random.default_rng(0)
    x, y = rng.uniform(0, 1, 3), rng.uniform(0, 1, 2)
    lhs, _ = dual_cauchy_sides(3, 2, x, y)
    assert check_dual_cauchy(3, 2, x, y) < 1e-8 * lhs


def test_dual_pieri_examples():
    got = set(dual_pieri_expand((2, 1), 2))
    assert got == {Partition(p) for p in [(2, 1, 1, 1), (2, 2, 1), (3, 2), (3, 1, 1)]}
    assert dual_pieri_expand((), 1) == [Partition((1,))]
    assert set(dual_pieri_expand((1,), 1)) == {Partition((2,)), Partition((1, 1))}


def test_branching_examples():
    assert len(branching_interleave((3, 2, 1))) == 8
    assert set(branching_interleave((1,))) == {Partition(()), Partition((1,))}
    assert set(branching_interleave((2, 2))) == {Partition((2, 2)), Partition((2, 1)), Partition((2,))}


def test_branching_dimension_sum():
    # the U(4) irrep (3,2,1) restricted to U(3): 64 = 8+3+6+15+3+6+15+8
    dims = sorted(weyl_dimension(mu, 3) for mu in branching_interleave((3, 2, 1), 4))
    assert weyl_dimension((3, 2, 1), 4) == 64
    assert dims == sorted([8, 3, 6, 15, 3, 6, 15, 8])


def test_two_column_branching_is_shavitt_rule():
    # removing the last orbital from a two-column shape: (a, b) -> one of four predecessors
    for a in range(3):
        for b in range(3):
            lam = [2] * a + [1] * b
            n = a + b + 1
            preds = {mu for mu in branching_interleave(lam, n) if not mu.parts or mu.parts[0] <= 2}
            counts = {(list(mu.parts).count(2), list(mu.parts).count(1)) for mu in preds}
            want = {(a, b)}
            if b >= 1:
                want.add((a, b - 1))
            if a >= 1:
                want.add((a - 1, b + 1))
                want.add((a - 1, b))
            assert counts == want


def test_identity_suite_passes():
    for check in identity_suite(seed=1, trials=25):
        assert check.passed, check
