import random
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from fittkit.commfit import (
    ZZ,
    CommFitError,
    CommIdeal,
    CommPresentation,
    LocalRing,
    ResidueRing,
    annihilator_finite,
    fitting_ideal,
    higher_fitting,
    image_ideal,
    map_entries,
)

from oracles import determinantal_divisors, invariant_factors, matmul, random_unimodular


def zideal(n):
    return CommIdeal(ZZ, [n] if n else [])


def block_diag(A, B):
    a, b = len(A[0]), len(B[0])
    return [list(r) + [0] * b for r in A] + [[0] * a + list(r) for r in B]


def random_matrix(rng, rows, cols, bound=5):
    return [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]


def test_diag_2_4():
    pres = CommPresentation(ZZ, [[2, 0], [0, 4]])
    assert fitting_ideal(pres) == zideal(8)
    assert annihilator_finite(pres) == zideal(4)
    assert higher_fitting(pres, 1) == zideal(2)
    assert higher_fitting(pres, 2) == zideal(1)


def test_free_module_and_wide_presentations():
    assert fitting_ideal(CommPresentation(ZZ, [[0, 0]])) == zideal(0)
    assert fitting_ideal(CommPresentation(ZZ, [[1, 0]])).is_zero()
    with pytest.raises(CommFitError):
        annihilator_finite(CommPresentation(ZZ, [[1, 0]]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 10 ** 6))
def test_fitt_equals_last_determinantal_divisor(a, b, seed):
    rng = random.Random(seed)
    M = random_matrix(rng, a, b)
    f = fitting_ideal(CommPresentation(ZZ, M))
    expected = determinantal_divisors(M)[b - 1] if a >= b else 0
    assert f == zideal(expected)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 10 ** 6))
def test_invariance_under_unimodular_change(a, b, seed):
    rng = random.Random(seed)
    M = random_matrix(rng, a, b)
    N = matmul(matmul(random_unimodular(rng, a), M), random_unimodular(rng, b))
    for i in range(b + 1):
        assert higher_fitting(CommPresentation(ZZ, M), i) == higher_fitting(CommPresentation(ZZ, N), i)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_direct_sum_multiplicative(seed):
    rng = random.Random(seed)
    A = random_matrix(rng, rng.randint(1, 3), rng.randint(1, 2))
    B = random_matrix(rng, rng.randint(1, 3), rng.randint(1, 2))
    fa, fb = fitting_ideal(CommPresentation(ZZ, A)), fitting_ideal(CommPresentation(ZZ, B))
    assert fitting_ideal(CommPresentation(ZZ, block_diag(A, B))) == fa * fb


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_higher_chain_increasing(seed):
    rng = random.Random(seed)
    pres = CommPresentation(ZZ, random_matrix(rng, 3, 3))
    chain = [higher_fitting(pres, i) for i in range(4)]
    for small, big in zip(chain, chain[1:]):
        assert small <= big


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_fitt_inside_annihilator(seed):
    rng = random.Random(seed)
    M = random_matrix(rng, 3, 2)
    pres = CommPresentation(ZZ, M)
    inv = invariant_factors(M)
    if 0 in inv:
        return
    ann = annihilator_finite(pres)
    assert ann == zideal(inv[-1])
    assert fitting_ideal(pres) <= ann


@pytest.mark.parametrize("p", [2, 3, 5])
def test_base_change_localize_and_reduce(p):
    rng = random.Random(p)
    for _ in range(20):
        M = random_matrix(rng, 3, 2)
        pres = CommPresentation(ZZ, M)
        f = fitting_ideal(pres)
        assert fitting_ideal(map_entries(pres, ("localize", p))) == image_ideal(f, ("localize", p))
        n = p * p
        assert fitting_ideal(map_entries(pres, ("reduce", n))) == image_ideal(f, ("reduce", n))


def test_local_and_residue_rings():
    R = LocalRing(3)
    pres = CommPresentation(R, [[6, 0], [0, 5]])
    assert fitting_ideal(pres) == CommIdeal(R, [3])
    Z6 = ResidueRing(6)
    assert fitting_ideal(CommPresentation(Z6, [[4]])) == CommIdeal(Z6, [2])
    assert CommIdeal(Z6, [4]).canonical == gcd(6, 4)
    with pytest.raises(CommFitError):
        LocalRing(4)
