import random

import pytest
from hypothesis import given, settings, strategies as st

from fittkit.grp import make_group
from fittkit.grpalg import (
    GroupAlgebraElement,
    adjoint_by_fourier,
    builtin_wedderburn,
    generalized_adjoint,
    gmat_identity,
    gmat_mul,
    gmat_scale,
    gmat_transpose_sharp,
    nrd,
    random_gmat,
    reduced_charpoly,
    sharp_transform,
    zero_adjoint_formula,
)

from oracles import close, cyc_value

BUILTINS = ["cyclic(1)", "cyclic(4)", "cyclic(6)", "dihedral(6)", "dihedral(8)", "dihedral(10)",
            "dihedral(16)", "quaternion8", "symmetric(3)", "symmetric(4)", "affine(3)", "affine(5)"]


def _data(spec):
    G = make_group(spec)
    return G, builtin_wedderburn(G)


@pytest.mark.parametrize("spec", BUILTINS)
def test_wedderburn_dimension_count(spec):
    G, data = _data(spec)
    total = sum(rho.dim ** 2 * len(rho.orbit) for rho in data.irreps)
    assert total == G.order
    one = sum((e for e in data.idempotents), GroupAlgebraElement.zero(G))
    assert one == GroupAlgebraElement.scalar(G, 1)
    for e in data.idempotents:
        assert e * e == e


@pytest.mark.parametrize("spec", BUILTINS)
def test_zero_adjoint_formula(spec):
    G, data = _data(spec)
    zero = [[GroupAlgebraElement.zero(G)]]
    assert generalized_adjoint(zero, data)[0][0] == zero_adjoint_formula(G)


@pytest.mark.parametrize("spec", ["dihedral(6)", "dihedral(10)"])
def test_dihedral_nrd_sigma_plus_tau(spec):
    G, data = _data(spec)
    n = G.order // 2
    x = GroupAlgebraElement.basis(G, 1) + GroupAlgebraElement.basis(G, n)
    vals = nrd([[x]], data)
    assert [v.to_rational() for v in vals] == [2, 0, 0]


def _adjoint_law(H, data):
    G = data.group
    Hs = generalized_adjoint(H, data)
    z = data.central_element(nrd(H, data).values)
    target = gmat_scale(z, gmat_identity(G, len(H)))
    return Hs, gmat_mul(Hs, H) == target and gmat_mul(H, Hs) == target


@pytest.mark.parametrize("spec", ["dihedral(6)", "cyclic(4)", "quaternion8", "dihedral(8)"])
def test_adjoint_law_and_fourier_oracle(spec):
    G, data = _data(spec)
    rng = random.Random(spec)
    for b in (1, 2):
        for _ in range(4):
            H = random_gmat(G, b, rng)
            Hs, ok = _adjoint_law(H, data)
            assert ok
            assert Hs == adjoint_by_fourier(H, data)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["dihedral(6)", "cyclic(4)", "quaternion8"]), st.integers(0, 10 ** 6))
def test_nrd_multiplicative(spec, seed):
    G, data = _data(spec)
    rng = random.Random(seed)
    H, K = random_gmat(G, 2, rng), random_gmat(G, 2, rng)
    assert nrd(gmat_mul(H, K), data) == nrd(H, data) * nrd(K, data)


@pytest.mark.parametrize("spec", ["dihedral(6)", "cyclic(4)", "dihedral(10)"])
def test_nrd_against_numeric_determinant(spec):
    G, data = _data(spec)
    rng = random.Random(7)
    H = random_gmat(G, 1, rng)
    vals = nrd(H, data)
    for rho, v in zip(data.irreps, vals):
        M = rho.apply(H[0][0])
        num = [[cyc_value(data.m, c.coeffs) for c in row] for row in M]
        det = num[0][0] if rho.dim == 1 else num[0][0] * num[1][1] - num[0][1] * num[1][0]
        if rho.dim <= 2:
            assert close(cyc_value(data.m, v.coeffs), det)


@pytest.mark.parametrize("spec", ["dihedral(6)", "cyclic(4)"])
def test_sharp_transform_of_nrd(spec):
    G, data = _data(spec)
    rng = random.Random(3)
    for b in (1, 2):
        q = random_gmat(G, b, rng)
        assert nrd(gmat_transpose_sharp(q), data) == sharp_transform(nrd(q, data), data)


def test_charpoly_constant_term_is_nrd():
    G, data = _data("symmetric(3)")
    rng = random.Random(11)
    H = random_gmat(G, 2, rng)
    vals = nrd(H, data)
    for f, v in zip(reduced_charpoly(H, data), vals):
        deg = len(f) - 1
        assert (f[0] if deg % 2 == 0 else -f[0]) == v
