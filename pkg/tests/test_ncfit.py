import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fittkit.grp import make_group
from fittkit.grpalg import GroupAlgebraElement, gmat_mul, gmat_transpose_sharp, nrd, random_gmat
from fittkit.matlat import LocalLattice, lattice_combine, lattice_contains, local_index
from fittkit.ncfit import (
    CongruenceHereditary,
    GroupRingLocal,
    MatrixRingLocal,
    PresentationNC,
    Sampler,
    additivity_compare,
    augmentation_ideal_presentation,
    central_conductor,
    conductor_variant,
    denominator_bounds,
    dual_presentation,
    fitt_max_matrix,
    fitt_presentation,
    integrality_ring_bounds,
    join_presentations,
    sharp_lattice,
    verify_annihilation,
)

from chains import four_term_sides, random_nonzerodivisor


def Zp(p, *gens):
    return LocalLattice(p, 1, [[g] for g in gens])


def test_dependence_on_h():
    M = MatrixRingLocal(2, 3)
    f_id = fitt_presentation(PresentationNC(M, [[((1, 0), (0, 1))]]))
    h = PresentationNC(M, [[((4, 1), (1, 4))], [((5, 1), (1, 5))]])
    f_h = fitt_presentation(h)
    assert f_id.lattice == Zp(3, 1) and f_id.max_certified
    assert [g[0] for g in f_h.generators] == [15, 24]
    assert f_h.lattice == Zp(3, 15, 24) == Zp(3, 3)
    assert fitt_max_matrix(h) == Zp(3, 1)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_hereditary_non_additive(p):
    C = CongruenceHereditary(p)
    M = PresentationNC(C, [[((p, 0), (0, 1))], [((0, 0), (1, 0))]])
    N = PresentationNC(C, [[((1, 0), (0, p))], [((0, p), (0, 0))]])
    alt = PresentationNC(C, [[((0, p), (1, 0))]])
    res = additivity_compare(M, N, [alt])
    assert res.product == Zp(p, p * p)
    assert res.direct_sum == Zp(p, p)
    assert res.product_contained and not res.equal


def test_hereditary_centers():
    C = CongruenceHereditary(2)
    centers = C.centers()
    assert centers.zeta == centers.maximal == LocalLattice.standard(2, 1)
    with pytest.raises(Exception):
        C.check(((1, 1), (1, 1)))


def test_matrix_ring_additive_on_random_pairs():
    M = MatrixRingLocal(2, 3)
    rng = random.Random(5)
    for _ in range(10):
        h1 = PresentationNC(M, [[M.random_element(rng, 3)] for _ in range(2)])
        h2 = PresentationNC(M, [[M.random_element(rng, 3)]])
        assert additivity_compare(h1, h2).equal


def test_identity_presentation_is_additive():
    M = MatrixRingLocal(2, 5)
    one = PresentationNC(M, [[M.one()]])
    h = PresentationNC(M, [[((5, 0), (0, 1))]])
    assert additivity_compare(h, one).equal


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_join_and_extra_rows_only_grow(seed):
    G = make_group("dihedral(6)")
    O = GroupRingLocal(G, 3)
    rng = random.Random(seed)
    h1 = PresentationNC(O, random_gmat(G, 1, rng))
    h2 = PresentationNC(O, random_gmat(G, 1, rng))
    f1, f2 = fitt_presentation(h1).lattice, fitt_presentation(h2).lattice
    joined = fitt_presentation(join_presentations(h1, h2)).lattice
    assert lattice_contains(joined, f1 + f2)
    extra = PresentationNC(O, h1.matrix + [[O.random_element(rng, 2)]])
    assert lattice_contains(fitt_presentation(extra).lattice, f1)


def test_block_triangular_product_inclusion():
    G = make_group("cyclic(4)")
    O = GroupRingLocal(G, 2)
    rng = random.Random(2)
    alg = O.centers().alg
    for _ in range(5):
        a, b, c = (O.random_element(rng, 2) for _ in range(3))
        f1 = fitt_presentation(PresentationNC(O, [[a]])).lattice
        f3 = fitt_presentation(PresentationNC(O, [[b]])).lattice
        f2 = fitt_presentation(PresentationNC(O, [[a, c], [O.zero(), b]])).lattice
        assert lattice_contains(f2, lattice_combine(f1, f3, "product", alg))


def test_integrality_ring_s3():
    S3 = make_group("symmetric(3)")
    r3 = integrality_ring_bounds(GroupRingLocal(S3, 3), Sampler(2, 2, 40, 0))
    assert r3.certified and r3.reason == "maximal"
    r5 = integrality_ring_bounds(GroupRingLocal(S3, 5), Sampler(2, 2, 40, 0))
    assert r5.certified and r5.reason in ("maximal", "commutator")
    assert r5.lower == GroupRingLocal(S3, 5).centers().zeta


def test_denominator_s3():
    S3 = make_group("symmetric(3)")
    O3 = GroupRingLocal(S3, 3)
    d3 = denominator_bounds(O3, Sampler(2, 2, 40, 0))
    assert d3.certified and d3.upper == d3.lower == central_conductor(O3).aggregate
    O5 = GroupRingLocal(S3, 5)
    d5 = denominator_bounds(O5, Sampler(2, 2, 40, 0))
    assert d5.certified and d5.lower == O5.centers().zeta


@pytest.mark.parametrize("a", [3, 4])
def test_conductor_variant_index_dihedral(a):
    O = GroupRingLocal(make_group(f"dihedral({2 ** a})"), 2)
    cond = central_conductor(O).aggregate
    var = conductor_variant(O.centers())
    assert lattice_contains(var, cond)
    assert local_index(var, cond) == 2 ** (a - 2)


def test_conductor_is_an_ideal_of_the_maximal_center():
    O = GroupRingLocal(make_group("dihedral(8)"), 2)
    centers = O.centers()
    cond = central_conductor(O).aggregate
    prod = lattice_combine(cond, centers.maximal, "product", centers.alg)
    assert prod == cond


def test_delta_g_s3():
    G = make_group("symmetric(3)")
    O = GroupRingLocal(G, 3)
    f = fitt_presentation(augmentation_ideal_presentation(O)).lattice
    target = GroupAlgebraElement.norm_element(G) * Fraction(1, 3)
    centers = O.centers()
    expected = LocalLattice(3, centers.dim, [centers.coords(O.data.central_values(target))])
    assert f == expected


def test_dual_presentation_fitt_is_sharp():
    G = make_group("dihedral(6)")
    O = GroupRingLocal(G, 3)
    centers = O.centers()
    rng = random.Random(4)
    for b in (1, 2):
        q = PresentationNC(O, random_gmat(G, b, rng))
        f = fitt_presentation(q).lattice
        assert fitt_presentation(dual_presentation(q)).lattice == sharp_lattice(f, centers)
        assert gmat_transpose_sharp(gmat_transpose_sharp(q.matrix)) == q.matrix


@pytest.mark.parametrize("spec,p", [("cyclic(4)", 2), ("cyclic(3)", 3), ("cyclic(6)", 3)])
def test_four_term_identity(spec, p):
    O = GroupRingLocal(make_group(spec), p)
    rng = random.Random(spec)
    a, b, c = (random_nonzerodivisor(O, rng) for _ in range(3))
    lhs, rhs = four_term_sides(O, a, b, c)
    assert lhs == rhs


def test_four_term_identity_discriminates():
    O = GroupRingLocal(make_group("cyclic(4)"), 2)
    a = O.one()
    b = GroupAlgebraElement.basis(O.G, 0) * 2
    c = GroupAlgebraElement.basis(O.G, 1) + 3
    lhs, rhs = four_term_sides(O, a, b, c)
    assert lhs == rhs
    alg = O.centers().alg
    assert lattice_combine(lhs, LocalLattice(2, 4, [[2, 0, 0, 0]]), "product", alg) != rhs


def _finite_square(O, rng, b):
    while True:
        H = [[O.random_element(rng, 2) for _ in range(b)] for _ in range(b)]
        if all(not x.is_zero() for x in nrd(H, O.data).values):
            return H


def test_annihilation_by_denominator_times_fitt():
    G = make_group("symmetric(3)")
    O = GroupRingLocal(G, 3)
    centers = O.centers()
    lower = denominator_bounds(O, Sampler(1, 1, 5, 0)).lower
    rng = random.Random(9)
    for _ in range(3):
        H = _finite_square(O, rng, 1)
        pres = PresentationNC(O, H)
        f = fitt_presentation(pres).lattice
        for x in lattice_combine(lower, f, "product", centers.alg).basis:
            assert verify_annihilation(pres, list(x))


def test_denominator_lower_bound_makes_adjoints_integral():
    G = make_group("symmetric(3)")
    O = GroupRingLocal(G, 3)
    centers = O.centers()
    lower = denominator_bounds(O, Sampler(1, 1, 5, 0)).lower
    rng = random.Random(13)
    for _ in range(4):
        H1 = [[O.random_element(rng, 2)]]
        H2 = [[O.random_element(rng, 2) for _ in range(2)] for _ in range(2)]
        z = centers.alg.mul
        n1 = O.nrd_coords(H1)
        adj = O.adjoint(H2)
        for x in lower.basis:
            scalar = z(list(x), n1)
            for row in adj:
                for y in row:
                    assert O.central_times(scalar, y).is_integral_at(3)


def test_bounds_are_nested_for_s4():
    O = GroupRingLocal(make_group("symmetric(4)"), 2)
    res = denominator_bounds(O, Sampler(1, 1, 10, 0))
    assert lattice_contains(res.upper, res.lower)
    ir = integrality_ring_bounds(O, Sampler(1, 1, 10, 0))
    assert lattice_contains(O.centers().maximal, ir.lower)


def test_sampler_is_deterministic():
    O = GroupRingLocal(make_group("cyclic(4)"), 2)
    s = Sampler(2, 2, 3, 7)
    assert list(s.matrices(O)) == list(s.matrices(O))
    assert gmat_mul(next(s.matrices(O)), [[O.one()]]) == next(s.matrices(O))
