import pytest

from fittkit.grp import FiniteGroup, GroupError, find_isomorphism, make_group

BUILTINS = ["cyclic(1)", "cyclic(4)", "cyclic(6)", "dihedral(6)", "dihedral(8)", "dihedral(10)",
            "dihedral(16)", "quaternion8", "symmetric(3)", "symmetric(4)", "affine(3)", "affine(5)"]


def brute_commutator_subgroup(G):
    gens = {G.mul(G.mul(G.inv(a), G.inv(b)), G.mul(a, b)) for a in range(G.order) for b in range(G.order)}
    H = set(gens) | {G.identity}
    while True:
        new = {G.mul(x, y) for x in H for y in H} | H
        if new == H:
            return H
        H = new


@pytest.mark.parametrize("spec", BUILTINS)
def test_builtin_group_axioms_and_classes(spec):
    G = make_group(spec)
    assert sum(len(c) for c in G.conjugacy_classes()) == G.order
    for cls in G.conjugacy_classes():
        g = next(iter(cls))
        assert set(cls) == {G.mul(G.mul(x, g), G.inv(x)) for x in range(G.order)}
    assert set(G.commutator_subgroup()) == brute_commutator_subgroup(G)
    assert len(G.closure(G.generators)) == G.order


@pytest.mark.parametrize("spec,order,ncl,comm", [
    ("dihedral(6)", 6, 3, 3), ("dihedral(8)", 8, 5, 2), ("quaternion8", 8, 5, 2),
    ("symmetric(4)", 24, 5, 12), ("affine(5)", 20, 5, 5), ("cyclic(6)", 6, 6, 1),
])
def test_known_invariants(spec, order, ncl, comm):
    G = make_group(spec)
    assert (G.order, len(G.conjugacy_classes()), len(G.commutator_subgroup())) == (order, ncl, comm)


def test_isomorphism_search():
    assert find_isomorphism(make_group("symmetric(3)"), make_group("dihedral(6)")) is not None
    assert find_isomorphism(make_group("dihedral(8)"), make_group("quaternion8")) is None


def test_bad_tables_rejected():
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [1, 1]])
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1, 2], [1, 2, 0]])
    with pytest.raises(GroupError):
        make_group("frobenius(21)")
