"""Constructed exact sequences 0 -> M -> C -> C' -> M' -> 0 over commutative Z_(p)[G].

C = Lambda/(ab), C' = Lambda/(ac) and the middle map is multiplication by c,
so M' = Lambda/(ac, c) and M = L/(ab) with L = {l : c l in (ac)}.  The
Pontryagin dual of M is computed through the trace pairing tau(l m)
(tau = coefficient of the identity): M^vee is (ab)^{-1} Lambda / L^dual with
the action twisted by g -> g^{-1}, so Fitt(M^vee)^sharp = Fitt(Lambda / ab L^dual).
"""

from fittkit.grpalg import nrd
from fittkit.matlat import (
    LocalLattice,
    integral_preimage,
    lattice_combine,
    lattice_contains,
    lattice_dual,
    mat_inverse,
    mat_mul,
)
from fittkit.ncfit import GroupRingLocal, PresentationNC, fitt_presentation


def random_nonzerodivisor(order, rng, bound=2):
    while True:
        x = order.random_element(rng, bound)
        if _nzd(order, x):
            return x


def _nzd(order, x):
    return all(not v.is_zero() for v in nrd([[x]], order.data).values)


def _mult_matrix(order, z):
    return [order.to_vec(e * z) for e in order.basis()]


def four_term_sides(order: GroupRingLocal, a, b, c):
    """(Fitt(M^vee)^sharp Fitt(C'), Fitt(M') Fitt(C)) as center lattices."""
    G = order.G
    p = order.p
    n = G.order
    x, y, u = a * b, a * c, c
    Y = LocalLattice(p, n, _mult_matrix(order, y))
    W = mat_mul(_mult_matrix(order, u), mat_inverse([list(r) for r in Y.basis]))
    L = integral_preimage(W, p)
    gram = [[1 if G.mul(g, h) == G.identity else 0 for h in range(n)] for g in range(n)]
    J = lattice_dual(L, gram).transform(_mult_matrix(order, x))
    if not lattice_contains(LocalLattice.standard(p, n), J):
        raise AssertionError("x L^dual escaped Lambda")
    alg = order.centers().alg

    def fitt(rows):
        return fitt_presentation(PresentationNC(order, rows)).lattice

    f_mdual = fitt([[order.from_vec(v)] for v in J.basis])
    lhs = lattice_combine(f_mdual, fitt([[y]]), "product", alg)
    rhs = lattice_combine(fitt([[y], [u]]), fitt([[x]]), "product", alg)
    return lhs, rhs
