"""The shipped demonstrations, each a fixed exact computation."""

from __future__ import annotations

from fractions import Fraction
from importlib import resources

from .build import build_group
from .commfit import fitting_ideal
from .grp import FiniteGroup
from .grpalg import GroupAlgebraElement, WedderburnData, linear_characters, permutation_standard
from .matlat import LocalLattice, lattice_contains, local_index
from .morita import (
    EndOrder,
    MatrixOrder,
    MoritaPresentation,
    QuadraticOrder,
    hom_quotient_presentation,
    is_principal,
    morita_fitt,
    restrict_to_base,
    scalar_quotient_presentation,
)
from .commfit import ZZ
from .ncfit import (
    CongruenceHereditary,
    GroupRingLocal,
    MatrixRingLocal,
    PresentationNC,
    Sampler,
    additivity_compare,
    augmentation_ideal_presentation,
    denominator_bounds,
    describe_local_ideal,
    fitt_max_matrix,
    fitt_presentation,
    integrality_ring_bounds,
)
from .problem import ProblemError
from .report import Report

_IRREDUCIBLE = {2: 0b111, 3: 0b1011}


def _gf2_mul(a, b, n):
    mod = _IRREDUCIBLE[n]
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> n:
            a ^= mod
    return r


def affine_char2(n: int):
    """Aff(2^n) for n in {2, 3} as an explicit table plus its rational irreps.

    Element (b, a) is x -> a x + b over GF(2^n), index b + q (a - 1) with
    field elements encoded as bit vectors.
    """
    if n not in _IRREDUCIBLE:
        raise ProblemError("affine_char2 supports q = 4 and q = 8")
    q = 1 << n
    elems = [(b, a) for a in range(1, q) for b in range(q)]
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[(_gf2_mul(a1, b2, n) ^ b1, _gf2_mul(a1, a2, n))] for (b2, a2) in elems]
             for (b1, a1) in elems]
    G = FiniteGroup(table, name=f"Aff({q})")
    m = G.exponent
    action = [tuple(_gf2_mul(a, x, n) ^ b for x in range(q)) for (b, a) in elems]
    irreps = linear_characters(G, m) + [permutation_standard(G, m, lambda g: action[g], q)]
    return G, WedderburnData(G, m, irreps)


def _group(name):
    return build_group(name)


def demo_dependence_on_h(args, opts, rep: Report):
    M = MatrixRingLocal(2, 3)
    one = ((1, 0), (0, 1))
    f_id = fitt_presentation(PresentationNC(M, [[one]]))
    h = PresentationNC(M, [[((4, 1), (1, 4))], [((5, 1), (1, 5))]])
    f_h = fitt_presentation(h)
    expected = LocalLattice(3, 1, [[15], [24]])
    rep.say("order M_2(Z_(3)), module M = 0")
    rep.say(f"Fitt(id) = {describe_local_ideal(f_id.lattice)}")
    rep.say(f"Fitt(h) generated by {', '.join(str(g[0]) for g in f_h.generators)} = "
            f"{describe_local_ideal(f_h.lattice)}")
    rep.add_lattice("fitt-id", f_id.lattice, ["max-certified"])
    rep.add_lattice("fitt-h", f_h.lattice, ["equals-<15,24>" if f_h.lattice == expected else "differs"])
    rep.add_lattice("fitt-h-max", fitt_max_matrix(h), ["morita-route"])


def hereditary_presentations(p):
    C = CongruenceHereditary(p)
    M = PresentationNC(C, [[((p, 0), (0, 1))], [((0, 0), (1, 0))]])
    N = PresentationNC(C, [[((1, 0), (0, p))], [((0, p), (0, 0))]])
    quad = PresentationNC(C, [[((0, p), (1, 0))]])
    return C, M, N, quad


def demo_hereditary(args, opts, rep: Report):
    primes = [int(a) for a in args] or [2, 3, 5]
    for p in primes:
        _, M, N, quad = hereditary_presentations(p)
        res = additivity_compare(M, N, [quad])
        strict = res.product_contained and not res.equal
        rep.say(f"p = {p}: Fitt(M) Fitt(N) = {describe_local_ideal(res.product)} "
                f"{'strictly inside' if strict else 'vs'} Fitt(M + N) = {describe_local_ideal(res.direct_sum)}")
        rep.add_lattice(f"product-{p}", res.product)
        rep.add_lattice(f"direct-sum-{p}", res.direct_sum, ["strict" if strict else "not-strict"])


def demo_delta_g(args, opts, rep: Report):
    if len(args) != 2:
        raise ProblemError("usage: demo delta-g GROUP PRIME")
    G = _group(args[0])
    p = int(args[1])
    O = GroupRingLocal(G, p)
    pres = augmentation_ideal_presentation(O)
    f = fitt_presentation(pres)
    Gp = G.commutator_subgroup()
    target = GroupAlgebraElement.norm_element(G, range(G.order)) * Fraction(1, len(Gp))
    centers = O.centers()
    vals = O.data.central_values(target)
    expected = LocalLattice(p, centers.dim, [centers.coords(vals)])
    ok = f.lattice == expected
    rep.say(f"augmentation ideal of Z_({p})[{G.name}]: presentation {pres.a}x{pres.b}")
    rep.say(f"Fitt = (1/{len(Gp)}) N_G Z_({p}) in center coordinates: {'yes' if ok else 'no'}")
    rep.add_lattice("fitt", f.lattice, ["equals-(1/|G'|)N_G" if ok else "differs"])
    rep.add_lattice("expected", expected)


def _bounds_demo(rep, O, sampler, which):
    if which == "denom":
        res = denominator_bounds(O, sampler)
        lower, upper = res.lower, res.upper
    else:
        res = integrality_ring_bounds(O, sampler)
        lower, upper = res.lower, O.centers().maximal
    flag = "certified" if res.certified else "uncertified"
    contained = lattice_contains(upper, lower)
    rep.say(f"{which} for {O.name}: {flag}; lower <= upper: {contained}; "
            f"index [upper : lower] = {local_index(upper, lower)}; samples used {res.samples}")
    rep.add_lattice("lower", lower, [flag])
    rep.add_lattice("upper", upper, [flag, "lower<=upper" if contained else "lower-not-in-upper"])
    if not res.certified:
        rep.uncertified()


def _sampler(opts, default: Sampler):
    s = Sampler(default.max_size, default.coeff_bound, default.count, default.seed)
    if opts is not None:
        if opts.seed is not None:
            s.seed = opts.seed
        if opts.max_matrix_size is not None:
            s.max_size = opts.max_matrix_size
        if opts.coeff_bound is not None:
            s.coeff_bound = opts.coeff_bound
    return s


def demo_s4_denom(args, opts, rep: Report):
    O = GroupRingLocal(_group("symmetric(4)"), 2)
    _bounds_demo(rep, O, _sampler(opts, Sampler(2, 1, 20, 0)), "denom")


def demo_aff(args, opts, rep: Report):
    q = int(args[0]) if args else 4
    which = args[1] if len(args) > 1 else "denom"
    n = {4: 2, 8: 3}.get(q)
    if n is None or which not in ("denom", "intring"):
        raise ProblemError("usage: demo aff2 {4|8} [denom|intring]")
    G, data = affine_char2(n)
    O = GroupRingLocal(G, 2, data)
    _bounds_demo(rep, O, _sampler(opts, Sampler(2, 1, 20, 0)), which)


def demo_morita_sqrt_minus_5(args, opts, rep: Report):
    R = QuadraticOrder(-5)
    w = R.omega
    a = R.ideal(2, 1 + w)
    gen = is_principal(a)
    rep.say(f"a = {a} in {R.name}, norm {a.norm()}: " + ("principal" if gen else "not principal"))
    E = EndOrder(R, a)
    pres = MoritaPresentation(E, [[E.scalar(2), E.zero()], [E.zero(), E.scalar(2)]])
    f = morita_fitt(pres)
    rep.add_ideal("fitt-diag-2-2", f)
    b = R.ideal(3, 1 + w)
    lhs = morita_fitt(scalar_quotient_presentation(E, b.zbasis()))
    rhs = fitting_ideal(hom_quotient_presentation(E, b))
    rep.say(f"Fitt(Lambda / b Lambda) = Fitt_R(Hom(P, R/b)) for b = {b}: {lhs == rhs}")
    rep.add_ideal("fitt-quotient", lhs, ["equals-hom-side" if lhs == rhs else "differs"])


def demo_morita_matrix(args, opts, rep: Report):
    O = MatrixOrder(ZZ, 2)
    pres = MoritaPresentation(O, [[O.scalar(2)]])
    f = morita_fitt(pres)
    fr = fitting_ideal(restrict_to_base(pres))
    rep.say("M_2(Z), module Lambda / 2 Lambda")
    rep.add_ideal("fitt-lambda", f)
    rep.add_ideal("fitt-over-Z", fr, ["power-law" if fr == f * f else "power-law-fails"])


DEMOS = {
    "dependence_on_h": demo_dependence_on_h,
    "hereditary": demo_hereditary,
    "delta-g": demo_delta_g,
    "s4-denom": demo_s4_denom,
    "aff2": demo_aff,
    "morita-sqrt-5": demo_morita_sqrt_minus_5,
    "morita-matrix": demo_morita_matrix,
}


def shipped_problems():
    """Names of the problem files shipped in the package."""
    root = resources.files("fittkit") / "problems"
    return sorted(f.name[:-5] for f in root.iterdir() if f.name.endswith(".yaml"))


def shipped_problem_bytes(name: str) -> bytes:
    if name not in shipped_problems():
        raise ProblemError(f"no shipped problem {name!r}")
    return (resources.files("fittkit") / "problems" / f"{name}.yaml").read_bytes()


def run_demo(words, opts, digest) -> Report:
    """A builtin demo by name, or else a shipped problem file run as is."""
    name, args = words[0], list(words[1:])
    if name not in DEMOS:
        if name in shipped_problems() and not args:
            from .cli import execute
            from .problem import parse_problem
            from .report import input_digest
            data = shipped_problem_bytes(name)
            return execute(parse_problem(data), input_digest(data), opts)
        known = sorted(DEMOS) + shipped_problems()
        raise ProblemError(f"unknown demo {name!r}; available: {', '.join(known)}")
    rep = Report("demo " + " ".join(words), digest)
    DEMOS[name](args, opts, rep)
    return rep
