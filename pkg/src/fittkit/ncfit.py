"""Noncommutative Fitting invariants over p-local orders.

Three kinds of order are supported:

* :class:`GroupRingLocal` -- Z_(p)[G] with Wedderburn data for Q[G];
* :class:`MatrixRingLocal` -- M_n(Z_(p));
* :class:`CongruenceHereditary` -- {[[a, b], [c, d]] in M_2(Z_(p)) : p | b}.

Every order is identified with Z_(p)^N through a fixed Z_(p)-basis, so
left submodules of Lambda^b become Z_(p)-lattices ("flattening").  Central
values live in coordinates of zeta(A): for group rings each component F_i
is coordinatised by an integral basis of its ring of integers, so the
center of a maximal order is the standard lattice; for the matrix orders
the center is Q with lattice Z_(p).

A presentation h (a x b) maps Lambda^a -> Lambda^b by x -> x h; the
invariant Fitt(h) is spanned over zeta(Lambda) (or over a certified
integrality ring) by the reduced norms of all b x b row-submatrices.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .exact import CyclotomicNumber, GaloisElement, galois_apply, is_local_integer, is_prime, p_valuation
from .grp import FiniteGroup
from .grpalg import (
    GroupAlgebraElement,
    WedderburnData,
    builtin_wedderburn,
    generalized_adjoint,
    gmat_transpose_sharp,
    nrd,
)
from .matlat import (
    LocalLattice,
    MinorCapExceeded,
    StructureAlgebra,
    det_exact,
    integral_preimage,
    lattice_combine,
    lattice_contains,
    lattice_dual,
    lattice_membership,
    local_echelon,
    local_index,
    mat_inverse,
    minor_cap,
    minors_enum,
    nullspace_left,
    saturation,
    vec_mat,
)

_F0 = Fraction(0)
_F1 = Fraction(1)


class OrderError(ValueError):
    pass


# ---------------------------------------------------------------------------
# orders


class GroupRingLocal:
    kind = "group"

    def __init__(self, G: FiniteGroup, p: int, data: WedderburnData | None = None):
        if not is_prime(p):
            raise OrderError(f"{p} is not prime")
        self.G = G
        self.p = p
        self.data = data if data is not None else builtin_wedderburn(G)
        self.rank = G.order
        self._centers = None

    @property
    def name(self):
        return f"Z_({self.p})[{self.G.name}]"

    def check(self, x):
        if not isinstance(x, GroupAlgebraElement):
            raise OrderError(f"expected a group algebra element, got {x!r}")
        if not x.is_integral_at(self.p):
            raise OrderError(f"{x} is not in {self.name}")
        return x

    def to_vec(self, x):
        return [Fraction(c) for c in x.coeffs]

    def from_vec(self, v):
        return GroupAlgebraElement(self.G, [Fraction(c) for c in v])

    def basis(self):
        return [GroupAlgebraElement.basis(self.G, g) for g in range(self.G.order)]

    def one(self):
        return GroupAlgebraElement.scalar(self.G, 1)

    def zero(self):
        return GroupAlgebraElement.zero(self.G)

    def mul(self, x, y):
        return x * y

    def random_element(self, rng, bound):
        return GroupAlgebraElement(self.G, [rng.randint(-bound, bound) for _ in range(self.G.order)])

    def nrd_coords(self, H):
        return self.centers().coords(nrd(H, self.data).values)

    def adjoint(self, H):
        return generalized_adjoint(H, self.data)

    def central_times(self, z, x):
        """z * x for z a central element given by center coordinates."""
        return self.centers().element(z) * x

    def centers(self) -> "CenterCoords":
        if self._centers is None:
            self._centers = _group_centers(self)
        return self._centers


class MatrixRingLocal:
    kind = "matrix"

    def __init__(self, n: int, p: int):
        if not is_prime(p):
            raise OrderError(f"{p} is not prime")
        if n < 1:
            raise OrderError("matrix size must be positive")
        self.n = n
        self.p = p
        self.rank = n * n
        self._centers = None

    @property
    def name(self):
        return f"M_{self.n}(Z_({self.p}))"

    def check(self, x):
        x = _as_square(x, self.n)
        for row in x:
            for v in row:
                if not is_local_integer(v, self.p):
                    raise OrderError(f"entry {v} is not in Z_({self.p})")
        return x

    def to_vec(self, x):
        return [Fraction(v) for row in x for v in row]

    def from_vec(self, v):
        n = self.n
        return tuple(tuple(Fraction(v[i * n + j]) for j in range(n)) for i in range(n))

    def basis(self):
        n = self.n
        return [self.from_vec([1 if k == idx else 0 for k in range(n * n)]) for idx in range(n * n)]

    def one(self):
        n = self.n
        return tuple(tuple(_F1 if i == j else _F0 for j in range(n)) for i in range(n))

    def zero(self):
        return tuple(tuple(_F0 for _ in range(self.n)) for _ in range(self.n))

    def mul(self, x, y):
        n = self.n
        return tuple(tuple(sum((x[i][k] * y[k][j] for k in range(n)), _F0) for j in range(n)) for i in range(n))

    def random_element(self, rng, bound):
        return self.from_vec([rng.randint(-bound, bound) for _ in range(self.rank)])

    def flatten(self, H):
        n = self.n
        rows = []
        for Hrow in H:
            for i in range(n):
                rows.append([x[i][j] for x in Hrow for j in range(n)])
        return rows

    def unflatten(self, M, rows, cols):
        n = self.n
        return [[tuple(tuple(M[r * n + i][c * n + j] for j in range(n)) for i in range(n))
                 for c in range(cols)] for r in range(rows)]

    def nrd_coords(self, H):
        return [Fraction(det_exact(self.flatten(H)))]

    def adjoint(self, H):
        M = self.flatten(H)
        d = det_exact(M)
        k = len(M)
        if d != 0:
            inv = mat_inverse(M)
            adj = [[d * x for x in row] for row in inv]
        else:
            adj = [[_F0] * k for _ in range(k)]
            for i in range(k):
                for j in range(k):
                    minor = [[M[r][c] for c in range(k) if c != j] for r in range(k) if r != i]
                    v = det_exact(minor) if k > 1 else _F1
                    adj[j][i] = v if (i + j) % 2 == 0 else -v
        return self.unflatten(adj, len(H), len(H))

    def central_times(self, z, x):
        c = Fraction(z[0])
        return tuple(tuple(c * v for v in row) for row in x)

    def centers(self) -> "CenterCoords":
        if self._centers is None:
            self._centers = _scalar_centers(self.p)
        return self._centers


class CongruenceHereditary(MatrixRingLocal):
    """{[[a, b], [c, d]] : p | b}; Z_(p)-basis E11, p*E12, E21, E22."""

    kind = "congruence"

    def __init__(self, p: int):
        super().__init__(2, p)

    @property
    def name(self):
        return f"Hered_{self.p}"

    def check(self, x):
        x = super().check(x)
        if not is_local_integer(Fraction(x[0][1]) / self.p, self.p):
            raise OrderError(f"upper-right entry {x[0][1]} is not divisible by {self.p}")
        return x

    def to_vec(self, x):
        return [Fraction(x[0][0]), Fraction(x[0][1]) / self.p, Fraction(x[1][0]), Fraction(x[1][1])]

    def from_vec(self, v):
        return ((Fraction(v[0]), Fraction(v[1]) * self.p), (Fraction(v[2]), Fraction(v[3])))


def _as_square(x, n):
    rows = tuple(tuple(Fraction(v) for v in row) for row in x)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise OrderError(f"expected a {n}x{n} matrix")
    return rows


def make_order(kind, p, G=None, n=None, data=None):
    if kind == "group":
        return GroupRingLocal(G, p, data)
    if kind == "matrix":
        return MatrixRingLocal(n, p)
    if kind == "congruence":
        return CongruenceHereditary(p)
    raise OrderError(f"unknown order kind {kind!r}")


# ---------------------------------------------------------------------------
# center coordinates


class CenterCoords:
    """zeta(A) as a StructureAlgebra with the lattices zeta(Lambda) and zeta(Lambda')."""

    def __init__(self, p, alg, zeta, maximal, labels, zeta_elements, *, group_data=None,
                 fields=None, offsets=None):
        self.p = p
        self.alg = alg
        self.zeta = zeta
        self.maximal = maximal
        self.labels = labels
        self.zeta_elements = zeta_elements   # central elements spanning zeta(Lambda)
        self.group_data = group_data
        self.fields = fields
        self.offsets = offsets
        self.dim = alg.n

    # -- conversions (group rings) --
    def coords(self, values):
        if self.fields is None:
            return [Fraction(values[0])]
        out = []
        for v, fd in zip(values, self.fields):
            out.extend(fd.coords(v))
        return out

    def values(self, vec):
        if self.fields is None:
            return (Fraction(vec[0]),)
        out = []
        for fd, off in zip(self.fields, self.offsets):
            out.append(fd.value(vec[off:off + fd.degree]))
        return tuple(out)

    def element(self, vec):
        """Central element with the given coordinates."""
        if self.fields is None:
            return Fraction(vec[0])
        return self.group_data.central_element(self.values(vec))

    def sharp_coords(self, vec):
        if self.fields is None:
            return list(vec)
        conj = GaloisElement(self.group_data.m, -1)
        return self.coords([galois_apply(v, conj) for v in self.values(vec)])

    def describe_vector(self, vec):
        return "(" + ", ".join(str(v) for v in self.values(vec)) + ")"


class FieldData:
    """Integral basis of the ring of integers of F = Q(zeta_m)^H."""

    def __init__(self, m, fixing, d, order_G):
        self.m = m
        self.fixing = tuple(fixing)
        from .exact import _galois_matrix, context

        n = context(m).n
        cols = []
        for k in self.fixing:
            Gk = _galois_matrix(m, k)
            cols.append([[Fraction(Gk[i][j]) - (1 if i == j else 0) for j in range(n)] for i in range(n)])
        if cols:
            M = [sum((c[i] for c in cols), []) for i in range(n)]
            ker = nullspace_left(M)
        else:
            ker = [[_F1 if i == j else _F0 for j in range(n)] for i in range(n)]
        basis = saturation(ker)
        self.basis_vectors = [[Fraction(x) for x in row] for row in basis]
        self.basis = [CyclotomicNumber(m, row) for row in basis]
        self.degree = len(self.basis)
        # coordinates are solved on a set of independent columns
        self._cols = _independent_columns(self.basis_vectors)
        sub = [[row[c] for c in self._cols] for row in self.basis_vectors]
        self._inv = mat_inverse(sub)
        self.structure = [[self.coords(a * b) for b in self.basis] for a in self.basis]
        hsize = len(self.fixing)
        self.trace_form = [[(a * b).trace() / hsize for b in self.basis] for a in self.basis]
        self.factor = Fraction(order_G, d)

    def coords(self, v):
        if not isinstance(v, CyclotomicNumber):
            v = CyclotomicNumber.rational(self.m, v)
        sub = [v.coeffs[c] for c in self._cols]
        out = vec_mat(sub, self._inv)
        if self.value(out) != v:
            raise OrderError(f"{v} does not lie in the character field")
        return out

    def value(self, vec):
        acc = [_F0] * len(self.basis_vectors[0])
        for c, row in zip(vec, self.basis_vectors):
            if c:
                for i, x in enumerate(row):
                    acc[i] += c * x
        return CyclotomicNumber(self.m, acc)


def _independent_columns(rows):
    current = []
    ncols = len(rows[0])
    from .matlat import rank
    for c in range(ncols):
        trial = current + [c]
        if rank([[r[j] for j in trial] for r in rows]) == len(trial):
            current = trial
            if len(current) == len(rows):
                break
    return current


def _group_centers(order: GroupRingLocal) -> CenterCoords:
    data = order.data
    G = order.G
    fields = [FieldData(data.m, rho.fixing, rho.dim, G.order) for rho in data.irreps]
    algs = []
    labels = []
    offsets = []
    off = 0
    for i, fd in enumerate(fields):
        algs.append(StructureAlgebra(fd.structure, labels=[f"c{i}.{k}" for k in range(fd.degree)],
                                     trace_form=fd.trace_form, check=False))
        labels.extend(algs[-1].labels)
        offsets.append(off)
        off += fd.degree
    alg = StructureAlgebra.direct_sum(algs)
    dim = alg.n
    p = order.p
    maximal = LocalLattice.standard(p, dim)
    class_elems = [GroupAlgebraElement.norm_element(G, cls) for cls in G.conjugacy_classes()]
    zeta_rows = []
    for cls in G.conjugacy_classes():
        vals = []
        for rho in data.irreps:
            chi = rho.character_of(cls[0])
            vals.append(chi * Fraction(len(cls), rho.dim))
        row = []
        for v, fd in zip(vals, fields):
            row.extend(fd.coords(v))
        zeta_rows.append(row)
    zeta = LocalLattice(p, dim, zeta_rows)
    centers = CenterCoords(p, alg, zeta, maximal, labels, class_elems, group_data=data,
                           fields=fields, offsets=offsets)
    centers.class_sum_coords = zeta_rows
    return centers


def _scalar_centers(p) -> CenterCoords:
    alg = StructureAlgebra.rationals()
    L = LocalLattice.standard(p, 1)
    c = CenterCoords(p, alg, L, L, ["1"], [_F1])
    c.class_sum_coords = [[_F1]]
    return c


def maximal_center(order) -> CenterCoords:
    return order.centers()


# ---------------------------------------------------------------------------
# presentations


class PresentationNC:
    """a x b matrix over an order; Lambda^a -> Lambda^b, x -> x h."""

    def __init__(self, order, matrix, check=True):
        rows = [list(r) for r in matrix]
        if not rows or not rows[0]:
            raise OrderError("presentation needs a >= 1 and b >= 1")
        b = len(rows[0])
        if any(len(r) != b for r in rows):
            raise OrderError("ragged presentation matrix")
        self.order = order
        self.matrix = [[order.check(x) for x in r] for r in rows] if check else rows

    @property
    def a(self):
        return len(self.matrix)

    @property
    def b(self):
        return len(self.matrix[0])

    def __repr__(self):
        return f"PresentationNC({self.order.name}, {self.a}x{self.b})"


@dataclass
class FittingInvariantNC:
    generators: list
    lattice: LocalLattice
    is_zero: bool
    max_certified: bool
    over_intring: bool = False


def _span_over(module_basis, gens, alg, p, dim):
    vecs = [alg.mul(z, g) for z in module_basis for g in gens]
    return LocalLattice(p, dim, vecs)


def fitt_presentation(pres: PresentationNC, intring: LocalLattice | None = None,
                      cap: int | None = None) -> FittingInvariantNC:
    """Fitt(h): span of the reduced norms of all b x b row-submatrices."""
    order = pres.order
    centers = order.centers()
    a, b = pres.a, pres.b
    if a < b:
        return FittingInvariantNC([], LocalLattice.zero(order.p, centers.dim), True, False)
    cap = minor_cap() if cap is None else cap
    if comb(a, b) > cap:
        raise MinorCapExceeded(f"{comb(a, b)} submatrices exceed the cap {cap}")
    gens = []
    for rows in itertools.combinations(range(a), b):
        gens.append(order.nrd_coords([pres.matrix[r] for r in rows]))
    base = intring.basis if intring is not None else centers.zeta.basis
    lat = _span_over(base, gens, centers.alg, order.p, centers.dim)
    return FittingInvariantNC(gens, lat, lat.is_zero(), a == b, intring is not None)


def pad_presentation(pres: PresentationNC, b: int) -> PresentationNC:
    """blockdiag(h, 1_{b - b0})."""
    order = pres.order
    extra = b - pres.b
    if extra < 0:
        raise OrderError("cannot pad to a smaller b")
    rows = [list(r) + [order.zero()] * extra for r in pres.matrix]
    for i in range(extra):
        rows.append([order.zero()] * pres.b + [order.one() if j == i else order.zero() for j in range(extra)])
    return PresentationNC(order, rows, check=False)


def join_presentations(p1: PresentationNC, p2: PresentationNC) -> PresentationNC:
    if p1.order is not p2.order:
        raise OrderError("presentations over different orders")
    b = max(p1.b, p2.b)
    q1, q2 = pad_presentation(p1, b), pad_presentation(p2, b)
    return PresentationNC(p1.order, q1.matrix + q2.matrix, check=False)


def block_diagonal_presentation(p1: PresentationNC, p2: PresentationNC) -> PresentationNC:
    order = p1.order
    z = order.zero()
    rows = [list(r) + [z] * p2.b for r in p1.matrix]
    rows += [[z] * p1.b + list(r) for r in p2.matrix]
    return PresentationNC(order, rows, check=False)


def flatten_row(order, row):
    out = []
    for x in row:
        out.extend(order.to_vec(x))
    return out


def unflatten_row(order, vec, b):
    N = order.rank
    return [order.from_vec(vec[j * N:(j + 1) * N]) for j in range(b)]


def left_span(order, rows, b):
    """Z_(p)-lattice of the left Lambda-span of the given rows of Lambda^b."""
    vecs = []
    for lam in order.basis():
        for r in rows:
            vecs.append(flatten_row(order, [order.mul(lam, x) for x in r]))
    return LocalLattice(order.p, order.rank * b, vecs)


def relation_lattice(pres: PresentationNC) -> LocalLattice:
    return left_span(pres.order, pres.matrix, pres.b)


def presentation_of_submodule(gens, order, b=None) -> PresentationNC:
    """A presentation of Lambda^b / K for K the left span of ``gens``."""
    b = len(gens[0]) if b is None else b
    lat = left_span(order, gens, b)
    if lat.is_zero():
        return PresentationNC(order, [[order.zero()] * b], check=False)
    rows = [unflatten_row(order, list(v), b) for v in lat.basis]
    return PresentationNC(order, rows, check=False)


def kernel_of_map(order, phi):
    """Rows of Lambda^b spanning the kernel of x -> x phi (phi is b x c)."""
    b = len(phi)
    images = []
    for j in range(b):
        for lam in order.basis():
            images.append(flatten_row(order, [order.mul(lam, y) for y in phi[j]]))
    _, kernel = local_echelon(images, order.p, with_transform=True)
    N = order.rank
    rows = []
    for y in kernel:
        # y indexes (j, lam_k); the kernel element is sum_k y_(j,k) lam_k in slot j
        row = [order.from_vec(y[j * N:(j + 1) * N]) for j in range(b)]
        rows.append(row)
    return rows


def presentation_of_image(order, phi) -> PresentationNC:
    """Presentation of the image of Lambda^b -> Lambda^c, x -> x phi."""
    rows = kernel_of_map(order, phi)
    if not rows:
        return PresentationNC(order, [[order.zero()] * len(phi)], check=False)
    return presentation_of_submodule(rows, order, len(phi))


def augmentation_ideal_presentation(order: GroupRingLocal) -> PresentationNC:
    """Presentation of the augmentation ideal, generated by s - 1 for generators s."""
    G = order.G
    gens = [s for s in G.generators if s != G.identity] or [G.identity]
    phi = [[GroupAlgebraElement.basis(G, s) - 1] for s in gens]
    return presentation_of_image(order, phi)


def verify_annihilation(pres: PresentationNC, x) -> bool:
    """Whether the central element x (center coordinates) kills coker(h)."""
    order = pres.order
    R = relation_lattice(pres)
    if R.rank < order.rank * pres.b:
        raise OrderError("cokernel is not finite")
    b = pres.b
    for j in range(b):
        for lam in order.basis():
            row = [order.zero()] * b
            row[j] = order.central_times(x, lam)
            if not lattice_membership(flatten_row(order, row), R):
                return False
    return True


# ---------------------------------------------------------------------------
# samplers, integrality ring, denominator ideal, conductors


@dataclass
class Sampler:
    """Seeded matrix sampler: for each size b up to max_size, ``count`` random
    b x b matrices with coordinates in [-coeff_bound, coeff_bound]."""

    max_size: int = 2
    coeff_bound: int = 2
    count: int = 40
    seed: int = 0

    def matrices(self, order):
        for b in range(1, self.max_size + 1):
            rng = random.Random(f"{self.seed}:{b}")
            for _ in range(self.count):
                yield [[order.random_element(rng, self.coeff_bound) for _ in range(b)] for _ in range(b)]


def _ring_closure(L: LocalLattice, alg: StructureAlgebra) -> LocalLattice:
    while True:
        nxt = L + lattice_combine(L, L, "product", alg)
        if nxt == L:
            return L
        L = nxt


@dataclass
class IntegralityBounds:
    lower: LocalLattice
    certified: bool
    reason: str
    samples: int


def integrality_ring_bounds(order, sampler: Sampler | None = None) -> IntegralityBounds:
    """Ring generated by zeta(Lambda) and sampled reduced norms; certified when it is
    all of zeta(Lambda'), or equals zeta(Lambda) with p not dividing |G'|."""
    sampler = sampler or Sampler()
    centers = order.centers()
    alg = centers.alg
    L = centers.zeta
    count = 0
    if centers.zeta != centers.maximal:
        for H in sampler.matrices(order):
            count += 1
            v = order.nrd_coords(H)
            if not lattice_membership(v, L):
                L = L + _span_over(centers.zeta.basis, [v], alg, order.p, centers.dim)
                L = _ring_closure(L, alg)
                if L == centers.maximal:
                    break
    if not lattice_contains(centers.maximal, L):
        raise OrderError("integrality lower bound escaped the maximal center")
    if L == centers.maximal:
        return IntegralityBounds(L, True, "maximal", count)
    if order.kind == "group" and len(order.G.commutator_subgroup()) % order.p and L == centers.zeta:
        return IntegralityBounds(L, True, "commutator", count)
    return IntegralityBounds(L, False, "uncertified", count)


@dataclass
class ConductorData:
    components: list = field(default_factory=list)   # (factor, dual lattice, component lattice)
    aggregate: LocalLattice | None = None


def central_conductor(order) -> ConductorData:
    """Jacobinski: (|G|/chi(1)) times the trace dual of the localized integers of F_i."""
    centers = order.centers()
    p = order.p
    if order.kind != "group":
        return ConductorData([], _scalar_conductor(order))
    comps = []
    gens = []
    for fd, off in zip(centers.fields, centers.offsets):
        std = LocalLattice.standard(p, fd.degree)
        dual = lattice_dual(std, fd.trace_form)
        comp = dual.scale(fd.factor)
        comps.append((fd.factor, dual, comp))
        for row in comp.basis:
            v = [_F0] * centers.dim
            v[off:off + fd.degree] = row
            gens.append(v)
    return ConductorData(comps, LocalLattice(p, centers.dim, gens))


def _scalar_conductor(order) -> LocalLattice:
    """{x in Q : x M_n(Z_(p)) in Lambda} for the matrix orders."""
    full = MatrixRingLocal(order.n, order.p)
    W = [[c for e in full.basis() for c in order.to_vec(e)]]
    return integral_preimage(W, order.p)


def conductor_variant(centers: CenterCoords) -> LocalLattice:
    """{x in zeta(Lambda') : x zeta(Lambda') in zeta(Lambda)}."""
    return lattice_combine(centers.maximal, centers.zeta, "conductor", centers.alg)


@dataclass
class DenominatorBounds:
    lower: LocalLattice
    upper: LocalLattice
    certified: bool
    conductor: LocalLattice
    variant: LocalLattice
    samples: int


def adjoint_constraint_columns(order, H):
    """Columns c with: x = sum_l t_l z_l satisfies x H* integral iff t . c integral."""
    centers = order.centers()
    Hs = order.adjoint(H)
    rows = []
    for z in centers.zeta_elements:
        vec = []
        for row in Hs:
            for y in row:
                if order.kind == "group":
                    vec.extend(order.to_vec(z * y))
                else:
                    vec.extend(order.to_vec(order.central_times([z], y)))
        rows.append(vec)
    k = len(rows)
    cols = []
    for j in range(len(rows[0])):
        col = [rows[i][j] for i in range(k)]
        if any(not is_local_integer(c, order.p) for c in col):
            cols.append(col)
    return cols


def denominator_bounds(order, sampler: Sampler | None = None) -> DenominatorBounds:
    """Lower bound F + F_zeta and upper bound cut out by sampled generalized adjoints."""
    sampler = sampler or Sampler()
    centers = order.centers()
    p = order.p
    cond = central_conductor(order).aggregate
    variant = conductor_variant(centers)
    lower = cond + variant
    k = len(centers.zeta_elements)
    Z = [list(r) for r in centers.class_sum_coords]
    ident = [[_F1 if i == j else _F0 for j in range(k)] for i in range(k)]
    D = LocalLattice(p, k, ident)
    count = 0

    def upper_from(D):
        dual = integral_preimage(_cols_matrix(D), p)
        return LocalLattice(p, centers.dim, [vec_mat(list(c), Z) for c in dual.basis])

    upper = centers.zeta
    for H in sampler.matrices(order):
        count += 1
        cols = adjoint_constraint_columns(order, H)
        if cols:
            newD = LocalLattice(p, k, list(D.basis) + cols)
            if newD != D:
                D = newD
                upper = upper_from(D)
                if upper == lower:
                    break
    if not lattice_contains(upper, lower):
        raise OrderError("denominator lower bound is not contained in the upper bound")
    return DenominatorBounds(lower, upper, upper == lower, cond, variant, count)


def _transpose(rows):
    return [list(c) for c in zip(*rows)]


def _cols_matrix(D: LocalLattice):
    """k x r matrix whose columns are the basis vectors of D."""
    return _transpose([list(r) for r in D.basis])


# ---------------------------------------------------------------------------
# duality, additivity


def dual_presentation(pres: PresentationNC) -> PresentationNC:
    """The transpose-sharp presentation of the Pontryagin dual (group rings, a = b)."""
    if pres.a != pres.b:
        raise OrderError("dual presentation needs a square matrix")
    if pres.order.kind != "group":
        raise OrderError("dual presentation is defined for group rings")
    return PresentationNC(pres.order, gmat_transpose_sharp(pres.matrix), check=False)


def sharp_lattice(L: LocalLattice, centers: CenterCoords) -> LocalLattice:
    return LocalLattice(L.p, L.n, [centers.sharp_coords(list(v)) for v in L.basis])


def fitt_max_matrix(pres: PresentationNC) -> LocalLattice:
    """Morita route over M_n(Z_(p)): ideal of nb x nb minors of the flattened matrix."""
    order = pres.order
    if order.kind != "matrix":
        raise OrderError("the Morita route applies to matrix rings")
    M = order.flatten(pres.matrix)
    k = order.n * pres.b
    if len(M) < k:
        return LocalLattice.zero(order.p, 1)
    return LocalLattice(order.p, 1, [[d] for d in minors_enum(M, k) if d])


@dataclass
class AdditivityReport:
    product: LocalLattice
    direct_sum: LocalLattice
    equal: bool
    product_contained: bool


def additivity_compare(p1: PresentationNC, p2: PresentationNC, alternatives=()) -> AdditivityReport:
    """Compare Fitt(M) Fitt(N) with the invariant of M + N.

    For M_n(Z_(p)) both sides use the Morita route (which is Fitt^max there).
    Otherwise the direct-sum side is the span of the block-diagonal
    invariant and of the invariants of any alternative presentations of
    M + N the caller supplies; each of these lies inside Fitt^max(M + N).
    """
    order = p1.order
    if p2.order is not order:
        raise OrderError("presentations over different orders")
    alg = order.centers().alg
    if order.kind == "matrix":
        f1, f2 = fitt_max_matrix(p1), fitt_max_matrix(p2)
        direct = fitt_max_matrix(block_diagonal_presentation(p1, p2))
        for alt in alternatives:
            direct = direct + fitt_max_matrix(alt)
    else:
        f1 = fitt_presentation(p1).lattice
        f2 = fitt_presentation(p2).lattice
        direct = fitt_presentation(block_diagonal_presentation(p1, p2)).lattice
        for alt in alternatives:
            direct = direct + fitt_presentation(alt).lattice
    product = lattice_combine(f1, f2, "product", alg)
    return AdditivityReport(product, direct, product == direct, lattice_contains(direct, product))


def lattice_index(big: LocalLattice, small: LocalLattice) -> int:
    return local_index(big, small)


def describe_local_ideal(L: LocalLattice) -> str:
    """p^k Z_(p) for one-dimensional lattices."""
    if L.n != 1:
        raise ValueError("one-dimensional lattice expected")
    if L.is_zero():
        return "0"
    k = p_valuation(L.basis[0][0], L.p)
    return f"{L.p}^{k} Z_({L.p})" if k else f"Z_({L.p})"
