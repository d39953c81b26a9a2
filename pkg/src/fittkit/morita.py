"""Fitting invariants of orders Morita equivalent to a commutative ring.

Base rings are Z, Z_(p) and the imaginary quadratic orders R = Z[sqrt(d)]
for d in {-1, -2, -5, -6} (each of these is the maximal order).  Two kinds
of order are handled:

* :class:`MatrixOrder` -- M_n(R) with progenerator P = R^n;
* :class:`EndOrder`    -- [[R, a], [a^-1, R]] = End_R(a + R).

The Fitting invariant of a left module M = coker(h), h an a x b matrix
acting by x -> x h, is Fitt_R(P* (x) M).  Here P* consists of row vectors
(so (R^n)^row or a^-1 + R) and P* (x) M is the cokernel of (P*)^a -> (P*)^b,
q -> q h.  Each non-principal summand J of (P*)^b is presented over R by
its Z-basis (j1, j2) together with the relations (t j2, -t j1) for t in a
Z-basis of J^-1.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import isqrt

from .commfit import (
    CommFitError,
    CommIdeal,
    CommPresentation,
    IntegerRing,
    LocalRing,
    QuadLike,
    fitting_ideal,
)
from .exact import format_rational, is_prime
from .matlat import IntegerLattice, lattice_membership, snf

SUPPORTED_D = (-1, -2, -5, -6)


class MoritaError(ValueError):
    pass


# ---------------------------------------------------------------------------
# quadratic numbers and orders


class QuadNumber:
    """a + b sqrt(d) with rational a, b."""

    __slots__ = ("d", "a", "b")

    def __init__(self, d, a=0, b=0):
        self.d = d
        self.a = Fraction(a)
        self.b = Fraction(b)

    def _lift(self, other):
        if isinstance(other, QuadNumber):
            if other.d != self.d:
                raise MoritaError("mixing different quadratic fields")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadNumber(self.d, other, 0)
        return NotImplemented

    def zero_like(self):
        return QuadNumber(self.d)

    def one_like(self):
        return QuadNumber(self.d, 1)

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def is_integral(self):
        return self.a.denominator == 1 and self.b.denominator == 1

    def conj(self):
        return QuadNumber(self.d, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def coords(self):
        return (self.a, self.b)

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadNumber(self.d, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber(self.d, -self.a, -self.b)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadNumber(self.d, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadNumber(self.d, self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadNumber(self.d, self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.d, self.a, self.b))

    def __str__(self):
        root = f"sqrt({self.d})"
        if self.b == 0:
            return format_rational(self.a)
        if self.b == 1:
            tail = root
        elif self.b == -1:
            tail = "-" + root
        else:
            tail = f"{format_rational(self.b)}*{root}"
        if self.a == 0:
            return tail
        sep = "" if tail.startswith("-") else "+"
        return f"{format_rational(self.a)}{sep}{tail}"

    def __repr__(self):
        return f"QuadNumber({self})"


class QuadraticOrder(QuadLike):
    """The maximal order Z[sqrt(d)] of Q(sqrt(d)), d in {-1, -2, -5, -6}."""

    def __init__(self, d: int):
        if d not in SUPPORTED_D:
            raise MoritaError(f"d = {d} is not a supported preset {SUPPORTED_D}")
        self.d = d
        self.name = f"Z[sqrt({d})]"

    def elem(self, a=0, b=0) -> QuadNumber:
        return QuadNumber(self.d, a, b)

    @property
    def omega(self):
        return self.elem(0, 1)

    def coerce(self, x) -> QuadNumber:
        if isinstance(x, QuadNumber):
            if x.d != self.d:
                raise CommFitError(f"{x} lies in another quadratic field")
            q = x
        elif isinstance(x, (tuple, list)) and len(x) == 2:
            q = self.elem(Fraction(x[0]), Fraction(x[1]))
        elif isinstance(x, bool):
            raise CommFitError("bool is not a ring element")
        else:
            q = self.elem(Fraction(x), 0)
        if not q.is_integral():
            raise CommFitError(f"{q} is not in {self.name}")
        return q

    def to_field(self, x):
        return x

    def from_field(self, x):
        return self.coerce(x)

    def canonical(self, gens):
        gens = [g for g in gens if not self.field(g).is_zero()]
        if not gens:
            return None
        return QuadIdeal.from_generators(self, gens)

    def field(self, x) -> QuadNumber:
        if isinstance(x, QuadNumber):
            return x
        if isinstance(x, (tuple, list)):
            return self.elem(x[0], x[1])
        return self.elem(x, 0)

    def ideal(self, *gens) -> "QuadIdeal":
        return QuadIdeal.from_generators(self, gens)

    def unit_ideal(self):
        return self.ideal(1)

    def ideal_contains(self, canonical, x) -> bool:
        x = self.field(x)
        if canonical is None:
            return x.is_zero()
        return canonical.contains(x)

    def describe(self, canonical) -> str:
        return "0" if canonical is None else str(canonical)

    def __eq__(self, other):
        return isinstance(other, QuadraticOrder) and other.d == self.d

    def __hash__(self):
        return hash(("quad", self.d))

    def __repr__(self):
        return self.name


class QuadIdeal:
    """A nonzero fractional ideal, stored as a Z-lattice in coordinates (1, sqrt(d))."""

    def __init__(self, order: QuadraticOrder, lattice: IntegerLattice):
        if lattice.rank != 2:
            raise MoritaError("the zero ideal is not allowed")
        self.order = order
        self.lattice = lattice

    @classmethod
    def from_generators(cls, order, gens) -> "QuadIdeal":
        rows = []
        for g in gens:
            g = order.field(g)
            rows.append(list(g.coords()))
            rows.append(list((g * order.omega).coords()))
        lat = IntegerLattice.from_generators(2, rows)
        if lat.rank != 2:
            raise MoritaError("the zero ideal is not allowed")
        I = cls(order, lat)
        for x in I.zbasis():
            if not I.contains(x * order.omega):
                raise MoritaError("generated lattice is not an ideal")
        return I

    def zbasis(self):
        return [self.order.elem(a, b) for a, b in self.lattice.rows()]

    def contains(self, x) -> bool:
        x = self.order.field(x)
        return lattice_membership(list(x.coords()), self.lattice)

    def coordinates(self, x):
        """Integer coordinates of x in the Z-basis; raises if x is not in the ideal."""
        x = self.order.field(x)
        (a1, b1), (a2, b2) = [v.coords() for v in self.zbasis()]
        det = a1 * b2 - a2 * b1
        c1 = (x.a * b2 - x.b * a2) / det
        c2 = (a1 * x.b - b1 * x.a) / det
        if c1.denominator != 1 or c2.denominator != 1:
            raise MoritaError(f"{x} is not in {self}")
        return [int(c1), int(c2)]

    def omega_matrix(self):
        """Matrix W with coords(sqrt(d) * y) = coords(y) W."""
        return [self.coordinates(v * self.order.omega) for v in self.zbasis()]

    def is_integral(self) -> bool:
        return self.lattice.denominator == 1

    def is_unit(self) -> bool:
        return self == self.order.unit_ideal()

    def norm(self) -> Fraction:
        (a1, b1), (a2, b2) = self.lattice.rows()
        return abs(a1 * b2 - a2 * b1)

    def conjugate(self) -> "QuadIdeal":
        return QuadIdeal.from_generators(self.order, [x.conj() for x in self.zbasis()])

    def scale(self, c) -> "QuadIdeal":
        c = self.order.field(c)
        return QuadIdeal.from_generators(self.order, [x * c for x in self.zbasis()])

    def inverse(self) -> "QuadIdeal":
        # I * conj(I) = N(I) R
        return self.conjugate().scale(Fraction(1) / self.norm())

    def __mul__(self, other):
        if not isinstance(other, QuadIdeal):
            return NotImplemented
        return QuadIdeal.from_generators(self.order, [x * y for x in self.zbasis() for y in other.zbasis()])

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.order.unit_ideal()
        for _ in range(k):
            out = out * self
        return out

    def __add__(self, other):
        return QuadIdeal.from_generators(self.order, self.zbasis() + other.zbasis())

    def __le__(self, other):
        return all(other.contains(x) for x in self.zbasis())

    def __eq__(self, other):
        return isinstance(other, QuadIdeal) and self.order == other.order and self.lattice == other.lattice

    def __hash__(self):
        return hash((self.order.d, self.lattice))

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.zbasis()) + ")"

    def __repr__(self):
        return f"QuadIdeal{self}"


def quad_ideal_arith(I: QuadIdeal, J: QuadIdeal | None = None, mode: str = "mul"):
    if mode == "mul":
        if J is None:
            raise MoritaError("mul needs two ideals")
        return I * J
    if mode == "inverse":
        return I.inverse()
    if mode == "norm":
        return I.norm()
    raise MoritaError(f"unknown mode {mode!r}")


def is_principal(I: QuadIdeal, bound: int | None = None):
    """A generator of I, or None when I is not principal.

    Scaled to an integral ideal J of norm N, a generator x has N(x) = N; the
    norm form is positive definite, so the search over |a|, |b| <= sqrt(N)
    is exhaustive.
    """
    den = I.lattice.denominator
    J = I.scale(den)
    N = int(J.norm())
    if bound is not None and bound < N:
        raise MoritaError(f"search bound {bound} is below the norm {N}")
    d = I.order.d
    for b in range(isqrt(N // -d) + 1):
        rest = N + d * b * b
        a = isqrt(rest)
        if a * a != rest:
            continue
        for sa, sb in itertools.product((a, -a), (b, -b)):
            x = I.order.elem(sa, sb)
            if J.contains(x):
                return x / den
    return None


def primes_above(order: QuadraticOrder, p: int):
    """Prime ideals of the order lying over the rational prime p."""
    if not is_prime(p):
        raise MoritaError(f"{p} is not prime")
    d = order.d
    roots = [r for r in range(p) if (r * r - d) % p == 0]
    if not roots:
        return [order.ideal(p)]
    return [order.ideal(p, order.elem(-r, 1)) for r in roots]


# ---------------------------------------------------------------------------
# orders Morita equivalent to the base ring


def _base_zero(ring):
    return ring.elem(0) if isinstance(ring, QuadraticOrder) else Fraction(0)


def _base_one(ring):
    return ring.elem(1) if isinstance(ring, QuadraticOrder) else Fraction(1)


def _to_base(ring, x):
    """Element of the fraction field of the base ring."""
    if isinstance(ring, QuadraticOrder):
        return ring.field(x)
    return Fraction(x)


class MatrixOrder:
    """M_n(R) with progenerator R^n; P* is R^n as row vectors."""

    kind = "matrix"

    def __init__(self, base, n: int):
        if n < 1:
            raise MoritaError("matrix size must be positive")
        self.base = base
        self.n = n
        self.dual_summands = [None] * n

    @property
    def name(self):
        return f"M_{self.n}({self.base!r})"

    def check(self, x):
        rows = tuple(tuple(_to_base(self.base, v) for v in row) for row in x)
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise MoritaError(f"expected a {self.n}x{self.n} matrix")
        for row in rows:
            for v in row:
                self.base.coerce(v)
        return rows

    def zero(self):
        z = _base_zero(self.base)
        return tuple(tuple(z for _ in range(self.n)) for _ in range(self.n))

    def one(self):
        z, o = _base_zero(self.base), _base_one(self.base)
        return tuple(tuple(o if i == j else z for j in range(self.n)) for i in range(self.n))

    def scalar(self, c):
        c = _to_base(self.base, c)
        z = _base_zero(self.base)
        return tuple(tuple(c if i == j else z for j in range(self.n)) for i in range(self.n))

    def random_element(self, rng, bound):
        return self.check([[_random_base(self.base, rng, bound) for _ in range(self.n)] for _ in range(self.n)])


class EndOrder:
    """[[R, a], [a^-1, R]], the endomorphism ring of P = a + R (column vectors).

    P is isomorphic to R + a; the summand order matches the matrix shape.
    P* = Hom_R(P, R) is a^-1 + R as row vectors.
    """

    kind = "end"

    def __init__(self, base: QuadraticOrder, ideal: QuadIdeal):
        if not isinstance(base, QuadraticOrder):
            raise MoritaError("EndOrder needs a quadratic base order")
        if not ideal.is_integral():
            raise MoritaError("the ideal a must be integral")
        self.base = base
        self.n = 2
        self.ideal = ideal
        self.ideal_inv = ideal.inverse()
        unit = base.unit_ideal()
        self.entry_ideals = ((unit, ideal), (self.ideal_inv, unit))
        self.dual_summands = [self.ideal_inv, None]

    @property
    def name(self):
        return f"End({self.base!r}; {self.ideal})"

    def check(self, x):
        rows = tuple(tuple(self.base.field(v) for v in row) for row in x)
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise MoritaError("expected a 2x2 matrix")
        for i in range(2):
            for j in range(2):
                if not self.entry_ideals[i][j].contains(rows[i][j]):
                    raise MoritaError(f"entry ({i}, {j}) = {rows[i][j]} is not in {self.entry_ideals[i][j]}")
        return rows

    def zero(self):
        z = self.base.elem(0)
        return ((z, z), (z, z))

    def one(self):
        return self.scalar(1)

    def scalar(self, c):
        c = self.base.field(c)
        z = self.base.elem(0)
        return ((c, z), (z, c))

    def random_element(self, rng, bound):
        out = []
        for i in range(2):
            row = []
            for j in range(2):
                basis = self.entry_ideals[i][j].zbasis()
                row.append(sum((rng.randint(-bound, bound) * v for v in basis), self.base.elem(0)))
            out.append(row)
        return self.check(out)


def _random_base(ring, rng, bound):
    if isinstance(ring, QuadraticOrder):
        return ring.elem(rng.randint(-bound, bound), rng.randint(-bound, bound))
    return Fraction(rng.randint(-bound, bound))


class MoritaPresentation:
    """a x b matrix over a MatrixOrder or EndOrder; Lambda^a -> Lambda^b, x -> x h."""

    def __init__(self, order, matrix):
        rows = [list(r) for r in matrix]
        if not rows or not rows[0]:
            raise MoritaError("presentation needs a >= 1 and b >= 1")
        b = len(rows[0])
        if any(len(r) != b for r in rows):
            raise MoritaError("ragged presentation matrix")
        self.order = order
        self.matrix = [[order.check(x) for x in r] for r in rows]

    @property
    def a(self):
        return len(self.matrix)

    @property
    def b(self):
        return len(self.matrix[0])

    def __repr__(self):
        return f"MoritaPresentation({self.order.name}, {self.a}x{self.b})"


def block_diagonal(p1: MoritaPresentation, p2: MoritaPresentation) -> MoritaPresentation:
    order = p1.order
    z = order.zero()
    rows = [list(r) + [z] * p2.b for r in p1.matrix]
    rows += [[z] * p1.b + list(r) for r in p2.matrix]
    return MoritaPresentation(order, rows)


# ---------------------------------------------------------------------------
# R-presentations of quotients of sums of ideals


def _summand_generators(ring, J):
    """R-generators of a summand (None or the unit ideal means R itself)."""
    if J is None or (isinstance(J, QuadIdeal) and J.is_unit()):
        return [_base_one(ring)]
    return J.zbasis()


def _summand_kernel(ring, J):
    """Relations among the generators of J, as rows of length len(generators)."""
    if J is None or (isinstance(J, QuadIdeal) and J.is_unit()):
        return []
    j1, j2 = J.zbasis()
    return [[t * j2, -(t * j1)] for t in J.inverse().zbasis()]


def _summand_coords(ring, J, x):
    if J is None or (isinstance(J, QuadIdeal) and J.is_unit()):
        return [x]
    return [ring.elem(c) for c in J.coordinates(x)]


def present_quotient(ring, summands, relations) -> CommPresentation:
    """R-presentation of (J_1 + ... + J_k) / (R-span of the given vectors).

    Each vector has k entries in the fraction field with entry s in J_s.
    """
    rows = []
    widths = [len(_summand_generators(ring, J)) for J in summands]
    offsets = [sum(widths[:s]) for s in range(len(summands))]
    total = sum(widths)
    zero = _base_zero(ring)
    for s, J in enumerate(summands):
        for rel in _summand_kernel(ring, J):
            row = [zero] * total
            row[offsets[s]:offsets[s] + widths[s]] = rel
            rows.append(row)
    for vec in relations:
        row = []
        for s, J in enumerate(summands):
            row.extend(_summand_coords(ring, J, vec[s]))
        rows.append(row)
    if not rows:
        rows = [[zero] * total]
    return CommPresentation(ring, rows)


def _dual_relations(pres: MoritaPresentation):
    """Images q h of the R-generators q of (P*)^a, as vectors in (P*)^b."""
    order = pres.order
    n = order.n
    out = []
    for row in pres.matrix:
        for t, J in enumerate(order.dual_summands):
            for g in _summand_generators(order.base, J):
                out.append([g * x[t][s] for x in row for s in range(n)])
    return out


def transport_presentation(pres: MoritaPresentation) -> CommPresentation:
    """An R-presentation of P* (x) coker(h)."""
    order = pres.order
    summands = order.dual_summands * pres.b
    return present_quotient(order.base, summands, _dual_relations(pres))


def morita_fitt(pres: MoritaPresentation) -> CommIdeal:
    return fitting_ideal(transport_presentation(pres))


def scalar_quotient_presentation(order, ideal_gens) -> MoritaPresentation:
    """Lambda / (b Lambda) as a 1-column presentation with rows t * 1."""
    return MoritaPresentation(order, [[order.scalar(t)] for t in ideal_gens])


def hom_quotient_presentation(order, b_ideal) -> CommPresentation:
    """R-presentation of Hom_R(P, R/b) = P* / b P*.

    ``b_ideal`` is a QuadIdeal over a quadratic base, or a nonzero integer
    (the ideal bZ) over Z or Z_(p).
    """
    ring = order.base
    rels = []
    k = len(order.dual_summands)
    for s, J in enumerate(order.dual_summands):
        if isinstance(ring, QuadraticOrder):
            JB = b_ideal if J is None else J * b_ideal
            gens = JB.zbasis()
        else:
            gens = [Fraction(b_ideal)]
        for g in gens:
            vec = [_base_zero(ring)] * k
            vec[s] = g
            rels.append(vec)
    return present_quotient(ring, order.dual_summands, rels)


def twisted_presentation(pres: CommPresentation, a_ideal: QuadIdeal) -> CommPresentation:
    """An R-presentation of a (x) coker(h) = a^b / (rows of h times a)."""
    ring = pres.ring
    rels = [[g * x for x in row] for row in pres.matrix for g in a_ideal.zbasis()]
    return present_quotient(ring, [a_ideal] * pres.b, rels)


def twist_check(pres: CommPresentation, a_ideal: QuadIdeal) -> bool:
    """True iff tensoring with a leaves the Fitting ideal unchanged."""
    return fitting_ideal(twisted_presentation(pres, a_ideal)) == fitting_ideal(pres)


def restrict_to_base(pres: MoritaPresentation) -> CommPresentation:
    """coker(h) over M_n(R) viewed as an R-module (Lambda is free on the E_kl)."""
    order = pres.order
    if order.kind != "matrix":
        raise MoritaError("restriction to the base ring needs a matrix order")
    n = order.n
    zero = _base_zero(order.base)
    rows = []
    for hrow in pres.matrix:
        for k in range(n):
            for l in range(n):
                out = []
                for x in hrow:
                    for k2 in range(n):
                        for s in range(n):
                            out.append(x[l][s] if k2 == k else zero)
                rows.append(out)
    return CommPresentation(order.base, rows)


def ideal_power(I: CommIdeal, k: int) -> CommIdeal:
    out = CommIdeal(I.ring, [1])
    for _ in range(k):
        out = out * I
    return out


# ---------------------------------------------------------------------------
# independent oracle: finite modules as abelian groups


def _summand_z_data(ring, J):
    """Z-basis size and the action matrix of sqrt(d) on a summand."""
    if isinstance(ring, QuadraticOrder):
        I = ring.unit_ideal() if J is None else J
        return I, I.omega_matrix()
    return None, None


def _z_coords(ring, J, x):
    if isinstance(ring, QuadraticOrder):
        I = ring.unit_ideal() if J is None else J
        return I.coordinates(x)
    x = Fraction(x)
    if x.denominator != 1:
        raise MoritaError("the oracle needs integer entries over Z")
    return [int(x)]


def _z_generators(ring, J):
    if isinstance(ring, QuadraticOrder):
        return (ring.unit_ideal() if J is None else J).zbasis()
    return [Fraction(1)]


def z_module(ring, summands, relations_over_r):
    """(J_1 + ... + J_k) / R-span(relations) as Z^m / L with the sqrt(d) action.

    Returns (relation rows over Z, action matrix or None).
    """
    blocks = [_summand_z_data(ring, J) for J in summands]
    m = sum(len(_z_generators(ring, J)) for J in summands)
    omega = None
    if isinstance(ring, QuadraticOrder):
        omega = [[0] * m for _ in range(m)]
        off = 0
        for _, W in blocks:
            for i in range(2):
                for j in range(2):
                    omega[off + i][off + j] = W[i][j]
            off += 2
    multipliers = [1] if omega is None else [ring.elem(1), ring.omega]
    rows = []
    for vec in relations_over_r:
        for c in multipliers:
            row = []
            for s, J in enumerate(summands):
                row.extend(_z_coords(ring, J, c * vec[s]))
            rows.append(row)
    return rows, omega, m


def _act(y, u, v, omega):
    if omega is None:
        return [u * c for c in y]
    yw = [sum(y[i] * omega[i][j] for i in range(len(y))) for j in range(len(y))]
    return [u * a + v * b for a, b in zip(y, yw)]


def finite_module_fitt(ring, z_rows, omega, m, cap: int = 200000) -> CommIdeal:
    """Fitting ideal of a finite R-module by enumerating its primary parts.

    Over a Dedekind ring the Fitting ideal of a torsion module is the product
    of P^length(M_P); lengths are read off from element counts.
    """
    if m == 0:
        return CommIdeal(ring, [1])
    if not z_rows:
        return CommIdeal(ring, [])
    diag, U, V = snf(z_rows, transforms=True)
    diag = diag + [0] * (m - len(diag))
    if any(x == 0 for x in diag):
        return CommIdeal(ring, [])
    order = 1
    for x in diag:
        order *= x
    if order == 1:
        return CommIdeal(ring, [1])
    if order > cap:
        raise MoritaError(f"module of order {order} exceeds the enumeration cap")
    from .matlat import mat_inverse
    Vinv = [[int(x) for x in row] for row in mat_inverse(V)]

    def is_zero(y):
        c = [sum(y[i] * V[i][j] for i in range(m)) for j in range(m)]
        return all(cj % dj == 0 for cj, dj in zip(c, diag))

    elements = []
    for cs in itertools.product(*[range(x) for x in diag]):
        elements.append([sum(cs[i] * Vinv[i][j] for i in range(m)) for j in range(m)])

    primes = sorted({q for q in range(2, order + 1) if order % q == 0 and is_prime(q)})
    if isinstance(ring, IntegerRing) or isinstance(ring, LocalRing):
        gens = [order]
        return CommIdeal(ring, gens)
    result = ring.unit_ideal()
    for q in primes:
        e = 0
        t = order
        while t % q == 0:
            t //= q
            e += 1
        for P in primes_above(ring, q):
            Pk = P ** (2 * e)
            kill = [g.coords() for g in Pk.zbasis()]
            count = sum(1 for y in elements
                        if all(is_zero(_act(y, int(u), int(v), omega)) for u, v in kill))
            np_ = int(P.norm())
            length = 0
            while count > 1:
                if count % np_:
                    raise MoritaError("primary part size is not a power of the residue field size")
                count //= np_
                length += 1
            result = result * (P ** length)
    return CommIdeal(ring, result.zbasis())


def oracle_morita_fitt(pres: MoritaPresentation) -> CommIdeal:
    """Fitt of P* (x) coker(h) computed by enumeration over Z."""
    order = pres.order
    summands = order.dual_summands * pres.b
    rels = []
    for row in pres.matrix:
        for t, J in enumerate(order.dual_summands):
            for g in _z_generators(order.base, J):
                rels.append([g * x[t][s] for x in row for s in range(order.n)])
    z_rows, omega, m = z_module(order.base, summands, rels)
    return finite_module_fitt(order.base, z_rows, omega, m)


def oracle_comm_fitt(pres: CommPresentation) -> CommIdeal:
    """Fitt of coker(h) over Z or a quadratic order, by enumeration."""
    ring = pres.ring
    summands = [None] * pres.b
    z_rows, omega, m = z_module(ring, summands, pres.matrix)
    return finite_module_fitt(ring, z_rows, omega, m)


def oracle_hom_quotient(order, b_ideal) -> CommIdeal:
    ring = order.base
    rels = []
    k = len(order.dual_summands)
    for s, J in enumerate(order.dual_summands):
        gens = ((b_ideal if J is None else J * b_ideal).zbasis()
                if isinstance(ring, QuadraticOrder) else [Fraction(b_ideal)])
        for g in gens:
            vec = [_base_zero(ring)] * k
            vec[s] = g
            rels.append(vec)
    z_rows, omega, m = z_module(ring, order.dual_summands, rels)
    return finite_module_fitt(ring, z_rows, omega, m)


def annihilates(pres: MoritaPresentation, x) -> bool:
    """Does the central element x kill coker(h) (checked over a Z-basis of Lambda^b)?"""
    order = pres.order
    ring = order.base
    n = order.n
    ent = _entry_zbases(order)
    # Z-basis of Lambda: matrix units scaled by Z-bases of the entry ideals
    zero = _base_zero(ring)

    def unit(i, j, g):
        return tuple(tuple(g if (r, c) == (i, j) else zero for c in range(n)) for r in range(n))

    lam_basis = [unit(i, j, g) for i in range(n) for j in range(n) for g in ent[i][j]]

    def mul(A, B):
        return tuple(tuple(sum((A[i][k] * B[k][j] for k in range(n)), zero) for j in range(n))
                     for i in range(n))

    def flat(row):
        out = []
        for X in row:
            for i in range(n):
                for j in range(n):
                    out.extend(_entry_coords(order, i, j, X[i][j]))
        return out

    rel_rows = []
    for hrow in pres.matrix:
        for lam in lam_basis:
            rel_rows.append(flat([mul(lam, X) for X in hrow]))
    L = IntegerLattice.from_generators(len(rel_rows[0]), rel_rows)
    xs = _to_base(ring, x)
    z = order.zero()
    for pos in range(pres.b):
        for lam in lam_basis:
            row = [z] * pres.b
            row[pos] = tuple(tuple(xs * v for v in r) for r in lam)
            if not lattice_membership(flat(row), L):
                return False
    return True


def _entry_zbases(order):
    ring = order.base
    n = order.n
    if isinstance(ring, QuadraticOrder):
        if order.kind == "end":
            return [[order.entry_ideals[i][j].zbasis() for j in range(2)] for i in range(2)]
        unit = ring.unit_ideal().zbasis()
        return [[unit for _ in range(n)] for _ in range(n)]
    if isinstance(ring, IntegerRing):
        return [[[Fraction(1)] for _ in range(n)] for _ in range(n)]
    raise MoritaError("annihilation check needs a base ring of Z or a quadratic order")


def _entry_coords(order, i, j, v):
    ring = order.base
    if isinstance(ring, QuadraticOrder):
        I = order.entry_ideals[i][j] if order.kind == "end" else ring.unit_ideal()
        return I.coordinates(v)
    return [v]

