"""Fitting ideals over commutative base rings.

Supported rings: Z, its localization Z_(p), residue rings Z/n and the
imaginary quadratic orders of :mod:`fittkit.morita`.  A presentation is an
a x b matrix h read as R^a -> R^b, x -> x h; the Fitting ideal is generated
by the b x b minors, and is zero when a < b.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .exact import is_local_integer, is_prime
from .matlat import IntegerLattice, LocalLattice, minors_enum, snf


class CommFitError(ValueError):
    pass


# ---------------------------------------------------------------------------
# base rings


class IntegerRing:
    name = "Z"

    def coerce(self, x):
        if isinstance(x, bool):
            raise CommFitError("bool is not an integer")
        x = Fraction(x)
        if x.denominator != 1:
            raise CommFitError(f"{x} is not an integer")
        return int(x)

    def canonical(self, gens):
        return IntegerLattice.from_generators(1, [[g] for g in gens if g])

    def unit_ideal(self):
        return self.canonical([1])

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("Z")

    def __repr__(self):
        return "Z"


class LocalRing:
    """Z localized at p."""

    def __init__(self, p):
        if not is_prime(p):
            raise CommFitError(f"{p} is not prime")
        self.p = p
        self.name = f"Z_({p})"

    def coerce(self, x):
        x = Fraction(x)
        if not is_local_integer(x, self.p):
            raise CommFitError(f"{x} is not in Z_({self.p})")
        return x

    def canonical(self, gens):
        return LocalLattice(self.p, 1, [[g] for g in gens if g])

    def unit_ideal(self):
        return self.canonical([1])

    def __eq__(self, other):
        return isinstance(other, LocalRing) and other.p == self.p

    def __hash__(self):
        return hash(("Zp", self.p))

    def __repr__(self):
        return self.name


class ResidueRing:
    """Z/n; ideals are kept as generator lists, compared by mutual generation."""

    def __init__(self, n):
        if n < 1:
            raise CommFitError("Z/n needs n >= 1")
        self.n = n
        self.name = f"Z/{n}"

    def coerce(self, x):
        x = Fraction(x)
        if x.denominator != 1:
            raise CommFitError(f"{x} is not an integer residue")
        return int(x) % self.n

    def canonical(self, gens):
        g = self.n
        for x in gens:
            g = gcd(g, int(x))
        return g

    def unit_ideal(self):
        return self.canonical([1])

    def __eq__(self, other):
        return isinstance(other, ResidueRing) and other.n == self.n

    def __hash__(self):
        return hash(("Z/n", self.n))

    def __repr__(self):
        return self.name


ZZ = IntegerRing()


# ---------------------------------------------------------------------------
# presentations and ideals


class CommPresentation:
    def __init__(self, ring, matrix):
        rows = [list(r) for r in matrix]
        if not rows or not rows[0]:
            raise CommFitError("presentation needs a >= 1 and b >= 1")
        b = len(rows[0])
        if any(len(r) != b for r in rows):
            raise CommFitError("ragged presentation matrix")
        self.ring = ring
        self.matrix = [[ring.coerce(x) for x in r] for r in rows]

    @property
    def a(self):
        return len(self.matrix)

    @property
    def b(self):
        return len(self.matrix[0])

    def __repr__(self):
        return f"CommPresentation({self.ring!r}, {self.a}x{self.b})"


class CommIdeal:
    """An ideal given by generators plus its canonical form."""

    def __init__(self, ring, generators):
        self.ring = ring
        self.generators = [ring.coerce(g) for g in generators]
        self.canonical = ring.canonical(self.generators)

    def __eq__(self, other):
        return isinstance(other, CommIdeal) and self.ring == other.ring and self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def is_zero(self):
        return not any(_nonzero(g) for g in self.generators)

    def __mul__(self, other):
        return CommIdeal(self.ring, [x * y for x in self.generators for y in other.generators])

    def contains(self, x) -> bool:
        return ideal_contains(self, x)

    def __le__(self, other):
        return all(ideal_contains(other, g) for g in self.generators)

    def __repr__(self):
        return f"CommIdeal({self.ring!r}, {describe_ideal(self)})"


def _nonzero(x):
    return not x.is_zero() if hasattr(x, "is_zero") else x != 0


def ideal_contains(I: CommIdeal, x) -> bool:
    ring = I.ring
    if isinstance(ring, ResidueRing):
        return ring.coerce(x) % I.canonical == 0
    if isinstance(ring, (IntegerRing, LocalRing)):
        from .matlat import lattice_membership
        return lattice_membership([x], I.canonical)
    return ring.ideal_contains(I.canonical, x)


def describe_ideal(I: CommIdeal) -> str:
    ring = I.ring
    c = I.canonical
    if isinstance(ring, ResidueRing):
        return f"({c}) in Z/{ring.n}"
    if isinstance(ring, IntegerRing):
        return f"{c.basis[0][0]}Z" if c.basis else "0"
    if isinstance(ring, LocalRing):
        if not c.basis:
            return "0"
        return f"{ring.p}^{_pval(c.basis[0][0], ring.p)}Z_({ring.p})"
    return ring.describe(c)


def _pval(x, p):
    from .exact import p_valuation
    return p_valuation(x, p)


def _minor_ideal(pres: CommPresentation, k: int) -> CommIdeal:
    ring = pres.ring
    if k <= 0:
        return CommIdeal(ring, [1])
    if pres.a < k:
        return CommIdeal(ring, [])
    M = pres.matrix
    if isinstance(ring, QuadLike):
        M = [[ring.to_field(x) for x in row] for row in M]
        gens = [ring.from_field(d) for d in minors_enum(M, k)]
    elif isinstance(ring, ResidueRing):
        gens = [d % ring.n for d in minors_enum(M, k)]
    else:
        gens = minors_enum(M, k)
    return CommIdeal(ring, [g for g in gens if _nonzero(g)])


class QuadLike:
    """Marker base class for quadratic-order rings (see fittkit.morita)."""


def fitting_ideal(pres: CommPresentation) -> CommIdeal:
    """Ideal of b x b minors (zero if a < b)."""
    return _minor_ideal(pres, pres.b)


def higher_fitting(pres: CommPresentation, i: int) -> CommIdeal:
    """Ideal of (b - i) x (b - i) minors; the unit ideal when i >= b."""
    if i < 0:
        raise CommFitError("higher Fitting index must be >= 0")
    return _minor_ideal(pres, pres.b - i)


def annihilator_finite(pres: CommPresentation) -> CommIdeal:
    """Ann of a finite cokernel over Z: the largest invariant factor."""
    if not isinstance(pres.ring, IntegerRing):
        raise CommFitError("annihilator_finite works over Z")
    if pres.a < pres.b:
        raise CommFitError("cokernel is infinite (fewer relations than generators)")
    diag = snf(pres.matrix)
    if any(d == 0 for d in diag):
        raise CommFitError("cokernel is infinite (zero invariant factor)")
    return CommIdeal(ZZ, [diag[-1]])


def map_entries(pres, hom) -> CommPresentation:
    """Entrywise image under a ring map.

    ``hom`` is ("localize", p) or ("reduce", n) for presentations over Z,
    or ("augment", ring) for a matrix over a group algebra (list of rows of
    GroupAlgebraElements), which lands in ``ring`` (default Z).
    """
    kind = hom[0]
    if kind == "augment":
        target = hom[1] if len(hom) > 1 else ZZ
        rows = pres.matrix if isinstance(pres, CommPresentation) else pres
        return CommPresentation(target, [[sum(x.coeffs) for x in row] for row in rows])
    if not isinstance(pres, CommPresentation):
        raise CommFitError("expected a commutative presentation")
    if kind == "localize":
        if not isinstance(pres.ring, IntegerRing):
            raise CommFitError("localization is supported from Z")
        return CommPresentation(LocalRing(hom[1]), pres.matrix)
    if kind == "reduce":
        if not isinstance(pres.ring, IntegerRing):
            raise CommFitError("reduction is supported from Z")
        return CommPresentation(ResidueRing(hom[1]), pres.matrix)
    raise CommFitError(f"unsupported ring map {hom!r}")


def image_ideal(I: CommIdeal, hom) -> CommIdeal:
    """Image of an ideal of Z under localization or reduction."""
    kind = hom[0]
    if kind == "localize":
        return CommIdeal(LocalRing(hom[1]), I.generators)
    if kind == "reduce":
        return CommIdeal(ResidueRing(hom[1]), I.generators)
    raise CommFitError(f"unsupported ring map {hom!r}")
