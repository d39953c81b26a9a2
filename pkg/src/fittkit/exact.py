"""Exact scalars: rationals, localizations of Z at a prime, cyclotomic numbers.

Integers are Python ints and rationals are :class:`fractions.Fraction`.
Elements of Z_(p) are rationals whose denominator is prime to ``p``; they
stand in for the p-adic integers everywhere in this package.  Cyclotomic
numbers live in Q(zeta_m) for one fixed conductor ``m`` per computation and
are stored in the power basis modulo the m-th cyclotomic polynomial.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"a"`` or ``"a/b"`` exactly.  Decimal literals are rejected."""
    if isinstance(text, bool):
        raise ValueError(f"not an exact rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ValueError(f"not an exact rational: {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"not an exact rational literal: {text!r} (write e.g. '1/10')")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def p_valuation(x, p: int) -> int:
    """The p-adic valuation of a nonzero rational.

    Raises ``ValueError`` for ``x == 0`` whose valuation is infinite.
    """
    x = Fraction(x)
    if x == 0:
        raise ValueError("p_valuation(0) is +infinity")
    if p < 2:
        raise ValueError(f"not a prime: {p}")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def prime_to_p_part(n: int, p: int) -> int:
    n = abs(n)
    while n and n % p == 0:
        n //= p
    return n


def is_local_integer(x, p: int) -> bool:
    """True iff ``x`` lies in Z_(p)."""
    return Fraction(x).denominator % p != 0


class LocalScalar:
    """An element of Z localized at ``p`` (denominator prime to ``p``)."""

    __slots__ = ("p", "value")

    def __init__(self, p: int, value):
        value = Fraction(value)
        if value.denominator % p == 0:
            raise ValueError(f"{value} is not in Z_({p})")
        self.p = p
        self.value = value

    def _coerce(self, other):
        if isinstance(other, LocalScalar):
            if other.p != self.p:
                raise ValueError("prime mismatch")
            return other.value
        return Fraction(other)

    def __add__(self, other):
        return LocalScalar(self.p, self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return LocalScalar(self.p, self.value - self._coerce(other))

    def __rsub__(self, other):
        return LocalScalar(self.p, self._coerce(other) - self.value)

    def __mul__(self, other):
        return LocalScalar(self.p, self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return LocalScalar(self.p, -self.value)

    def __truediv__(self, other):
        return LocalScalar(self.p, self.value / self._coerce(other))

    def __eq__(self, other):
        if isinstance(other, LocalScalar):
            return self.p == other.p and self.value == other.value
        try:
            return self.value == Fraction(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.p, self.value))

    def is_unit(self) -> bool:
        return self.value != 0 and self.value.numerator % self.p != 0

    def valuation(self) -> int:
        return p_valuation(self.value, self.p)

    def __repr__(self):
        return f"LocalScalar({self.p}, {format_rational(self.value)})"


# ---------------------------------------------------------------------------
# cyclotomic fields


def euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


def _poly_divmod(num, den):
    """Exact division of integer polynomials (lowest degree first), den monic."""
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    return q, num[: len(den) - 1]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple:
    """Coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("conductor must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            q, r = _poly_divmod(num, cyclotomic_polynomial(d))
            assert not any(r)
            num = q
    return tuple(num)


class _Context:
    """Per-conductor tables: Phi_m and reductions of zeta^j, 0 <= j < m."""

    def __init__(self, m: int):
        self.m = m
        self.phi_poly = cyclotomic_polynomial(m)
        self.n = len(self.phi_poly) - 1
        n = self.n
        # powers[j] = coefficient vector of zeta^j in the power basis
        powers = []
        vec = [0] * n
        vec[0] = 1
        for _ in range(2 * m):
            powers.append(tuple(vec))
            # multiply by zeta
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                for i in range(n):
                    vec[i] -= top * self.phi_poly[i]
        self.powers = powers[:m]
        # reduction of zeta^j for j in [n, 2n-2] used after convolution
        self.high = [powers[j] for j in range(2 * n)]
        self.units = tuple(k for k in range(1, m + 1) if gcd(k, m) == 1) if m > 1 else (1,)


@lru_cache(maxsize=None)
def context(m: int) -> _Context:
    return _Context(m)


_ZERO = Fraction(0)


class CyclotomicNumber:
    """An element of Q(zeta_m) in the reduced power basis.

    Equality is coefficient-vector equality, which is exact because the
    representation is canonical.
    """

    __slots__ = ("m", "coeffs", "_hash")

    def __init__(self, m: int, coeffs):
        ctx = context(m)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != ctx.n:
            raise ValueError(f"expected {ctx.n} coefficients for conductor {m}")
        self.m = m
        self.coeffs = coeffs
        self._hash = None

    # -- constructors --
    @classmethod
    def rational(cls, m: int, value) -> "CyclotomicNumber":
        n = context(m).n
        return cls(m, (Fraction(value),) + (_ZERO,) * (n - 1))

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "CyclotomicNumber":
        """zeta_m ** k."""
        ctx = context(m)
        return cls(m, ctx.powers[k % m])

    @classmethod
    def from_powers(cls, m: int, terms) -> "CyclotomicNumber":
        """Sum of c * zeta_m**j for (j, c) in ``terms``."""
        ctx = context(m)
        acc = [_ZERO] * ctx.n
        for j, c in terms:
            c = Fraction(c)
            if c:
                for i, v in enumerate(ctx.powers[j % m]):
                    if v:
                        acc[i] += c * v
        return cls(m, acc)

    # -- predicates --
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic --
    def _lift(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.m != self.m:
                raise ValueError(f"conductor mismatch: {self.m} vs {other.m}")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.rational(self.m, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return CyclotomicNumber(self.m, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.m, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return CyclotomicNumber(self.m, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.m, [a * other for a in self.coeffs])
        other = self._lift(other)
        if other is NotImplemented:
            return other
        ctx = context(self.m)
        n = ctx.n
        conv = [_ZERO] * (2 * n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        conv[i + j] += a * b
        out = conv[:n]
        for j in range(n, 2 * n - 1):
            c = conv[j]
            if c:
                for i, v in enumerate(ctx.high[j]):
                    if v:
                        out[i] += c * v
        return CyclotomicNumber(self.m, out)

    __rmul__ = __mul__

    def multiplication_matrix(self):
        """Rows are coordinates of self * zeta^i, i < phi(m)."""
        ctx = context(self.m)
        return [(self * CyclotomicNumber(self.m, ctx.powers[i])).coeffs for i in range(ctx.n)]

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        if self.is_rational():
            return CyclotomicNumber.rational(self.m, 1 / self.coeffs[0])
        # Solve y * M = e_0 where M is the multiplication-by-self matrix.
        from .matlat import solve_left

        M = self.multiplication_matrix()
        n = len(M)
        target = [Fraction(1)] + [_ZERO] * (n - 1)
        y = solve_left(M, target)
        return CyclotomicNumber(self.m, y)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.m, [a / other for a in self.coeffs])
        other = self._lift(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CyclotomicNumber.rational(self.m, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self.m == other.m and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.m, self.coeffs))
        return self._hash

    def __repr__(self):
        return f"CyclotomicNumber({self.m}, {str(self)})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(format_rational(c) + ("*" + mono if mono else ""))
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def trace(self) -> Fraction:
        """Absolute trace Tr_{Q(zeta_m)/Q}."""
        total = CyclotomicNumber.rational(self.m, 0)
        for k in context(self.m).units:
            total = total + galois_apply(self, GaloisElement(self.m, k))
        return total.to_rational()

    def norm(self) -> Fraction:
        total = CyclotomicNumber.rational(self.m, 1)
        for k in context(self.m).units:
            total = total * galois_apply(self, GaloisElement(self.m, k))
        return total.to_rational()


class GaloisElement:
    """sigma_k : zeta_m -> zeta_m**k with gcd(k, m) = 1."""

    __slots__ = ("m", "k")

    def __init__(self, m: int, k: int):
        k %= m
        if m > 1 and gcd(k, m) != 1:
            raise ValueError(f"{k} is not a unit modulo {m}")
        self.m = m
        self.k = k if m > 1 else 0

    def __mul__(self, other: "GaloisElement") -> "GaloisElement":
        if other.m != self.m:
            raise ValueError("conductor mismatch")
        return GaloisElement(self.m, self.k * other.k)

    def __eq__(self, other):
        return isinstance(other, GaloisElement) and (self.m, self.k) == (other.m, other.k)

    def __hash__(self):
        return hash((self.m, self.k))

    def __repr__(self):
        return f"GaloisElement({self.m}, {self.k})"


@lru_cache(maxsize=None)
def _galois_matrix(m: int, k: int):
    ctx = context(m)
    return tuple(ctx.powers[(i * k) % m] for i in range(ctx.n))


def galois_apply(x: CyclotomicNumber, sigma: GaloisElement) -> CyclotomicNumber:
    """Image of ``x`` under zeta_m -> zeta_m**k."""
    if x.m != sigma.m:
        raise ValueError(f"conductor mismatch: {x.m} vs {sigma.m}")
    rows = _galois_matrix(x.m, sigma.k)
    n = len(rows)
    out = [_ZERO] * n
    for c, row in zip(x.coeffs, rows):
        if c:
            for i, v in enumerate(row):
                if v:
                    out[i] += c * v
    return CyclotomicNumber(x.m, out)


def unit_group(m: int) -> tuple:
    """Residues k in [1, m) coprime to m (``(1,)`` when m = 1)."""
    return context(m).units


def subgroup_cosets(m: int, H) -> list:
    """Minimal representatives of the cosets of H in (Z/m)^x, sorted."""
    H = set(h % m for h in H) if m > 1 else {0}
    seen = set()
    reps = []
    for k in unit_group(m):
        key = k % m if m > 1 else 0
        if key in seen:
            continue
        reps.append(k)
        for h in H:
            seen.add((k * h) % m if m > 1 else 0)
    return reps
