"""Exact matrices and lattices.

Matrices are plain lists of rows.  Entries are ints, Fractions or
CyclotomicNumbers, one kind per matrix.  Lattices come in two flavours:

* :class:`IntegerLattice` -- the Z-span of ``basis / denominator`` in Q^n,
  stored in row Hermite normal form;
* :class:`LocalLattice` -- a Z_(p)-module in Q^n, stored in a canonical
  p-local echelon form (pivots are powers of p, entries above a pivot are
  reduced to a fixed set of representatives).

Lattice equality over Z_(p) is mutual inclusion up to prime-to-p
denominators; :func:`lattice_equal_local` decides it that way and the
canonical form gives the same answer via ``==``.
"""

from __future__ import annotations

import itertools
import os
from fractions import Fraction
from math import comb, gcd

from .exact import CyclotomicNumber, p_valuation

_F0 = Fraction(0)
_F1 = Fraction(1)

DEFAULT_MINOR_CAP = 10**6


class MinorCapExceeded(ValueError):
    pass


# ---------------------------------------------------------------------------
# scalar helpers


def _zero_like(x):
    if hasattr(x, "zero_like"):
        return x.zero_like()
    if isinstance(x, CyclotomicNumber):
        return CyclotomicNumber.rational(x.m, 0)
    if isinstance(x, int):
        return 0
    return _F0


def _one_like(x):
    if hasattr(x, "one_like"):
        return x.one_like()
    if isinstance(x, CyclotomicNumber):
        return CyclotomicNumber.rational(x.m, 1)
    if isinstance(x, int):
        return 1
    return _F1


def _is_zero(x) -> bool:
    if isinstance(x, CyclotomicNumber) or hasattr(x, "zero_like"):
        return x.is_zero()
    return x == 0


def scalar_kind(M):
    """Return one of 'int', 'rational', 'cyclotomic', 'generic' (checks homogeneity).

    'generic' covers exact field-like scalars providing zero_like/one_like,
    ring operations and exact division (e.g. quadratic field elements).
    """
    kinds = set()
    m = None
    for row in M:
        for x in row:
            if isinstance(x, bool):
                raise TypeError("bool is not a scalar")
            if isinstance(x, int):
                kinds.add("int")
            elif isinstance(x, Fraction):
                kinds.add("rational")
            elif isinstance(x, CyclotomicNumber):
                kinds.add("cyclotomic")
                if m is not None and x.m != m:
                    raise ValueError("mixed conductors in one matrix")
                m = x.m
            elif hasattr(x, "zero_like"):
                kinds.add("generic")
            else:
                raise TypeError(f"unsupported scalar {x!r}")
    if "generic" in kinds:
        if kinds != {"generic"}:
            raise ValueError("matrix mixes generic and rational entries")
        return "generic"
    if "cyclotomic" in kinds:
        if kinds != {"cyclotomic"}:
            raise ValueError("matrix mixes cyclotomic and rational entries")
        return "cyclotomic"
    if "rational" in kinds:
        return "rational"
    return "int"


# ---------------------------------------------------------------------------
# basic matrix algebra


def identity(n, one=_F1):
    zero = _zero_like(one)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(M):
    return [list(col) for col in zip(*M)]


def mat_mul(A, B):
    if not A:
        return []
    if len(A[0]) != len(B):
        raise ValueError("shape mismatch in matrix product")
    Bt = transpose(B)
    out = []
    for row in A:
        new = []
        for col in Bt:
            acc = None
            for a, b in zip(row, col):
                if _is_zero(a) or _is_zero(b):
                    continue
                t = a * b
                acc = t if acc is None else acc + t
            new.append(acc if acc is not None else _zero_like(row[0] if row else b))
        out.append(new)
    return out


def vec_mat(v, M):
    n = len(M[0]) if M else 0
    out = [_F0] * n
    for c, row in zip(v, M):
        if c:
            for j, x in enumerate(row):
                if x:
                    out[j] += c * x
    return out


def rank(M) -> int:
    """Rank of a rational matrix."""
    return len(_rref(M)[1])


def _rref(M):
    A = [[Fraction(x) for x in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def solve_left(M, target):
    """Return y with y * M = target (M rational, square or tall with a solution)."""
    Mt = transpose([[Fraction(x) for x in row] for row in M])
    n = len(M)
    aug = [row + [Fraction(t)] for row, t in zip(Mt, target)]
    A, pivots = _rref(aug)
    if n in pivots:
        raise ValueError("no solution")
    y = [_F0] * n
    for i, c in enumerate(pivots):
        y[c] = A[i][-1]
    return y


def mat_inverse(M):
    n = len(M)
    aug = [[Fraction(x) for x in row] + [_F1 if i == j else _F0 for j in range(n)]
           for i, row in enumerate(M)]
    A, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in A[:n]]


def nullspace_left(M):
    """Rational basis of {y : y M = 0}."""
    Mt = transpose([[Fraction(x) for x in row] for row in M]) if M else []
    rows = len(M)
    if not Mt:
        return [[_F1 if i == j else _F0 for j in range(rows)] for i in range(rows)]
    A, pivots = _rref(Mt)
    free = [c for c in range(rows) if c not in pivots]
    basis = []
    for f in free:
        v = [_F0] * rows
        v[f] = _F1
        for i, c in enumerate(pivots):
            v[c] = -A[i][f]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# determinants and characteristic polynomials


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError("inexact division in Bareiss step")
        return q
    return a / b


def det_exact(M):
    """Determinant by Bareiss fraction-free elimination.

    Cyclotomic matrices are eliminated with one inverse per pivot instead,
    since every division there costs a linear solve.
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("det_exact needs a square matrix")
    if n == 0:
        return _F1
    kind = scalar_kind(M)
    if kind == "cyclotomic":
        return _det_field(M)
    A = [list(row) for row in M]
    one = _one_like(A[0][0])
    sign = 1
    prev = one
    for k in range(n - 1):
        if _is_zero(A[k][k]):
            swap = next((i for i in range(k + 1, n) if not _is_zero(A[i][k])), None)
            if swap is None:
                return _zero_like(one)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i = A[i]
            row_k = A[k]
            for j in range(k + 1, n):
                row_i[j] = _exact_div(row_i[j] * akk - aik * row_k[j], prev)
            row_i[k] = _zero_like(one)
        prev = akk
    d = A[n - 1][n - 1]
    return d if sign == 1 else -d


def _det_field(M):
    n = len(M)
    A = [list(row) for row in M]
    det = _one_like(A[0][0])
    for k in range(n):
        piv = next((i for i in range(k, n) if not _is_zero(A[i][k])), None)
        if piv is None:
            return _zero_like(det)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        akk = A[k][k]
        det = det * akk
        inv = akk.inverse() if isinstance(akk, CyclotomicNumber) else 1 / akk
        for i in range(k + 1, n):
            if _is_zero(A[i][k]):
                continue
            f = A[i][k] * inv
            A[i] = [x if j <= k else x - f * y for j, (x, y) in enumerate(zip(A[i], A[k]))]
    return det


def charpoly_exact(M):
    """Coefficients (lowest degree first) of det(X*I - M), via Berkowitz."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("charpoly_exact needs a square matrix")
    if n == 0:
        return [_F1]
    kind = scalar_kind(M)
    if kind == "int":
        M = [[Fraction(x) for x in row] for row in M]
    one = _one_like(M[0][0])
    zero = _zero_like(one)
    vect = [one, -M[0][0]]
    for r in range(1, n):
        R = M[r][:r]
        X = [M[i][r] for i in range(r)]
        col = [one, -M[r][r]]
        sub = [row[:r] for row in M[:r]]
        for _ in range(r):
            acc = zero
            for a, b in zip(R, X):
                acc = acc + a * b
            col.append(-acc)
            X = [sum((a * b for a, b in zip(row, X)), zero) for row in sub]
        vect = [sum((col[i - j] * vect[j] for j in range(min(i, r) + 1)), zero)
                for i in range(r + 2)]
    return list(reversed(vect))


def minor_cap() -> int:
    env = os.environ.get("FITTKIT_MINOR_CAP")
    return int(env) if env else DEFAULT_MINOR_CAP


def minors_enum(M, k: int, cap: int | None = None):
    """All k x k minors, rows-then-columns lexicographic order."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if k < 0 or k > min(rows, cols):
        raise ValueError(f"minor size {k} out of range for {rows}x{cols}")
    if k == 0:
        return [_F1]
    cap = minor_cap() if cap is None else cap
    count = comb(rows, k) * comb(cols, k)
    if count > cap:
        raise MinorCapExceeded(f"{count} minors exceed the cap {cap}")
    out = []
    for rs in itertools.combinations(range(rows), k):
        for cs in itertools.combinations(range(cols), k):
            out.append(det_exact([[M[i][j] for j in cs] for i in rs]))
    return out


# ---------------------------------------------------------------------------
# Hermite and Smith normal forms over Z


def _lcm(a, b):
    return a // gcd(a, b) * b


def clear_denominators(rows):
    d = 1
    for row in rows:
        for x in row:
            d = _lcm(d, Fraction(x).denominator)
    return d, [[int(Fraction(x) * d) for x in row] for row in rows]


def hnf_integer(rows, ncols=None):
    """Row Hermite normal form of an integer matrix (zero rows dropped)."""
    A = [list(map(int, row)) for row in rows]
    if ncols is None:
        ncols = len(A[0]) if A else 0
    r = 0
    pivots = []
    for c in range(ncols):
        # bring gcd of column c (rows >= r) to row r
        while True:
            nz = [i for i in range(r, len(A)) if A[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[i0] = A[i0], A[r]
            done = True
            for i in range(r + 1, len(A)):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    if A[i][c]:
                        done = False
            if done:
                break
        if r < len(A) and A[r][c] != 0:
            if A[r][c] < 0:
                A[r] = [-x for x in A[r]]
            for i in range(r):
                q = A[i][c] // A[r][c]
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
            pivots.append(c)
            r += 1
    return [row for row in A[:r]]


class IntegerLattice:
    """Z-span of ``basis / denominator`` inside Q^n, basis in row HNF."""

    __slots__ = ("n", "denominator", "basis")

    def __init__(self, n: int, denominator: int, basis):
        self.n = n
        self.denominator = denominator
        self.basis = tuple(tuple(row) for row in basis)

    @classmethod
    def from_generators(cls, n, rows) -> "IntegerLattice":
        rows = [list(r) for r in rows]
        for r in rows:
            if len(r) != n:
                raise ValueError("dimension mismatch")
        if not rows:
            return cls(n, 1, [])
        d, A = clear_denominators(rows)
        H = hnf_integer(A, n)
        g = d
        for row in H:
            for x in row:
                g = gcd(g, x)
        if g > 1:
            d //= g
            H = [[x // g for x in row] for row in H]
        return cls(n, d, H)

    @property
    def rank(self):
        return len(self.basis)

    def rows(self):
        return [[Fraction(x, self.denominator) for x in row] for row in self.basis]

    def __eq__(self, other):
        return (isinstance(other, IntegerLattice) and self.n == other.n
                and self.denominator == other.denominator and self.basis == other.basis)

    def __hash__(self):
        return hash((self.n, self.denominator, self.basis))

    def __contains__(self, vec):
        return lattice_membership(vec, self)

    def __repr__(self):
        return f"IntegerLattice(n={self.n}, d={self.denominator}, basis={[list(r) for r in self.basis]})"


def hnf(generators) -> IntegerLattice:
    """Canonical Z-lattice spanned by the rows of a rational matrix."""
    if not generators:
        raise ValueError("hnf needs at least one generator row (use IntegerLattice for zero)")
    return IntegerLattice.from_generators(len(generators[0]), generators)


def snf(M, transforms=False):
    """Smith normal form of an integer matrix.

    Returns the diagonal ``[d1, d2, ...]`` (length min(rows, cols), d_i | d_{i+1},
    zeros last).  With ``transforms=True`` returns ``(diag, U, V)`` with
    unimodular U, V and U*M*V equal to the diagonal matrix.
    """
    A = [list(map(int, row)) for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    U = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    V = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst -= q * row src
        A[dst] = [x - q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col dst -= q * col src
        for row in A:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            changed = False
            for i in range(t + 1, rows):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, q)
                    if A[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, cols):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, q)
                    if A[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            # divisibility of the remaining block
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            i, _ = bad
            A[t] = [x + y for x, y in zip(A[t], A[i])]
            U[t] = [x + y for x, y in zip(U[t], U[i])]
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    diag = [A[i][i] for i in range(min(rows, cols))]
    if transforms:
        return diag, U, V
    return diag


def saturation(rows):
    """Z^n intersected with the Q-span of the given rows, as an HNF basis."""
    if not rows:
        return []
    _, A = clear_denominators(rows)
    n = len(A[0])
    diag, U, V = snf(A, transforms=True)
    r = sum(1 for d in diag if d)
    # row space = span of first r rows of V^{-1}
    Vinv = mat_inverse(V)
    basis = [[int(x) for x in Vinv[i]] for i in range(r)]
    return hnf_integer(basis, n)


# ---------------------------------------------------------------------------
# p-local echelon forms


def _local_reduce(x: Fraction, pv_exp: int, p: int) -> Fraction:
    """Canonical representative of x modulo p^pv_exp * Z_(p)."""
    if x == 0:
        return _F0
    w = p_valuation(x, p)
    if w >= pv_exp:
        return _F0
    s = max(0, -w)
    y = x * p**s
    mod = p ** (pv_exp + s)
    a = (y.numerator * pow(y.denominator, -1, mod)) % mod
    return Fraction(a, p**s)


def local_echelon(rows, p: int, with_transform: bool = False):
    """Canonical Z_(p)-echelon form of the span of ``rows``.

    Returns the list of nonzero basis rows; with ``with_transform`` also a
    list of kernel vectors (a Z_(p)-basis of {y : y * rows = 0}).
    """
    A = [[Fraction(x) for x in row] for row in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    T = [[_F1 if i == j else _F0 for j in range(m)] for i in range(m)] if with_transform else None
    r = 0
    pivots = []
    for c in range(n):
        best = None
        for i in range(r, m):
            if A[i][c] != 0:
                v = p_valuation(A[i][c], p)
                if best is None or v < best[0]:
                    best = (v, i)
        if best is None:
            continue
        v, i0 = best
        A[r], A[i0] = A[i0], A[r]
        if T is not None:
            T[r], T[i0] = T[i0], T[r]
        piv = A[r][c]
        for i in range(r + 1, m):
            if A[i][c] != 0:
                f = A[i][c] / piv
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
                if T is not None:
                    T[i] = [x - f * y for x, y in zip(T[i], T[r])]
        unit = Fraction(p) ** v / piv
        if unit != 1:
            A[r] = [x * unit for x in A[r]]
            if T is not None:
                T[r] = [x * unit for x in T[r]]
        pivots.append((c, v))
        r += 1
    # reduce above pivots
    for k, (c, v) in enumerate(pivots):
        pv = A[k][c]
        for i in range(k):
            x = A[i][c]
            if x == 0:
                continue
            red = _local_reduce(x, v, p)
            q = (x - red) / pv
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[k])]
                if T is not None:
                    T[i] = [a - q * b for a, b in zip(T[i], T[k])]
    basis = [tuple(row) for row in A[:r]]
    if with_transform:
        return basis, [list(row) for row in T[r:]]
    return basis


class LocalLattice:
    """A finitely generated Z_(p)-submodule of Q^n in canonical echelon form."""

    __slots__ = ("p", "n", "basis", "_lattice")

    def __init__(self, p: int, n: int, generators=(), _canonical=False):
        self.p = p
        self.n = n
        gens = [list(g) for g in generators]
        for g in gens:
            if len(g) != n:
                raise ValueError(f"generator of length {len(g)} in dimension {n}")
        if _canonical:
            self.basis = tuple(tuple(g) for g in gens)
        else:
            self.basis = tuple(local_echelon(gens, p)) if gens else ()
        self._lattice = None

    # -- constructors --
    @classmethod
    def standard(cls, p, n):
        return cls(p, n, [[_F1 if i == j else _F0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, p, n):
        return cls(p, n, [])

    # -- properties --
    @property
    def rank(self):
        return len(self.basis)

    def is_full_rank(self):
        return self.rank == self.n

    def is_zero(self):
        return not self.basis

    def pivots(self):
        out = []
        for row in self.basis:
            c = next(j for j, x in enumerate(row) if x != 0)
            out.append((c, p_valuation(row[c], self.p)))
        return out

    @property
    def lattice(self) -> IntegerLattice:
        """A Z-lattice whose localization at p is this lattice (canonical)."""
        if self._lattice is None:
            rows = []
            for row in self.basis:
                d = 1
                for x in row:
                    den = x.denominator
                    while den % self.p == 0:
                        den //= self.p
                    d = _lcm(d, den)
                rows.append([x * d for x in row])
            self._lattice = IntegerLattice.from_generators(self.n, rows)
        return self._lattice

    def __eq__(self, other):
        return (isinstance(other, LocalLattice) and self.p == other.p and self.n == other.n
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.p, self.n, self.basis))

    def __contains__(self, vec):
        return lattice_membership(vec, self)

    def __le__(self, other):
        return lattice_contains(other, self)

    def __lt__(self, other):
        return self <= other and self != other

    def __add__(self, other):
        return lattice_combine(self, other, "sum")

    def scale(self, c) -> "LocalLattice":
        c = Fraction(c)
        return LocalLattice(self.p, self.n, [[c * x for x in row] for row in self.basis])

    def transform(self, M) -> "LocalLattice":
        """Image under the linear map v -> v * M."""
        return LocalLattice(self.p, len(M[0]), [vec_mat(row, M) for row in self.basis])

    def __repr__(self):
        return f"LocalLattice(p={self.p}, n={self.n}, basis={[[str(x) for x in r] for r in self.basis]})"


def lattice_membership(x, L) -> bool:
    """Membership of a rational vector in an IntegerLattice or LocalLattice."""
    x = [Fraction(v) for v in x]
    if isinstance(L, LocalLattice):
        if len(x) != L.n:
            raise ValueError("dimension mismatch")
        p = L.p
        for row in L.basis:
            c = next(j for j, v in enumerate(row) if v != 0)
            if x[c] == 0:
                continue
            q = x[c] / row[c]
            if q.denominator % p == 0:
                return False
            x = [a - q * b for a, b in zip(x, row)]
        return not any(x)
    if isinstance(L, IntegerLattice):
        if len(x) != L.n:
            raise ValueError("dimension mismatch")
        y = [v * L.denominator for v in x]
        for row in L.basis:
            c = next(j for j, v in enumerate(row) if v != 0)
            if y[c] == 0:
                continue
            q = y[c] / row[c]
            if q.denominator != 1:
                return False
            y = [a - q * b for a, b in zip(y, row)]
        return not any(y)
    raise TypeError(f"not a lattice: {L!r}")


def lattice_contains(big: LocalLattice, small: LocalLattice) -> bool:
    return all(lattice_membership(row, big) for row in small.basis)


def lattice_equal_local(L1: LocalLattice, L2: LocalLattice) -> bool:
    """Mutual inclusion with prime-to-p denominators."""
    if L1.p != L2.p:
        raise ValueError(f"prime mismatch: {L1.p} vs {L2.p}")
    if L1.n != L2.n:
        raise ValueError("dimension mismatch")
    return lattice_contains(L1, L2) and lattice_contains(L2, L1)


def _std_dual_of_full(L: LocalLattice) -> LocalLattice:
    """{x : x . l in Z_(p) for all l in L}, standard inner product."""
    if not L.is_full_rank():
        raise ValueError("dual needs a full-rank lattice")
    B = [list(r) for r in L.basis]
    inv = mat_inverse(transpose(B))
    return LocalLattice(L.p, L.n, inv)


def integral_preimage(W, p: int) -> LocalLattice:
    """{c in Z_(p)^k : c * W has all entries in Z_(p)} for a k x N matrix W."""
    k = len(W)
    cols = transpose(W) if W and W[0] else []
    gens = [list(c) for c in cols] + [[_F1 if i == j else _F0 for j in range(k)] for i in range(k)]
    return _std_dual_of_full(LocalLattice(p, k, gens))


def lattice_intersection(L1: LocalLattice, L2: LocalLattice) -> LocalLattice:
    if L1.p != L2.p or L1.n != L2.n:
        raise ValueError("lattices not comparable")
    if L1.is_zero() or L2.is_zero():
        return LocalLattice.zero(L1.p, L1.n)
    B1 = [list(r) for r in L1.basis]
    B2 = [list(r) for r in L2.basis]
    _, kernel = local_echelon(B1 + B2, L1.p, with_transform=True)
    gens = [vec_mat(y[: len(B1)], B1) for y in kernel]
    return LocalLattice(L1.p, L1.n, gens)


def local_index(big: LocalLattice, small: LocalLattice) -> int:
    """[big : small] (a power of p) for full-rank small contained in big."""
    if not (big.is_full_rank() and small.is_full_rank()):
        raise ValueError("index needs full-rank lattices")
    if not lattice_contains(big, small):
        raise ValueError("second lattice is not contained in the first")
    vb = sum(v for _, v in big.pivots())
    vs = sum(v for _, v in small.pivots())
    return big.p ** (vs - vb)


# ---------------------------------------------------------------------------
# commutative algebras by structure constants


class StructureAlgebra:
    """Commutative associative Q-algebra on basis e_0..e_{n-1}.

    ``constants[i][j]`` is the coordinate vector of e_i * e_j.
    """

    def __init__(self, constants, labels=None, trace_form=None, check=True):
        self.constants = [[[Fraction(x) for x in v] for v in row] for row in constants]
        self.n = len(self.constants)
        self.labels = list(labels) if labels is not None else [f"e{i}" for i in range(self.n)]
        self.trace_form = ([[Fraction(x) for x in row] for row in trace_form]
                           if trace_form is not None else None)
        if check:
            self._check()

    def _check(self):
        n = self.n
        c = self.constants
        for i in range(n):
            for j in range(n):
                if c[i][j] != c[j][i]:
                    raise ValueError(f"product not commutative on ({i}, {j})")
        basis = [[_F1 if i == j else _F0 for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.mul(self.mul(basis[i], basis[j]), basis[k]) != \
                            self.mul(basis[i], self.mul(basis[j], basis[k])):
                        raise ValueError(f"product not associative on ({i}, {j}, {k})")

    def mul(self, x, y):
        n = self.n
        out = [_F0] * n
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = a * b
                for k, v in enumerate(self.constants[i][j]):
                    if v:
                        out[k] += ab * v
        return out

    def mult_matrix(self, y):
        """Matrix T with x * y = x T."""
        n = self.n
        return [self.mul([_F1 if i == k else _F0 for k in range(n)], y) for i in range(n)]

    @classmethod
    def rationals(cls):
        return cls([[[1]]], labels=["1"], trace_form=[[1]])

    @classmethod
    def direct_sum(cls, algebras):
        n = sum(a.n for a in algebras)
        constants = [[[_F0] * n for _ in range(n)] for _ in range(n)]
        labels = []
        offset = 0
        forms = all(a.trace_form is not None for a in algebras)
        form = [[_F0] * n for _ in range(n)] if forms else None
        for a in algebras:
            for i in range(a.n):
                for j in range(a.n):
                    for k in range(a.n):
                        constants[offset + i][offset + j][offset + k] = a.constants[i][j][k]
                    if forms:
                        form[offset + i][offset + j] = a.trace_form[i][j]
            labels.extend(a.labels)
            offset += a.n
        return cls(constants, labels=labels, trace_form=form, check=False)


def lattice_combine(L1: LocalLattice, L2: LocalLattice, mode: str, alg: StructureAlgebra | None = None):
    """sum, product (under ``alg``) or conductor {x : x*L1 in L2}."""
    if L1.n != L2.n:
        raise ValueError("dimension mismatch")
    if L1.p != L2.p:
        raise ValueError("prime mismatch")
    if mode == "sum":
        return LocalLattice(L1.p, L1.n, list(L1.basis) + list(L2.basis))
    if alg is None:
        raise ValueError(f"mode {mode!r} needs a StructureAlgebra")
    if alg.n != L1.n:
        raise ValueError("algebra dimension mismatch")
    if mode == "product":
        gens = [alg.mul(a, b) for a in L1.basis for b in L2.basis]
        return LocalLattice(L1.p, L1.n, gens)
    if mode == "conductor":
        if L1.is_zero():
            return LocalLattice.standard(L1.p, L1.n)
        if not L2.is_full_rank():
            raise ValueError("conductor target must have full rank")
        B2inv = mat_inverse([list(r) for r in L2.basis])
        blocks = [mat_mul(alg.mult_matrix(l), B2inv) for l in L1.basis]
        C = [sum((blk[i] for blk in blocks), []) for i in range(L1.n)]
        if rank(C) < L1.n:
            raise ValueError("conductor is not a lattice (annihilator of L1 is nonzero)")
        colspan = LocalLattice(L1.p, L1.n, transpose(C))
        return _std_dual_of_full(colspan)
    raise ValueError(f"unknown mode {mode!r}")


def lattice_dual(L: LocalLattice, form) -> LocalLattice:
    """{x : form(x, l) in Z_(p) for all l in L}; ``form`` is a Gram matrix or an algebra."""
    if isinstance(form, StructureAlgebra):
        if form.trace_form is None:
            raise ValueError("algebra carries no trace form")
        form = form.trace_form
    if not L.is_full_rank():
        raise ValueError("dual needs a full-rank lattice")
    T = [[Fraction(x) for x in row] for row in form]
    if rank(T) < len(T):
        raise ValueError("degenerate form")
    W = mat_mul(T, transpose([list(r) for r in L.basis]))
    return LocalLattice(L.p, L.n, mat_inverse(W))
