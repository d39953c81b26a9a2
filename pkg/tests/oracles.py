"""Independent brute-force oracles shared by the tests.

Nothing here calls into fittkit; each routine uses a different method from
the library code it checks.
"""

import cmath
import itertools
from fractions import Fraction
from math import gcd


def leibniz_det(M):
    n = len(M)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inv % 2 else 1)
        for i in range(n):
            term *= M[i][perm[i]]
            if not term:
                break
        total += term
    return total


def all_minors(M, k):
    rows, cols = len(M), len(M[0])
    for R in itertools.combinations(range(rows), k):
        for C in itertools.combinations(range(cols), k):
            yield leibniz_det([[M[i][j] for j in C] for i in R])


def determinantal_divisors(M):
    """d_k = gcd of the k x k minors of an integer matrix, k = 1..min(rows, cols)."""
    out = []
    for k in range(1, min(len(M), len(M[0])) + 1):
        g = 0
        for d in all_minors(M, k):
            g = gcd(g, int(d))
        out.append(g)
    return out


def invariant_factors(M):
    ds = determinantal_divisors(M)
    out, prev = [], 1
    for d in ds:
        out.append(d // prev if prev else 0)
        prev = d if d else 0
    return out


def cyc_value(m, coeffs):
    z = cmath.exp(2j * cmath.pi / m)
    return sum(complex(c) * z ** i for i, c in enumerate(coeffs))


def close(a, b, tol=1e-8):
    return abs(a - b) <= tol * (1 + abs(a) + abs(b))


def random_unimodular(rng, n, steps=6, bound=2):
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-bound, bound)
        for k in range(n):
            U[i][k] += c * U[j][k]
        if rng.random() < 0.3:
            U[i], U[j] = U[j], U[i]
    return U


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]

