"""Finite groups given by multiplication tables.

Built-in families are generated from explicit constructions:

* ``cyclic(n)``        -- element i is g^i;
* ``dihedral(2n)``     -- element i + n*j is s^i t^j with s^n = t^2 = 1, t s = s^-1 t;
* ``quaternion8``      -- 1, i, j, k, -1, -i, -j, -k;
* ``symmetric(n)``     -- permutations of 0..n-1 in lexicographic order, (ab)(x) = a(b(x));
* ``affine(p)``        -- maps x -> a x + b over F_p, element (b, a) has index b + p*(a-1).
"""

from __future__ import annotations

import itertools
import re
from math import gcd

from .exact import is_prime


class GroupError(ValueError):
    pass


def _lcm(a, b):
    return a // gcd(a, b) * b


class FiniteGroup:
    """A finite group stored as a validated multiplication table."""

    def __init__(self, table, name="G", labels=None, generators=None, check=True):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.name = name
        n = self.order
        if n == 0:
            raise GroupError("empty group table")
        for row in self.table:
            if len(row) != n:
                raise GroupError("multiplication table is not square")
            if any(x < 0 or x >= n for x in row):
                raise GroupError("table entry out of range")
        ident = [e for e in range(n) if all(self.table[e][g] == g and self.table[g][e] == g
                                             for g in range(n))]
        if not ident:
            raise GroupError("no identity element")
        self.identity = ident[0]
        inv = []
        for g in range(n):
            hs = [h for h in range(n) if self.table[g][h] == self.identity]
            if len(hs) != 1 or self.table[hs[0]][g] != self.identity:
                raise GroupError(f"element {g} has no two-sided inverse")
            inv.append(hs[0])
        self.inverse = tuple(inv)
        if check:
            t = self.table
            for a in range(n):
                for b in range(n):
                    ab = t[a][b]
                    for c in range(n):
                        if t[ab][c] != t[a][t[b][c]]:
                            raise GroupError(f"associativity fails at ({a}, {b}, {c})")
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        self.generators = tuple(generators) if generators is not None else self._find_generators()
        if check and len(self.closure(self.generators)) != n:
            raise GroupError("declared generators do not generate the group")
        self.exponent = 1
        for g in range(n):
            self.exponent = _lcm(self.exponent, self.element_order(g))
        self._classes = None

    # -- basic operations --
    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self.inverse[a]

    def power(self, a, k):
        if k < 0:
            a, k = self.inverse[a], -k
        r = self.identity
        for _ in range(k):
            r = self.table[r][a]
        return r

    def element_order(self, g):
        k, x = 1, g
        while x != self.identity:
            x = self.table[x][g]
            k += 1
        return k

    def is_abelian(self):
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def closure(self, elements):
        """Subgroup generated by the given elements."""
        sub = {self.identity}
        frontier = [self.identity]
        gens = list(elements)
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = self.table[x][s]
                    if y not in sub:
                        sub.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(sub)

    def _find_generators(self):
        gens = []
        span = frozenset([self.identity])
        # greedy: prefer elements of large order, ties by index
        for g in sorted(range(self.order), key=lambda x: (-self.element_order(x), x)):
            if g not in span:
                gens.append(g)
                span = self.closure(gens)
                if len(span) == self.order:
                    break
        return gens

    def conjugacy_classes(self):
        if self._classes is None:
            seen = set()
            classes = []
            for g in range(self.order):
                if g in seen:
                    continue
                cls = sorted({self.table[self.table[x][g]][self.inverse[x]] for x in range(self.order)})
                seen.update(cls)
                classes.append(tuple(cls))
            self._classes = tuple(classes)
        return self._classes

    def class_index(self):
        """Map element -> index of its conjugacy class."""
        out = [0] * self.order
        for i, cls in enumerate(self.conjugacy_classes()):
            for g in cls:
                out[g] = i
        return out

    def commutator_subgroup(self):
        t = self.table
        comms = {t[t[a][b]][t[self.inverse[a]][self.inverse[b]]]
                 for a in range(self.order) for b in range(self.order)}
        return self.closure(sorted(comms))

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


# ---------------------------------------------------------------------------
# builtin constructions


def cyclic(n):
    if n < 1:
        raise GroupError("cyclic(n) needs n >= 1")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    labels = ["1"] + [f"g^{i}" if i > 1 else "g" for i in range(1, n)]
    return FiniteGroup(table, name=f"cyclic({n})", labels=labels,
                       generators=[1 % n] if n > 1 else [0], check=False)


def dihedral(order):
    if order < 2 or order % 2:
        raise GroupError("dihedral(2n) needs an even order >= 2")
    n = order // 2

    def mul(a, b):
        i, j = a % n, a // n
        k, l = b % n, b // n
        return (i + (k if j == 0 else -k)) % n + n * ((j + l) % 2)

    table = [[mul(a, b) for b in range(order)] for a in range(order)]
    labels = []
    for j in range(2):
        for i in range(n):
            s = "" if i == 0 else ("s" if i == 1 else f"s^{i}")
            t = "t" if j else ""
            labels.append(s + t or "1")
    gens = [1 % n, n] if n > 1 else [n]
    return FiniteGroup(table, name=f"dihedral({order})", labels=labels,
                       generators=gens, check=False)


def quaternion8():
    # unit quaternions 1, i, j, k with signs; index = unit + 4*(sign is -)
    unit_mul = {
        (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
        (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
        (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
        (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
    }

    def mul(a, b):
        u, s = unit_mul[(a % 4, b % 4)]
        sign = s * (-1 if a >= 4 else 1) * (-1 if b >= 4 else 1)
        return u + (4 if sign < 0 else 0)

    table = [[mul(a, b) for b in range(8)] for a in range(8)]
    labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
    return FiniteGroup(table, name="quaternion8", labels=labels, generators=[1, 2], check=False)


def permutations(n):
    return sorted(itertools.permutations(range(n)))


def symmetric(n):
    if n < 1 or n > 4:
        raise GroupError("symmetric(n) is supported for 1 <= n <= 4")
    perms = permutations(n)
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(a[b[x]] for x in range(n))] for b in perms] for a in perms]
    labels = ["(" + "".join(str(x) for x in p) + ")" for p in perms]
    gens = []
    if n >= 2:
        swap = list(range(n))
        swap[0], swap[1] = 1, 0
        cycle = [(x + 1) % n for x in range(n)]
        gens = [index[tuple(swap)], index[tuple(cycle)]]
    return FiniteGroup(table, name=f"symmetric({n})", labels=labels,
                       generators=gens or [0], check=False)


def affine(p):
    if not is_prime(p):
        raise GroupError("affine(q) is supported for prime q only")
    elems = [(b, a) for a in range(1, p) for b in range(p)]
    index = {e: i for i, e in enumerate(elems)}

    def mul(x, y):
        b1, a1 = x
        b2, a2 = y
        return index[((a1 * b2 + b1) % p, (a1 * a2) % p)]

    table = [[mul(x, y) for y in elems] for x in elems]
    labels = [f"x->{a}x+{b}" for b, a in elems]
    root = next(g for g in range(1, p) if all(pow(g, (p - 1) // q, p) != 1
                                               for q in range(2, p) if is_prime(q) and (p - 1) % q == 0))
    gens = [index[(1, 1)], index[(0, root)]]
    return FiniteGroup(table, name=f"affine({p})", labels=labels, generators=gens, check=False)


_BUILTIN = re.compile(r"^\s*(cyclic|dihedral|symmetric|affine)\s*\(\s*(\d+)\s*\)\s*$|^\s*(quaternion8)\s*$")


def make_group(spec) -> FiniteGroup:
    """Build a group from a builtin descriptor string or an explicit table."""
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        m = _BUILTIN.match(spec)
        if not m:
            raise GroupError(f"unsupported builtin group {spec!r}")
        if m.group(3):
            return quaternion8()
        fam, arg = m.group(1), int(m.group(2))
        return {"cyclic": cyclic, "dihedral": dihedral, "symmetric": symmetric,
                "affine": affine}[fam](arg)
    if isinstance(spec, dict):
        return FiniteGroup(spec["table"], name=spec.get("name", "G"), labels=spec.get("labels"),
                           generators=spec.get("generators"))
    return FiniteGroup(spec)


def find_isomorphism(G: FiniteGroup, H: FiniteGroup):
    """Exhaustive search for an isomorphism G -> H; returns the map as a list or None."""
    if G.order != H.order:
        return None
    gens = list(G.generators)
    candidates = [[h for h in range(H.order) if H.element_order(h) == G.element_order(g)]
                  for g in gens]
    for images in itertools.product(*candidates):
        phi = {G.identity: H.identity}
        frontier = [G.identity]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for s, hs in zip(gens, images):
                    y = G.mul(x, s)
                    hy = H.mul(phi[x], hs)
                    if y in phi:
                        if phi[y] != hy:
                            ok = False
                            break
                    else:
                        phi[y] = hy
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if not ok or len(phi) != G.order or len(set(phi.values())) != H.order:
            continue
        if all(phi[G.mul(a, b)] == H.mul(phi[a], phi[b]) for a in range(G.order) for b in range(G.order)):
            return [phi[g] for g in range(G.order)]
    return None


def commutator_subgroup(G: FiniteGroup):
    return G.commutator_subgroup()


def conjugacy_classes(G: FiniteGroup):
    return G.conjugacy_classes()
