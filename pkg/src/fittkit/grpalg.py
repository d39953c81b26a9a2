"""Group algebras, Wedderburn data over cyclotomic fields, reduced norms.

A :class:`WedderburnData` holds one absolutely irreducible representation
per Galois orbit, realised over Q(zeta_m).  Reduced norms of matrices over
Q[G] are the determinants of the split images, one value per orbit; each
value lies in the character field F_i, which is certified by checking that
it is fixed by the subgroup H_i of (Z/m)^x fixing the character.

Components are ordered by (dimension, trivial first, descending character
coefficient vectors); inside an orbit the representative is the conjugate
with the largest character vector.  All outputs follow this order.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import CyclotomicNumber, GaloisElement, context, galois_apply, subgroup_cosets, unit_group
from .grp import FiniteGroup, find_isomorphism, make_group
from .matlat import charpoly_exact, det_exact, mat_mul


class WedderburnError(ValueError):
    pass


class StabilityError(WedderburnError):
    pass


# ---------------------------------------------------------------------------
# group algebra elements


class GroupAlgebraElement:
    """Element of Q[G] as a coefficient vector indexed by group elements."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: FiniteGroup, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != group.order:
            raise ValueError("coefficient vector length differs from |G|")
        for c in coeffs:
            if not isinstance(c, (int, Fraction)) or isinstance(c, bool):
                raise TypeError(f"group algebra coefficients must be rational, got {c!r}")
        self.group = group
        self.coeffs = coeffs

    @classmethod
    def zero(cls, G):
        return cls(G, [0] * G.order)

    @classmethod
    def scalar(cls, G, c):
        v = [0] * G.order
        v[G.identity] = c
        return cls(G, v)

    @classmethod
    def basis(cls, G, g, c=1):
        v = [0] * G.order
        v[g] = c
        return cls(G, v)

    @classmethod
    def from_dict(cls, G, terms):
        v = [0] * G.order
        for g, c in terms.items():
            if not 0 <= g < G.order:
                raise ValueError(f"group element index {g} out of range")
            v[g] += c
        return cls(G, v)

    @classmethod
    def norm_element(cls, G, subset=None):
        """Sum of the elements of ``subset`` (default: all of G)."""
        subset = range(G.order) if subset is None else subset
        v = [0] * G.order
        for g in subset:
            v[g] = 1
        return cls(G, v)

    def _coerce(self, other):
        if isinstance(other, GroupAlgebraElement):
            if other.group is not self.group and other.group.table != self.group.table:
                raise ValueError("elements of different group algebras")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GroupAlgebraElement.scalar(self.group, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GroupAlgebraElement(self.group, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return GroupAlgebraElement(self.group, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GroupAlgebraElement(self.group, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GroupAlgebraElement(self.group, [a * other for a in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = self.group.table
        out = [0] * self.group.order
        right = [(h, b) for h, b in enumerate(other.coeffs) if b]
        for g, a in enumerate(self.coeffs):
            if not a:
                continue
            row = t[g]
            for h, b in right:
                out[row[h]] += a * b
        return GroupAlgebraElement(self.group, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GroupAlgebraElement.scalar(self.group, other)
        return isinstance(other, GroupAlgebraElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self):
        return not any(self.coeffs)

    def sharp(self):
        return sharp(self)

    def augment(self):
        return augment(self)

    def is_integral_at(self, p):
        return all(Fraction(c).denominator % p for c in self.coeffs)

    def __repr__(self):
        terms = []
        for g, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*{self.group.labels[g]}")
        return " + ".join(terms) if terms else "0"


def sharp(x: GroupAlgebraElement) -> GroupAlgebraElement:
    """The anti-involution g -> g^-1."""
    inv = x.group.inverse
    v = [0] * x.group.order
    for g, c in enumerate(x.coeffs):
        v[inv[g]] = c
    return GroupAlgebraElement(x.group, v)


def augment(x: GroupAlgebraElement):
    return sum(x.coeffs)


# matrices over Q[G] are lists of rows of GroupAlgebraElements


def gmat_identity(G, b):
    return [[GroupAlgebraElement.scalar(G, 1 if i == j else 0) for j in range(b)] for i in range(b)]


def gmat_zero(G, rows, cols):
    return [[GroupAlgebraElement.zero(G) for _ in range(cols)] for _ in range(rows)]


def gmat_mul(A, B):
    G = A[0][0].group
    out = []
    for row in A:
        new = []
        for j in range(len(B[0])):
            acc = GroupAlgebraElement.zero(G)
            for a, Brow in zip(row, B):
                b = Brow[j]
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            new.append(acc)
        out.append(new)
    return out


def gmat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def gmat_scale(z, A):
    """z * A for z a (central) group algebra element or rational."""
    return [[z * a for a in row] for row in A]


def gmat_transpose_sharp(H):
    return [[sharp(H[j][i]) for j in range(len(H))] for i in range(len(H[0]))]


def block_diagonal(A, B):
    G = (A or B)[0][0].group
    ra, ca = len(A), len(A[0]) if A else 0
    rb, cb = len(B), len(B[0]) if B else 0
    out = gmat_zero(G, ra + rb, ca + cb)
    for i in range(ra):
        for j in range(ca):
            out[i][j] = A[i][j]
    for i in range(rb):
        for j in range(cb):
            out[ra + i][ca + j] = B[i][j]
    return out


# ---------------------------------------------------------------------------
# irreducible representations


def _cmat_mul(A, B):
    return mat_mul(A, B)


def _cmat_eq(A, B):
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def _cmat_identity(m, d):
    one = CyclotomicNumber.rational(m, 1)
    zero = CyclotomicNumber.rational(m, 0)
    return [[one if i == j else zero for j in range(d)] for i in range(d)]


def _to_cyc(m, x):
    return x if isinstance(x, CyclotomicNumber) else CyclotomicNumber.rational(m, x)


def _trace(M):
    acc = M[0][0]
    for i in range(1, len(M)):
        acc = acc + M[i][i]
    return acc


class Irrep:
    """Matrix representation G -> GL_d(Q(zeta_m)), images for every element."""

    def __init__(self, group: FiniteGroup, m: int, images=None, generator_images=None, name=""):
        self.group = group
        self.m = m
        self.name = name
        if images is None:
            if generator_images is None:
                raise ValueError("need images or generator_images")
            images = self._extend(generator_images)
        self.images = tuple(tuple(tuple(_to_cyc(m, x) for x in row) for row in M) for M in images)
        if len(self.images) != group.order:
            raise WedderburnError("representation does not give one image per element")
        self.dim = len(self.images[group.identity])
        classes = group.conjugacy_classes()
        self.character = tuple(_trace(self.images[cls[0]]) for cls in classes)
        self.fixing = tuple(k for k in unit_group(m)
                            if all(galois_apply(c, GaloisElement(m, k)) == c for c in self.character))
        self.orbit = tuple(subgroup_cosets(m, self.fixing))
        self._entry_table = None

    def _extend(self, generator_images):
        G = self.group
        gens = list(G.generators)
        imgs = {}
        for g in gens:
            if g not in generator_images:
                raise WedderburnError(f"missing image of generator {g}")
        d = len(generator_images[gens[0]])
        imgs[G.identity] = _cmat_identity(self.m, d)
        gen_mats = [[[_to_cyc(self.m, x) for x in row] for row in generator_images[g]] for g in gens]
        frontier = [G.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for s, S in zip(gens, gen_mats):
                    y = G.mul(x, s)
                    if y not in imgs:
                        imgs[y] = _cmat_mul(imgs[x], S)
                        nxt.append(y)
            frontier = nxt
        if len(imgs) != G.order:
            raise WedderburnError("generator images do not reach every element")
        return [imgs[g] for g in range(G.order)]

    def character_of(self, g):
        return self.character[self.group.class_index()[g]]

    def is_trivial(self):
        return self.dim == 1 and all(c == 1 for c in self.character)

    def character_key(self):
        return tuple(x for c in self.character for x in c.coeffs)

    def conjugate(self, k) -> "Irrep":
        sigma = GaloisElement(self.m, k)
        imgs = [[[galois_apply(x, sigma) for x in row] for row in M] for M in self.images]
        return Irrep(self.group, self.m, images=imgs, name=self.name)

    # -- applying the representation --
    def _entries(self):
        if self._entry_table is None:
            d = self.dim
            self._entry_table = [[[(g, self.images[g][r][c].coeffs) for g in range(self.group.order)
                                   if not self.images[g][r][c].is_zero()]
                                  for c in range(d)] for r in range(d)]
        return self._entry_table

    def apply(self, x: GroupAlgebraElement):
        """The d x d matrix rho(x)."""
        n = context(self.m).n
        coeffs = x.coeffs
        out = []
        for row in self._entries():
            new = []
            for entries in row:
                acc = [0] * n
                for g, vec in entries:
                    a = coeffs[g]
                    if a:
                        for i, v in enumerate(vec):
                            if v:
                                acc[i] += a * v
                new.append(CyclotomicNumber(self.m, acc))
            out.append(new)
        return out

    def apply_matrix(self, H):
        """Block matrix (rho(H_rc)) of size b*d."""
        d = self.dim
        b_rows = len(H)
        b_cols = len(H[0])
        out = [[None] * (b_cols * d) for _ in range(b_rows * d)]
        for r in range(b_rows):
            for c in range(b_cols):
                blk = self.apply(H[r][c])
                for i in range(d):
                    for j in range(d):
                        out[r * d + i][c * d + j] = blk[i][j]
        return out


def linear_characters(G: FiniteGroup, m: int):
    """Homomorphisms G -> <zeta_m>, one per Galois orbit, as 1-dimensional Irreps."""
    gens = list(G.generators)
    options = []
    for g in gens:
        o = G.element_order(g)
        if m % o:
            raise WedderburnError("conductor is not a multiple of the exponent")
        options.append([k * (m // o) for k in range(o)])
    found = []
    seen = set()

    def search(idx, chosen):
        if idx == len(gens):
            expo = {G.identity: 0}
            frontier = [G.identity]
            while frontier:
                nxt = []
                for x in frontier:
                    for s, e in zip(gens, chosen):
                        y = G.mul(x, s)
                        v = (expo[x] + e) % m
                        if y in expo:
                            if expo[y] != v:
                                return
                        else:
                            expo[y] = v
                            nxt.append(y)
                frontier = nxt
            t = G.table
            if any((expo[a] + expo[b]) % m != expo[t[a][b]] for a in range(G.order) for b in range(G.order)):
                return
            key = tuple(expo[g] for g in range(G.order))
            if key not in seen:
                found.append(key)
                # keep one character per Galois orbit
                for k in unit_group(m):
                    seen.add(tuple((k * e) % m for e in key))
            return
        for e in options[idx]:
            search(idx + 1, chosen + [e])

    search(0, [])
    return [Irrep(G, m, images=[[[CyclotomicNumber.zeta(m, e)]] for e in key]) for key in found]


def permutation_standard(G: FiniteGroup, m: int, action, npoints: int):
    """(npoints-1)-dimensional summand of a permutation representation.

    ``action(g)`` returns the image tuple of points 0..npoints-1; it must be
    a left action.  Basis f_i = e_i - e_{N-1}.
    """
    N = npoints
    imgs = []
    for g in range(G.order):
        pi = action(g)
        M = [[Fraction(0)] * (N - 1) for _ in range(N - 1)]
        last = pi[N - 1]
        for i in range(N - 1):
            if pi[i] != N - 1:
                M[pi[i]][i] += 1
            if last != N - 1:
                M[last][i] -= 1
        imgs.append(M)
    return Irrep(G, m, images=imgs)


def tensor_with_linear(rho: Irrep, lam: Irrep) -> Irrep:
    imgs = [[[x * lam.images[g][0][0] for x in row] for row in rho.images[g]]
            for g in range(rho.group.order)]
    return Irrep(rho.group, rho.m, images=imgs)


# ---------------------------------------------------------------------------
# Wedderburn data


def default_conductor(G: FiniteGroup) -> int:
    return G.exponent if G.exponent > 1 else 2


def _canonical_representative(rho: Irrep) -> Irrep:
    best_k, best_key = 1, None
    for k in rho.orbit:
        sigma = GaloisElement(rho.m, k)
        key = tuple(x for c in rho.character for x in galois_apply(c, sigma).coeffs)
        if best_key is None or key > best_key:
            best_k, best_key = k, key
    return rho if best_k == 1 else rho.conjugate(best_k)


def _sort_key(rho: Irrep):
    return (rho.dim, 0 if rho.is_trivial() else 1, tuple(-x for x in rho.character_key()))


class WedderburnData:
    """Split data for Q[G]: one Irrep per Galois orbit, canonically ordered."""

    def __init__(self, group: FiniteGroup, m: int, irreps, validate=True):
        self.group = group
        self.m = m
        for rho in irreps:
            if rho.m != m:
                raise WedderburnError("irreps must share the ambient conductor")
        reps = [_canonical_representative(r) for r in irreps]
        reps.sort(key=_sort_key)
        self.irreps = tuple(reps)
        self.certificate = validate_wedderburn(group, self) if validate else None
        self.idempotents = tuple(self.central_element([1 if j == i else 0 for j in range(len(reps))])
                                 for i in range(len(reps)))

    @property
    def t(self):
        return len(self.irreps)

    @property
    def dims(self):
        return tuple(r.dim for r in self.irreps)

    def central_element(self, values) -> GroupAlgebraElement:
        """The central element of Q[G] acting on component i by values[i] (in F_i)."""
        G = self.group
        n = G.order
        out = [Fraction(0)] * n
        for rho, c in zip(self.irreps, values):
            c = _to_cyc(self.m, c)
            if c.is_zero():
                continue
            scale = Fraction(rho.dim, n * len(rho.fixing))
            for g in range(n):
                chi = rho.character_of(G.inverse[g])
                out[g] += scale * (c * chi).trace()
        return GroupAlgebraElement(G, out)

    def central_values(self, z: GroupAlgebraElement):
        """Component values of a central element (checked to act as scalars)."""
        vals = []
        for rho in self.irreps:
            M = rho.apply(z)
            c = M[0][0]
            for i in range(rho.dim):
                for j in range(rho.dim):
                    if M[i][j] != (c if i == j else 0 * c):
                        raise ValueError("element is not central")
            vals.append(c)
        return tuple(vals)


def validate_wedderburn(G: FiniteGroup, data: WedderburnData):
    """Check a WedderburnData object; returns a certificate dict or raises."""
    problems = []
    m = data.m
    if m % G.exponent:
        problems.append(f"conductor {m} is not a multiple of the exponent {G.exponent}")
    classes = G.conjugacy_classes()
    cidx = G.class_index()
    for i, rho in enumerate(data.irreps):
        if rho.group.table != G.table:
            problems.append(f"component {i}: representation of a different group")
            continue
        ok = True
        for a in range(G.order):
            for b in range(G.order):
                if not _cmat_eq(_cmat_mul(rho.images[a], rho.images[b]), rho.images[G.mul(a, b)]):
                    problems.append(f"component {i}: homomorphism fails on ({a}, {b})")
                    ok = False
                    break
            if not ok:
                break
        for ci, cls in enumerate(classes):
            for g in cls:
                if _trace(rho.images[g]) != rho.character[ci]:
                    problems.append(f"component {i}: character not constant on class {ci}")
                    break
        fixing = tuple(k for k in unit_group(m)
                       if all(galois_apply(c, GaloisElement(m, k)) == c for c in rho.character))
        if fixing != rho.fixing:
            problems.append(f"component {i}: wrong fixing subgroup")
    sizes = [len(c) for c in classes]

    def inner(chi, psi):
        acc = CyclotomicNumber.rational(m, 0)
        conj = GaloisElement(m, -1)
        for s, a, b in zip(sizes, chi, psi):
            acc = acc + a * galois_apply(b, conj) * s
        return acc * Fraction(1, G.order)

    for i, rho in enumerate(data.irreps):
        if inner(rho.character, rho.character) != 1:
            problems.append(f"component {i}: character is not irreducible")
        for j in range(i + 1, len(data.irreps)):
            other = data.irreps[j]
            for k in unit_group(m):
                conj = tuple(galois_apply(c, GaloisElement(m, k)) for c in other.character)
                if not inner(rho.character, conj).is_zero():
                    problems.append(f"components {i} and {j} lie in the same Galois orbit")
                    break
    count = sum(len(r.orbit) for r in data.irreps)
    sumsq = sum(len(r.orbit) * r.dim ** 2 for r in data.irreps)
    if sumsq != G.order:
        problems.append(f"sum of squared dimensions is {sumsq}, expected {G.order}")
    if count != len(classes):
        problems.append(f"{count} irreducibles for {len(classes)} conjugacy classes")
    if problems:
        raise WedderburnError("; ".join(problems))
    del cidx
    return {"group": G.name, "conductor": m, "components": len(data.irreps),
            "dims": [r.dim for r in data.irreps], "orbit_sizes": [len(r.orbit) for r in data.irreps],
            "sum_dim_squared": sumsq, "classes": len(classes)}


def _dihedral_irreps(G, m, n):
    reps = linear_characters(G, m)
    s, t = 1 % n, n
    for g in range(1, n):
        if n % g or (2 * g) % n == 0:
            continue
        e = g * (m // n)
        zero = CyclotomicNumber.rational(m, 0)
        one = CyclotomicNumber.rational(m, 1)
        gen = {s: [[CyclotomicNumber.zeta(m, e), zero], [zero, CyclotomicNumber.zeta(m, -e)]],
               t: [[zero, one], [one, zero]]}
        reps.append(Irrep(G, m, generator_images=gen))
    return reps


def _quaternion_irreps(G, m):
    reps = linear_characters(G, m)
    i = CyclotomicNumber.zeta(m, m // 4)
    zero = CyclotomicNumber.rational(m, 0)
    one = CyclotomicNumber.rational(m, 1)
    gen = {1: [[i, zero], [zero, -i]], 2: [[zero, -one], [one, zero]]}
    reps.append(Irrep(G, m, generator_images=gen))
    return reps


def _pair_partition_action(perm):
    parts = [frozenset([frozenset([0, 1]), frozenset([2, 3])]),
             frozenset([frozenset([0, 2]), frozenset([1, 3])]),
             frozenset([frozenset([0, 3]), frozenset([1, 2])])]
    idx = {p: i for i, p in enumerate(parts)}
    return tuple(idx[frozenset(frozenset(perm[x] for x in pair) for pair in part)] for part in parts)


def _symmetric_irreps(G, m, n):
    from .grp import permutations

    perms = permutations(n)
    lin = linear_characters(G, m)
    reps = list(lin)
    if n >= 3:
        std = permutation_standard(G, m, lambda g: perms[g], n)
        reps.append(std)
    if n == 4:
        sign = next(r for r in lin if not r.is_trivial())
        reps.append(tensor_with_linear(std, sign))
        reps.append(permutation_standard(G, m, lambda g: _pair_partition_action(perms[g]), 3))
    return reps


def _affine_irreps(G, m, p):
    elems = [(b, a) for a in range(1, p) for b in range(p)]
    reps = linear_characters(G, m)
    if p > 2:
        reps.append(permutation_standard(
            G, m, lambda g: tuple((elems[g][1] * x + elems[g][0]) % p for x in range(p)), p))
    return reps


def builtin_wedderburn(G: FiniteGroup, m: int | None = None) -> WedderburnData:
    """Wedderburn data for abelian, dihedral, quaternion, symmetric(<=4) and affine(p) groups."""
    m = default_conductor(G) if m is None else m
    name = G.name
    if G.is_abelian():
        reps = linear_characters(G, m)
    elif name.startswith("dihedral("):
        reps = _dihedral_irreps(G, m, G.order // 2)
    elif name == "quaternion8":
        reps = _quaternion_irreps(G, m)
    elif name.startswith("symmetric("):
        reps = _symmetric_irreps(G, m, int(name[len("symmetric("):-1]))
    elif name.startswith("affine("):
        reps = _affine_irreps(G, m, int(name[len("affine("):-1]))
    else:
        # fall back to an isomorphism with the dihedral group of the same order
        D = make_group(f"dihedral({G.order})") if G.order % 2 == 0 else None
        phi = find_isomorphism(G, D) if D is not None else None
        if phi is None:
            raise WedderburnError(f"no builtin Wedderburn data for {name}; supply irreps explicitly")
        DW = builtin_wedderburn(D, m)
        reps = [Irrep(G, m, images=[r.images[phi[g]] for g in range(G.order)]) for r in DW.irreps]
    return WedderburnData(G, m, reps)


# ---------------------------------------------------------------------------
# reduced norms, characteristic polynomials, adjoints


class CentralTuple:
    """One value per Wedderburn component, certified to lie in F_i."""

    __slots__ = ("values", "certified")

    def __init__(self, values, data: WedderburnData | None = None):
        self.values = tuple(values)
        self.certified = False
        if data is not None:
            for i, (v, rho) in enumerate(zip(self.values, data.irreps)):
                for k in rho.fixing:
                    if galois_apply(v, GaloisElement(data.m, k)) != v:
                        raise StabilityError(f"component {i} value {v} is not fixed by sigma_{k}")
            self.certified = True

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __eq__(self, other):
        if isinstance(other, CentralTuple):
            other = other.values
        return self.values == tuple(other)

    def __hash__(self):
        return hash(self.values)

    def __mul__(self, other):
        return CentralTuple([a * b for a, b in zip(self.values, other.values)])

    def __repr__(self):
        return "(" + ", ".join(str(v) for v in self.values) + ")"


def _check_square(H):
    b = len(H)
    if b == 0 or any(len(row) != b for row in H):
        raise ValueError("expected a nonempty square matrix over the group algebra")
    return b


def nrd(H, data: WedderburnData) -> CentralTuple:
    """Reduced norm of a square matrix over Q[G]."""
    _check_square(H)
    return CentralTuple([det_exact(rho.apply_matrix(H)) for rho in data.irreps], data)


def reduced_charpoly(H, data: WedderburnData):
    """Per component: coefficients (lowest first) of the reduced characteristic polynomial."""
    _check_square(H)
    out = []
    for rho in data.irreps:
        coeffs = charpoly_exact(rho.apply_matrix(H))
        for c in coeffs:
            for k in rho.fixing:
                if galois_apply(c, GaloisElement(data.m, k)) != c:
                    raise StabilityError("charpoly coefficient outside the character field")
        out.append(coeffs)
    return out


def generalized_adjoint(H, data: WedderburnData):
    """H* = sum_i (-1)^(m_i+1) sum_j alpha_ij H^(j-1), assembled with central elements."""
    b = _check_square(H)
    G = data.group
    polys = reduced_charpoly(H, data)
    degrees = [len(f) - 1 for f in polys]
    top = max(degrees)
    result = gmat_zero(G, b, b)
    power = gmat_identity(G, b)
    zero = CyclotomicNumber.rational(data.m, 0)
    for j in range(1, top + 1):
        vals = []
        for f, mi in zip(polys, degrees):
            if j <= mi:
                vals.append(f[j] if (mi + 1) % 2 == 0 else -f[j])
            else:
                vals.append(zero)
        z = data.central_element(vals)
        if not z.is_zero():
            result = gmat_add(result, gmat_scale(z, power))
        if j < top:
            power = gmat_mul(power, H)
    return result


def _adjugate(M):
    n = len(M)
    if n == 1:
        return [[CyclotomicNumber.rational(M[0][0].m, 1)]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[M[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            d = det_exact(minor)
            out[j][i] = d if (i + j) % 2 == 0 else -d
    return out


def fourier_inverse(blocks, data: WedderburnData, b: int):
    """Matrix over Q[G] whose image in component i is blocks[i] (bd_i x bd_i)."""
    G = data.group
    n = G.order
    out = [[[Fraction(0)] * n for _ in range(b)] for _ in range(b)]
    for rho, Y in zip(data.irreps, blocks):
        d = rho.dim
        scale = Fraction(d, n * len(rho.fixing))
        for r in range(b):
            for c in range(b):
                blk = [[Y[r * d + i][c * d + j] for j in range(d)] for i in range(d)]
                for g in range(n):
                    # trace(rho(g^-1) * blk), traced down to Q over the whole field
                    R = rho.images[G.inverse[g]]
                    acc = CyclotomicNumber.rational(data.m, 0)
                    for i in range(d):
                        for j in range(d):
                            if not R[i][j].is_zero() and not blk[j][i].is_zero():
                                acc = acc + R[i][j] * blk[j][i]
                    out[r][c][g] += scale * acc.trace()
    return [[GroupAlgebraElement(G, out[r][c]) for c in range(b)] for r in range(b)]


def adjoint_by_fourier(H, data: WedderburnData):
    """Independent route to H*: adjugate of every split block, transported back."""
    b = _check_square(H)
    return fourier_inverse([_adjugate(rho.apply_matrix(H)) for rho in data.irreps], data, b)


def sharp_transform(t: CentralTuple, data: WedderburnData) -> CentralTuple:
    """Componentwise sigma_{-1}: the value of Nrd(H^{T,#}) given Nrd(H)."""
    conj = GaloisElement(data.m, -1)
    return CentralTuple([galois_apply(v, conj) for v in t.values], data)


def zero_adjoint_formula(G: FiniteGroup) -> GroupAlgebraElement:
    """(1/|G'|) * sum of the commutator subgroup."""
    Gp = G.commutator_subgroup()
    return GroupAlgebraElement.norm_element(G, sorted(Gp)) * Fraction(1, len(Gp))


def random_gmat(G, b, rng, lo=-3, hi=3, density=0.5):
    """Random b x b matrix over Z[G] with sparse coefficients in [lo, hi]."""
    out = []
    for _ in range(b):
        row = []
        for _ in range(b):
            v = [rng.randint(lo, hi) if rng.random() < density else 0 for _ in range(G.order)]
            row.append(GroupAlgebraElement(G, v))
        out.append(row)
    return out

