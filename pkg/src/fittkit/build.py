"""Turn validated problem content into kernel objects."""

from __future__ import annotations

import re
from fractions import Fraction

from .commfit import ZZ, CommPresentation, LocalRing, ResidueRing
from .exact import CyclotomicNumber
from .grp import FiniteGroup, make_group
from .grpalg import (
    GroupAlgebraElement,
    Irrep,
    WedderburnData,
    builtin_wedderburn,
    linear_characters,
    permutation_standard,
)
from .morita import EndOrder, MatrixOrder, MoritaPresentation, QuadraticOrder
from .ncfit import (
    CongruenceHereditary,
    GroupRingLocal,
    MatrixRingLocal,
    PresentationNC,
    Sampler,
)
from .problem import ProblemError, parse_quad_literal

_ALIASES = {
    "S3": "symmetric(3)", "S4": "symmetric(4)", "Q8": "quaternion8",
    "D6": "dihedral(6)", "D8": "dihedral(8)", "D10": "dihedral(10)", "D16": "dihedral(16)",
    "C4": "cyclic(4)",
}


def rational(x) -> Fraction:
    return Fraction(str(x).strip())


def build_ring(text):
    s = str(text).replace(" ", "")
    if s == "Z":
        return ZZ
    m = re.fullmatch(r"Z_\((\d+)\)", s)
    if m:
        return LocalRing(int(m.group(1)))
    m = re.fullmatch(r"Z/(\d+)", s)
    if m:
        return ResidueRing(int(m.group(1)))
    m = re.fullmatch(r"Z\[sqrt\((-?\d+)\)\]", s)
    if m:
        return QuadraticOrder(int(m.group(1)))
    raise ProblemError(f"unknown base ring {text!r}")


def ring_entry(ring, text):
    if isinstance(ring, QuadraticOrder):
        if isinstance(text, list):
            return ring.coerce((rational(text[0]), rational(text[1])))
        a, b, d = parse_quad_literal(str(text))
        if d is not None and d != ring.d:
            raise ProblemError(f"entry {text!r} does not lie in {ring.name}")
        return ring.coerce((a, b))
    if isinstance(text, (list, dict)):
        raise ProblemError(f"expected a scalar entry, got {text!r}")
    return rational(text)


def build_group(spec):
    if isinstance(spec, str):
        return make_group(_ALIASES.get(spec.strip(), spec))
    if isinstance(spec, dict):
        if "table" not in spec:
            raise ProblemError("group mapping needs a 'table'")
        table = [[int(rational(x)) for x in row] for row in spec["table"]]
        gens = [int(rational(x)) for x in spec["generators"]] if "generators" in spec else None
        return FiniteGroup(table, name=spec.get("name", "G"), generators=gens)
    raise ProblemError(f"unsupported group spec {spec!r}")


def _cyc_entry(m, x):
    if isinstance(x, list):
        return CyclotomicNumber.from_powers(m, [(i, rational(c)) for i, c in enumerate(x)])
    return CyclotomicNumber.rational(m, rational(x))


def build_wedderburn(G, spec):
    if not isinstance(spec, dict) or "irreps" not in spec:
        return builtin_wedderburn(G)
    m = int(rational(spec.get("conductor", G.exponent if G.exponent > 1 else 2)))
    irreps = []
    for item in spec["irreps"]:
        if not isinstance(item, dict) or len(item) != 1:
            raise ProblemError("each irrep is a one-key mapping")
        (key, val), = item.items()
        if key == "linear":
            irreps.extend(linear_characters(G, m))
        elif key == "permutation":
            perms = [tuple(int(rational(x)) for x in row) for row in val]
            if len(perms) != G.order:
                raise ProblemError("permutation action needs one image tuple per element")
            irreps.append(permutation_standard(G, m, lambda g: perms[g], len(perms[0])))
        elif key == "generator_images":
            imgs = {int(rational(k)): [[_cyc_entry(m, x) for x in row] for row in mat]
                    for k, mat in val.items()}
            irreps.append(Irrep(G, m, generator_images=imgs))
        else:
            raise ProblemError(f"unknown irrep kind {key!r}")
    return WedderburnData(G, m, irreps)


def build_nc_order(spec: dict):
    kind = spec.get("kind")
    if "p" not in spec:
        raise ProblemError(f"order of kind {kind!r} needs a prime 'p'")
    p = int(rational(spec["p"]))
    if kind == "group":
        if "group" not in spec:
            raise ProblemError("group order needs 'group'")
        G = build_group(spec["group"])
        return GroupRingLocal(G, p, build_wedderburn(G, spec["group"]))
    if kind == "matrix":
        return MatrixRingLocal(int(rational(spec.get("n", 2))), p)
    if kind == "congruence":
        return CongruenceHereditary(p)
    raise ProblemError(f"unknown order kind {kind!r}")


def build_morita_order(spec: dict):
    kind = spec.get("kind")
    ring = build_ring(spec.get("ring", "Z"))
    if kind == "matrix":
        return MatrixOrder(ring, int(rational(spec.get("n", 2))))
    if kind == "end":
        if not isinstance(ring, QuadraticOrder):
            raise ProblemError("an end order needs a quadratic base ring")
        gens = [ring_entry(ring, g) for g in spec.get("ideal", [])]
        if not gens:
            raise ProblemError("an end order needs a nonzero 'ideal'")
        return EndOrder(ring, ring.ideal(*gens))
    raise ProblemError(f"unknown Morita order kind {kind!r}")


def nc_entry(order, x):
    if order.kind == "group":
        G = order.G
        v = [Fraction(0)] * G.order
        if isinstance(x, dict):
            for k, c in x.items():
                g = int(rational(k))
                if not 0 <= g < G.order:
                    raise ProblemError(f"group element index {g} out of range")
                v[g] += rational(c)
        else:
            v[G.identity] = rational(x)
        return GroupAlgebraElement(G, v)
    if isinstance(x, list):
        return tuple(tuple(rational(c) for c in row) for row in x)
    c = rational(x)
    n = order.n
    return tuple(tuple(c if i == j else Fraction(0) for j in range(n)) for i in range(n))


def morita_entry(order, x):
    ring = order.base
    if isinstance(x, list):
        return [[ring_entry(ring, c) for c in row] for row in x]
    return order.scalar(ring_entry(ring, x))


def build_nc_presentation(order, rows) -> PresentationNC:
    return PresentationNC(order, [[nc_entry(order, x) for x in row] for row in rows])


def build_comm_presentation(ring, rows) -> CommPresentation:
    return CommPresentation(ring, [[ring_entry(ring, x) for x in row] for row in rows])


def build_morita_presentation(order, rows) -> MoritaPresentation:
    return MoritaPresentation(order, [[morita_entry(order, x) for x in row] for row in rows])


def build_sampler(spec, seed=None, max_size=None, coeff_bound=None) -> Sampler:
    spec = spec or {}
    s = Sampler(
        max_size=int(rational(spec.get("max_size", 2))),
        coeff_bound=int(rational(spec.get("coeff_bound", 2))),
        count=int(rational(spec.get("count", 40))),
        seed=int(rational(spec.get("seed", 0))),
    )
    if seed is not None:
        s.seed = seed
    if max_size is not None:
        s.max_size = max_size
    if coeff_bound is not None:
        s.coeff_bound = coeff_bound
    return s

