"""Command-line front end.

    fittkit --input problem.yaml [--format machine]
    fittkit demo hereditary
    fittkit --command denom --input problem.yaml --seed 3

Exit codes: 0 success, 2 bounds printed but not certified, 1 error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import build
from .commfit import IntegerRing, annihilator_finite, fitting_ideal, higher_fitting
from .grpalg import gmat_identity, gmat_mul, gmat_scale, gmat_transpose_sharp, nrd, sharp_transform
from .matlat import lattice_contains, local_index
from .morita import (
    MatrixOrder,
    is_principal,
    morita_fitt,
    restrict_to_base,
)
from .ncfit import (
    additivity_compare,
    central_conductor,
    conductor_variant,
    denominator_bounds,
    describe_local_ideal,
    dual_presentation,
    fitt_max_matrix,
    fitt_presentation,
    integrality_ring_bounds,
    sharp_lattice,
)
from .problem import ProblemError, ProblemFile, parse_problem
from .report import EXIT_ERROR, Report, input_digest


@dataclass
class Options:
    seed: int | None = None
    max_matrix_size: int | None = None
    coeff_bound: int | None = None


def _need(problem: ProblemFile, key):
    if key not in problem.content:
        raise ProblemError(f"command {problem.command} needs {key!r}")
    return problem.content[key]


def _nc(problem):
    order = build.build_nc_order(_need(problem, "order"))
    return order, build.build_nc_presentation(order, _need(problem, "matrix"))


def _sampler(problem, opts: Options):
    return build.build_sampler(problem.get("sampler"), opts.seed, opts.max_matrix_size, opts.coeff_bound)


# ---------------------------------------------------------------------------
# commands


def cmd_fitt_comm(problem, rep: Report, opts):
    ring = build.build_ring(_need(problem, "ring"))
    pres = build.build_comm_presentation(ring, _need(problem, "matrix"))
    rep.say(f"presentation {pres.a}x{pres.b} over {ring!r}")
    rep.add_ideal("fitt", fitting_ideal(pres))
    i = int(problem.get("higher", 0))
    if i:
        rep.add_ideal(f"fitt^{i}", higher_fitting(pres, i))
    if isinstance(ring, IntegerRing) and pres.a >= pres.b:
        try:
            rep.add_ideal("ann", annihilator_finite(pres))
        except ValueError:
            rep.say("annihilator: cokernel is infinite")


def _report_fitt_nc(rep, pres, label="fitt"):
    order = pres.order
    f = fitt_presentation(pres)
    flags = ["max-certified"] if f.max_certified else []
    rep.add_lattice(label, f.lattice, flags)
    if order.kind == "matrix":
        m = fitt_max_matrix(pres)
        rep.add_lattice(f"{label}-max", m, ["morita-route"])
        rep.say(f"{label}: {describe_local_ideal(f.lattice)}; Fitt^max: {describe_local_ideal(m)}")
    centers = order.centers()
    for k, g in enumerate(f.generators[:8]):
        rep.say(f"generator {k}: {centers.describe_vector(g)}")
    return f


def cmd_fitt_nc(problem, rep, opts):
    order, pres = _nc(problem)
    rep.say(f"presentation {pres.a}x{pres.b} over {order.name}")
    _report_fitt_nc(rep, pres)


def cmd_nrd(problem, rep, opts):
    order, pres = _nc(problem)
    if pres.a != pres.b:
        raise ProblemError("nrd needs a square matrix")
    coords = order.nrd_coords(pres.matrix)
    rep.say(f"Nrd = {order.centers().describe_vector(coords)}")
    rep.add_vector("nrd", coords)


def cmd_adjoint(problem, rep, opts):
    order, pres = _nc(problem)
    if order.kind != "group":
        raise ProblemError("adjoint is implemented for group rings")
    if pres.a != pres.b:
        raise ProblemError("adjoint needs a square matrix")
    H = pres.matrix
    Hs = order.adjoint(H)
    z = order.centers().element(order.nrd_coords(H))
    target = gmat_scale(z, gmat_identity(order.G, len(H)))
    ok = _same(gmat_mul(Hs, H), target) and _same(gmat_mul(H, Hs), target)
    for i, row in enumerate(Hs):
        for j, x in enumerate(row):
            rep.add_vector(f"adjoint[{i}][{j}]", list(x.coeffs))
            rep.say(f"H*[{i}][{j}] = {x}")
    rep.add_vector("nrd", order.nrd_coords(H), ["adjoint-law" if ok else "adjoint-law-failed"])
    if not ok:
        raise RuntimeError("generalized adjoint failed the law H* H = H H* = Nrd(H)")


def _coeffs(M):
    return [[x.coeffs for x in row] for row in M]


def _same(A, B):
    return _coeffs(A) == _coeffs(B)


def cmd_conductor(problem, rep, opts):
    order = build.build_nc_order(_need(problem, "order"))
    data = central_conductor(order)
    rep.add_lattice("zeta", order.centers().zeta)
    rep.add_lattice("conductor", data.aggregate)
    for i, (factor, _, comp) in enumerate(data.components):
        rep.say(f"component {i}: factor {factor}")


def cmd_conductor_variant(problem, rep, opts):
    order = build.build_nc_order(_need(problem, "order"))
    cond = central_conductor(order).aggregate
    var = conductor_variant(order.centers())
    rep.add_lattice("conductor", cond)
    rep.add_lattice("conductor-variant", var)
    idx = local_index(var, cond)
    rep.say(f"index [F_zeta : F] = {idx}")
    rep.add_vector("index", [idx])


def cmd_intring(problem, rep, opts):
    order = build.build_nc_order(_need(problem, "order"))
    sampler = _sampler(problem, opts)
    res = integrality_ring_bounds(order, sampler)
    centers = order.centers()
    flag = "certified" if res.certified else "uncertified"
    rep.say(f"sampler: sizes <= {sampler.max_size}, coefficients in [-{sampler.coeff_bound}, "
            f"{sampler.coeff_bound}], {sampler.count} per size, seed {sampler.seed}; {res.samples} used")
    rep.say(f"integrality ring: {flag} ({res.reason})")
    rep.add_lattice("lower", res.lower, [flag])
    rep.add_lattice("upper", centers.maximal, [flag])
    rep.add_lattice("zeta", centers.zeta)
    if not res.certified:
        rep.uncertified()


def cmd_denom(problem, rep, opts):
    order = build.build_nc_order(_need(problem, "order"))
    sampler = _sampler(problem, opts)
    res = denominator_bounds(order, sampler)
    flag = "certified" if res.certified else "uncertified"
    rep.say(f"sampler: sizes <= {sampler.max_size}, coefficients in [-{sampler.coeff_bound}, "
            f"{sampler.coeff_bound}], {sampler.count} per size, seed {sampler.seed}; {res.samples} used")
    contained = lattice_contains(res.upper, res.lower)
    if res.certified:
        rep.say("denominator ideal: certified, lower = upper")
    else:
        rep.say(f"denominator ideal: uncertified, lower {'<' if contained else 'not <='} upper, "
                f"index {local_index(res.upper, res.lower)}")
    rep.add_lattice("lower", res.lower, [flag])
    rep.add_lattice("upper", res.upper, [flag, "lower<=upper" if contained else "lower-not-in-upper"])
    rep.add_lattice("conductor", res.conductor)
    if not res.certified:
        rep.uncertified()


def cmd_dual(problem, rep, opts):
    order, pres = _nc(problem)
    if order.kind != "group":
        raise ProblemError("dual is implemented for group rings")
    centers = order.centers()
    c = nrd(pres.matrix, order.data)
    cd = nrd(gmat_transpose_sharp(pres.matrix), order.data)
    ok = cd == sharp_transform(c, order.data)
    rep.add_vector("nrd", centers.coords(c.values))
    rep.add_vector("nrd-dual", centers.coords(cd.values), ["sharp-identity" if ok else "sharp-mismatch"])
    f = fitt_presentation(pres).lattice
    fd = fitt_presentation(dual_presentation(pres)).lattice
    same = fd == sharp_lattice(f, centers)
    rep.add_lattice("fitt", f)
    rep.add_lattice("fitt-dual", fd, ["equals-sharp" if same else "differs-from-sharp"])


def cmd_additivity(problem, rep, opts):
    order = build.build_nc_order(_need(problem, "order"))
    p1 = build.build_nc_presentation(order, _need(problem, "matrix"))
    p2 = build.build_nc_presentation(order, _need(problem, "matrix2"))
    alts = [build.build_nc_presentation(order, m) for m in problem.get("alternatives", [])]
    res = additivity_compare(p1, p2, alts)
    rel = "=" if res.equal else ("strictly inside" if res.product_contained else "not inside")
    rep.say(f"Fitt(M) Fitt(N) {rel} Fitt(M + N)")
    if order.kind != "group":
        rep.say(f"product {describe_local_ideal(res.product)}, direct sum {describe_local_ideal(res.direct_sum)}")
    rep.add_lattice("product", res.product)
    rep.add_lattice("direct-sum", res.direct_sum, ["additive" if res.equal else "not-additive"])


def cmd_morita_fitt(problem, rep, opts):
    order = build.build_morita_order(_need(problem, "order"))
    pres = build.build_morita_presentation(order, _need(problem, "matrix"))
    rep.say(f"presentation {pres.a}x{pres.b} over {order.name}")
    if order.kind == "end":
        gen = is_principal(order.ideal)
        rep.say(f"ideal {order.ideal}: " + ("principal, generated by " + str(gen) if gen is not None
                                            else "not principal"))
    f = morita_fitt(pres)
    rep.add_ideal("fitt", f)
    if isinstance(order, MatrixOrder):
        rep.add_ideal("fitt-over-base", fitting_ideal(restrict_to_base(pres)))


COMMANDS = {
    "fitt-comm": cmd_fitt_comm,
    "fitt-nc": cmd_fitt_nc,
    "nrd": cmd_nrd,
    "adjoint": cmd_adjoint,
    "conductor": cmd_conductor,
    "conductor-variant": cmd_conductor_variant,
    "intring": cmd_intring,
    "denom": cmd_denom,
    "dual": cmd_dual,
    "additivity": cmd_additivity,
    "morita-fitt": cmd_morita_fitt,
}


def execute(problem: ProblemFile, digest: str, opts: Options | None = None) -> Report:
    opts = opts or Options()
    if problem.command == "demo":
        from .demos import run_demo
        return run_demo([str(x) for x in problem.content["demo"]], opts, digest)
    rep = Report(problem.command, digest)
    COMMANDS[problem.command](problem, rep, opts)
    return rep


# ---------------------------------------------------------------------------
# entry point


def _parser():
    ap = argparse.ArgumentParser(prog="fittkit", description="Exact Fitting invariants over orders.")
    ap.add_argument("words", nargs="*", help="optional: a command name, or 'demo NAME [ARGS]'")
    ap.add_argument("--input", help="problem file (YAML, exact rational strings)")
    ap.add_argument("--command", help="override the command of the problem file")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--max-matrix-size", type=int)
    ap.add_argument("--coeff-bound", type=int)
    ap.add_argument("--format", choices=("text", "machine"))
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    opts = Options(args.seed, args.max_matrix_size, args.coeff_bound)
    words = list(args.words)
    command = args.command
    if words and words[0] != "demo" and command is None:
        command = words.pop(0)
    fmt = args.format
    try:
        if (words and words[0] == "demo") or command == "demo":
            if words and words[0] == "demo":
                words = words[1:]
            if args.input and not words:
                problem = parse_problem(open(args.input, "rb").read())
                words = [str(x) for x in problem.get("demo", [])]
                fmt = fmt or problem.get("format", "text")
            if not words:
                raise ProblemError("demo needs a name")
            from .demos import run_demo
            rep = run_demo(words, opts, input_digest(("demo " + " ".join(words)).encode()))
        else:
            if not args.input:
                raise ProblemError("--input is required")
            with open(args.input, "rb") as fh:
                data = fh.read()
            problem = parse_problem(data)
            if command is not None:
                if command not in COMMANDS:
                    raise ProblemError(f"unknown command {command!r}")
                problem.command = command
            fmt = fmt or problem.get("format", "text")
            rep = execute(problem, input_digest(data), opts)
    except (ProblemError, ValueError, ArithmeticError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(rep.render(fmt or "text"))
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
