"""Problem files: YAML documents whose scalars are read as exact strings.

A problem is a mapping with keys

    version: 1
    command: fitt-comm | fitt-nc | nrd | adjoint | conductor | conductor-variant
             | intring | denom | dual | additivity | morita-fitt | demo
    ring:    Z | Z_(p) | Z/n | Z[sqrt(d)]            (fitt-comm)
    order:   {kind: group, p: 3, group: dihedral(6)}
             {kind: matrix, p: 3, n: 2}  |  {kind: congruence, p: 2}
             {kind: matrix, ring: Z, n: 2}             (morita-fitt)
             {kind: end, ring: Z[sqrt(-5)], ideal: [2, 1+sqrt(-5)]}
    matrix, matrix2: lists of rows; alternatives: list of matrices
    higher:  index i for higher Fitting ideals
    sampler: {max_size: 2, coeff_bound: 2, count: 40, seed: 0}
    demo:    [name, args...]
    format:  text | machine

Rational literals must look like ``-3`` or ``7/2``; decimals are rejected.
Group algebra entries are maps {element index: rational}; a bare rational
is a multiple of the identity.  Quadratic entries are written like
``3-2*sqrt(-5)``.  A group may be a builtin name or a mapping with
``table``, ``conductor`` and ``irreps`` (each irrep is ``linear: all``,
``permutation: [image tuples]`` or ``generator_images: {index: matrix}``,
cyclotomic entries given as rationals or lists of power-basis coefficients).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

import yaml

COMMANDS = (
    "fitt-comm", "fitt-nc", "nrd", "adjoint", "conductor", "conductor-variant",
    "intring", "denom", "dual", "additivity", "morita-fitt", "demo",
)

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")
_QUAD = re.compile(r"^(?:(-?\d+(?:/\d+)?)(?=[+-]|$))?(?:([+-]?)(\d+(?:/\d+)?)?\*?sqrt\((-?\d+)\))?$")


class ProblemError(ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class _V:
    """A parsed value with its source position."""

    __slots__ = ("value", "line", "column")

    def __init__(self, value, line, column):
        self.value = value
        self.line = line
        self.column = column

    def fail(self, message):
        raise ProblemError(message, self.line, self.column)


def _convert(node):
    line, col = node.start_mark.line + 1, node.start_mark.column + 1
    if isinstance(node, yaml.ScalarNode):
        return _V(node.value, line, col)
    if isinstance(node, yaml.SequenceNode):
        return _V([_convert(n) for n in node.value], line, col)
    if isinstance(node, yaml.MappingNode):
        out = {}
        for k, v in node.value:
            key = _convert(k)
            if not isinstance(key.value, str):
                key.fail("mapping keys must be scalars")
            if key.value in out:
                key.fail(f"duplicate key {key.value!r}")
            out[key.value] = (key, _convert(v))
        return _V(out, line, col)
    raise ProblemError("unsupported YAML node")


def _plain(v: _V):
    """Strip positions (the round-trippable content)."""
    if isinstance(v.value, list):
        return [_plain(x) for x in v.value]
    if isinstance(v.value, dict):
        return {k: _plain(val) for k, (_, val) in v.value.items()}
    return v.value


def parse_rational_literal(v: _V) -> Fraction:
    if not isinstance(v.value, str) or not _RATIONAL.match(v.value.strip()):
        v.fail(f"expected an exact rational like 3 or -7/2, got {v.value!r}")
    s = v.value.strip()
    if "/" in s and int(s.split("/")[1]) == 0:
        v.fail("zero denominator")
    return Fraction(s)


def parse_int_literal(v: _V, minimum=None) -> int:
    x = parse_rational_literal(v)
    if x.denominator != 1:
        v.fail(f"expected an integer, got {v.value!r}")
    if minimum is not None and x < minimum:
        v.fail(f"expected an integer >= {minimum}")
    return int(x)


def parse_quad_literal(text: str):
    """(a, b, d) for a string a+b*sqrt(d); d is None for a plain rational."""
    s = text.replace(" ", "")
    if _RATIONAL.match(s):
        return Fraction(s), Fraction(0), None
    m = _QUAD.match(s)
    if not m or m.group(4) is None:
        raise ValueError(f"not a quadratic literal: {text!r}")
    a = Fraction(m.group(1)) if m.group(1) else Fraction(0)
    coeff = Fraction(m.group(3)) if m.group(3) else Fraction(1)
    if m.group(2) == "-":
        coeff = -coeff
    return a, coeff, int(m.group(4))


@dataclass
class ProblemFile:
    """Validated problem content (plain strings, lists and dicts)."""

    version: int
    command: str
    content: dict = field(default_factory=dict)
    text: str = ""

    def get(self, key, default=None):
        return self.content.get(key, default)

    def __eq__(self, other):
        return (isinstance(other, ProblemFile) and self.version == other.version
                and self.command == other.command and self.content == other.content)


_TOP_KEYS = {"version", "command", "ring", "order", "matrix", "matrix2", "alternatives",
             "higher", "sampler", "demo", "format"}
_ORDER_KEYS = {"kind", "p", "n", "group", "ring", "ideal"}
_SAMPLER_KEYS = {"max_size", "coeff_bound", "count", "seed"}


def _require_map(v: _V, what):
    if not isinstance(v.value, dict):
        v.fail(f"{what} must be a mapping")
    return v.value


def _require_list(v: _V, what):
    if not isinstance(v.value, list):
        v.fail(f"{what} must be a list")
    return v.value


def _check_keys(m: dict, allowed, what):
    for k, (kv, _) in m.items():
        if k not in allowed:
            kv.fail(f"unknown key {k!r} in {what}")


def _walk_scalars(v: _V, check):
    if isinstance(v.value, list):
        for x in v.value:
            _walk_scalars(x, check)
    elif isinstance(v.value, dict):
        for k, (kv, x) in v.value.items():
            _walk_scalars(x, check)
    else:
        check(v)


def _check_entry(v: _V):
    s = v.value.strip()
    if _RATIONAL.match(s):
        return
    try:
        parse_quad_literal(s)
    except ValueError:
        v.fail(f"expected an exact rational or quadratic literal, got {v.value!r}")


def _check_matrix(v: _V, what):
    rows = _require_list(v, what)
    if not rows:
        v.fail(f"{what} must have at least one row")
    width = None
    for r in rows:
        entries = _require_list(r, f"row of {what}")
        if not entries:
            r.fail(f"rows of {what} must be nonempty")
        if width is None:
            width = len(entries)
        elif len(entries) != width:
            r.fail(f"ragged {what}: expected {width} entries")
        for e in entries:
            if isinstance(e.value, dict):
                for k, (kv, x) in e.value.items():
                    parse_int_literal(kv, 0)
                    parse_rational_literal(x)
            else:
                _walk_scalars(e, _check_entry)


def parse_problem(data) -> ProblemFile:
    """Parse and validate problem bytes or text; raises ProblemError with a position."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ProblemError(f"problem file is not UTF-8: {exc}") from None
    else:
        text = data
    try:
        node = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ProblemError(f"malformed problem file: {getattr(exc, 'problem', exc)}",
                           mark.line + 1 if mark else None, mark.column + 1 if mark else None) from None
    if node is None:
        raise ProblemError("empty problem file", 1, 1)
    root = _convert(node)
    top = _require_map(root, "problem")
    _check_keys(top, _TOP_KEYS, "problem")
    if "version" not in top:
        root.fail("missing key 'version'")
    version = parse_int_literal(top["version"][1])
    if version != 1:
        top["version"][1].fail(f"unsupported version {version}")
    if "command" not in top:
        root.fail("missing key 'command'")
    cmd_v = top["command"][1]
    if cmd_v.value not in COMMANDS:
        cmd_v.fail(f"unknown command {cmd_v.value!r}")
    if "order" in top:
        om = _require_map(top["order"][1], "order")
        _check_keys(om, _ORDER_KEYS, "order")
        if "kind" not in om:
            top["order"][1].fail("order needs a 'kind'")
        if "p" in om:
            parse_int_literal(om["p"][1], 2)
        if "n" in om:
            parse_int_literal(om["n"][1], 1)
    for key in ("matrix", "matrix2"):
        if key in top:
            _check_matrix(top[key][1], key)
    if "alternatives" in top:
        for alt in _require_list(top["alternatives"][1], "alternatives"):
            _check_matrix(alt, "alternative")
    if "higher" in top:
        parse_int_literal(top["higher"][1], 0)
    if "sampler" in top:
        sm = _require_map(top["sampler"][1], "sampler")
        _check_keys(sm, _SAMPLER_KEYS, "sampler")
        for k, (_, v) in sm.items():
            parse_int_literal(v, 0)
    if "format" in top and top["format"][1].value not in ("text", "machine"):
        top["format"][1].fail("format must be text or machine")
    if cmd_v.value == "demo":
        if "demo" not in top:
            root.fail("command demo needs a 'demo' list")
        items = _require_list(top["demo"][1], "demo")
        if not items:
            top["demo"][1].fail("demo needs a name")
    content = {k: _plain(v) for k, (_, v) in top.items() if k not in ("version", "command")}
    return ProblemFile(version, cmd_v.value, content, text)


def dump_problem(problem: ProblemFile) -> str:
    """Serialize back to YAML; re-parsing gives an equal problem."""
    doc = {"version": str(problem.version), "command": problem.command}
    doc.update(problem.content)
    return yaml.safe_dump(doc, sort_keys=True, default_flow_style=None, allow_unicode=True)
