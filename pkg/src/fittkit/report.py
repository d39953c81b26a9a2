"""Result reports with a canonical, byte-stable rendering."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction

from .commfit import CommIdeal, IntegerRing, LocalRing, ResidueRing
from .exact import format_rational
from .matlat import IntegerLattice, LocalLattice

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNCERTIFIED = 2


@dataclass
class Record:
    label: str
    ambient_dim: int
    denominator: int
    rows: list
    flags: tuple = ()
    kind: str = "lattice"       # lattice | vector
    ring: str = ""

    def machine(self) -> str:
        rows = ";".join(",".join(str(x) for x in r) for r in self.rows) or "-"
        flags = ",".join(self.flags) or "-"
        ring = f" ring={self.ring}" if self.ring else ""
        return (f"{self.kind} {self.label}{ring} ambient-dim={self.ambient_dim} "
                f"denominator={self.denominator} rows={rows} flags={flags}")

    def text(self) -> str:
        head = f"{self.label}:"
        if self.ring:
            head += f" [{self.ring}]"
        if self.kind == "vector":
            vals = ", ".join(format_rational(Fraction(x, self.denominator)) for x in self.rows[0])
            body = f" ({vals})"
        elif not self.rows:
            body = " zero lattice"
        else:
            scale = "" if self.denominator == 1 else f"(1/{self.denominator}) * "
            body = " " + scale + "span{" + ", ".join("(" + ", ".join(str(x) for x in r) + ")"
                                                   for r in self.rows) + "}"
        flags = f"  [{', '.join(self.flags)}]" if self.flags else ""
        return head + body + flags


@dataclass
class Report:
    command: str
    input_hash: str
    records: list = field(default_factory=list)
    lines: list = field(default_factory=list)
    exit_code: int = EXIT_OK

    def add_lattice(self, label, L, flags=(), ring=""):
        self.records.append(lattice_record(label, L, flags, ring))

    def add_vector(self, label, values, flags=()):
        den = 1
        for v in values:
            den = den * Fraction(v).denominator // _gcd(den, Fraction(v).denominator)
        rows = [[int(Fraction(v) * den) for v in values]]
        self.records.append(Record(label, len(values), den, rows, tuple(flags), "vector"))

    def add_ideal(self, label, ideal: CommIdeal, flags=()):
        self.records.append(ideal_record(label, ideal, flags))

    def say(self, line):
        self.lines.append(line)

    def uncertified(self):
        self.exit_code = max(self.exit_code, EXIT_UNCERTIFIED)

    def render(self, fmt="text") -> str:
        if fmt == "machine":
            out = ["fittkit-report 1", f"input-sha256 {self.input_hash}", f"command {self.command}"]
            out += [r.machine() for r in self.records]
            out.append(f"exit {self.exit_code}")
            return "\n".join(out) + "\n"
        out = [f"command: {self.command}", f"input sha256: {self.input_hash}"]
        out += self.lines
        out += [r.text() for r in self.records]
        status = {EXIT_OK: "ok", EXIT_UNCERTIFIED: "uncertified bounds"}.get(self.exit_code, "error")
        out.append(f"status: {status} (exit {self.exit_code})")
        return "\n".join(out) + "\n"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def input_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def lattice_record(label, L, flags=(), ring="") -> Record:
    if isinstance(L, LocalLattice):
        ring = ring or f"Z_({L.p})"
        lat = L.lattice
    elif isinstance(L, IntegerLattice):
        lat = L
    else:
        raise TypeError(f"not a lattice: {L!r}")
    return Record(label, lat.n, lat.denominator, [list(r) for r in lat.basis], tuple(flags), "lattice", ring)


def ideal_record(label, I: CommIdeal, flags=()) -> Record:
    ring = I.ring
    c = I.canonical
    if isinstance(ring, ResidueRing):
        return Record(label, 1, 1, [[c]] if c != ring.n else [], tuple(flags), "lattice", ring.name)
    if isinstance(ring, (IntegerRing, LocalRing)):
        return lattice_record(label, c, flags, ring.name)
    if c is None:
        return Record(label, 2, 1, [], tuple(flags), "lattice", ring.name)
    return lattice_record(label, c.lattice, flags, ring.name)
