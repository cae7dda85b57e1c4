"""Command line interface.

    rurlex solve SYSTEM [--prime P | --qq] [--strategy ...] [--full] ...
    rurlex check SYSTEM RUR.json
    rurlex bench DIRECTORY

Exit codes: 0 success, 1 other errors, 2 parse error, 3 not zero-dimensional
(or no solutions), 4 no separating form found, 5 verification failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bivar import rur_denominator
from .errors import (
    NotZeroDimensional,
    ParseError,
    Refuted,
    RurError,
    StrategyExhausted,
)
from .fields import QQ, PrimeField, prime_sequence
from .groebner import quotient_structure
from .modular import ModularConfig, back_substitute, drive, reduce_system
from .mpoly import System, parse_system
from .rur import ReducedRUR, matrix_sparsity, rur_bitsize, rur_integer_bitsize
from .upoly import UPoly

SCHEMA = "rur-doc/1"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_NOT_ZERO_DIM = 3
EXIT_STRATEGY = 4
EXIT_REFUTED = 5


def _coeff_str(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _field_str(F) -> str:
    return "QQ" if F.p is None else f"FF {F.p}"


def _field_from_str(s: str):
    parts = s.split()
    if parts == ["QQ"]:
        return QQ
    if len(parts) == 2 and parts[0] == "FF":
        return PrimeField(int(parts[1]))
    raise ValueError(f"bad field descriptor {s!r}")


def _format_form(form, variables) -> str:
    parts = []
    for c, v in zip(form, variables):
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        parts.append(f"{sign} {mag}{v}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


@dataclass
class RurDocument:
    """Serializable RUR; coefficient lists are in ascending degree."""

    variables: list
    form: list
    field: str
    first: list
    f0: list
    coords: list
    kind: str = "radical"
    dimension: int | None = None
    version: str = __version__
    metrics: dict = dc_field(default_factory=dict)

    @classmethod
    def from_rur(cls, rur: ReducedRUR, variables) -> "RurDocument":
        enc = lambda u: [_coeff_str(c) for c in u.coeffs]
        return cls(list(variables), [int(c) for c in rur.form], _field_str(rur.field),
                   enc(rur.first), enc(rur.f0), [enc(c) for c in rur.coords],
                   rur.kind, rur.dimension)

    def to_rur(self) -> ReducedRUR:
        F = _field_from_str(self.field)
        dec = lambda cs: UPoly([Fraction(c) for c in cs], F)
        return ReducedRUR(dec(self.first), dec(self.f0), [dec(c) for c in self.coords],
                          tuple(self.form), F, self.kind, dimension=self.dimension)

    def to_dict(self) -> dict:
        d = {
            "schema": SCHEMA,
            "version": self.version,
            "variables": self.variables,
            "field": self.field,
            "form": self.form,
            "kind": self.kind,
            "dimension": self.dimension,
            "first": self.first,
            "f0": self.f0,
            "coords": self.coords,
        }
        if self.metrics:
            d["metrics"] = self.metrics
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "RurDocument":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported schema {d.get('schema')!r}")
        if d.get("kind") not in ("radical", "full"):
            raise ValueError("kind must be 'radical' or 'full'")
        if len(d["coords"]) != len(d["variables"]):
            raise ValueError("one coordinate per variable expected")
        return cls(list(d["variables"]), list(d["form"]), d["field"], list(d["first"]),
                   list(d["f0"]), [list(c) for c in d["coords"]], d["kind"],
                   d.get("dimension"), d.get("version", __version__), d.get("metrics", {}))

    @classmethod
    def from_json(cls, text: str) -> "RurDocument":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        rur = self.to_rur()
        form = _format_form(self.form, self.variables)
        lines = [
            f"field: {self.field}",
            f"kind: {self.kind}",
            f"dimension: {self.dimension}",
            f"form: T = {form}",
            f"first: {rur.first}",
            f"f0: {rur.f0}",
        ]
        lines += [f"{v} = ({c}) / f0" for v, c in zip(self.variables, rur.coords)]
        lines += [f"{k}: {v}" for k, v in self.metrics.items()]
        return "\n".join(lines) + "\n"


# --- commands ----------------------------------------------------------------

def read_system(path: str) -> System:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_system(text, Path(path).stem)


def _sample_structure(system: System):
    """Quotient structure over GF(p) used for matrix metrics."""
    if system.field.p:
        return quotient_structure(system)
    for p in prime_sequence(31):
        try:
            return quotient_structure(reduce_system(system, p))
        except RurError:
            continue


def compute_metrics(system: System, rur: ReducedRUR, mode: str = "standard") -> dict:
    q = _sample_structure(system)
    nz = sum(1 for c in rur.form if c)
    out = {
        "dimension": q.dimension,
        "matrix_sparsity": round(matrix_sparsity(q.form_matrix(rur.form)), 4),
        "form_support": f"{nz}/{len(rur.form)}",
    }
    if rur.field.p is None:
        out["bitsize"] = round(rur_bitsize(rur), 2)
        if mode == "integer":
            out["integer_bitsize"] = round(rur_integer_bitsize(rur), 2)
    return out


def cmd_solve(args) -> int:
    system = read_system(args.system)
    if args.prime:
        system = system.change_field(PrimeField(args.prime))
    elif args.qq and system.field.p:
        raise ParseError("--qq requested for a system over a prime field", 2, 1)
    config = ModularConfig(seed=args.seed, threads=args.threads, bound=args.bound, full=args.full)
    res = drive(system, args.strategy, config, verify=args.verify or system.field.p is None)
    rur = res.full if args.full else res.radical
    doc = RurDocument.from_rur(rur, system.variables)
    doc.dimension = res.dimension
    if args.metrics:
        doc.metrics = compute_metrics(system, rur, args.metrics)
    text = doc.to_json() + "\n" if args.format == "json" else doc.to_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(args) -> int:
    system = read_system(args.system)
    doc = RurDocument.from_json(Path(args.rur).read_text())
    rur = doc.to_rur()
    if rur.field != system.field:
        system = system.change_field(rur.field)
    if doc.variables != list(system.variables):
        print("variables differ between system and RUR", file=sys.stderr)
        return EXIT_REFUTED
    try:
        if rur.f0 != rur_denominator(rur.fbar):
            raise Refuted("f0 is not fbar' / deg(fbar)")
        back_substitute(system, rur)
    except Refuted as exc:
        print(f"refuted: {exc}", file=sys.stderr)
        return EXIT_REFUTED
    print("ok")
    return EXIT_OK


def cmd_bench(args) -> int:
    files = sorted(Path(args.directory).glob("*.sys"))
    header = ("system", "D", "type", "strategy", "bitsize", "M_t sparsity", "t sparsity", "time[s]")
    rows = []
    for f in files:
        system = parse_system(f.read_text(), f.stem)
        t0 = time.perf_counter()
        try:
            res = drive(system, args.strategy, ModularConfig(seed=args.seed, threads=args.threads,
                                                             bound=args.bound))
        except RurError as exc:
            rows.append((f.stem, "-", "-", args.strategy, "-", "-", "-", type(exc).__name__))
            continue
        dt = time.perf_counter() - t0
        m = compute_metrics(system, res.radical)
        kind = "radical" if res.radical.first.degree == res.dimension else "non-radical"
        bits = f"{m['bitsize']:.1f}" if "bitsize" in m else "-"
        rows.append((f.stem, str(res.dimension), kind, args.strategy, bits,
                     f"{m['matrix_sparsity']:.2f}", m["form_support"], f"{dt:.2f}"))
    widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(len(header))]
    for r in [header, *rows]:
        print("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rurlex", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=f"rurlex {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def strategy_flags(p):
        p.add_argument("--strategy", choices=["random", "certified", "sequence"], default="certified")
        p.add_argument("--bound", type=int, default=10, help="coefficient bound of random forms")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)

    s = sub.add_parser("solve", help="compute a RUR")
    s.add_argument("system")
    fld = s.add_mutually_exclusive_group()
    fld.add_argument("--prime", type=int, help="reduce the system modulo this prime")
    fld.add_argument("--qq", action="store_true", help="solve over QQ (default)")
    strategy_flags(s)
    kind = s.add_mutually_exclusive_group()
    kind.add_argument("--radical-only", action="store_true", help="RUR of the radical (default)")
    kind.add_argument("--full", action="store_true", help="first polynomial = characteristic polynomial")
    s.add_argument("--verify", action="store_true", help="back-substitute over prime fields too")
    s.add_argument("--format", choices=["json", "text"], default="json")
    s.add_argument("--metrics", nargs="?", const="standard", choices=["standard", "integer"])
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="verify a RUR document against a system")
    c.add_argument("system")
    c.add_argument("rur")
    c.set_defaults(func=cmd_check)

    b = sub.add_parser("bench", help="solve every *.sys file of a directory")
    b.add_argument("directory")
    strategy_flags(b)
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotZeroDimensional as exc:
        print(f"not zero-dimensional: {exc}", file=sys.stderr)
        return EXIT_NOT_ZERO_DIM
    except StrategyExhausted as exc:
        print(f"no separating form: {exc}", file=sys.stderr)
        return EXIT_STRATEGY
    except Refuted as exc:
        print(f"refuted: {exc}", file=sys.stderr)
        return EXIT_REFUTED
    except (RurError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
