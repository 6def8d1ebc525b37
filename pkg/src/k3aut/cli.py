"""Command-line surface: single-lattice queries, batch classification over
JSONL, and machine-readable output.

Exit codes are stable across commands: 0 success, 2 domain rejection
(degenerate, square, unrealizable), 1 internal failure.  All potentially
large integers are serialized as decimal strings; matrices are row-major
[[alpha, beta], [gamma, delta]].
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__, aut, divisors, lattice, pell
from .errors import DomainError, OnlyTrivialError

CAVEATS = ["reflection-family-completeness"]

# Published schema for classification records (JSON Schema draft-07).
# Arbitrary-precision integers travel as decimal strings.
INT_STRING = {"type": "string", "pattern": "^-?[0-9]+$"}
MATRIX = {
    "type": "array",
    "minItems": 2,
    "maxItems": 2,
    "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": INT_STRING},
}
CLASSIFICATION_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "k3aut classification record",
    "type": "object",
    "required": ["tool", "version", "input", "variant"],
    "properties": {
        "tool": {"const": "k3aut"},
        "version": {"type": "string"},
        "input": {
            "type": "object",
            "properties": {
                "a": INT_STRING,
                "b": INT_STRING,
                "c": INT_STRING,
                "deg": INT_STRING,
                "genus": INT_STRING,
            },
            "additionalProperties": False,
        },
        "variant": {"enum": ["finite", "cyclic", "dihedral", "degenerate"]},
        "d": INT_STRING,
        "square_discriminant": {"type": "boolean"},
        "lattice": {
            "type": "object",
            "properties": {"a": INT_STRING, "b": INT_STRING, "c": INT_STRING},
            "required": ["a", "b", "c"],
            "additionalProperties": False,
        },
        "basis_change": MATRIX,
        "disc_group": {"type": "array", "items": INT_STRING, "minItems": 2, "maxItems": 2},
        "witness": {
            "type": ["object", "null"],
            "properties": {
                "x": INT_STRING,
                "y": INT_STRING,
                "square": INT_STRING,
                "kind": {"enum": ["isotropic-class", "minus-two-class"]},
            },
            "required": ["x", "y", "square", "kind"],
            "additionalProperties": False,
        },
        "generator": {
            "type": ["object", "null"],
            "properties": {
                "matrix": MATRIX,
                "base": MATRIX,
                "power": INT_STRING,
                "epsilon": {"enum": [1, -1]},
                "pell": {
                    "type": "object",
                    "properties": {"u": INT_STRING, "v": INT_STRING, "norm": INT_STRING},
                    "required": ["u", "v", "norm"],
                    "additionalProperties": False,
                },
            },
            "required": ["matrix", "base", "power", "epsilon", "pell"],
            "additionalProperties": False,
        },
        "entropy": {
            "type": ["object", "null"],
            "properties": {
                "value": {"type": "string"},
                "trace": INT_STRING,
                "det": {"enum": [1, -1]},
                "value_of_square": {"type": "string"},
            },
            "required": ["value", "trace", "det"],
            "additionalProperties": False,
        },
        "involutions": {"type": "array", "items": MATRIX},
        "caveats": {"type": "array", "items": {"type": "string"}},
        "note": {"type": "string"},
    },
    "additionalProperties": False,
}


def _s(n: int) -> str:
    return str(int(n))


def _matrix(m: lattice.Isometry2 | tuple) -> list[list[str]]:
    rows = m.rows() if isinstance(m, lattice.Isometry2) else m
    return [[_s(x) for x in row] for row in rows]


def _fmt(value: float, digits: int) -> str:
    return f"{value:.{digits}g}"


def _entropy_block(m: lattice.Isometry2, digits: int, epsilon: int | None = None) -> dict:
    block = {
        "value": _fmt(aut.entropy(m), digits),
        "trace": _s(m.trace),
        "det": m.det,
    }
    if epsilon == -1:
        # anti-symplectic generator: the square is the symplectic one
        block["value_of_square"] = _fmt(aut.entropy(m @ m), digits)
    return block


def classification_record(
    input_echo: dict, lat: lattice.Rank2Lattice | aut.DegenerateQuartic, digits: int
) -> dict:
    record: dict = {
        "tool": "k3aut",
        "version": __version__,
        "input": {k: _s(v) for k, v in input_echo.items()},
    }
    if isinstance(lat, aut.DegenerateQuartic):
        record["variant"] = "degenerate"
        record["note"] = (
            "discriminant zero on the boundary 8(genus-1) = deg^2; "
            "the automorphism group is finite"
        )
        return record
    record["d"] = _s(lat.d)
    record["square_discriminant"] = lat.is_square_disc
    record["lattice"] = {"a": _s(lat.a), "b": _s(lat.b), "c": _s(lat.c)}
    record["basis_change"] = _matrix(lat.basis_change)
    record["disc_group"] = [_s(x) for x in lattice.disc_group_snf(lat)]
    result = aut.classify(lat)
    record["variant"] = result.variant
    if isinstance(result, aut.Finite):
        record["witness"] = {
            "x": _s(result.witness.x),
            "y": _s(result.witness.y),
            "square": _s(result.witness.square),
            "kind": result.reason,
        }
        record["generator"] = None
        record["entropy"] = None
        record["involutions"] = []
    else:
        rep = result.report
        record["witness"] = None
        record["generator"] = {
            "matrix": _matrix(rep.generator),
            "base": _matrix(rep.base),
            "power": _s(rep.power),
            "epsilon": rep.epsilon,
            "pell": {
                "u": _s(rep.pell_data.u),
                "v": _s(rep.pell_data.v),
                "norm": _s(rep.pell_data.m),
            },
        }
        record["entropy"] = _entropy_block(rep.generator, digits, rep.epsilon)
        if isinstance(result, aut.InfiniteDihedral):
            record["involutions"] = [
                _matrix(result.pair.sigma),
                _matrix(result.pair.tau),
            ]
        else:
            record["involutions"] = []
        record["caveats"] = list(CAVEATS)
    return record


def _lattice_from_args(args) -> tuple[dict, lattice.Rank2Lattice | aut.DegenerateQuartic]:
    has_abc = args.a is not None or args.b is not None or args.c is not None
    has_dg = getattr(args, "deg", None) is not None or getattr(args, "genus", None) is not None
    if has_abc == has_dg:
        raise DomainError("give exactly one of (-a, -b, -c) or (--deg, --genus)")
    if has_abc:
        if args.a is None or args.b is None or args.c is None:
            raise DomainError("all three of -a, -b, -c are required")
        echo = {"a": args.a, "b": args.b, "c": args.c}
        return echo, lattice.make_lattice(args.a, args.b, args.c)
    if args.deg is None or args.genus is None:
        raise DomainError("both --deg and --genus are required")
    echo = {"deg": args.deg, "genus": args.genus}
    return echo, aut.lattice_from_quartic(args.deg, args.genus)


def _print_human_record(record: dict, out) -> None:
    print(f"input: {record['input']}", file=out)
    if "d" in record:
        print(f"d = {record['d']}  disc group = Z/{record['disc_group'][0]} x Z/{record['disc_group'][1]}", file=out)
    print(f"classification: {record['variant']}", file=out)
    if record.get("note"):
        print(f"note: {record['note']}", file=out)
    if record.get("witness"):
        w = record["witness"]
        print(f"witness: ({w['x']}, {w['y']}) of square {w['square']} ({w['kind']})", file=out)
    if record.get("generator"):
        g = record["generator"]
        print(f"generator: {g['matrix']} = base^{g['power']}, epsilon {g['epsilon']:+d}", file=out)
        print(f"base: {g['base']} (conic point u={g['pell']['u']}, v={g['pell']['v']})", file=out)
        print(f"entropy: {record['entropy']['value']} (trace {record['entropy']['trace']})", file=out)
    for inv in record.get("involutions", []):
        print(f"involution: {inv}", file=out)


def cmd_classify(args) -> int:
    echo, lat = _lattice_from_args(args)
    if isinstance(lat, aut.DegenerateQuartic):
        record = classification_record(echo, lat, args.digits)
        if args.json:
            print(json.dumps(record))
        else:
            _print_human_record(record, sys.stdout)
        return 2
    record = classification_record(echo, lat, args.digits)
    if args.json:
        print(json.dumps(record))
    else:
        _print_human_record(record, sys.stdout)
    return 0


def cmd_generator(args) -> int:
    echo, lat = _lattice_from_args(args)
    if isinstance(lat, aut.DegenerateQuartic):
        print("error: degenerate lattice has no infinite-order generator", file=sys.stderr)
        return 2
    result = aut.classify(lat)
    if isinstance(result, aut.Finite):
        print(
            f"error: automorphism group is finite (witness ({result.witness.x}, "
            f"{result.witness.y}) of square {result.witness.square})",
            file=sys.stderr,
        )
        return 2
    rep = result.report
    if args.json:
        print(
            json.dumps(
                {
                    "base": _matrix(rep.base),
                    "power": _s(rep.power),
                    "epsilon": rep.epsilon,
                    "matrix": _matrix(rep.generator),
                    "entropy": _entropy_block(rep.generator, args.digits, rep.epsilon),
                }
            )
        )
    else:
        print(f"base: {rep.base}")
        print(f"generator = base^{rep.power}: {rep.generator}")
        print(f"epsilon: {rep.epsilon:+d}")
        print(f"entropy: {_fmt(rep.entropy, args.digits)}")
    return 0


def cmd_involutions(args) -> int:
    echo, lat = _lattice_from_args(args)
    if isinstance(lat, aut.DegenerateQuartic):
        print("error: degenerate lattice", file=sys.stderr)
        return 2
    result = aut.classify(lat)
    if isinstance(result, aut.Finite):
        print("error: automorphism group is finite", file=sys.stderr)
        return 2
    invs = result.pair if isinstance(result, aut.InfiniteDihedral) else None
    if args.json:
        mats = [_matrix(invs.sigma), _matrix(invs.tau)] if invs else []
        print(json.dumps({"involutions": mats, "caveats": CAVEATS}))
    elif invs is None:
        print("none (infinite cyclic)")
    else:
        print(f"sigma: {invs.sigma}")
        print(f"tau:   {invs.tau}")
        print("sigma @ tau = generator")
    return 0


def cmd_pell(args) -> int:
    d, m = args.d, args.norm
    if d <= 0:
        raise DomainError(f"d must be positive, got {d}")
    if pell.is_square(d):
        if m == 1:
            print("trivial only: (±1, 0)")
        else:
            print(f"error: d={d} is a perfect square", file=sys.stderr)
        return 2
    if m == 0:
        raise DomainError("norm must be nonzero")
    orbits = pell.general_pell_orbits(d, m)
    if args.json:
        payload = {
            "d": _s(d),
            "norm": _s(m),
            "unit": {"u": _s(orbits.unit.u), "v": _s(orbits.unit.v)},
            "representatives": [
                {"u": _s(s.u), "v": _s(s.v)} for s in orbits.representatives
            ],
        }
        if args.all_below is not None:
            payload["solutions_below"] = [
                {"u": _s(s.u), "v": _s(s.v)}
                for s in orbits.solutions_below(args.all_below)
            ]
        print(json.dumps(payload))
        return 0
    if m == 1:
        print(f"fundamental: {orbits.unit}")
    elif m == 4:
        print(f"fundamental: {pell.pell4_fundamental(d)}")
    if not orbits.representatives:
        print("no solutions")
        return 0
    print(f"unit: {orbits.unit}")
    print(f"orbit representatives of u^2 - {d} v^2 = {m}:")
    for s in orbits.representatives:
        print(f"  {s}")
    if args.all_below is not None:
        print(f"all solutions with |v| <= {args.all_below}:")
        for s in orbits.solutions_below(args.all_below):
            print(f"  {s}")
    return 0


def cmd_represent(args) -> int:
    echo, lat = _lattice_from_args(args)
    if isinstance(lat, aut.DegenerateQuartic):
        print("error: degenerate lattice", file=sys.stderr)
        return 2
    classes = divisors.represent(lat, args.k)
    if args.json:
        print(
            json.dumps(
                {
                    "k": _s(args.k),
                    "classes": [{"x": _s(c.x), "y": _s(c.y)} for c in classes],
                }
            )
        )
        return 0
    if not classes:
        print(f"no classes of self-intersection {2 * args.k}")
        return 0
    print(f"orbit representatives with self-intersection {2 * args.k}:")
    for c in classes:
        print(f"  {c}")
    return 0


def cmd_orbit(args) -> int:
    echo, lat = _lattice_from_args(args)
    if isinstance(lat, aut.DegenerateQuartic):
        print("error: degenerate lattice", file=sys.stderr)
        return 2
    try:
        x0, y0 = (int(part) for part in args.start.split(","))
    except ValueError as exc:
        raise DomainError(f"--start wants 'x,y', got {args.start!r}") from exc
    base = aut.minimal_hyperbolic(lat)
    steps = divisors.orbit_ratio_sequence(lat, (x0, y0), base, args.steps)
    a, b, c = lat.a, lat.b, lat.c

    def residual(r: Fraction | None) -> str:
        if r is None:
            return ""
        value = a * r * r + b * r + c
        return _fmt(abs(float(value)), args.digits)

    rows = []
    for n, step in enumerate(steps):
        ratio = "" if step.ratio is None else _fmt(float(step.ratio), args.digits)
        rows.append((n, step.x, step.y, ratio, residual(step.ratio)))
    if args.csv:
        print("n,x,y,ratio,residual")
        for row in rows:
            print(",".join(str(x) for x in row))
    else:
        print(f"iterating {base} from ({x0}, {y0}):")
        print(f"{'n':>3} {'x':>14} {'y':>14} {'ratio':>18} {'|a r^2+b r+c|':>16}")
        for row in rows:
            print(f"{row[0]:>3} {row[1]:>14} {row[2]:>14} {row[3]:>18} {row[4]:>16}")
    return 0


def cmd_entropy(args) -> int:
    echo, lat = _lattice_from_args(args)
    if isinstance(lat, aut.DegenerateQuartic):
        print("error: degenerate lattice", file=sys.stderr)
        return 2
    if args.matrix:
        try:
            rows = [
                [int(x) for x in part.split(",")] for part in args.matrix.split(";")
            ]
            m = lattice.Isometry2.from_rows(rows)
        except (ValueError, TypeError) as exc:
            raise DomainError(
                f"--matrix wants 'alpha,beta;gamma,delta', got {args.matrix!r}"
            ) from exc
        if not lattice.is_isometry(lat, m):
            raise DomainError(f"{m} is not an isometry of {lat}")
        value = aut.entropy(m)
        if args.json:
            print(json.dumps({"matrix": _matrix(m), "entropy": _entropy_block(m, args.digits)}))
        else:
            print(f"entropy({m}) = {_fmt(value, args.digits)}")
        return 0
    result = aut.classify(lat)
    if isinstance(result, aut.Finite):
        print("error: automorphism group is finite; all entropies are 0", file=sys.stderr)
        return 2
    rep = result.report
    if args.json:
        print(
            json.dumps(
                {
                    "base": _entropy_block(rep.base, args.digits),
                    "generator": _entropy_block(rep.generator, args.digits, rep.epsilon),
                }
            )
        )
    else:
        print(f"entropy(base {rep.base}) = {_fmt(aut.entropy(rep.base), args.digits)}")
        print(f"entropy(generator = base^{rep.power}) = {_fmt(rep.entropy, args.digits)}")
        if rep.epsilon == -1:
            print(
                f"entropy(generator^2, symplectic) = "
                f"{_fmt(aut.entropy(rep.generator @ rep.generator), args.digits)}"
            )
    return 0


def cmd_quartic(args) -> int:
    built = aut.lattice_from_quartic(args.deg, args.genus)
    echo = {"deg": args.deg, "genus": args.genus}
    if isinstance(built, aut.DegenerateQuartic):
        record = classification_record(echo, built, args.digits)
        if args.json:
            print(json.dumps(record))
        else:
            _print_human_record(record, sys.stdout)
        return 2
    if args.json:
        print(
            json.dumps(
                {
                    "input": {k: _s(v) for k, v in echo.items()},
                    "lattice": {"a": _s(built.a), "b": _s(built.b), "c": _s(built.c)},
                    "d": _s(built.d),
                }
            )
        )
    else:
        print(f"lattice: a={built.a}, b={built.b}, c={built.c} (d={built.d})")
    return 0


def cmd_batch(args) -> int:
    try:
        lines = (
            sys.stdin.read().splitlines()
            if args.input == "-"
            else open(args.input, encoding="utf-8").read().splitlines()
        )
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    counts: dict[str, int] = {}
    records = []
    for i, line in enumerate(lines):
        if not line.strip():
            continue
        record = _batch_one(line, args.digits)
        record["line"] = i + 1
        counts[record["variant"]] = counts.get(record["variant"], 0) + 1
        records.append(record)
    try:
        out = sys.stdout if args.output is None else open(args.output, "w", encoding="utf-8")
        try:
            for record in records:
                print(json.dumps(record), file=out)
        finally:
            if out is not sys.stdout:
                out.close()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    total = sum(counts.values())
    summary = ", ".join(f"{k}: {v}" for k, v in sorted(counts.items())) or "nothing"
    print(f"processed {total} records ({summary})", file=sys.stderr)
    return 0


def _batch_one(line: str, digits: int) -> dict:
    try:
        request = json.loads(line)
        if not isinstance(request, dict):
            raise ValueError("each line must be a JSON object")
        keys = set(request)
        if keys == {"a", "b", "c"}:
            echo = {k: int(request[k]) for k in ("a", "b", "c")}
            lat = lattice.make_lattice(echo["a"], echo["b"], echo["c"])
        elif keys == {"deg", "genus"}:
            echo = {k: int(request[k]) for k in ("deg", "genus")}
            lat = aut.lattice_from_quartic(echo["deg"], echo["genus"])
        else:
            raise ValueError("keys must be exactly a,b,c or deg,genus")
        return classification_record(echo, lat, digits)
    except (ValueError, DomainError) as exc:
        return {"variant": "error", "error": str(exc)}


def _add_lattice_flags(p: argparse.ArgumentParser, quartic: bool = True) -> None:
    p.add_argument("-a", type=int, default=None, help="coefficient a of ((2a,b),(b,2c))")
    p.add_argument("-b", type=int, default=None, help="coefficient b")
    p.add_argument("-c", type=int, default=None, help="coefficient c")
    if quartic:
        p.add_argument("--deg", type=int, default=None, help="curve degree (quartic builder)")
        p.add_argument("--genus", type=int, default=None, help="curve genus (quartic builder)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="k3aut",
        description="Automorphism groups of rank-2 even hyperbolic lattices, exactly.",
    )
    parser.add_argument("--version", action="version", version=f"k3aut {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--digits", type=int, default=12, help="significant digits for decimals")

    p = sub.add_parser("classify", help="finite / cyclic / dihedral classification")
    _add_lattice_flags(p)
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("generator", help="generator of the infinite part")
    _add_lattice_flags(p)
    common(p)
    p.set_defaults(func=cmd_generator)

    p = sub.add_parser("involutions", help="anti-symplectic involution pair")
    _add_lattice_flags(p)
    common(p)
    p.set_defaults(func=cmd_involutions)

    p = sub.add_parser("pell", help="Pell equation u^2 - d v^2 = m")
    p.add_argument("d", type=int)
    p.add_argument("--norm", type=int, default=1, help="target norm m (default 1)")
    p.add_argument("--all-below", type=int, default=None, metavar="V",
                   help="also list every solution with |v| <= V")
    common(p)
    p.set_defaults(func=cmd_pell)

    p = sub.add_parser("represent", help="classes of self-intersection 2k")
    _add_lattice_flags(p)
    p.add_argument("-k", type=int, required=True, help="half the self-intersection")
    common(p)
    p.set_defaults(func=cmd_represent)

    p = sub.add_parser("orbit", help="ratio sequence along the hyperbolic isometry")
    _add_lattice_flags(p)
    p.add_argument("--start", type=str, required=True, metavar="x,y")
    p.add_argument("-N", dest="steps", type=int, default=10, help="number of steps")
    p.add_argument("--csv", action="store_true", help="plot-ready CSV output")
    common(p)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("entropy", help="topological entropy of isometries")
    _add_lattice_flags(p)
    p.add_argument("--matrix", type=str, default=None, metavar="'a,b;c,d'",
                   help="specific isometry; default reports base and generator")
    common(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("quartic", help="Picard form of a quartic surface with a curve")
    p.add_argument("--deg", type=int, required=True)
    p.add_argument("--genus", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_quartic)

    p = sub.add_parser("batch", help="classify a JSONL stream of lattices")
    p.add_argument("input", help="input path, or - for stdin")
    p.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    common(p)
    p.set_defaults(func=cmd_batch)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OnlyTrivialError:
        print("trivial only: (±1, 0)")
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
