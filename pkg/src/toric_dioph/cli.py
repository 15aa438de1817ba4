"""Command-line front end.

Exit codes: 0 on success, 1 when a fan fails validation or a check fails,
2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .arith import parse_place
from .corpus import corpus
from .divisor import Relation, anticanonical, as_divisor
from .fan import Fan, NotSmoothComplete, validate
from .kleinschmidt import BadParameters, build

EXIT_OK, EXIT_INVALID, EXIT_BAD_INPUT = 0, 1, 2


class BadInput(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("TORIC_DIOPH_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise BadInput(f"TORIC_DIOPH_SEED must be an integer, got {raw!r}")


def load_fan(text: str) -> Fan:
    path = Path(text)
    if path.exists():
        try:
            return Fan.from_json(path.read_text(), name=path.stem)
        except json.JSONDecodeError as exc:
            raise BadInput(f"fan file {text}: invalid JSON ({exc})")
        except (ValueError, TypeError) as exc:
            raise BadInput(f"fan file {text}: {exc}")
    bundled = corpus()
    if text in bundled:
        return bundled[text]
    raise BadInput(f"fan: no file '{text}' and no bundled fan of that name (bundled: {', '.join(bundled)})")


def parse_divisor(fan: Fan, text: str | None) -> tuple[int, ...]:
    if text is None or text in ("anticanonical", "-K"):
        return anticanonical(fan)
    path = Path(text)
    try:
        if path.exists():
            data = json.loads(path.read_text())
        else:
            data = json.loads(text if text.startswith("[") else f"[{text}]")
        return as_divisor(fan, [int(x) for x in data])
    except (ValueError, TypeError) as exc:
        raise BadInput(f"--divisor: {exc}")


def parse_ints(text: str, field: str) -> list[int]:
    try:
        return [int(x) for x in text.strip("[]").split(",") if x.strip()]
    except ValueError:
        raise BadInput(f"{field}: expected comma-separated integers, got {text!r}")


# --------------------------------------------------------------------------
# output


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for k in obj:
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        for i, x in enumerate(obj):
            yield from _flatten(x, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def _scalar(v) -> str:
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    if v is None:
        return ""
    return str(v)


def render(report: dict, fmt: str, rows: list | None = None) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if rows:
            w.writerow(["point", "d", "H", "value"])
            for r in rows:
                w.writerow([" ".join(r["point"]), r["d"], r["H"], r["value"]])
        else:
            w.writerow(["key", "value"])
            for k, v in _flatten(report):
                w.writerow([k, _scalar(v)])
        return buf.getvalue()
    lines = [f"# {report.get('command', 'report')}", "", "| key | value |", "|---|---|"]
    for k, v in _flatten(report):
        lines.append(f"| {k} | {_scalar(v).replace('|', '/')} |")
    if rows:
        lines += ["", "| point | d | H | value |", "|---|---|---|---|"]
        lines += [f"| {' '.join(r['point'])} | {r['d']} | {r['H']} | {r['value']} |" for r in rows]
    return "\n".join(lines) + "\n"


def emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands


def cmd_validate(args) -> tuple[dict, Fan, int, list]:
    fan = load_fan(args.fan)
    rep = validate(fan, samples=args.samples, seed=args.seed)
    code = EXIT_OK if rep.ok else EXIT_INVALID
    if not rep.ok:
        for p in rep.problems:
            print(f"{p.kind}: {p}", file=sys.stderr)
    return rep.to_dict(), fan, code, []


def _smooth_fan(args) -> Fan:
    fan = load_fan(args.fan)
    rep = validate(fan)
    if not rep.ok:
        raise NotSmoothComplete("; ".join(f"{p.kind}: {p}" for p in rep.problems))
    return fan


def cmd_analyze(args):
    from .report import analyze

    fan = _smooth_fan(args)
    D = parse_divisor(fan, args.divisor)
    return analyze(fan, D), fan, EXIT_OK, []


def cmd_divisor(args):
    from .report import divisor_report

    fan = _smooth_fan(args)
    D = parse_divisor(fan, args.divisor)
    return divisor_report(fan, D), fan, EXIT_OK, []


def cmd_curve(args):
    from .report import curve_report

    fan = _smooth_fan(args)
    D = parse_divisor(fan, args.divisor)
    rel = None
    if args.relation:
        try:
            rel = Relation.of(fan, parse_ints(args.relation, "--relation"))
        except ValueError as exc:
            raise BadInput(f"--relation: {exc}")
    return curve_report(fan, args.bound, args.seed, D, rel, args.max_split), fan, EXIT_OK, []


def cmd_approx(args):
    from .primitive import NotNefOrBig
    from .report import approx_report

    fan = _smooth_fan(args)
    D = parse_divisor(fan, args.divisor)
    try:
        place = parse_place(args.place)
    except ValueError as exc:
        raise BadInput(f"--place: {exc}")
    try:
        gamma = Fraction(args.gamma) if args.gamma is not None else None
    except ValueError:
        raise BadInput(f"--gamma: expected a rational number, got {args.gamma!r}")
    try:
        res, rows = approx_report(fan, D, args.box, place, gamma, args.height, args.dump, args.jobs)
    except NotNefOrBig as exc:
        raise BadInput(f"--divisor: {exc}")
    return res, fan, EXIT_OK, rows


def cmd_kleinschmidt(args):
    from .report import analyze, kleinschmidt_report

    try:
        K = build(args.s, args.t, args.a)
    except BadParameters as exc:
        raise BadInput(f"kleinschmidt parameters: {exc}")
    D = parse_divisor(K.fan, args.divisor)
    out = kleinschmidt_report(K, D)
    out["analysis"] = analyze(K.fan, D)
    return out, K.fan, EXIT_OK, []


def cmd_corpus(args):
    from .acceptance import run_all

    only = parse_ints(args.only, "--only") if args.only else None
    results = run_all(only)
    for r in results:
        print(r.line(), file=sys.stderr)
    out = {
        "fans": {name: fan.fan_hash() for name, fan in corpus().items()},
        "checks": [
            {"number": r.number, "name": r.name, "pass": r.passed, "detail": r.detail} for r in results
        ],
        "all_pass": all(r.passed for r in results),
    }
    return out, None, EXIT_OK if out["all_pass"] else EXIT_INVALID, []


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="toric-dioph",
        description="Approximation invariants of smooth projective toric varieties over Q.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "markdown"), default="json")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=None, help="seed (default: $TORIC_DIOPH_SEED or 0)")
    sub = p.add_subparsers(dest="command", required=True)

    def fan_cmd(name, help_, divisor=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("fan", help="fan JSON file or bundled fan name")
        if divisor:
            sp.add_argument("--divisor", default="anticanonical",
                            help="'anticanonical', a JSON file, or comma-separated coefficients")
        return sp

    sp = fan_cmd("validate", "check smoothness and completeness", divisor=False)
    sp.add_argument("--samples", type=int, default=100)
    sp.set_defaults(func=cmd_validate)

    fan_cmd("analyze", "Picard group, effective cone, primitive collections, beta, locus").set_defaults(func=cmd_analyze)
    fan_cmd("divisor", "positivity of a divisor").set_defaults(func=cmd_divisor)

    sp = fan_cmd("curve", "positive relations, very-freeness, splitting types")
    sp.add_argument("--bound", type=int, default=2)
    sp.add_argument("--relation", help="a single relation, comma-separated")
    sp.add_argument("--max-split", type=int, default=25, help="splitting types for at most this many relations")
    sp.set_defaults(func=cmd_curve)

    sp = fan_cmd("approx", "slope estimates, Liouville search, accumulation check")
    sp.add_argument("--place", default="inf", help="'inf' or a prime")
    sp.add_argument("--box", type=int, default=20, help="numerator/denominator bound B")
    sp.add_argument("--gamma", help="exponent for the Liouville search (default: beta)")
    sp.add_argument("--height", choices=("salberger", "chart"), default="salberger")
    sp.add_argument("--dump", type=int, default=20, help="rows of the smallest values to keep")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_approx)

    sp = sub.add_parser("kleinschmidt", parents=[common], help="Picard rank two fan and its essential constant")
    sp.add_argument("s", type=int)
    sp.add_argument("t", type=int)
    sp.add_argument("a", type=int, nargs="+")
    sp.add_argument("--divisor", default="anticanonical")
    sp.set_defaults(func=cmd_kleinschmidt)

    sp = sub.add_parser("corpus", parents=[common], help="run the acceptance suite over the bundled fans")
    sp.add_argument("--only", help="comma-separated check numbers")
    sp.set_defaults(func=cmd_corpus)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code else EXIT_OK
    try:
        if args.seed is None:
            args.seed = default_seed()
        result, fan, code, rows = args.func(args)
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except NotSmoothComplete as exc:
        print(f"invalid fan: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "output")}
    from .report import envelope

    report = envelope(args.command, config, fan, result)
    emit(render(report, args.format, rows if args.format == "csv" else None), args.output)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
