"""Command-line front end.

    regaut validate    FILE
    regaut bad-primes  FILE
    regaut green       FILE --place inf|P --point "a,b" [--inverse] [--tol T]
    regaut height      FILE --point "a,b" [--tol T]
    regaut classify    FILE --place inf|P --point "a,b" [--budget N]
    regaut orbit-count FILE --point "a,b" --T-list e5,e8,100.0

Every command takes --json for machine output.  Exit codes: 0 success,
2 input or validation error, 3 undecided verdict or resource budget,
4 internal error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .errors import InputError, ResourceLimitError, UndecidedError
from .globalheight import canonical_heights, detect_periodic, orbit_counting
from .localgreen import classify_escape, classify_filtration, green, green_inverse
from .mapfile import load_map_file
from .places import parse_place
from .poly import poly_to_text

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNDECIDED = 3
EXIT_INTERNAL = 4


def _parse_point(text: str):
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse point {text!r}: {exc}") from exc


def _parse_t_list(text: str):
    out = []
    for part in text.split(","):
        part = part.strip()
        try:
            if part.startswith("e") and part[1:].replace(".", "", 1).isdigit():
                out.append(math.exp(float(part[1:])))
            else:
                out.append(float(part))
        except ValueError as exc:
            raise InputError(f"cannot parse threshold {part!r}") from exc
    if not out:
        raise InputError("empty T list")
    return out


def _emit(args, payload: dict, human: str):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(human)


def cmd_validate(args) -> int:
    loaded = load_map_file(args.file)
    aut, v = loaded.aut, loaded.aut.verdict
    payload = {
        "label": loaded.label,
        "dimension": aut.dimension,
        "degree_forward": aut.degree_forward,
        "degree_inverse": aut.degree_inverse,
        "regular": True,
        "iplus": v.iplus,
        "iminus": v.iminus,
        "certificate_m": loaded.certificate.m,
        "detail": v.detail,
    }
    lines = [
        f"{loaded.label}: regular, d={aut.degree_forward}, d-={aut.degree_inverse}",
        f"  I+ = {v.iplus or v.detail or 'certified nonintersecting'}",
        f"  I- = {v.iminus or v.detail or 'certified nonintersecting'}",
        f"  certificate exponent m = {loaded.certificate.m}",
    ]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_bad_primes(args) -> int:
    from .places import bad_place_set

    loaded = load_map_file(args.file)
    report = bad_place_set(loaded.aut, loaded.certificate)
    payload = {
        "bad": list(report.bad),
        "undecided": list(report.undecided),
        "candidates": {str(p): r.to_dict() for p, r in report.reports.items()},
    }
    if not report.reports:
        human = "no candidate primes: good reduction everywhere"
    else:
        rows = [f"{'prime':>8}  {'verdict':<10} reason"]
        for p, r in sorted(report.reports.items()):
            rows.append(f"{p:>8}  {r.verdict:<10} {r.reason}")
        human = "\n".join(rows)
    _emit(args, payload, human)
    return EXIT_OK


def cmd_green(args) -> int:
    loaded = load_map_file(args.file)
    place = parse_place(args.place)
    point = _parse_point(args.point)
    fn = green_inverse if args.inverse else green
    gv = fn(loaded.aut, loaded.certificate, place, point, args.tol)
    payload = gv.to_dict()
    direction = "backward" if args.inverse else "forward"
    human = (
        f"place={place} point=({args.point}) {direction}\n"
        f"  value={gv.value!r} error_radius={gv.error_radius!r} "
        f"iterations={gv.iterations_used} certified={gv.certified}"
    )
    if gv.log_p_coefficient is not None:
        human += f"\n  exact: ({gv.log_p_coefficient}) * log {place.p}"
    _emit(args, payload, human)
    return EXIT_OK


def cmd_height(args) -> int:
    loaded = load_map_file(args.file)
    point = _parse_point(args.point)
    report = canonical_heights(
        loaded.aut, loaded.certificate, point, args.tol,
        bit_budget=args.bit_budget, direct_check_n=args.direct_n,
    )
    payload = report.to_dict()
    lines = [
        f"h_plus  = {report.h_plus.value!r} +- {report.h_plus.radius:.3g}",
        f"h_minus = {report.h_minus.value!r} +- {report.h_minus.radius:.3g}",
        f"h_f     = {report.h_f.value!r} +- {report.h_f.radius:.3g}",
        f"h_tilde = {report.h_tilde.value!r} +- {report.h_tilde.radius:.3g}",
        "per place:",
    ]
    for v, (gf, gb) in report.per_place.items():
        lines.append(
            f"  {str(v):>6}: G_f={gf.value!r}  G_finv={gb.value!r}"
        )
    if report.direct_plus is not None:
        lines.append(
            f"direct limit at n={report.direct_n}: "
            f"forward {report.direct_plus!r} (gap {report.discrepancy_plus:.3g}), "
            f"backward {report.direct_minus!r} (gap {report.discrepancy_minus:.3g})"
        )
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_classify(args) -> int:
    loaded = load_map_file(args.file)
    place = parse_place(args.place)
    point = _parse_point(args.point)
    filt = classify_filtration(loaded.aut, loaded.certificate, place, point)
    esc = classify_escape(
        loaded.aut, loaded.certificate, place, point, budget=args.budget
    )
    payload = {"filtration": filt.to_dict(), "escape": esc.to_dict()}
    human = (
        f"filtration: {filt.label()}\n"
        f"escape: forward={esc.forward} backward={esc.backward} "
        f"(decided at iteration {esc.decided_at_iteration})"
    )
    _emit(args, payload, human)
    return EXIT_OK


def cmd_orbit_count(args) -> int:
    loaded = load_map_file(args.file)
    point = _parse_point(args.point)
    t_values = _parse_t_list(args.t_list)
    rec = detect_periodic(loaded.aut, loaded.certificate, point, tolerance=args.tol)
    if rec.is_periodic:
        payload = rec.to_dict()
        _emit(args, payload, f"point is periodic with period {rec.period}")
        return EXIT_OK
    rows = orbit_counting(
        loaded.aut, loaded.certificate, point, t_values, tolerance=args.tol
    )
    payload = {
        "orbit_height": rec.orbit_height,
        "rows": [r.to_dict() for r in rows],
    }
    lines = [f"orbit height = {rec.orbit_height!r}",
             f"{'T':>14}  {'count':>6}  {'predicted':>10}  {'residual':>9}  truncated"]
    for r in rows:
        lines.append(
            f"{r.T:>14.5g}  {r.exact_count:>6}  {r.predicted:>10.3f}  "
            f"{r.residual:>9.3f}  {r.truncated}"
        )
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regaut",
        description="Exact local/global canonical height toolkit for "
        "regular polynomial automorphisms of affine space over Q.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("file", help="map definition file (JSON)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate, help="parse and validate a map file")
    add("bad-primes", cmd_bad_primes, help="primes of bad or undecided reduction")

    p = add("green", cmd_green, help="local Green value at one place")
    p.add_argument("--place", required=True, help="'inf' or a prime")
    p.add_argument("--point", required=True, help="comma-separated rationals")
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--inverse", action="store_true", help="backward direction")

    p = add("height", cmd_height, help="global canonical heights")
    p.add_argument("--point", required=True)
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--bit-budget", type=int, default=4_000_000)
    p.add_argument("--direct-n", type=int, default=10,
                   help="cross-check iterate order (0 disables)")

    p = add("classify", cmd_classify, help="filtration and escape classification")
    p.add_argument("--place", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--budget", type=int, default=64)

    p = add("orbit-count", cmd_orbit_count, help="orbit points below height thresholds")
    p.add_argument("--point", required=True)
    p.add_argument("--T-list", dest="t_list", required=True,
                   help="comma-separated thresholds; eK means exp(K)")
    p.add_argument("--tol", type=float, default=1e-5)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (UndecidedError, ResourceLimitError) as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - last-resort exit code mapping
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
