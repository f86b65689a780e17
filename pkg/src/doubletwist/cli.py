"""Command-line front end: ``doubletwist <command> [options]``.

Every command prints one document in the chosen format (text, csv or json).
JSON output has the shape {command, params, results, errors}.  Output depends
only on the arguments and the seed, never on --jobs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import apoly
from .charvariety import canonical_poly, check_canonical_index
from .errors import DoubleTwistError
from .polyring import normalize_unit, to_json_terms, to_text
from .rootfinder import all_roots
from .verify import SUITES
from .volume import (
    admissible,
    angle_from_fraction,
    cyclic_cover_volume,
    estimate_alpha_max,
    integrand,
    volume,
    volume_table,
)

EXIT_OK, EXIT_FAIL, EXIT_NON_HYPERBOLIC = 0, 1, 2

_PI_RE = re.compile(r"^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+))?\s*$")


def parse_angle(text: str) -> float:
    """Radians from '2pi/3', '0.999pi', 'pi', or a plain decimal.

    Multiples of pi are parsed as exact fractions first, so '2pi/3' gives the
    same float as the cover computation for k = 3.
    """
    match = _PI_RE.match(text)
    if match:
        coef, den = match.groups()
        frac = Fraction(coef) if coef not in ("", "+", "-") else Fraction(-1 if coef == "-" else 1)
        if den:
            frac /= int(den)
        return angle_from_fraction(frac)
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from None


def parse_int_list(text: str) -> list[int]:
    """'3', '1..3', '3,5,7' or a mix such as '1..3,5'."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            lo_i, hi_i = int(lo), int(hi)
            step = 1 if hi_i >= lo_i else -1
            out.extend(range(lo_i, hi_i + step, step))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError("empty integer list")
    return out


def _m_value(text: str) -> int:
    m = int(text)
    try:
        check_canonical_index(m)
    except DoubleTwistError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return m


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tol must be positive")
    return v


def _angle_in_range(text: str) -> float:
    a = parse_angle(text)
    if not 0 < a < math.pi:
        raise argparse.ArgumentTypeError(f"angle {text!r} outside (0, pi)")
    return a


def _angles(text: str) -> list[float]:
    return [_angle_in_range(t) for t in text.split(",") if t.strip()]


def _complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _poly_record(label: str, p) -> dict:
    return {"entry": label, "poly_text": to_text(p), "terms": to_json_terms(p)}


# --- commands ----------------------------------------------------------------

def cmd_volume(args) -> tuple[list[dict], list[str], int]:
    try:
        r = volume(args.m, args.alpha, args.tol)
    except DoubleTwistError as exc:
        return [], [f"{type(exc).__name__}: {exc}"], EXIT_FAIL
    code = EXIT_OK if r.status == "ok" else EXIT_NON_HYPERBOLIC
    return [r.as_dict()], [], code


def cmd_table(args):
    rows = volume_table(args.m, args.angles, args.tol, jobs=args.jobs)
    errors = [f"alpha={r.alpha!r}: {r.status}" for r in rows if r.status.startswith("error")]
    return [r.as_dict() for r in rows], errors, EXIT_FAIL if errors else EXIT_OK


def cmd_cover(args):
    def one(k):
        try:
            v = cyclic_cover_volume(args.m, k, args.tol)
            return {"m": args.m, "k": k, "alpha": angle_from_fraction(Fraction(2, k)), "volume": v}, None
        except (DoubleTwistError, ValueError) as exc:
            return None, f"k={k}: {exc}"

    results, errors = [], []
    for rec, err in _map(one, args.k, args.jobs):
        if rec is not None:
            results.append(rec)
        if err:
            errors.append(err)
    return results, errors, EXIT_FAIL if errors else EXIT_OK


def cmd_alphamax(args):
    est = estimate_alpha_max(args.m, args.tol)
    rec = {"m": est.m, "alpha_max": est.alpha_max, "bracket_width": est.bracket_width,
           "alpha_max_over_pi": est.alpha_max / math.pi}
    return [rec], [], EXIT_OK


def cmd_apoly(args):
    try:
        tup = apoly.a_polynomial(args.m, args.construction)
    except DoubleTwistError as exc:
        return [], [f"{type(exc).__name__}: {exc}"], EXIT_FAIL
    results = [_poly_record("first", tup.a_first), _poly_record("second", tup.a_second)]
    for r in results:
        r.update(m=tup.m, construction=tup.construction)
    errors = []
    if args.check:
        if args.m <= 4:
            match = normalize_unit(tup.a_first) == apoly.oracle_eliminate(args.m)
            results.append({"m": tup.m, "entry": "oracle_match", "value": match})
            if not match:
                errors.append("a_polynomial differs from the elimination oracle")
        rep = apoly.verify_on_variety(args.m, args.samples, args.seed, construction=args.construction,
                                      jobs=args.jobs)
        results.append({"m": tup.m, "entry": "variety_max_scaled", "value": rep.max_scaled,
                        "branch_counts": rep.branch_counts})
        if not rep.passed:
            errors.append(f"A does not vanish on the variety (max scaled {rep.max_scaled:.3g})")
    return results, errors, EXIT_FAIL if errors else EXIT_OK


def cmd_roots(args):
    omega = args.alpha
    s = complex(math.cos(omega / 2), math.sin(omega / 2))
    roots = all_roots(canonical_poly(args.m, s))
    results = []
    for i, (z, res) in enumerate(zip(roots.roots, roots.residuals)):
        rec = {"index": i, "z": _complex_pair(z), "residual": res,
               "admissible": admissible(args.m, z)}
        try:
            rec["integrand"] = integrand(args.m, omega, z)
        except DoubleTwistError:
            rec["integrand"] = None
        results.append(rec)
    return results, [], EXIT_OK


def cmd_verify(args):
    names = list(SUITES) if args.all or not args.suite else args.suite
    jobs = [(m, n) for m in args.m for n in names]

    def run(item):
        m, n = item
        try:
            r = SUITES[n](m, args.seed)
            return {"suite": r.suite, "m": r.m, "passed": bool(r.passed), "worst": float(r.worst),
                    "threshold": r.threshold, "detail": r.detail}
        except DoubleTwistError as exc:
            return {"suite": n, "m": m, "passed": False, "worst": None, "threshold": None,
                    "detail": f"{type(exc).__name__}: {exc}"}

    results = list(_map(run, jobs, args.jobs))
    errors = [f"{r['suite']} m={r['m']}: {r['detail']}" for r in results if not r["passed"]]
    return results, errors, EXIT_FAIL if errors else EXIT_OK


def _map(fn, items, jobs):
    items = list(items)
    if jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


# --- output ------------------------------------------------------------------

def _flat(value):
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    return value


def render(command: str, params: dict, results: list[dict], errors: list[str], fmt: str) -> str:
    if fmt == "json":
        doc = {"command": command, "params": params, "results": results, "errors": errors}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        keys: list[str] = []
        for r in results:
            keys.extend(k for k in r if k not in keys)
        writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        writer.writeheader()
        for r in results:
            writer.writerow({k: _flat(r.get(k)) for k in keys})
        return buf.getvalue()
    return _render_text(command, results, errors)


def _render_text(command: str, results: list[dict], errors: list[str]) -> str:
    lines = []
    if command == "verify":
        ms = sorted({r["m"] for r in results})
        suites = list(dict.fromkeys(r["suite"] for r in results))
        cell = {(r["suite"], r["m"]): "pass" if r["passed"] else "FAIL" for r in results}
        lines.append("suite".ljust(16) + "".join(f"m={m}".rjust(8) for m in ms))
        for s in suites:
            lines.append(s.ljust(16) + "".join(cell.get((s, m), "-").rjust(8) for m in ms))
    elif command == "apoly":
        for r in results:
            if "poly_text" in r:
                lines.append(f"A_{r['entry']}(M, L) = {r['poly_text']}")
            else:
                lines.append(f"{r['entry']}: {r['value']}")
    else:
        for r in results:
            lines.append("  ".join(f"{k}={_text_value(v)}" for k, v in r.items()))
    lines.extend(f"error: {e}" for e in errors)
    return "\n".join(lines) + "\n"


def _text_value(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, float) for x in v):
        return f"{v[0]!r}{v[1]:+}j"
    return v


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", "--threads", type=int, default=1, dest="jobs")

    p = argparse.ArgumentParser(prog="doubletwist", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("volume", parents=[common], help="cone-manifold volume at one angle")
    v.add_argument("-m", type=_m_value, required=True)
    v.add_argument("--alpha", type=_angle_in_range, required=True)
    v.add_argument("--tol", type=_positive, default=1e-9)

    t = sub.add_parser("table", parents=[common], help="volumes over a list of angles")
    t.add_argument("-m", type=_m_value, required=True)
    t.add_argument("--angles", type=_angles, required=True, help="comma list, e.g. pi/6,pi/3,2pi/3")
    t.add_argument("--tol", type=_positive, default=1e-9)

    c = sub.add_parser("cover", parents=[common], help="volume of the k-fold cyclic branched cover")
    c.add_argument("-m", type=_m_value, required=True)
    c.add_argument("-k", type=parse_int_list, required=True, help="e.g. 3 or 3..10")
    c.add_argument("--tol", type=_positive, default=1e-9)

    a = sub.add_parser("alphamax", parents=[common], help="angle where hyperbolicity ends")
    a.add_argument("-m", type=_m_value, required=True)
    a.add_argument("--tol", type=_positive, default=1e-10)

    ap = sub.add_parser("apoly", parents=[common], help="A-polynomial 2-tuple")
    ap.add_argument("-m", type=int, required=True)
    ap.add_argument("--construction", choices=apoly.CONSTRUCTIONS, default="weighted")
    ap.add_argument("--check", action="store_true", help="compare with the oracles")
    ap.add_argument("--samples", type=int, default=200)

    r = sub.add_parser("roots", parents=[common], help="roots of R_m at s = exp(i alpha / 2)")
    r.add_argument("-m", type=_m_value, required=True)
    r.add_argument("--alpha", type=_angle_in_range, required=True)

    ve = sub.add_parser("verify", parents=[common], help="run the identity suites")
    ve.add_argument("-m", type=parse_int_list, default=[1, 2, 3])
    ve.add_argument("--all", action="store_true")
    ve.add_argument("--suite", action="append", choices=sorted(SUITES))
    return p


COMMANDS = {
    "volume": cmd_volume,
    "table": cmd_table,
    "cover": cmd_cover,
    "alphamax": cmd_alphamax,
    "apoly": cmd_apoly,
    "roots": cmd_roots,
    "verify": cmd_verify,
}


def _params(args) -> dict:
    skip = {"command", "format", "jobs"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        for m in args.m:
            try:
                check_canonical_index(m)
            except DoubleTwistError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_FAIL
    results, errors, code = COMMANDS[args.command](args)
    sys.stdout.write(render(args.command, _params(args), results, errors, args.format))
    for e in errors:
        print(f"error: {e}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
