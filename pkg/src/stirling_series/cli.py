"""Command-line front end: ``stirling-series <command> [options]``.

Every command builds a payload ``{"command", "columns", "rows", "notes"}``
of strings; text, csv and json are three renderings of that one object, so
``render_text(json.loads(json_output))`` reproduces the text output.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from decimal import Decimal
from fractions import Fraction

from . import bernoulli, coefficients, histtable, schaar, series, wallis
from .exceptions import StirlingError
from .numerics import DEFAULT_PRECISION, ExtFloat, log10_e, parse_number, working_precision, workctx

PRECISION_ENV = "STIRLING_PRECISION"
_BASES = {"e": "natural", "natural": "natural", "10": "ten", "ten": "ten"}


def _number(s: str) -> Fraction:
    try:
        return parse_number(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None


def _positive_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {s!r}")
    return v


def _nonneg_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {s!r}")
    return v


def _base(s: str) -> str:
    try:
        return _BASES[s.lower()]
    except KeyError:
        raise argparse.ArgumentTypeError(f"base must be one of {', '.join(_BASES)}") from None


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return _positive_int(raw)
    except argparse.ArgumentTypeError:
        return DEFAULT_PRECISION


def _fmt(x, precision: int) -> str:
    if isinstance(x, ExtFloat):
        x, precision = x.value, min(precision, x.precision)
    if isinstance(x, Decimal):
        with workctx(precision):
            return str(+x)
    return str(x)


def _to_base(x: ExtFloat, base: str, precision: int) -> ExtFloat:
    if base == "natural":
        return x
    wp = working_precision(precision)
    with workctx(wp):
        return ExtFloat(x.value * log10_e(wp), precision)


def _payload(command, columns, rows, **notes):
    return {
        "command": command,
        "columns": list(columns),
        "rows": [[str(v) for v in row] for row in rows],
        "notes": {k: str(v) for k, v in notes.items()},
    }


# commands


def cmd_bernoulli(args):
    rows = [(k, b) for k, b in enumerate(bernoulli.bernoulli_numbers(args.max_k, plus_half=args.plus_half))]
    return _payload("bernoulli", ["k", "B_k"], rows)


def cmd_coeffs(args):
    p = args.precision
    K = args.K
    if args.closed_form:
        kind, vals = "closed-form", [coefficients.closed_form_stirling(k) for k in range(1, K + 1)]
    elif args.printed:
        kind, vals = "printed", [coefficients.printed_coefficient(k) for k in range(1, K + 1)]
    elif args.as_published:
        kind, vals = "as-published", coefficients.solve_stirling_system(K, as_published=True)
    else:
        kind, vals = "system", coefficients.solve_stirling_system(K)
    rows = [(k, v, _fmt(ExtFloat.of(v, p), p)) for k, v in enumerate(vals, 1)]
    return _payload("coeffs", ["k", "coefficient", "decimal"], rows, family=kind)


def cmd_eval(args):
    p = args.precision
    fn = series.eval_stirling if args.form == "stirling" else series.eval_demoivre
    res = fn(args.n, args.terms, p)
    value = _to_base(res.value, args.base, p)
    bound = _to_base(res.bound, args.base, p)
    rows = [("value", _fmt(value, p)), ("envelope_bound", _fmt(bound, p))]
    return _payload("eval", ["quantity", "result"], rows, form=args.form, n=args.n, terms=args.terms, base=args.base)


def cmd_truncate(args):
    p = args.precision
    rep = series.truncation_report(args.n, args.max_terms, p)
    rows = [
        (k, "+" if s > 0 else "-", _fmt(mag, p), _fmt(ps, p))
        for k, (s, mag, ps) in enumerate(zip(rep.signs, rep.magnitudes, rep.partial_sums), 1)
    ]
    return _payload("truncate", ["k", "sign", "magnitude", "partial_sum"], rows,
                    n=args.n, m_star=rep.m_star, floor_pi_n=rep.pi_n_index)


def cmd_wallis(args):
    p = args.precision
    n = args.n
    if args.what == "product":
        H = wallis.wallis_factorial_form(n)
        rows = [("H_n", H), ("decimal", _fmt(ExtFloat.of(H, p), p))]
    elif args.what == "pi":
        lo, hi = wallis.pi_bracket(n, p)
        rows = [("low", _fmt(lo, p)), ("high", _fmt(hi, p)), ("width", _fmt(hi - lo, p))]
    else:
        lo, hi = wallis.constant_bracket(n, p, terms=args.terms)
        rows = [("low", _fmt(lo, p)), ("high", _fmt(hi, p)), ("width", _fmt(hi - lo, p))]
    return _payload("wallis", ["quantity", "result"], rows, n=n, what=args.what)


def cmd_schaar(args):
    spec = schaar.QuadratureSpec(abs_tolerance=args.tol)
    a = args.a
    value = schaar.schaar_log_gamma(a, args.m, spec)
    rem = schaar.schaar_remainder(a, args.m, spec)
    p = args.precision
    rows = [("log_gamma", _fmt(_to_base(value, args.base, p), p)), ("remainder", _fmt(_to_base(rem, args.base, p), p))]
    return _payload("schaar", ["quantity", "result"], rows, a=a, m=args.m, tol=args.tol, base=args.base)


def cmd_table(args):
    if args.stop < args.start:
        raise ValueError("--stop must be >= --start")
    rows = histtable.generate_table(args.start, args.stop, args.step, args.places)
    return _payload("table", ["n", "digits"], [(r.n, r.digits) for r in rows])


def cmd_audit(args):
    lines = histtable.audit_editions(args.edition_a, args.edition_b)
    rows = [
        (ln.n, ln.diff.label(), " ".join(ln.printed) if ln.printed else "-", "yes" if ln.matches else "no")
        for ln in lines
    ]
    return _payload("audit", ["n", "classification", "printed", "match"], rows,
                    edition_a=args.edition_a, edition_b=args.edition_b)


def cmd_checksum(args):
    if args.digits:
        items = [("-", d) for d in args.digits]
    else:
        items = [(r.n, r.digits) for r in histtable.load_dataset().edition(args.edition)]
    rows = [(n, d, histtable.cast_out_nines(d)) for n, d in items]
    return _payload("checksum", ["n", "digits", "residue"], rows)


# rendering


def render_text(payload) -> str:
    cols, rows = payload["columns"], payload["rows"]
    widths = [max([len(c)] + [len(r[i]) for r in rows]) for i, c in enumerate(cols)]
    out = [f"# {k}: {v}" for k, v in payload["notes"].items()]
    out.append("# " + "  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
    for r in rows:
        out.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    return "\n".join(out) + "\n"


def render_csv(payload) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(payload["columns"])
    w.writerows(payload["rows"])
    return buf.getvalue()


def render_json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


RENDERERS = {"text": render_text, "csv": render_csv, "json": render_json}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=sorted(RENDERERS), default="text")
    common.add_argument("--precision", type=_positive_int, default=_default_precision(),
                        help=f"significant digits (default ${PRECISION_ENV} or {DEFAULT_PRECISION})")
    common.add_argument("--base", type=_base, default="natural", help="logarithm base: e|natural|10|ten")

    parser = argparse.ArgumentParser(prog="stirling-series", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bernoulli", parents=[common], help="exact Bernoulli numbers")
    p.add_argument("--max-k", type=_nonneg_int, required=True)
    p.add_argument("--plus-half", action="store_true", help="use B_1 = +1/2")
    p.set_defaults(func=cmd_bernoulli)

    p = sub.add_parser("coeffs", parents=[common], help="series coefficients")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--system", action="store_true", help="solve the triangular system (default)")
    g.add_argument("--closed-form", action="store_true")
    g.add_argument("--printed", action="store_true", help="coefficients for step 1/2")
    g.add_argument("--as-published", action="store_true", help="system with the reprinted right-hand side")
    p.add_argument("--K", type=_positive_int, default=5)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("eval", parents=[common], help="evaluate a truncated series for log n!")
    p.add_argument("--form", choices=["stirling", "demoivre"], default="demoivre")
    p.add_argument("--n", type=_number, required=True)
    p.add_argument("--terms", type=_nonneg_int, default=3)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("truncate", parents=[common], help="term magnitudes and optimal truncation")
    p.add_argument("--n", type=_number, required=True)
    p.add_argument("--max-terms", type=_positive_int, default=20)
    p.set_defaults(func=cmd_truncate)

    p = sub.add_parser("wallis", parents=[common], help="Wallis products and brackets")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--what", choices=["product", "pi", "constant"], default="pi")
    p.add_argument("--terms", type=_nonneg_int, default=0, help="envelope terms for --what constant")
    p.set_defaults(func=cmd_wallis)

    p = sub.add_parser("schaar", parents=[common], help="log Gamma(a+1) with the integral remainder")
    p.add_argument("--a", type=_number, required=True)
    p.add_argument("--m", type=_nonneg_int, default=0)
    p.add_argument("--tol", default="1e-9")
    p.set_defaults(func=cmd_schaar)

    p = sub.add_parser("table", parents=[common], help="table of log10 n!")
    p.add_argument("--start", type=_positive_int, default=10)
    p.add_argument("--stop", type=_positive_int, default=200)
    p.add_argument("--step", type=_positive_int, default=10)
    p.add_argument("--places", type=_nonneg_int, default=14)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("audit", parents=[common], help="diff two historical editions")
    p.add_argument("--edition-a", choices=["1730", "1756"], default="1730")
    p.add_argument("--edition-b", choices=["1730", "1756"], default="1756")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("checksum", parents=[common], help="cast out nines")
    p.add_argument("digits", nargs="*")
    p.add_argument("--edition", choices=["1730", "1756"], default="1756",
                   help="checksum this edition when no digits are given")
    p.set_defaults(func=cmd_checksum)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload = args.func(args)
    except (StirlingError, ValueError, ArithmeticError, KeyError) as exc:
        print(f"stirling-series {args.command}: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(RENDERERS[args.format](payload))
    return 0


if __name__ == "__main__":
    sys.exit(main())
