"""Command-line front end.

Exit codes: 0 success, 1 domain or usage error (the offending flag is named on
stderr), 2 verification failure or route mismatch.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace
from fractions import Fraction

from . import heights, lfunc, local_nonarch as ln, padic_oracle as po, verify
from .numberfield import NumberFieldData, RamificationSet, is_fundamental_discriminant, is_prime, parse_field, render_field

EXIT_OK, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2
PREC_RANGE = (1e-12, 1e-2)
PREC_ENV = "MODHEIGHT_PREC"
DEFAULT_PREC = 1e-10


class DomainError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise DomainError("usage", message)


def _guarded(flag: str, fn, *args):
    try:
        return fn(*args)
    except (ValueError, ArithmeticError) as exc:
        raise DomainError(flag, str(exc)) from None


def _prec(args) -> float:
    if args.prec is not None:
        flag, raw = "--prec", args.prec
    else:
        flag, raw = PREC_ENV, os.environ.get(PREC_ENV)
        if raw is None:
            return DEFAULT_PREC
    try:
        value = float(raw)
    except ValueError:
        raise DomainError(flag, f"not a number: {raw!r}") from None
    lo, hi = PREC_RANGE
    if not lo <= value <= hi:
        raise DomainError(flag, f"{value:g} outside [{lo:g}, {hi:g}]")
    return value


def _field(args) -> NumberFieldData:
    F = _guarded("--field", parse_field, args.field)
    if args.class_number is not None:
        F = _guarded("--class-number", NumberFieldData, F.D, args.class_number)
    return F


def _ram(args, F) -> RamificationSet:
    return _guarded("--ramified", RamificationSet.parse, F, args.ramified)


def _table(rows) -> str:
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def _emit(args, payload: dict, rows):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(_table(rows))


# -- subcommands ---------------------------------------------------------------

def cmd_height(args) -> int:
    prec = _prec(args)
    F = _field(args)
    ram = _ram(args, F)
    routes = {"minus1": [heights.modular_height], "two": [heights.modular_height_via_s2],
              "both": [heights.modular_height, heights.modular_height_via_s2]}[args.route]
    results = [_guarded("--prec", fn, F, ram, prec) for fn in routes]
    payload = {"field": render_field(F), "ramified": str(ram), "results": [r.to_dict() for r in results]}
    rows = [("field", render_field(F)), ("ramified", str(ram) or "-")]
    for r in results:
        rows += [(f"[{r.route}] {k}", f"{v:.12f}") for k, v in r.breakdown.items()]
        rows.append((f"[{r.route}] value", f"{r.value:.12f}"))
    code = EXIT_OK
    if len(results) == 2:
        diff = abs(results[0].value - results[1].value)
        tol = 2 * prec
        payload.update(difference=diff, tolerance=tol)
        rows.append(("difference", f"{diff:.3e} (tolerance {tol:.1e})"))
        if diff > tol:
            print(f"error: --route both: routes differ by {diff:.3e} > {tol:.1e}", file=sys.stderr)
            code = EXIT_VERIFY
    _emit(args, payload, rows)
    return code


def cmd_cm_height(args) -> int:
    prec = _prec(args)
    F = _field(args)
    if args.l_ratio is not None:
        ratio = lfunc.LSeriesValue.supplied(args.l_ratio)
    elif not F.is_rational:
        raise DomainError("--l-ratio", "L-values over a real quadratic field must be supplied")
    else:
        if args.disc is None:
            raise DomainError("--disc", "required unless --l-ratio is given")
        ratio = _guarded("--disc", lfunc.quadratic_l_log_deriv_at0, args.disc, prec)
    value = _guarded("--dB", heights.cm_height, F, ratio, args.dB, args.dEF)
    payload = {"field": render_field(F), "disc": args.disc, "dB": args.dB, "dEF": args.dEF,
               "l_ratio": ratio.value, "source": ratio.source, "value": value}
    rows = [("L'/L(0)", f"{ratio.value:.12f} ({ratio.source})"),
            ("(1/2) log(dB/dEF)", f"{0.5 * math.log(args.dB / args.dEF):.12f}"),
            ("value", f"{value:.12f}")]
    _emit(args, payload, rows)
    return EXIT_OK


def cmd_degree(args) -> int:
    F = _field(args)
    ram = _ram(args, F)
    deg = _guarded("--class-number", heights.vigneras_degree, F, ram, args.class_number)
    payload = {"field": render_field(F), "ramified": str(ram), "class_number": args.class_number or F.class_number,
               "degree": str(deg)}
    _emit(args, payload, [("field", render_field(F)), ("ramified", str(ram) or "-"), ("degree", str(deg))])
    return EXIT_OK


def cmd_lvalue(args) -> int:
    prec = _prec(args)
    if args.disc is not None and args.disc < 0:
        L0 = _guarded("--disc", lfunc.l_value_at_0, args.disc)
        ratio = _guarded("--disc", lfunc.quadratic_l_log_deriv_at0, args.disc, prec)
        payload = {"disc": args.disc, "L(0)": str(L0), "L'/L(0)": ratio.value}
        rows = [("L(0)", str(L0)), ("L'/L(0)", f"{ratio.value:.12f}")]
    else:
        if args.disc is not None:
            F = _guarded("--disc", _field_from_disc, args.disc)
        else:
            F = _field(args)
        at2 = _guarded("--prec", lfunc.zeta_log_deriv_at2, F, prec)
        at_m1 = lfunc.zeta_log_deriv_at_minus1(F, prec)
        zm1 = lfunc.zeta_value_at_minus1(F)
        payload = {"field": render_field(F), "log_deriv_at_2": at2.value, "log_deriv_at_minus1": at_m1.value,
                   "zeta_at_minus1": str(zm1), "precision": prec}
        rows = [("field", render_field(F)), ("zeta'/zeta(2)", f"{at2.value:.12f}"),
                ("zeta'/zeta(-1)", f"{at_m1.value:.12f}"), ("zeta(-1)", str(zm1))]
    _emit(args, payload, rows)
    return EXIT_OK


def _field_from_disc(d: int) -> NumberFieldData:
    if d == 1:
        return NumberFieldData()
    if not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a fundamental discriminant")
    return NumberFieldData(d // 4 if d % 4 == 0 else d)


def _parse_s(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return Fraction(text) if "/" in text else float(text)
    except ValueError:
        raise DomainError("--s", f"not a number: {text!r}") from None


def cmd_local(args) -> int:
    s = _parse_s(args.s)
    spec = _guarded("--N", ln.LocalWhittakerSpec, args.N, args.delta, args.r, True, args.algebra, s)
    try:
        closed = ln.whittaker(spec)
    except ln.UnsupportedClosedForm:
        closed = None
    except (ValueError, ArithmeticError) as exc:
        raise DomainError("--s", str(exc)) from None
    payload = {"N": args.N, "delta": args.delta, "r": args.r, "s": str(s), "algebra": args.algebra,
               "closed_form": None if closed is None else str(closed)}
    rows = [("closed form", "unsupported (use the oracle)" if closed is None else str(closed))]
    if closed is not None and not isinstance(closed, float):
        rows.append(("numeric", f"{float(closed):.12g}"))
    code = EXIT_OK
    if is_prime(args.N) and isinstance(s, int) and s >= 0:
        oracle = _guarded("--r", po.whittaker_oracle, spec)
        payload["oracle"] = str(oracle)
        rows.append(("oracle", str(oracle)))
        if closed is not None:
            agree = closed == oracle
            payload["agree"] = agree
            rows.append(("agree", str(agree)))
            if not agree:
                code = EXIT_VERIFY
    if args.algebra == ln.MATRIX and args.r >= 0:
        combo = ln.whittaker_split_deriv_combo(args.N, args.delta, args.r)
        payload["deriv_combo"] = float(combo)
        rows.append(("W'(0) - (1/2)log|a| W(0)", f"{float(combo):.12g}  [{combo!r}]"))
    _emit(args, payload, rows)
    return code


def _primes(text: str):
    try:
        primes = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise DomainError("--primes", f"expected a comma-separated list, got {text!r}") from None
    bad = [p for p in primes if not is_prime(p)]
    if bad or not primes:
        raise DomainError("--primes", f"not prime: {bad}" if bad else "empty list")
    return primes


def cmd_verify(args) -> int:
    cfg = verify.SuiteConfig(prec=_prec(args), threads=args.threads)
    if args.primes:
        cfg = cfg.with_primes(_primes(args.primes))
    if args.max_depth is not None:
        if args.max_depth < 1:
            raise DomainError("--max-depth", "must be >= 1")
        cfg = replace(cfg, max_depth=args.max_depth)
    try:
        report = verify.run_suite(args.suite, cfg)
    except verify.BudgetError as exc:
        raise DomainError("--max-depth" if args.max_depth is not None else "--primes", str(exc)) from None
    if args.format == "json":
        print(report.to_json(sort_keys=True))
    else:
        rows = [(c.label, f"{'ok  ' if c.passed else 'FAIL'} err={c.abs_error:.2e} tol={c.tolerance:.1e}")
                for c in report.checks]
        rows.append(("overall", f"{'pass' if report.overall else 'FAIL'} ({len(report.checks)} checks)"))
        print(_table(rows))
    if not report.overall:
        print(f"error: --suite {args.suite}: {len(report.failures())} checks failed", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="modheight", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, field=True, prec=True):
        sp.add_argument("--format", choices=("table", "json"), default="table")
        if field:
            sp.add_argument("--field", default="Q", help="'Q' or 'Q(sqrt D)'")
            sp.add_argument("--class-number", type=int, default=None)
        if prec:
            sp.add_argument("--prec", default=None, help=f"target error in [1e-12, 1e-2]; default ${PREC_ENV} or 1e-10")

    sp = sub.add_parser("height", help="modular height of the Shimura curve")
    common(sp)
    sp.add_argument("--ramified", default="", help="places, e.g. 2,3 or 7:split1,2:inert")
    sp.add_argument("--route", choices=("minus1", "two", "both"), default="minus1")
    sp.set_defaults(run=cmd_height)

    sp = sub.add_parser("cm-height", help="height of a CM point")
    common(sp)
    sp.add_argument("--disc", type=int, default=None, help="negative fundamental discriminant of E")
    sp.add_argument("--dB", type=int, required=True)
    sp.add_argument("--dEF", type=int, required=True)
    sp.add_argument("--l-ratio", type=float, default=None, help="supplied L'/L(0)")
    sp.set_defaults(run=cmd_cm_height)

    sp = sub.add_parser("degree", help="exact degree of the Hodge bundle")
    common(sp, prec=False)
    sp.add_argument("--ramified", default="")
    sp.set_defaults(run=cmd_degree)

    sp = sub.add_parser("lvalue", help="zeta and L-function values")
    common(sp)
    sp.add_argument("--disc", type=int, default=None)
    sp.set_defaults(run=cmd_lvalue)

    sp = sub.add_parser("local", help="local Whittaker value, with the lattice-count oracle when N is prime")
    common(sp, field=False, prec=False)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--delta", type=int, default=0)
    sp.add_argument("--r", type=int, default=0)
    sp.add_argument("--s", default="0")
    sp.add_argument("--algebra", choices=(ln.MATRIX, ln.DIVISION), default=ln.MATRIX)
    sp.set_defaults(run=cmd_local)

    sp = sub.add_parser("verify", help="run identity suites")
    common(sp, field=False)
    sp.add_argument("--suite", choices=verify.SUITES, default="all")
    sp.add_argument("--max-depth", type=int, default=None)
    sp.add_argument("--primes", default=None)
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(run=cmd_verify)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.run(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
