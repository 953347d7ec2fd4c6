"""Command-line front end.

Exit codes:
    0  success
    1  a verification ran but did not pass
    2  usage or domain error
    3  numerical failure (no convergence, exhausted precision, failed fit)
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from fractions import Fraction
from typing import List, Optional

from . import degrees, hecke, polyfit
from .errors import ConvergenceError, DomainError, FitError
from .hypergeom import LAMBDA_SQ, SignatureParams, ratio_R
from .precision import check_precision, context, format_real, parse_real
from .solver import default_tol, solve_order_p, swap_solution, verify_solution

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_DOMAIN = 2
EXIT_NUMERIC = 3

ENV_PRECISION = "MODEQ_PRECISION_BITS"
DEFAULT_PRECISION = 128


class UsageError(DomainError):
    pass


def _default_precision() -> int:
    raw = os.environ.get(ENV_PRECISION)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return check_precision(int(raw))
    except ValueError as exc:
        raise UsageError(f"{ENV_PRECISION}={raw!r}: {exc}") from None


def _params(args, arithmetic: bool = False) -> SignatureParams:
    if args.t is not None and args.sig is not None:
        raise UsageError("give either --sig or --t, not both")
    if args.t is not None:
        try:
            t = Fraction(args.t)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"cannot parse t={args.t!r}") from None
    elif args.sig is not None:
        t = Fraction(1, args.sig)
    else:
        raise UsageError("one of --sig or --t is required")
    if arithmetic and t not in LAMBDA_SQ:
        raise UsageError(f"t={t} is not one of 1/2, 1/3, 1/4")
    return SignatureParams(t, args.precision)


def _emit(args, payload, text: str, csv_rows: Optional[List[list]] = None) -> None:
    if args.format == "json":
        print(json.dumps(payload, ensure_ascii=False))
    elif args.format == "csv" and csv_rows is not None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\r\n").writerows(csv_rows)
        sys.stdout.write(buf.getvalue())
    else:
        print(text)


def _kv_text(record: dict) -> str:
    return "\n".join(f"{k}: {v}" for k, v in record.items())


# -- analytic commands -------------------------------------------------------

def cmd_solve(args) -> int:
    params = _params(args)
    bits = params.precision_bits
    alpha = parse_real(args.alpha, bits)
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {args.alpha}")
    tol = default_tol(bits) if args.tol is None else parse_real(args.tol, bits)
    pair = solve_order_p(params, alpha, args.p, tol, polish=not args.no_polish)
    record = pair.to_json()
    _emit(args, record, _kv_text(record), [list(record), list(record.values())])
    return EXIT_OK


def _sample_alphas(seed: int, count: int) -> List[str]:
    rng = random.Random(seed)
    return [repr(rng.uniform(0.05, 0.95)) for _ in range(count)]


def _require(params: SignatureParams, p: int, t: Fraction, order: int, name: str) -> None:
    if params.t != t or p != order:
        raise UsageError(f"identity {name!r} holds only for t={t}, p={order}")


def cmd_verify(args) -> int:
    params = _params(args)
    bits = params.precision_bits
    ctx = context(bits)
    tol = default_tol(bits)
    which = args.identity
    worst = ctx.mpf(0)
    threshold = tol
    count = args.samples
    if which == "singular":
        _require(params, args.p, Fraction(1, 2), 2, which)
        pair = solve_order_p(params, Fraction(1, 2), 2)
        worst = abs(pair.beta - (17 - 12 * ctx.sqrt(2)))
        threshold = ctx.mpf("1e-12")
        count = 1
    else:
        if which in ("cubic", "multiplier"):
            _require(params, args.p, Fraction(1, 3), 2, which)
            threshold = ctx.mpf("1e-25") if which == "cubic" else ctx.mpf("1e-20")
        for text in _sample_alphas(args.seed, count):
            pair = solve_order_p(params, parse_real(text, bits), args.p)
            a, b, m = pair.alpha, pair.beta, pair.m
            if which == "modular":
                errs = [verify_solution(params, pair)[0]]
            elif which == "fricke":
                errs = [swap_solution(pair).residual]
            elif which == "composition":
                second = solve_order_p(params, b, args.q)
                threshold = 10 * tol
                errs = [abs(ratio_R(params, second.beta) - args.p * args.q * ratio_R(params, a))]
            elif which == "cubic":
                errs = [abs(ctx.cbrt(a * b) + ctx.cbrt((1 - a) * (1 - b)) - 1)]
            else:
                errs = [
                    abs(ctx.cbrt((1 - b) ** 2 / (1 - a)) - ctx.cbrt(b ** 2 / a) - m),
                    abs(ctx.cbrt(a ** 2 / b) + ctx.cbrt((1 - a) ** 2 / (1 - b)) - 4 / m ** 2),
                ]
            worst = max([worst] + errs)
    passed = worst <= threshold if which in ("modular", "fricke", "composition") else worst < threshold
    record = {
        "identity": which,
        "t": str(params.t),
        "p": args.p,
        "samples": count,
        "max_error": format_real(worst, bits),
        "threshold": format_real(threshold, bits),
        "passed": bool(passed),
    }
    _emit(args, record, _kv_text(record), [list(record), list(record.values())])
    return EXIT_OK if passed else EXIT_FAILED


def cmd_polyfit(args) -> int:
    params = _params(args, arithmetic=args.mu is None)
    bits_given = args.precision_explicit
    mu = args.mu if args.mu is not None else degrees.degree_mu(args.p, int(params.signature))
    if not bits_given:
        params = params.with_precision(polyfit.default_fit_precision(mu))
    result = polyfit.reconstruct(params, args.p, mu=mu, count=args.samples,
                                 held_out=args.held_out, jobs=args.jobs)
    P = result.polynomial
    record = {
        "t": str(params.t),
        "p": args.p,
        "precision_bits": params.precision_bits,
        **P.to_json(),
        "gap": format_real(result.diagnostics.gap, 64),
        "held_out_residual": format_real(result.held_out_residual, 64),
        "residual_bound": format_real(result.bound, 64),
        "fricke_sign": result.symmetry.coefficient_sign,
        "passed": result.passed,
    }
    rows = [["j", "k", "coeff"]] + [
        [j, k, c] for j, row in enumerate(P.coeffs) for k, c in enumerate(row) if c
    ]
    print(f"mu={mu} gap={record['gap']} held-out max|P|={record['held_out_residual']} "
          f"fricke_sign={record['fricke_sign']}", file=sys.stderr)
    _emit(args, record, P.pretty(), rows)
    return EXIT_OK if result.passed else EXIT_FAILED


# -- degree commands ---------------------------------------------------------

def cmd_table(args) -> int:
    records = degrees.degree_table(args.p_max)
    if args.format == "json":
        print(json.dumps([r.to_json() for r in records]))
    else:
        sys.stdout.write(degrees.table_csv(records))
    return EXIT_OK


def cmd_psi(args) -> int:
    value = degrees.dedekind_psi(args.n)
    _emit(args, {"n": args.n, "psi": value}, str(value), [["n", "psi"], [args.n, value]])
    return EXIT_OK


def cmd_mu(args) -> int:
    record = degrees.degree_record(args.p, args.sig)
    _emit(args, record.to_json(), str(record.mu),
          [["p", "signature", "mu"], [record.p, record.signature, record.mu]])
    return EXIT_OK


def cmd_russell(args) -> int:
    m, l = degrees.russell_degree(args.p, args.sig)
    payload = {"p": args.p, "signature": args.sig, "m": m, "l": l}
    _emit(args, payload, f"{m} {l}", [list(payload), list(payload.values())])
    return EXIT_OK


# -- hecke commands ----------------------------------------------------------

def _matrix_out(args, x) -> None:
    _emit(args, {"matrix": str(x)}, str(x))


def cmd_hecke(args) -> int:
    op = args.hecke_cmd
    if op == "cosets":
        value = hecke.coset_index_bruteforce(args.n)
        _emit(args, {"n": args.n, "index": value}, str(value))
        return EXIT_OK
    x = hecke.HeckeMatrix.parse(args.x)
    if op == "mul":
        _matrix_out(args, hecke.multiply(x, hecke.HeckeMatrix.parse(args.y)))
    elif op == "inv":
        _matrix_out(args, hecke.inverse(x))
    elif op == "theta":
        _matrix_out(args, hecke.theta_iso(x))
    elif op == "fricke":
        _matrix_out(args, hecke.fricke_conj(x, args.p))
    elif op == "member":
        ok = hecke.in_HMp(x, args.p)
        _emit(args, {"matrix": str(x), "p": args.p, "member": ok}, "true" if ok else "false")
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def _add_signature(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sig", type=int, choices=(2, 3, 4), help="signature 1/t")
    p.add_argument("--t", help="theory parameter t as a rational, e.g. 1/3")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None,
                        help=f"working precision in bits (default {DEFAULT_PRECISION} or ${ENV_PRECISION})")
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sampling")

    parser = argparse.ArgumentParser(prog="modeq", description="Generalized modular equations of signature 2, 3 and 4.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="solve for beta of order p over alpha")
    _add_signature(s)
    s.add_argument("--alpha", required=True)
    s.add_argument("-p", type=int, required=True)
    s.add_argument("--tol")
    s.add_argument("--no-polish", action="store_true", help="bisection only")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("table", parents=[common], help="degrees mu(p, 1/t) for p = 2..P_MAX")
    s.add_argument("p_max", type=int)
    # CSV is the table's native form, so it wins over the tty/pipe default
    s.set_defaults(func=cmd_table, default_format="csv")

    s = sub.add_parser("psi", parents=[common], help="Dedekind psi")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_psi)

    s = sub.add_parser("mu", parents=[common], help="degree of the modular polynomial")
    s.add_argument("-p", type=int, required=True)
    s.add_argument("--sig", type=int, required=True)
    s.set_defaults(func=cmd_mu)

    s = sub.add_parser("russell", parents=[common], help="Russell-form degrees (m, l)")
    s.add_argument("-p", type=int, required=True)
    s.add_argument("--sig", type=int, required=True)
    s.set_defaults(func=cmd_russell)

    s = sub.add_parser("verify", parents=[common], help="check an identity on solved pairs")
    _add_signature(s)
    s.add_argument("-p", type=int, required=True)
    s.add_argument("--identity", required=True,
                   choices=("modular", "fricke", "composition", "cubic", "multiplier", "singular"))
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--q", type=int, default=2, help="second order for the composition check")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("polyfit", parents=[common], help="reconstruct P(alpha, beta)")
    _add_signature(s)
    s.add_argument("-p", type=int, required=True)
    s.add_argument("--mu", type=int, help="override the degree (default: from the index formula)")
    s.add_argument("--samples", type=int, help="fit samples (default (mu+1)^2 + 8)")
    s.add_argument("--held-out", type=int, default=50)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_polyfit)

    h = sub.add_parser("hecke", parents=[common], help="exact Hecke-group arithmetic")
    hs = h.add_subparsers(dest="hecke_cmd", required=True)
    literal = "matrix literal '[a b; c d] lambda2=n'"
    x = hs.add_parser("mul", parents=[common])
    x.add_argument("x", help=literal)
    x.add_argument("y", help=literal)
    for name in ("inv", "theta"):
        x = hs.add_parser(name, parents=[common])
        x.add_argument("x", help=literal)
    for name in ("member", "fricke"):
        x = hs.add_parser(name, parents=[common])
        x.add_argument("x", help=literal)
        x.add_argument("-p", type=int, required=True)
    x = hs.add_parser("cosets", parents=[common])
    x.add_argument("n", type=int)
    for x in hs.choices.values():
        x.set_defaults(func=cmd_hecke)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.precision_explicit = args.precision is not None or ENV_PRECISION in os.environ
        if args.precision is None:
            args.precision = _default_precision()
        else:
            args.precision = check_precision(args.precision)
        if args.format is None:
            args.format = getattr(args, "default_format", None) or (
                "text" if sys.stdout.isatty() else "json")
        return args.func(args)
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConvergenceError, FitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
