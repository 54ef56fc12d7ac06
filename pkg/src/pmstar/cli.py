"""The `pm` command line program."""
import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

from . import operators as ops
from . import restrict, star
from .algebra import evaluate, format_function, parse_expression
from .errors import ExpressionSyntaxError, PMError, UnknownSuite
from .gaussian import GaussianRational, parse_gaussian
from .geometry import point
from .verify import SUITES, verify_suite


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- argument types

def parse_point(text):
    """'z;w' with slots 'a+bi' or 'inf', or 'a,b' for two real slots."""
    s = text.strip()
    parts = s.split(";") if ";" in s else s.split(",")
    if len(parts) != 2:
        raise UsageError(f"point {text!r} needs two slots: 'z;w' or 'a,b'")
    try:
        return point(*(p.strip() for p in parts))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad point {text!r}: {exc}") from None


def parse_complex(text):
    try:
        return parse_gaussian(text)
    except (ValueError, ZeroDivisionError, PMError) as exc:
        raise UsageError(f"bad complex number {text!r}: {exc}") from None


def parse_sweep(text):
    """'hbar=a:b:log:n' or 'hbar=a:b:lin:n'."""
    try:
        name, spec = text.split("=", 1)
        a, b, scale, n = spec.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise UsageError(f"bad sweep {text!r}; expected hbar=a:b:log:n") from None
    if name.strip() != "hbar" or scale not in ("log", "lin") or n < 1:
        raise UsageError(f"bad sweep {text!r}; expected hbar=a:b:log:n")
    if n == 1:
        vals = [a]
    elif scale == "log":
        if a <= 0 or b <= 0:
            raise UsageError("log sweeps need positive end points")
        la, lb = math.log(a), math.log(b)
        vals = [math.exp(la + (lb - la) * k / (n - 1)) for k in range(n)]
    else:
        vals = [a + (b - a) * k / (n - 1) for k in range(n)]
    return [GaussianRational(Fraction(v).limit_denominator(10 ** 12)) for v in vals]


def _cplx(x):
    x = complex(x)
    return [x.real, x.imag]


def _fmt_complex(x):
    x = complex(x)
    if x.imag == 0:
        return repr(x.real)
    sign = "+" if x.imag >= 0 else "-"
    return f"{x.real!r}{sign}{abs(x.imag)!r}i"


def _max_terms(args):
    if args.max_terms is not None:
        return args.max_terms
    env = os.environ.get("PM_MAX_TERMS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"PM_MAX_TERMS={env!r} is not an integer") from None
    return 200


def _params(args, hbar=None):
    return star.StarParams(hbar=hbar if hbar is not None else parse_complex(args.hbar),
                           max_terms=_max_terms(args), abs_tol=args.tol, radius_R=args.radius,
                           bound_mode=args.mode)


# ---------------------------------------------------------------- output

def emit(out, fmt, payload, text, rows=None):
    if fmt == "json":
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    elif fmt == "csv":
        rows = rows or [payload]
        buf = io.StringIO()
        keys = list(rows[0].keys())
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()})
        out.write(buf.getvalue())
    else:
        out.write(text + "\n")


def _function_payload(f):
    return {"function": format_function(f), "json": f.to_json()}


# ---------------------------------------------------------------- subcommands

def cmd_derive(args, out):
    f = parse_expression(args.expr)
    g = ops.pm_derive(f, args.m, args.n, args.method, alpha=args.alpha)
    payload = _function_payload(g)
    text = format_function(g)
    if args.at:
        v = evaluate(g, parse_point(args.at))
        payload["value"] = _cplx(v)
        text += f"\nvalue = {v}"
    emit(out, args.format, payload, text)


def cmd_tilde(args, out):
    f = parse_expression(args.expr)
    g = ops.pm_tilde(f, args.m, args.n, args.method)
    emit(out, args.format, _function_payload(g), format_function(g))


def cmd_poly(args, out):
    P = ops.laplace_poly(args.m, args.n, args.alpha)
    payload = {"m": args.m, "n": args.n, "coefficients": list(P.coeffs), "polynomial": str(P)}
    emit(out, args.format, payload, f"P_{{{args.m},{args.n}}}(x) = {P}\ncoefficients: {list(P.coeffs)}")


def cmd_kernel(args, out):
    gens = ops.kernel_basis(args.n, args.slot, args.cutoff)
    names = [format_function(g) for g in gens]
    payload = {"n": args.n, "slot": args.slot, "generators": names}
    rows = [{"index": i, "generator": s} for i, s in enumerate(names)]
    emit(out, args.format, payload, "\n".join(names), rows)


def _star_row(h, r):
    return {"hbar_re": complex(h).real, "hbar_im": complex(h).imag, "value_re": r.value.real,
            "value_im": r.value.imag, "tail_bound": r.tail_bound, "terms": r.terms, "mode": r.mode}


def cmd_star(args, out):
    f, g = parse_expression(args.f), parse_expression(args.g)
    p = parse_point(args.at)
    if args.sweep:
        rows = [_star_row(h, star.star_eval(f, g, p, _params(args, h))) for h in parse_sweep(args.sweep)]
        fmt = "json" if args.format == "json" else "csv"
        emit(out, fmt, {"rows": rows}, "", rows)
        return
    r = star.star_eval(f, g, p, _params(args))
    emit(out, args.format, r.to_json(),
         f"value = {_fmt_complex(r.value)}\ntail_bound = {r.tail_bound:.3e}\nterms = {r.terms}")


def _diag(args, out, fn):
    z = parse_complex(args.at)
    r = fn(parse_expression(args.phi), parse_expression(args.eta), z, _params(args))
    payload = {"value": _cplx(r.value), "tail_bound": r.tail_bound, "terms": r.terms,
               "one_variable_value": _cplx(r.one_variable_value), "agreement": r.agreement}
    emit(out, args.format, payload,
         f"value = {_fmt_complex(r.value)}\ntail_bound = {r.tail_bound:.3e}\n"
         f"one-variable sum = {_fmt_complex(r.one_variable_value)}")


def cmd_star_disk(args, out):
    _diag(args, out, restrict.star_disk)


def cmd_star_sphere(args, out):
    _diag(args, out, restrict.star_sphere)


def cmd_asym(args, out):
    f, g = parse_expression(args.f), parse_expression(args.g)
    if args.sweep:
        if not args.at:
            raise UsageError("--sweep needs --at")
        p = parse_point(args.at)
        hs = parse_sweep(args.sweep)
        pairs = star.asymptotic_remainders(f, g, p, args.N, hs, star.StarParams(max_terms=_max_terms(args)))
        rows = [{"hbar": complex(h).real, "N": args.N, "remainder": rem} for h, (_, rem) in zip(hs, pairs)]
        fmt = "json" if args.format == "json" else "csv"
        emit(out, fmt, {"rows": rows}, "", rows)
        return
    series = star.asym_coeffs(f, g, args.N, args.convention)
    names = [format_function(a) for a in series.coefficients]
    payload = {"coefficients": names}
    text = "\n".join(f"a_{n} = {s}" for n, s in enumerate(names))
    if args.at:
        vals = [evaluate(a, parse_point(args.at)) for a in series.coefficients]
        payload["values"] = [_cplx(v) for v in vals]
    rows = [{"n": n, "coefficient": s} for n, s in enumerate(names)]
    emit(out, args.format, payload, text, rows)


def cmd_poisson(args, out):
    h = star.poisson_bracket(parse_expression(args.f), parse_expression(args.g))
    emit(out, args.format, _function_payload(h), format_function(h))


def cmd_eval(args, out):
    f = parse_expression(args.expr)
    v = evaluate(f, parse_point(args.at))
    emit(out, args.format, {"value": _cplx(v), "exact": str(v)}, str(v))


def cmd_verify(args, out):
    rep = verify_suite(args.suite, args.seed)
    lines = [f"suite {rep.name} (seed {rep.seed}): {'PASS' if rep.passed else 'FAIL'}"]
    for p in rep.properties:
        line = (f"  {'PASS' if p.passed else 'FAIL'} {p.name}: {p.instances} instances, "
                f"max deviation {p.max_deviation:.3g}")
        if p.note:
            line += f" ({p.note})"
        lines.append(line)
    rows = [vars(p) for p in rep.properties]
    emit(out, args.format, rep.to_json(), "\n".join(lines), rows)
    return 0 if rep.passed else 1


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--seed", type=int, default=0)

    series = _Parser(add_help=False)
    series.add_argument("--hbar", default="0.1")
    series.add_argument("--tol", type=float, default=1e-12)
    series.add_argument("--max-terms", type=int, default=None)
    series.add_argument("--radius", type=float, default=None)
    series.add_argument("--mode", choices=("certified_geometric", "successive_term"),
                        default="certified_geometric")

    p = _Parser(prog="pm", description="Peschl-Minda derivatives and star products on Omega.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    methods = [m.value for m in ops.PMethod]

    s = sub.add_parser("derive", parents=[common], help="D^{m,n} of an expression")
    s.add_argument("--expr", required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--method", choices=methods, default="explicit")
    s.add_argument("--alpha", choices=("corrected", "printed"), default="corrected")
    s.add_argument("--at")
    s.set_defaults(func=cmd_derive)

    s = sub.add_parser("tilde", parents=[common], help="flip-chart derivative")
    s.add_argument("--expr", required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--method", choices=methods, default="explicit")
    s.set_defaults(func=cmd_tilde)

    s = sub.add_parser("poly", parents=[common], help="the polynomial P_{m,n}")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--alpha", choices=("corrected", "printed"), default="corrected")
    s.set_defaults(func=cmd_poly)

    s = sub.add_parser("kernel", parents=[common], help="generators of ker D_z^{n+1}")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--slot", choices=("z", "w"), default="z")
    s.add_argument("--cutoff", type=int, default=4)
    s.set_defaults(func=cmd_kernel)

    s = sub.add_parser("star", parents=[common, series], help="(f * g)(p)")
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--at", required=True)
    s.add_argument("--sweep")
    s.set_defaults(func=cmd_star)

    for name, fn in (("star-disk", cmd_star_disk), ("star-sphere", cmd_star_sphere)):
        s = sub.add_parser(name, parents=[common, series], help=f"{name.split('-')[1]} star product at z")
        s.add_argument("--phi", required=True)
        s.add_argument("--eta", required=True)
        s.add_argument("--at", required=True)
        s.set_defaults(func=fn)

    s = sub.add_parser("asym", parents=[common], help="asymptotic coefficients a_0..a_N")
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--N", type=int, default=2)
    s.add_argument("--convention", choices=("expansion", "printed"), default="expansion")
    s.add_argument("--at")
    s.add_argument("--sweep")
    s.add_argument("--max-terms", type=int, default=None)
    s.set_defaults(func=cmd_asym)

    s = sub.add_parser("poisson", parents=[common], help="{f, g}")
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.set_defaults(func=cmd_poisson)

    s = sub.add_parser("eval", parents=[common], help="evaluate an expression at a point")
    s.add_argument("--expr", required=True)
    s.add_argument("--at", required=True)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("verify", parents=[common], help="run a property suite")
    s.add_argument("suite", help=", ".join(SUITES))
    s.set_defaults(func=cmd_verify)
    return p


def run_command(argv, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except SystemExit as exc:     # --help
        return 0 if exc.code in (0, None) else 2
    fmt = getattr(args, "format", "text")
    try:
        code = args.func(args, out)
        return code or 0
    except (UsageError, ExpressionSyntaxError, UnknownSuite) as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except PMError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        if fmt == "json":
            out.write(json.dumps(payload, sort_keys=True) + "\n")
        else:
            err.write(f"error: {payload['error']}: {payload['message']}\n")
        return 1


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
