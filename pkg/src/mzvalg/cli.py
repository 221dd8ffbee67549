"""Command-line front end: ``python -m mzvalg <command> ...``.

Exit codes: 0 success (or every check passed), 1 a verification failed,
2 usage, parse or domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from typing import Sequence

from . import action, finite_sums, numeric, qsym
from .algebra import NCPoly, format_rational, parse_poly
from .shuffle import shuffle
from .words import DomainError, ParseError, lyndon_words, parse_composition, parse_word, tau

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


def _emit(args, text: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _poly_payload(command: str, result: NCPoly, **inputs) -> dict:
    return {"command": command, "inputs": inputs, "result": result.to_json(), "text": str(result)}


def _parse_zeta_argument(text: str):
    """A composition "(2,1)" or an admissible word/polynomial "x^2y"."""
    if text.strip().startswith("("):
        return parse_composition(text)
    return parse_poly(text)


# --- commands ------------------------------------------------------------------

def cmd_product(args) -> int:
    if args.type == "qsym":
        result = qsym.qsym_mul(qsym.parse_qsym(args.u), qsym.parse_qsym(args.v))
        payload = {"command": "product", "inputs": {"type": args.type, "u": args.u, "v": args.v},
                   "result": result.to_json(), "text": str(result)}
        _emit(args, str(result), payload)
        return EXIT_OK
    u, v = parse_poly(args.u), parse_poly(args.v)
    result = shuffle(u, v) if args.type == "shuffle" else qsym.star(u, v)
    _emit(args, str(result), _poly_payload("product", result, type=args.type, u=args.u, v=args.v))
    return EXIT_OK


def cmd_convert(args) -> int:
    expr = qsym.parse_qsym(args.expr)
    result = qsym.convert_basis(expr, args.to)
    payload = {"command": "convert", "inputs": {"expr": args.expr, "to": args.to},
               "result": result.to_json(), "text": str(result)}
    _emit(args, str(result), payload)
    return EXIT_OK


def cmd_act(args) -> int:
    result = action.dot(parse_poly(args.u), parse_poly(args.w))
    _emit(args, str(result), _poly_payload("act", result, u=args.u, w=args.w))
    return EXIT_OK


_DERIVATIONS = {
    "D": action.D_n,
    "Dbar": action.Dbar_n,
    "partial": action.kaneko_partial,
    "C": action.C,
    "tauCtau": action.tauCtau,
}


def cmd_derive(args) -> int:
    w = parse_poly(args.w)
    result = _DERIVATIONS[args.op](w, args.n)
    _emit(args, str(result), _poly_payload("derive", result, op=args.op, n=args.n, w=args.w))
    return EXIT_OK


_SERIES = {
    "sigma": action.sigma_t,
    "sigma_inv": action.sigma_t_inv,
    "sigma_bar": action.sigma_bar_t,
    "kaneko_exp": action.kaneko_exponential,
}


def cmd_series(args) -> int:
    s = _SERIES[args.op](parse_poly(args.w), args.order)
    lines = [f"t^{k}: {s[k]}" for k in range(s.order + 1)]
    payload = {"command": "series", "inputs": {"op": args.op, "w": args.w, "order": args.order},
               "result": [s[k].to_json() for k in range(s.order + 1)]}
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_tau(args) -> int:
    result = parse_poly(args.w).map_words(tau)
    _emit(args, str(result), _poly_payload("tau", result, w=args.w))
    return EXIT_OK


def cmd_psi(args) -> int:
    result = qsym.psi(parse_poly(args.w))
    _emit(args, str(result), _poly_payload("psi", result, w=args.w))
    return EXIT_OK


def cmd_finite(args) -> int:
    I = parse_composition(args.composition)
    if args.n < 0:
        raise UsageError("n must be >= 0")
    value = (finite_sums.A if args.kind == "A" else finite_sums.S)(I, args.n)
    text = format_rational(value)
    payload = {"command": "finite", "inputs": {"kind": args.kind, "composition": list(I), "n": args.n},
               "result": text}
    _emit(args, text, payload)
    return EXIT_OK


def cmd_modp(args) -> int:
    I = parse_composition(args.composition)
    value = (finite_sums.A_modp if args.kind == "A" else finite_sums.S_modp)(I, args.p)
    payload = {"command": "modp", "inputs": {"kind": args.kind, "composition": list(I), "p": args.p},
               "result": {"residue": value.residue, "modulus": value.modulus}}
    _emit(args, str(value), payload)
    return EXIT_OK


def cmd_zeta(args) -> int:
    arg = _parse_zeta_argument(args.argument)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", numeric.PrecisionWarning)
        if isinstance(arg, tuple):
            value = numeric.mzv(arg, args.tol)
        elif args.regularized:
            value = numeric.zeta_hat_poly(arg, args.tol)
        else:
            value = numeric.zeta_poly(arg, args.tol)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    payload = {"command": "zeta", "inputs": {"argument": args.argument, "tol": args.tol},
               "result": {"value": value.value, "error_bound": value.error_bound,
                          "warning": value.warning}}
    _emit(args, f"{value.value:.15g} +/- {value.error_bound:.3g}", payload)
    return EXIT_OK


def cmd_lyndon(args) -> int:
    words = lyndon_words(args.degree)
    payload = {"command": "lyndon", "inputs": {"degree": args.degree}, "result": words}
    _emit(args, "\n".join(words), payload)
    return EXIT_OK


# --- verification --------------------------------------------------------------

CONGRUENCE_NAMES = ("thm6x", "congruences")


def _parse_param(text: str) -> tuple[str, object]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise UsageError(f"parameter {text!r} must look like key=value")
    value = value.strip()
    if value.lstrip("-").isdigit():
        return key, int(value)
    return key, parse_word(value)


def _identity_params(name: str, args) -> dict:
    params = dict(_parse_param(p) for p in args.params)
    caps = numeric.IDENTITIES[name].caps
    if args.max_weight is not None and "max_weight" in caps:
        params["max_weight"] = args.max_weight
    if args.order is not None and "order" in caps:
        params["order"] = args.order
    return params


def _run_identity(name: str, args) -> list:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", numeric.PrecisionWarning)
        return numeric.verify(name, args.tol, **_identity_params(name, args))


def _run_congruences(args) -> list:
    return finite_sums.congruence_suite(args.max_weight or 6, args.max_prime or 97)


def cmd_verify(args) -> int:
    if args.name == "all":
        if args.params:
            raise UsageError("verify all takes no key=value parameters")
        groups = {}
        for name in numeric.DEFAULT_RANGES:
            params = dict(numeric.DEFAULT_RANGES[name])
            if args.max_weight is not None and "max_weight" in params:
                params["max_weight"] = min(params["max_weight"], args.max_weight)
            if args.order is not None and "order" in params:
                params["order"] = args.order
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", numeric.PrecisionWarning)
                groups[name] = numeric.verify(name, args.tol, **params)
        groups["congruences"] = _run_congruences(args)
    elif args.name in CONGRUENCE_NAMES:
        groups = {"congruences": _run_congruences(args)}
    elif args.name in numeric.IDENTITIES:
        groups = {args.name: _run_identity(args.name, args)}
    else:
        known = ", ".join(sorted(numeric.IDENTITIES) + ["all", "thm6x"])
        raise UsageError(f"unknown identity {args.name!r}; known: {known}")

    passed = all(r.passed for reports in groups.values() for r in reports)
    if args.json:
        payload = {"command": "verify", "inputs": {"name": args.name, "tol": args.tol},
                   "passed": passed,
                   "groups": {name: [r.to_json() for r in reports] for name, reports in groups.items()}}
        print(json.dumps(payload, indent=2, default=_json_default))
    else:
        for name, reports in groups.items():
            failures = [r for r in reports if not r.passed]
            # congruence groups are large; list only failures for them
            shown = failures if name == "congruences" else reports
            for r in shown:
                print(r.line())
            print(f"{name}: {len(reports) - len(failures)}/{len(reports)} passed")
        print("ALL PASSED" if passed else "FAILURES PRESENT")
    return EXIT_OK if passed else EXIT_FAIL


def _json_default(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not JSON serializable: {obj!r}")


# --- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")

    parser = argparse.ArgumentParser(prog="mzvalg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("product", parents=[common],
                       help="shuffle or harmonic product of words, or a QSym product")
    p.add_argument("--type", choices=["shuffle", "star", "qsym"], default="shuffle",
                   help="qsym multiplies basis expressions like M(2); the result keeps u's basis")
    p.add_argument("u")
    p.add_argument("v")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("convert", parents=[common], help="change of QSym basis")
    p.add_argument("expr", help='e.g. "M(2,1) - 1/2*M(3)"')
    p.add_argument("--to", choices=["M", "F", "E"], required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("act", parents=[common], help="action u . w of H^1 on words")
    p.add_argument("u")
    p.add_argument("w")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("derive", parents=[common], help="apply D_n, Dbar_n, partial_n, C_n, tau C_n tau")
    p.add_argument("op", choices=sorted(_DERIVATIONS))
    p.add_argument("w")
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("series", parents=[common], help="sigma_t and relatives through t^order")
    p.add_argument("op", choices=sorted(_SERIES))
    p.add_argument("w")
    p.add_argument("--order", type=int, default=3)
    p.set_defaults(func=cmd_series)

    for name, func, text in (("tau", cmd_tau, "the duality antiautomorphism"),
                             ("psi", cmd_psi, "the involution x -> x+y, y -> -y")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("w")
        p.set_defaults(func=func)

    p = sub.add_parser("finite", parents=[common], help="exact A_I(n) or S_I(n)")
    p.add_argument("kind", choices=["A", "S"])
    p.add_argument("composition")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_finite)

    p = sub.add_parser("modp", parents=[common], help="A_I(p-1) or S_I(p-1) modulo p")
    p.add_argument("composition")
    p.add_argument("p", type=int)
    p.add_argument("--kind", choices=["A", "S"], default="A")
    p.set_defaults(func=cmd_modp)

    p = sub.add_parser("zeta", parents=[common], help="numerical MZV of a composition or polynomial")
    p.add_argument("argument", help='"(2,1)" or an admissible polynomial such as "xxy - xyy"')
    p.add_argument("--tol", type=float, default=numeric.DEFAULT_TOL)
    p.add_argument("--regularized", action="store_true",
                   help="allow words of H^1 via zeta_hat (zeta_hat(y) = Euler's gamma)")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("verify", parents=[common], help="run an identity check, 'all', or 'thm6x'")
    p.add_argument("name")
    p.add_argument("params", nargs="*", help="key=value parameters, e.g. w=x^2y or n=4 k=2")
    p.add_argument("--tol", type=float, default=numeric.DEFAULT_TOL)
    p.add_argument("--max-weight", type=int, default=None)
    p.add_argument("--max-prime", type=int, default=None)
    p.add_argument("--order", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lyndon", parents=[common], help="Lyndon words of a given degree")
    p.add_argument("degree", type=int)
    p.set_defaults(func=cmd_lyndon)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (ParseError, DomainError, UsageError, numeric.CapExceeded, ValueError, KeyError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
