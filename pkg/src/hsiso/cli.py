"""Command-line front end.

Exit codes: 0 consistent result, 1 usage or input error, 2 counterexample
found, 3 internal soundness breach.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from ._lex import ParseError, Token, var_index
from .corpus import (
    SoundnessBreach, default_rhos, gen_curried_pair, gen_gurevic, gen_martin, gen_wilkie, run_corpus,
    run_pipeline,
)
from .expr import Equation, free_vars, has_tconst, parse_equation, parse_expr, render_expr
from .finite import DEFAULT_GUARD, GuardExceeded
from .fragments import FragmentError, classify, explain
from .hsi import DerivationError, check_derivation, derivation_to_json, dumps, loads, steps
from .lam import render_term
from .prover import prove_hsi
from .semantics import (
    DEFAULT_BOUND, Counterexample, EvaluationError, check_equation, eval_expr, random_probe, verdict_to_json,
)
from .types import InterpretationError, interpret, render_type, typeof
from .witness import WitnessError, check_roundtrip, compile_witness, roundtrip_failure

OK, USAGE, COUNTEREXAMPLE, BREACH = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_rho(text: str | None) -> dict:
    """``x1=2,x2=1`` (or ``x=2,y=1``) as a map from variable index to size."""
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z_0-9]*)\s*=\s*(\d+)\s*", item)
        if m is None:
            raise UsageError(f"bad binding {item!r}; expected name=positive integer")
        try:
            index = var_index(Token("ident", m.group(1), 0))
        except ParseError as err:
            raise UsageError(str(err)) from None
        value = int(m.group(2))
        if value < 1:
            raise UsageError(f"{m.group(1)} must be at least 1")
        out[index] = value
    return out


def _equation(args) -> Equation:
    exprs = args.exprs
    if len(exprs) == 1:
        return parse_equation(exprs[0])
    if len(exprs) == 2:
        return Equation(parse_expr(exprs[0]), parse_expr(exprs[1]))
    raise UsageError("give an equation 'lhs = rhs' or two expressions")


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, ensure_ascii=False) if args.json else text)


def _rhos_for(args, eq: Equation) -> list:
    if args.rho:
        rho = parse_rho(args.rho)
        missing = (free_vars(eq.lhs) | free_vars(eq.rhs)) - set(rho)
        if missing:
            raise UsageError(f"--rho does not bind x{min(missing)}")
        return [rho]
    return default_rhos(eq, guard=args.guard)


# subcommands


def cmd_parse(args) -> int:
    e = parse_expr(args.expr)
    payload = {"expr": render_expr(e), "free_vars": [f"x{i}" for i in sorted(free_vars(e))]}
    if not has_tconst(e):
        payload["type"] = render_type(typeof(e))
    _emit(args, payload, payload["expr"] + (f"  :  {payload['type']}" if "type" in payload else ""))
    return OK


def cmd_classify(args) -> int:
    e = parse_expr(args.expr)
    report = classify(e)
    if args.explain:
        print(explain(e))
    else:
        print(json.dumps(report.to_json(), ensure_ascii=False))
    return OK


def cmd_eval(args) -> int:
    e = parse_expr(args.expr)
    point = parse_rho(args.rho)
    value = eval_expr(e, point, args.digits)
    payload = {"expr": render_expr(e), "point": {f"x{i}": k for i, k in sorted(point.items())}, "value": str(value)}
    if args.type:
        payload["type"] = render_type(interpret(e, point))
    _emit(args, payload, str(value))
    return OK


def cmd_equal(args) -> int:
    eq = _equation(args)
    if args.probe:
        verdict = random_probe(eq, args.probe, args.bound, args.seed, args.digits)
        if not isinstance(verdict, Counterexample):
            verdict = check_equation(eq, args.bound, args.digits)
    else:
        verdict = check_equation(eq, args.bound, args.digits)
    payload = verdict_to_json(verdict)
    if isinstance(verdict, Counterexample):
        point = ", ".join(f"x{i}={k}" for i, k in sorted(verdict.point.items()))
        text = f"counterexample at {point}: {verdict.lhs_value} vs {verdict.rhs_value}"
        _emit(args, payload, text)
        return COUNTEREXAMPLE
    _emit(args, payload, f"equal up to bound {verdict.bound} ({verdict.points_checked} points)")
    return OK


def cmd_prove(args) -> int:
    eq = _equation(args)
    d = prove_hsi(eq)
    if d is None:
        _emit(args, {"proved": False, "equation": str(eq)}, "no certificate: normal forms differ")
        return OK
    cert = dumps(d)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(cert + "\n")
    if args.json:
        print(json.dumps({"proved": True, "equation": str(eq), "steps": steps(d),
                          "certificate": derivation_to_json(d)}, ensure_ascii=False))
    elif args.output:
        print(f"proved {eq} in {steps(d)} steps; certificate written to {args.output}")
    else:
        print(cert)
    return OK


def _load_cert(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None
    except json.JSONDecodeError as err:
        raise UsageError(f"{path} is not JSON: {err}") from None


def cmd_check_cert(args) -> int:
    d = _load_cert(args.cert)
    expected = _equation(args) if args.exprs else None
    result = check_derivation(d, expected, positivity_bound=args.positivity_bound)
    payload = {"ok": result.ok, "trace": result.trace}
    _emit(args, payload, ("certificate ok: " if result.ok else "certificate rejected: ") + "; ".join(result.trace))
    return OK if result.ok else USAGE


def _derivation_for(args, eq: Equation | None):
    if args.cert:
        d = _load_cert(args.cert)
        result = check_derivation(d, eq)
        if not result:
            raise UsageError("certificate rejected: " + "; ".join(result.trace))
        return d, d.conclusion
    d = prove_hsi(eq)
    if d is None:
        raise UsageError(f"no certificate for {eq}; pass one with --cert")
    return d, eq


def cmd_witness(args) -> int:
    eq = _equation(args) if args.exprs else None
    if eq is None and not args.cert:
        raise UsageError("give an equation or --cert")
    d, eq = _derivation_for(args, eq)
    rho = parse_rho(args.rho)
    w = compile_witness(d, rho, checked=True)
    if args.json:
        print(json.dumps({"rho": {f"x{i}": k for i, k in sorted(rho.items())}, **w.to_json()}, ensure_ascii=False))
    else:
        print(f"{render_type(w.source_type)}  ~  {render_type(w.target_type)}")
        print(f"forward:  {render_term(w.forward)}")
        print(f"backward: {render_term(w.backward)}")
    return OK


def cmd_verify(args) -> int:
    eq = _equation(args) if args.exprs else None
    if eq is None and not args.cert:
        raise UsageError("give an equation or --cert")
    d, eq = _derivation_for(args, eq)
    results = []
    status = OK
    for rho in _rhos_for(args, eq):
        label = ", ".join(f"x{i}={k}" for i, k in sorted(rho.items())) or "(no variables)"
        try:
            w = compile_witness(d, rho, checked=True)
            ok = check_roundtrip(w, args.guard)
        except GuardExceeded as err:
            results.append({"rho": label, "roundtrip": None, "note": str(err)})
            continue
        entry = {"rho": label, "roundtrip": ok}
        if not ok:
            status = BREACH
            entry["failure"] = repr(roundtrip_failure(w, args.guard))
        results.append(entry)
    if args.json:
        print(json.dumps({"equation": str(eq), "results": results}, ensure_ascii=False))
    else:
        for r in results:
            mark = {True: "ok", False: "FAILED", None: "skipped"}[r["roundtrip"]]
            print(f"{r['rho']}: {mark}" + (f" ({r['note']})" if "note" in r else ""))
    return status


def cmd_gen(args) -> int:
    if args.family == "gurevic":
        if args.n is None:
            raise UsageError("gen gurevic needs N")
        eq = gen_gurevic(args.n)
    elif args.n is not None:
        raise UsageError(f"gen {args.family} takes no N")
    else:
        eq = {"wilkie": gen_wilkie, "martin": gen_martin, "curried": gen_curried_pair}[args.family]()
    _emit(args, {"lhs": render_expr(eq.lhs), "rhs": render_expr(eq.rhs)}, str(eq))
    return OK


def cmd_pipeline(args) -> int:
    eq = _equation(args)
    rhos = [parse_rho(args.rho)] if args.rho else None
    report = run_pipeline(eq, args.bound, rhos, args.guard)
    if args.json:
        print(json.dumps(report.to_json(), ensure_ascii=False))
    else:
        print(str(eq))
        print(f"lhs in L: {report.lhs_fragments.in_L}, rhs in L: {report.rhs_fragments.in_L}")
        print(f"verdict: {verdict_to_json(report.verdict)['verdict']}")
        print(f"proved: {report.derivation is not None}")
        for r in report.witnesses:
            print(f"  rho {r.rho}: roundtrip {r.roundtrip} {r.note}".rstrip())
        for note in report.notes:
            print(note)
    return COUNTEREXAMPLE if isinstance(report.verdict, Counterexample) else OK


def cmd_corpus(args) -> int:
    outcomes = run_corpus(guard=args.guard)
    if args.json:
        print(json.dumps([{"name": o.entry.name, "ok": o.ok, "failures": o.failures,
                           "report": o.report.to_json() if args.full else None} for o in outcomes],
                         ensure_ascii=False))
    else:
        for o in outcomes:
            verified = sum(1 for r in o.report.witnesses if r.roundtrip)
            status = "ok" if o.ok else "FAILED: " + "; ".join(o.failures)
            print(f"{o.entry.name:24} {status}  ({o.report.notes[0]}; {verified} witnesses verified)")
    return OK if all(o.ok for o in outcomes) else USAGE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="coordinate bound for the refuter")
    common.add_argument("--rho", help="environment or point, e.g. x1=2,x2=1")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--guard", type=int, default=DEFAULT_GUARD, help="largest enumerated type")
    common.add_argument("--digits", type=int, default=10**6, help="largest evaluated value, in digits")

    parser = argparse.ArgumentParser(prog="hsiso", description="Type isomorphism workbench for sums, products and exponentials.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and pretty-print an expression")
    p.add_argument("expr")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("classify", parents=[common], help="fragment membership report")
    p.add_argument("expr")
    p.add_argument("--explain", action="store_true", help="human-readable account instead of JSON")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("eval", parents=[common], help="evaluate at the point given by --rho")
    p.add_argument("expr")
    p.add_argument("--type", action="store_true", help="also print the interpreted type")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("equal", parents=[common], help="exhaustive (and optionally random) comparison")
    p.add_argument("exprs", nargs="+")
    p.add_argument("--probe", type=int, default=0, help="random trials before the sweep")
    p.set_defaults(func=cmd_equal)

    p = sub.add_parser("prove", parents=[common], help="prove by normalization and print the certificate")
    p.add_argument("exprs", nargs="+")
    p.add_argument("-o", "--output", help="write the certificate to a file")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("check-cert", parents=[common], help="check a JSON certificate")
    p.add_argument("cert")
    p.add_argument("exprs", nargs="*", help="optional expected equation")
    p.add_argument("--positivity-bound", type=int, default=8)
    p.set_defaults(func=cmd_check_cert)

    for name, func, text in (("witness", cmd_witness, "print the coercion pair at --rho"),
                             ("verify", cmd_verify, "check the coercions in finite models")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("exprs", nargs="*")
        p.add_argument("--cert", help="use this certificate instead of proving")
        p.set_defaults(func=func)

    p = sub.add_parser("gen", parents=[common], help="print a named equation")
    p.add_argument("family", choices=["wilkie", "martin", "curried", "gurevic"])
    p.add_argument("n", nargs="?", type=int)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("pipeline", parents=[common], help="classify, refute or prove, then verify witnesses")
    p.add_argument("exprs", nargs="+")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("corpus", parents=[common], help="named equations")
    p.add_argument("action", choices=["run"])
    p.add_argument("--full", action="store_true", help="include full reports in --json output")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: list | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad usage, which here means a counterexample
        return OK if exc.code in (0, None) else USAGE
    try:
        return args.func(args)
    except SoundnessBreach as err:
        print(f"soundness breach: {err}", file=sys.stderr)
        return BREACH
    except (UsageError, ParseError, EvaluationError, InterpretationError, FragmentError, DerivationError,
            WitnessError, GuardExceeded, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
