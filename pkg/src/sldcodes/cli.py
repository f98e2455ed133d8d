"""Command-line entry point: ``sldcodes <subcommand> ...``.

Exit status: 0 on success, 1 on a domain failure (witness found, search
budget exceeded), 2 on a usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import __version__, bounds, code as code_mod, ensemble, group_testing, verifier

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def num(x: float) -> float:
    """Round to 10 significant digits for machine-readable output."""
    return float(f"{x:.10g}")


def fmt(x: float) -> str:
    return f"{x:.10g}"


def parse_range(text: str) -> list[int]:
    """``"2..6"``, ``"2,4,5"`` or ``"3"``."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}") from None


def parse_defectives(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad item list {text!r}") from None


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def read_code(path: str | None):
    try:
        if path is None or path == "-":
            return code_mod.load_code(sys.stdin)
        return code_mod.read_code_file(path)
    except OSError as exc:
        raise InputError(f"cannot read code: {exc}") from None
    except ValueError as exc:
        raise InputError(f"invalid code file: {exc}") from None


# -- subcommands ---------------------------------------------------------------

def cmd_bounds(args, out) -> int:
    if args.asymptotic:
        s = args.s[0]
        if args.asymptotic == "large-s":
            L = args.l[0]
            rec = {"regime": "large-s", "s": s, "L": L,
                   "value": num(bounds.asymptotic_large_s(s, L))}
        else:
            rec = {"regime": "large-l", "s": s,
                   "value": num(bounds.limit_large_L(s)),
                   "c_opt": num(bounds.optimal_c(s))}
        if args.format == "json":
            out.write(dump_json(rec))
        else:
            out.write(" ".join(f"{k}={fmt(v) if isinstance(v, float) else v}"
                               for k, v in rec.items()) + "\n")
        return EXIT_OK

    if any(s < 2 for s in args.s) or any(L < 1 for L in args.l):
        raise InputError("need s >= 2 and L >= 1")
    rows = []
    for s in args.s:
        for L in args.l:
            b = bounds.lower_bound(bounds.BoundParams(s, L))
            rows.append(b)
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["s", "L", "R", "Q_star", "z_star"])
        for b in rows:
            w.writerow([b.s, b.L, fmt(b.R), fmt(b.Q_star), fmt(b.z_star)])
    elif args.format == "json":
        out.write(dump_json({"bounds": [
            {"s": b.s, "L": b.L, "R": num(b.R), "Q_star": num(b.Q_star),
             "z_star": num(b.z_star), "one_minus_z": num(b.one_minus_z)} for b in rows]}))
    else:
        out.write(f"{'s':>3} {'L':>3} {'R':>8} {'Q_star':>8} {'z_star':>8}\n")
        for b in rows:
            out.write(f"{b.s:>3} {b.L:>3} {b.R:8.4f} {b.Q_star:8.4f} {b.z_star:8.4f}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    code = read_code(args.code)
    if args.s < 1 or args.l < 1:
        raise InputError("need s >= 1 and L >= 1")
    if args.s >= code.t:
        raise InputError(f"strength s={args.s} must be below the code size t={code.t}")
    wit = verifier.verify(code, args.s, args.l, args.mode, jobs=args.jobs)
    if args.json:
        rec = {"n": code.n, "t": code.t, "s": args.s, "L": args.l, "mode": args.mode,
               "ok": wit is None, "witness": None if wit is None else wit.to_dict()}
        out.write(dump_json(rec))
    elif wit is None:
        out.write(f"ok: {args.mode.upper()} {args.s}_{args.l} code (N={code.n}, t={code.t})\n")
    else:
        out.write(f"witness: S={list(wit.S)} covers {list(wit.covered_others)}\n")
    return EXIT_OK if wit is None else EXIT_FAIL


def cmd_search(args, out) -> int:
    if args.n < 1 or args.s < 1 or args.l < 1:
        raise InputError("need n, s, L >= 1")
    try:
        res = verifier.max_size_search(args.n, args.s, args.l, args.mode, args.budget)
    except verifier.SearchBudgetExceeded as exc:
        if args.json:
            out.write(dump_json({"n": args.n, "s": args.s, "L": args.l, "mode": args.mode,
                                 "error": str(exc)}))
        else:
            out.write(f"budget exceeded: {exc}\n")
        return EXIT_FAIL
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            code_mod.save_code(res.example_code, fh)
    if args.json:
        out.write(dump_json({"n": res.n, "s": res.s, "L": res.L, "mode": args.mode,
                             "best_t": res.best_t, "nodes": res.nodes,
                             "code": res.example_code.row_strings()}))
    else:
        out.write(f"best_t={res.best_t} nodes={res.nodes}\n")
        out.write(code_mod.dumps_code(res.example_code))
    return EXIT_OK


def cmd_transform(args, out) -> int:
    code = read_code(args.code)
    try:
        if args.prop == 2:
            new = code_mod.negate_stack(code)
        else:
            if args.column is None:
                raise InputError("--prop 3 needs --column")
            new = code_mod.puncture(code, args.column)
    except (IndexError, ValueError) as exc:
        raise InputError(str(exc)) from None
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            code_mod.save_code(new, fh)
    else:
        out.write(code_mod.dumps_code(new))
    return EXIT_OK


def _parse_q(text: str) -> Fraction:
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad weight fraction {text!r}") from None
    return q


def cmd_estimate_p(args, out) -> int:
    try:
        if args.method == "exact":
            res = ensemble.exact_P(args.n, args.q, args.s, args.l)
        elif args.method == "brute":
            res = ensemble.brute_force_P(args.n, args.q, args.s, args.l)
        else:
            est, se = ensemble.mc_P(args.n, args.q, args.s, args.l, args.trials, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    w = code_mod.ensemble_weight(args.n, args.q)
    base = {"n": args.n, "q": str(args.q), "w": w, "s": args.s, "L": args.l,
            "method": args.method}
    if args.method == "mc":
        if args.json:
            out.write(dump_json({**base, "trials": args.trials, "seed": args.seed,
                                 "estimate": num(est), "stderr": num(se)}))
        else:
            out.write(f"{fmt(est)} +- {fmt(se)}\n")
        return EXIT_OK
    if args.json:
        out.write(dump_json({**base, "numerator": str(res.value.numerator),
                             "denominator": str(res.value.denominator),
                             "value": num(float(res.value)),
                             "log2_value": num(res.log2_value)}))
    else:
        out.write(f"{res.value}\n")
    return EXIT_OK


def cmd_exponent(args, out) -> int:
    q = float(args.q)
    if not 0 < q <= 0.5 or args.s < 2 or args.l < 1:
        raise InputError("need 0 < Q <= 1/2, s >= 2, L >= 1")
    try:
        sol = ensemble.extremal_tau(q, args.s, args.l)
    except ArithmeticError as exc:
        raise InputError(str(exc)) from None
    A = ensemble.A_star(q, args.s, args.l)
    tau = {"".join(map(str, a)): num(v) for a, v in sorted(sol.tau.probs.items())}
    if args.json:
        out.write(dump_json({"q": num(q), "s": args.s, "L": args.l, "A_star": num(A),
                             "F_value": num(sol.F_value), "z": num(sol.z),
                             "one_minus_z": num(sol.one_minus_z), "mu": num(sol.mu),
                             "tau": tau}))
    else:
        out.write(f"A_star={fmt(A)}\nz={fmt(sol.z)}\nmu={fmt(sol.mu)}\n")
        for a, v in tau.items():
            out.write(f"tau({a})={fmt(v)}\n")
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    plan = read_code(args.code)
    try:
        if args.defectives is not None:
            rep = group_testing.run_two_stage(plan, args.defectives)
            if args.json:
                out.write(dump_json(rep.to_dict()))
            else:
                out.write(f"outcome={rep.outcome} candidates={list(rep.candidates)} "
                          f"stage2_tests={rep.stage2_tests} success={rep.success}\n")
            return EXIT_OK
        summ = group_testing.simulate(plan, args.s, args.trials, args.seed)
    except (IndexError, ValueError) as exc:
        raise InputError(str(exc)) from None
    rec = summ.to_dict()
    rec["mean_stage2_tests"] = num(rec["mean_stage2_tests"])
    rec["success_rate"] = num(rec["success_rate"])
    rec["seed"] = args.seed
    if args.json:
        out.write(dump_json(rec))
    else:
        out.write(f"trials={summ.trials} mean_list={fmt(summ.mean_stage2_tests)} "
                  f"max_list={summ.max_stage2_tests} success_rate={fmt(summ.success_rate)}\n")
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sldcodes",
                                description="Symmetric disjunctive list-decoding code workbench.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="random-coding lower bound table")
    b.add_argument("--s", type=parse_range, default=[2], help="strengths, e.g. 2..6")
    b.add_argument("--l", type=parse_range, default=[1], help="list sizes, e.g. 1..6")
    b.add_argument("--format", choices=["table", "csv", "json"], default="table")
    b.add_argument("--asymptotic", choices=["large-s", "large-l"])
    b.set_defaults(func=cmd_bounds)

    modes = [m.value for m in verifier.Mode]

    v = sub.add_parser("verify", help="check the LD/SLD property of a code file")
    v.add_argument("--code", required=True)
    v.add_argument("--s", type=int, required=True)
    v.add_argument("--l", type=int, required=True)
    v.add_argument("--mode", choices=modes, default="sld")
    v.add_argument("--jobs", type=int, default=verifier.default_jobs())
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    se = sub.add_parser("search", help="exact maximal code size at small length")
    se.add_argument("--n", type=int, required=True)
    se.add_argument("--s", type=int, required=True)
    se.add_argument("--l", type=int, required=True)
    se.add_argument("--mode", choices=modes, default="sld")
    se.add_argument("--budget", type=int, default=10_000_000)
    se.add_argument("--out", help="write the best code to this file")
    se.add_argument("--json", action="store_true")
    se.set_defaults(func=cmd_search)

    tr = sub.add_parser("transform", help="negate-and-stack (2) or puncture (3) a code")
    tr.add_argument("--prop", type=int, choices=[2, 3], required=True)
    tr.add_argument("--column", type=int)
    tr.add_argument("--code", help="input code file (default: stdin)")
    tr.add_argument("--out", help="output file (default: stdout)")
    tr.set_defaults(func=cmd_transform)

    e = sub.add_parser("estimate-p", help="bad-pair probability in the constant-weight ensemble")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--q", type=_parse_q, required=True)
    e.add_argument("--s", type=int, required=True)
    e.add_argument("--l", type=int, required=True)
    e.add_argument("--method", choices=["exact", "brute", "mc"], default="exact")
    e.add_argument("--trials", type=int, default=100_000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_estimate_p)

    x = sub.add_parser("exponent", help="bad-pair exponent and extremal row distribution")
    x.add_argument("--q", type=_parse_q, required=True)
    x.add_argument("--s", type=int, required=True)
    x.add_argument("--l", type=int, required=True)
    x.add_argument("--json", action="store_true")
    x.set_defaults(func=cmd_exponent)

    si = sub.add_parser("simulate", help="two-stage symmetric group testing")
    si.add_argument("--code", required=True)
    si.add_argument("--s", type=int, default=2)
    si.add_argument("--trials", type=int, default=10_000)
    si.add_argument("--seed", type=int, default=0)
    si.add_argument("--defectives", type=parse_defectives)
    si.add_argument("--json", action="store_true")
    si.set_defaults(func=cmd_simulate)
    return p


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
