"""Command-line interface: ``stabkit {code,css,sim,ft} ...``."""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .errors import StabkitError, ParseError
from .io import RunConfig, emit_report, write_output, fmt_float


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _load_code(args):
    from .codes import get_code, parse_code
    if getattr(args, "file", None):
        return parse_code(_read(args.file), name=os.path.basename(args.file))
    if getattr(args, "code", None):
        return get_code(args.code)
    raise ParseError("give --code NAME or --file PATH")


def _load_matrix(spec):
    from .codes import parse_matrix
    from .codes.registry import load_matrix
    if os.path.exists(spec):
        return parse_matrix(_read(spec))
    try:
        return load_matrix(spec)
    except FileNotFoundError:
        raise ParseError(f"no matrix file or bundled matrix named {spec!r}") from None


def _config(args, fmt="json"):
    cfg = RunConfig(seed=getattr(args, "seed", 0) or 0, jobs=getattr(args, "jobs", 1) or 1,
                    dense_limit=getattr(args, "dense_limit", None),
                    enumeration_cap=int(float(getattr(args, "cap", 1e9) or 1e9)),
                    out=getattr(args, "out", None), format=getattr(args, "format", None) or fmt)
    cfg.apply()
    return cfg


def _count(s):
    v = float(s)
    if v != int(v) or v < 1:
        raise argparse.ArgumentTypeError(f"{s!r} is not a positive integer")
    return int(v)


# ---------------------------------------------------------------- code

def cmd_code_check(args):
    code = _load_code(args)
    problems = code.validate()
    if problems:
        for p in problems:
            print(p)
        return 1
    print(f"ok n={code.n} k={code.k} generators={len(code.generators)}")
    return 0


def cmd_code_distance(args):
    print(_load_code(args).distance())
    return 0


def cmd_code_syndrome(args):
    from .pauli import PauliOperator
    code = _load_code(args)
    if args.error:
        print("".join(map(str, code.syndrome(PauliOperator.from_string(args.error)))))
    else:
        bits = np.array([int(c) for c in args.syndrome], np.uint8)
        print(code.error_for_syndrome(bits).letters())
    return 0


def cmd_code_bounds(args):
    from .codes import hamming_bound, gv_bound, singleton_bound, bounds_table
    cfg = _config(args)
    if args.n is None:
        rows = [dict(zip(("n", "k", "d", "hamming", "gv", "singleton"), r))
                for r in bounds_table(args.max_n, args.max_k)]
        write_output(emit_report(rows, "csv"), cfg.out)
        return 0
    if args.k is None or args.d is None:
        raise ParseError("--n needs --k and --d")
    n, k, d = args.n, args.k, args.d
    out = {}
    for name, r in (("hamming", hamming_bound(n, k, (d - 1) // 2)), ("gv", gv_bound(n, k, d)),
                    ("singleton", singleton_bound(n, k, d))):
        out[name] = {"holds": r.holds, "lhs": r.lhs, "rhs": r.rhs}
    write_output(emit_report({"n": n, "k": k, "d": d, **out}, "json"), cfg.out)
    return 0


def cmd_code_show(args):
    from .codes import format_code
    write_output(format_code(_load_code(args)).encode(), args.out)
    return 0


def cmd_code_kl(args):
    from .codes import verify_knill_laflamme
    from .pauli import lex_digits, digits_to_xz
    from .pauli import PauliOperator
    code = _load_code(args)
    errs = []
    for w in range(args.weight + 1):
        x, z = digits_to_xz(lex_digits(code.n, w))
        errs += [PauliOperator(a, b) for a, b in zip(x, z)]
    rep = verify_knill_laflamme(code, errs)
    write_output(emit_report({"errors": len(errs), "is_code": rep.is_code,
                              "is_degenerate": rep.is_degenerate, "max_offdiag": rep.max_offdiag,
                              "max_diag_spread": rep.max_diag_spread}), None)
    return 0 if rep.is_code else 1


# ---------------------------------------------------------------- css

def cmd_css_build(args):
    from .codes import ClassicalLinearCode, css_construct, format_code
    c1 = ClassicalLinearCode(_load_matrix(args.c1))
    c2 = ClassicalLinearCode(_load_matrix(args.c2 or args.c1))
    code = css_construct(c1, c2, name=args.name)
    text = format_code(code)
    write_output(text.encode("utf-8"), args.out)
    return 0


# ---------------------------------------------------------------- sim

def cmd_sim_run(args):
    from .clifford import parse_circuit, run_tableau, dense_run
    cfg = _config(args)
    instrs, n = parse_circuit(_read(args.circuit))
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    lines = []
    for _ in range(args.shots):
        if args.engine == "tableau":
            outs = run_tableau(instrs, n, rng)[0]
        else:
            outs = dense_run(instrs, n, rng)[0]
        # outcomes are eigenvalues; print 0 for +1 and 1 for -1
        lines.append("".join("0" if o == 1 else "1" for o in outs))
    write_output(("\n".join(lines) + "\n").encode("utf-8"), cfg.out)
    return 0


# ---------------------------------------------------------------- ft

def cmd_ft_check(args):
    from .ft import build_gadget, check_property, steane_support_check
    cfg = _config(args)
    code = _load_code(args)
    gadget = build_gadget(code, args.gadget, ec=args.ec, t=args.t)
    if args.property.lower() == "support":
        holds, checked, ce = steane_support_check(gadget)
        rep = {"property": "support", "t": 1, "verdict": holds, "evaluated": checked, "counterexample": ce}
        ok = holds
    else:
        rep = check_property(gadget, args.property, t=args.t, jobs=cfg.jobs, cap=cfg.enumeration_cap)
        ok = rep.verdict
    write_output(emit_report(rep, "json"), cfg.out)
    return 0 if ok else 1


def cmd_ft_build(args):
    from .ft import build_gadget, circuit_text
    code = _load_code(args)
    gadget = build_gadget(code, args.gadget, ec=args.ec, t=args.t)
    write_output(circuit_text(gadget).encode("utf-8"), args.out)
    return 0


def _exrec(code, name, ec):
    from .ft import cnot_exrec
    if name != "cnot":
        raise StabkitError(f"only the cnot ExRec is available, not {name!r}")
    return cnot_exrec(code, ec)


def cmd_ft_threshold(args):
    from .threshold import (NoiseModel, simulate_exrec, parse_grid, fit_quadratic, is_monotone,
                            crossing)
    cfg = _config(args, "csv")
    if args.noise != "depolarizing":
        raise StabkitError(f"unknown noise model {args.noise!r}")
    exrec = _exrec(_load_code(args), args.exrec, args.ec)
    grid = parse_grid(args.p_grid)
    reports = []
    for i, p in enumerate(grid):
        # one independent stream per grid point, fixed by (seed, index)
        seed = int(np.random.SeedSequence([cfg.seed, i]).generate_state(1, np.uint64)[0])
        r = simulate_exrec(exrec, NoiseModel.depolarizing(float(p)), args.trials, seed, jobs=cfg.jobs)
        reports.append(r)
        if args.verbose:
            print(f"p={fmt_float(p)} failures={r.failures}/{r.trials}", file=sys.stderr)
    write_output(emit_report(reports, cfg.format), cfg.out)
    if cfg.out and cfg.out != "-":
        summary = {"points": len(reports), "monotone": is_monotone(reports), "crossing": crossing(reports)}
        try:
            f = fit_quadratic([r.p for r in reports], [r.failures for r in reports],
                              [r.trials for r in reports], args.fit_max)
            summary["fit"] = {"c": f.c, "r2": f.r2, "slope": f.slope, "points": f.points}
        except ValueError as exc:
            summary["fit"] = str(exc)
        write_output(emit_report(summary, "json"), None)
    return 0


def cmd_ft_count(args):
    from .threshold import malignant_count, count_fault_sets
    cfg = _config(args)
    exrec = _exrec(_load_code(args), args.exrec, args.ec)
    if args.malignant:
        m = malignant_count(exrec, t=args.t, jobs=cfg.jobs, cap=cfg.enumeration_cap)
        out = m.to_dict()
    else:
        A = count_fault_sets(exrec, args.t)
        out = {"locations": len(exrec.locations), "A": A, "p_T_bound": float(A) ** (-1.0 / args.t)}
    write_output(emit_report(out, "json"), cfg.out)
    return 0


def cmd_ft_levels(args):
    from .threshold import levels_needed, level_reduction_bound, threshold_from_A
    p_T = args.p_T if args.p_T is not None else float(threshold_from_A(args.A, args.t))
    L = levels_needed(args.epsilon, args.p, p_T, args.t)
    out = {"p": args.p, "p_T": p_T, "epsilon": args.epsilon, "t": args.t, "levels": L}
    if args.A is not None:
        seq, _ = level_reduction_bound(args.p, args.A, args.t, L)
        out["rates"] = [float(v) for v in seq]
    write_output(emit_report(out, "json"), None)
    return 0


# ---------------------------------------------------------------- parser

def _code_opts(p, required=False):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--code", help="bundled code name (five_qubit, seven_qubit/steane7, nine_qubit)")
    g.add_argument("--file", help="code file (n=<int> k=<int> header, one generator per line)")


def _run_opts(p, seed=False, jobs=False, out=False):
    if seed:
        p.add_argument("--seed", type=int, default=0)
    if jobs:
        p.add_argument("--jobs", type=int, default=1)
    if out:
        p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--dense-limit", type=int, default=None, help="qubit cap for dense simulation")


def build_parser():
    ap = argparse.ArgumentParser(prog="stabkit", description="Stabilizer codes and fault-tolerance tools.")
    top = ap.add_subparsers(dest="cmd", required=True)

    code = top.add_parser("code", help="stabilizer code utilities").add_subparsers(dest="sub", required=True)
    p = code.add_parser("check", help="validate generators")
    _code_opts(p, True)
    p.set_defaults(fn=cmd_code_check)
    p = code.add_parser("distance", help="minimum distance by enumeration")
    _code_opts(p, True)
    p.set_defaults(fn=cmd_code_distance)
    p = code.add_parser("syndrome", help="syndrome of an error, or a lexicographically least error for a syndrome")
    _code_opts(p, True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--error", help="Pauli string")
    g.add_argument("--syndrome", help="bit string")
    p.set_defaults(fn=cmd_code_syndrome)
    p = code.add_parser("bounds", help="Hamming / GV / Singleton verdicts")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--max-k", type=int, default=2)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_code_bounds)
    p = code.add_parser("show", help="print a code in the text format")
    _code_opts(p, True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_code_show)
    p = code.add_parser("kl", help="Knill-Laflamme conditions on all Paulis up to a weight")
    _code_opts(p, True)
    p.add_argument("--weight", type=int, default=1)
    _run_opts(p)
    p.set_defaults(fn=cmd_code_kl)

    css = top.add_parser("css", help="CSS construction").add_subparsers(dest="sub", required=True)
    p = css.add_parser("build", help="CSS code from two parity-check matrices (C2-perp inside C1)")
    p.add_argument("--c1", required=True, help="matrix file or bundled name (hamming_7_4)")
    p.add_argument("--c2", help="defaults to C1")
    p.add_argument("--name", default="")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_css_build)

    sim = top.add_parser("sim", help="circuit simulation").add_subparsers(dest="sub", required=True)
    p = sim.add_parser("run", help="sample measurement outcomes")
    p.add_argument("--circuit", required=True)
    p.add_argument("--shots", type=_count, default=1)
    p.add_argument("--engine", choices=("tableau", "dense"), default="tableau")
    _run_opts(p, seed=True, out=True)
    p.set_defaults(fn=cmd_sim_run)

    ft = top.add_parser("ft", help="fault-tolerance analysis").add_subparsers(dest="sub", required=True)
    p = ft.add_parser("check", help="exhaustive gadget property check")
    _code_opts(p)
    p.add_argument("--gadget", required=True)
    p.add_argument("--property", required=True, help="PrepA PrepB GateA GateB Meas ECA ECB, or support")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--ec", default="steane", choices=("steane", "knill", "shor"))
    p.add_argument("--cap", default="1e9", help="enumeration budget")
    _run_opts(p, jobs=True, out=True)
    p.set_defaults(fn=cmd_ft_check, code="steane7")
    p = ft.add_parser("build-gadget", help="emit a gadget circuit in the text format")
    _code_opts(p)
    p.add_argument("--gadget", required=True)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--ec", default="steane", choices=("steane", "knill", "shor"))
    p.add_argument("--out")
    p.set_defaults(fn=cmd_ft_build, code="steane7")
    p = ft.add_parser("threshold", help="Monte Carlo failure rate of an ExRec over a p grid")
    _code_opts(p)
    p.add_argument("--exrec", default="cnot")
    p.add_argument("--ec", default="steane", choices=("steane", "knill", "shor"))
    p.add_argument("--noise", default="depolarizing")
    p.add_argument("--p-grid", default="1e-5:1e-1:log20")
    p.add_argument("--trials", type=_count, default=10 ** 5)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--fit-max", type=float, default=1e-3, help="largest p used in the c p^2 fit")
    p.add_argument("--verbose", action="store_true")
    _run_opts(p, seed=True, jobs=True, out=True)
    p.set_defaults(fn=cmd_ft_threshold, code="steane7")
    p = ft.add_parser("count", help="fault-set counts for an ExRec")
    _code_opts(p)
    p.add_argument("--exrec", default="cnot")
    p.add_argument("--ec", default="steane", choices=("steane", "knill", "shor"))
    p.add_argument("--malignant", action="store_true", help="enumerate all fault pairs")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--cap", default="1e9")
    _run_opts(p, jobs=True, out=True)
    p.set_defaults(fn=cmd_ft_count, code="steane7")
    p = ft.add_parser("levels", help="concatenation levels for a target logical error rate")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--p-T", dest="p_T", type=float)
    g.add_argument("--A", type=int)
    p.add_argument("--t", type=int, default=1)
    p.set_defaults(fn=cmd_ft_levels)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (StabkitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
