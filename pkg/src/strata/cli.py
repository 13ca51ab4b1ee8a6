"""Command line front end.

Exit status is 0 on success, 1 when a mathematical check fails (an F-curve
violation, a broken axiom, a fixture mismatch) and 2 on bad input.
"""
import argparse
import json
import os
import sys
import time
from importlib import resources

from . import curves, flatgeom, hurwitz, picard, twisted
from .errors import RecursionFailure, StrataError
from .signatures import parse_kappa, parse_profile

OK, FAILED, BAD_INPUT = 0, 1, 2

# flags whose values may start with a minus sign
_VALUE_FLAGS = ("--kappa",)


def _join_negative_values(argv):
    """Turn ``--kappa -2,-2,4`` into ``--kappa=-2,-2,4`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _emit(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def _frac(x):
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _retained(args):
    kappa = parse_kappa(args.kappa)
    if args.n is None:
        return kappa
    return picard.split_kappa(args.g, args.n, kappa)


# ---------------------------------------------------------------------------
# commands


def cmd_class(args):
    c = picard.divisor_class(args.g, parse_kappa(args.kappa), args.n)
    if args.json:
        _emit(c.to_json())
    elif args.latex:
        print(c.latex())
    else:
        print(c)
    return OK


def cmd_fnef(args):
    d = _retained(args)
    c = picard.zero_residue_class(0, d)
    ok, bad = curves.is_fnef(c)
    report = {"d": list(d), "fcurves": len(curves.enumerate_fcurves(len(d))) if len(d) >= 4 else 0,
              "violations": [{"fcurve": str(F), "pairing": _frac(v)} for F, v in bad]}
    if args.json:
        _emit(report)
    else:
        print(f"checked {report['fcurves']} F-curves, {len(bad)} violations")
        for F, v in bad:
            print(f"  {F}: {v}")
    return OK if ok else FAILED


def cmd_nef(args):
    d = _retained(args)
    try:
        cert = curves.nef_certificate(d, leaf_size=args.leaf_size)
    except RecursionFailure as exc:
        print(f"nef check failed: {exc}", file=sys.stderr)
        for S, side in exc.path:
            print(f"  via S={list(S)} ({side})", file=sys.stderr)
        return FAILED
    if args.emit_certificate:
        with open(args.emit_certificate, "w") as fh:
            json.dump(cert.to_json(), fh, indent=1, sort_keys=True)
    print(f"certified: kind={cert.kind} leaves={cert.leaves()}")
    return OK


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise StrataError(f"cannot read {path}: {exc}") from exc


def cmd_residues(args):
    data = _load_json(args.chart)
    chart = flatgeom.ChartData.from_dict(data.get("chart", data))
    flatgeom.validate_chart(chart)
    forms = flatgeom.all_residue_forms(chart)
    report = {"pole_orders": list(flatgeom.pole_orders(chart)),
              "residues": [str(f) for f in forms],
              "zero_residue_rank": flatgeom.zero_residue_rank(chart)}
    if args.json:
        _emit(report)
    else:
        for i, (order, f) in enumerate(zip(report["pole_orders"], report["residues"]), start=1):
            print(f"pole {i} (order {order}): {f}")
        print(f"zero-residue rank: {report['zero_residue_rank']}")
    return OK


def cmd_grc(args):
    cfg = twisted.TwistedConfig.from_dict(_load_json(args.graph))
    violations = twisted.validate_twisted(cfg)
    report = {"axioms": [{"axiom": v.axiom, "detail": v.detail} for v in violations]}
    if not violations and cfg.levels is not None:
        grc = twisted.zr_grc_check(cfg)
        report["grc"] = {"ok": grc.ok, "failures": [str(f) for f in grc.failures]}
        sol = twisted.solve_residues(cfg)
        report["solvable"] = sol.exists
    ok = not violations and report.get("grc", {"ok": True})["ok"]
    if args.json:
        _emit(report)
    else:
        for v in violations:
            print(f"axiom ({v.axiom}): {v.detail}")
        if "grc" in report:
            print("global residue condition:", "ok" if report["grc"]["ok"] else "fails")
            for f in report["grc"]["failures"]:
                print(f"  {f}")
            print("residues solvable:", report["solvable"])
    return OK if ok else FAILED


def cmd_hurwitz_orbits(args):
    profile = parse_profile(args.profile, args.degree)
    cache = args.cache or os.environ.get("STRATA_CACHE")
    start = time.perf_counter()
    report = hurwitz.braid_orbits(profile, threads=args.threads, cache_dir=cache,
                                  max_degree=args.max_degree, max_length=args.max_length)
    # timing goes to stderr so the report itself stays reproducible
    print(f"elapsed {time.perf_counter() - start:.3f}s", file=sys.stderr)
    _emit(report.to_json())
    return OK


def _fixture_files(directory):
    if directory:
        if not os.path.isdir(directory):
            raise StrataError(f"no fixture directory {directory}")
        return {name: os.path.join(directory, name) for name in sorted(os.listdir(directory))
                if name.endswith(".json")}
    root = resources.files("strata") / "fixtures"
    return {p.name: str(p) for p in sorted(root.iterdir(), key=lambda p: p.name)
            if p.name.endswith(".json")}


def _check_golden(data):
    got = picard.divisor_class(data["g"], data["kappa"], data["n"])
    return got == picard.DivisorClass.from_json(data["class"])


def _check_figure(data):
    chart = flatgeom.ChartData.from_dict(data["chart"])
    forms = [str(f) for f in flatgeom.all_residue_forms(chart)]
    return forms == data["residues"] and flatgeom.zero_residue_rank(chart) == data["zero_residue_rank"]


def _check_tuples(data):
    reports = {r.name: r for r in hurwitz.paper_examples()}
    for item in data["tuples"]:
        r = reports.get(item["name"])
        if r is None or r.computed_genus != item["genus"] or r.verdict != item["verdict"] \
                or r.support_degree != item["support_degree"]:
            return False
    return True


_CHECKS = {"golden_class.json": _check_golden, "figure1.json": _check_figure,
           "tuples.json": _check_tuples}


def cmd_selftest(args):
    files = _fixture_files(args.fixtures)
    status = OK
    # left-first composition: (12) then (13) is the 3-cycle (123)
    conv = hurwitz.mul(hurwitz.parse_cycles("(12)", 3), hurwitz.parse_cycles("(13)", 3))
    if hurwitz.format_cycles(conv) != "(123)":
        print("FAIL composition convention")
        status = FAILED
    for name, path in files.items():
        check = _CHECKS.get(name)
        if check is None:
            print(f"skip {name}")
            continue
        passed = check(_load_json(path))
        print(f"{'PASS' if passed else 'FAIL'} {name}")
        if not passed:
            status = FAILED
    return status


# ---------------------------------------------------------------------------
# parser


def build_parser():
    parser = argparse.ArgumentParser(prog="strata", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("class", help="divisor class of a zero-residue stratum")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True, help="number of retained markings")
    p.add_argument("--kappa", required=True, help="full signature, e.g. -2,-2,4,1,1")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--latex", action="store_true")
    p.set_defaults(func=cmd_class)

    for name, func, helptext in (("fnef", cmd_fnef, "pair a genus-zero class with all F-curves"),
                                 ("nef", cmd_nef, "recursive nefness certificate")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--kappa", required=True,
                       help="retained orders, or a full signature together with --n")
        p.add_argument("--n", type=int, default=None)
        p.set_defaults(func=func, g=0)
        if name == "fnef":
            p.add_argument("--json", action="store_true")
        else:
            p.add_argument("--emit-certificate", metavar="PATH")
            p.add_argument("--leaf-size", type=int, default=7)

    p = sub.add_parser("residues", help="residue forms of a chart")
    p.add_argument("--chart", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_residues)

    p = sub.add_parser("grc", help="check a level graph against the axioms and residue condition")
    p.add_argument("--graph", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_grc)

    p = sub.add_parser("hurwitz", help="monodromy tuples")
    hsub = p.add_subparsers(dest="hurwitz_command", required=True)
    q = hsub.add_parser("orbits", help="braid orbits on conjugacy classes of tuples")
    q.add_argument("--degree", type=int, required=True)
    q.add_argument("--profile", required=True, help='e.g. "[2,1],[2,1],[2,1],[2,1]"')
    q.add_argument("--threads", type=int, default=1)
    q.add_argument("--cache", default=None, help="cache directory (default: $STRATA_CACHE)")
    q.add_argument("--max-degree", type=int, default=6)
    q.add_argument("--max-length", type=int, default=10)
    q.set_defaults(func=cmd_hurwitz_orbits)

    p = sub.add_parser("selftest", help="check shipped fixtures")
    p.add_argument("--fixtures", default=None, help="fixture directory (default: bundled)")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    if getattr(args, "threads", 1) < 1:
        print("error[bad-threads]: --threads must be positive", file=sys.stderr)
        return BAD_INPUT
    try:
        return args.func(args)
    except StrataError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
