"""Command line front end.

Every command prints JSON (or CSV for ``plot``) to stdout or ``--output``.
Exit status: 0 success, 1 bad input, 2 budget exhausted (partial result
written), 3 an internal cross-check failed.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import covering, direction, dynamics, zonotope
from .errors import CrossCheckFailure, ZonoError
from .io import (covering_json, direction_to_json, dumps, emit_plot_data, frac, gap_json,
                 parse_direction, parse_generators, parse_rational, parse_rational_list,
                 vector_json)

EXAMPLES = """examples:
  zonocover mu --generators "[[1,0],[0,1],[1,1]]"
  zonocover width --generators vandermonde:2,4
  zonocover lambda1 --generators "[[1,0],[0,1],[1,1]]" --shift 1/2,1/2
  zonocover scan-mu --n 2 --m-max 4 --bound 2 --output scan.jsonl
  zonocover threshold --u0 0,1/3,2/3 --alpha 1,1,1
  zonocover gap --v 1,2,3
  zonocover equiv-check --count 200 --seed 0
  zonocover explore-eps --n-max 2 --m-max 4 --bound 2 --checkpoint eps.jsonl
  zonocover lrc-zono --v 1,2,3
  zonocover zonotope --direction '{"symbols": 1, "alpha": [["1","0"], ["0","1"], ["1","1"]]}'
  zonocover plot --kind envelope --v 1,2
"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _threads(value):
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("thread count must be at least 1")
    return n


def _positive_rational(value):
    try:
        q = parse_rational(value, "tolerance")
    except ZonoError as e:
        raise argparse.ArgumentTypeError(str(e)) from None
    if q <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return q


def _default_threads():
    env = os.environ.get("ZONOCOVER_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def build_parser():
    p = _Parser(prog="zonocover", description="Exact computations with lattice zonotopes.",
                epilog=EXAMPLES, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--output", "-o", help="write the result here instead of stdout")
    p.add_argument("--threads", type=_threads, default=_default_threads(),
                   help="worker processes (default: $ZONOCOVER_THREADS or 1)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help, example):
        return sub.add_parser(name, help=f"{help}  e.g. {example}", description=help,
                              epilog=f"example: {example}")

    s = add("mu", "covering radius (exact for n <= 2, certified interval otherwise)",
            'mu --generators "[[1,0],[0,1],[1,1]]"')
    s.add_argument("--generators", required=True)
    s.add_argument("--tol", type=_positive_rational, default=Fraction(1, 100))
    s.add_argument("--certified", action="store_true", help="interval mode even for n <= 2")
    s.add_argument("--max-cells", type=int, help="branch-and-bound cell budget")

    s = add("width", "lattice width with a witness direction", "width --generators vandermonde:2,4")
    s.add_argument("--generators", required=True)

    s = add("lambda1", "least gauge over a shifted lattice coset (default shift: the center)",
            'lambda1 --generators "[[1,0],[0,1],[1,1]]"')
    s.add_argument("--generators", required=True)
    s.add_argument("--shift")

    s = add("scan-mu", "compare mu with n/m over an LGP catalog (report only)",
            "scan-mu --n 2 --m-max 4 --bound 2")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m-min", type=int)
    s.add_argument("--m-max", type=int, required=True)
    s.add_argument("--bound", type=int, required=True)
    s.add_argument("--tol", type=_positive_rational, default=Fraction(1, 50))

    s = add("threshold", "view-obstruction threshold eps*", "threshold --u0 0,1/3,2/3 --alpha 1,1,1")
    s.add_argument("--u0", required=True)
    s.add_argument("--alpha", required=True, help="comma list, JSON list or direction object")
    s.add_argument("--route", choices=("time", "zonotope", "both"), default="time")

    s = add("gap", "lonely runner gap for integer velocities", "gap --v 1,2,3")
    s.add_argument("--v", required=True)

    s = add("equiv-check", "compare the time-domain and lattice thresholds on random instances",
            "equiv-check --count 200 --seed 0")
    s.add_argument("--count", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--m-max", type=int, default=5)
    s.add_argument("--den-max", type=int, default=12)

    s = add("explore-eps", "explore eps(n, m) over LGP catalogs",
            "explore-eps --n-max 2 --m-max 4 --bound 2")
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--m-max", type=int, required=True)
    s.add_argument("--bound", type=int, required=True)
    s.add_argument("--tol", type=_positive_rational, default=Fraction(1, 50))
    s.add_argument("--max-instances", type=int)
    s.add_argument("--checkpoint")
    s.add_argument("--flt-constant", type=_positive_rational, default=Fraction(3))

    s = add("lrc-zono", "lattice form of the lonely runner check", "lrc-zono --v 1,2,3")
    s.add_argument("--v", required=True)

    s = add("zonotope", "build the kernel lattice data and zonotope pair of a direction",
            "zonotope --direction 1,2")
    s.add_argument("--direction", required=True)

    s = add("plot", "CSV data: envelope, mu-vs-bound or trajectory", "plot --kind envelope --v 1,2")
    s.add_argument("--kind", required=True)
    s.add_argument("--v")
    s.add_argument("--u0")
    s.add_argument("--alpha")
    s.add_argument("--generators", action="append", default=[])
    s.add_argument("--input", help="scan report (JSON lines) for mu-vs-bound")
    return p


def _ints(text, what):
    vals = parse_rational_list(text, what)
    for i, q in enumerate(vals):
        if q.denominator != 1:
            raise ZonoError(f"{what}[{i}]: expected an integer, got {frac(q)}")
    return tuple(int(q) for q in vals)


def _motion(args):
    if args.v:
        v = _ints(args.v, "v")
        return dynamics.MotionInstance((0,) * len(v), v)
    if not (args.u0 and args.alpha):
        raise ZonoError("u0/alpha: give --v or both --u0 and --alpha")
    return dynamics.MotionInstance(parse_rational_list(args.u0, "u0"),
                                   parse_rational_list(args.alpha, "alpha"))


def cmd_mu(args):
    Z = zonotope.LatticeZonotope(parse_generators(args.generators))
    if args.certified or Z.n > 2 or args.max_cells:
        res = covering.certified_covering_bounds(Z, args.tol, max_cells=args.max_cells)
    else:
        res = covering.covering_radius(Z, args.tol)
    return covering_json(res), res.budget_exceeded


def cmd_width(args):
    r = zonotope.lattice_width(parse_generators(args.generators))
    return {"value": r.value, "direction": list(r.direction)}, False


def cmd_lambda1(args):
    Z = zonotope.LatticeZonotope(parse_generators(args.generators))
    shift = parse_rational_list(args.shift, "shift") if args.shift else None
    r = covering.restricted_successive_minimum(Z, shift)
    return {"value": frac(r.value), "witness": vector_json(r.witness), "trivial": r.trivial}, False


def cmd_scan(args, out):
    lo = args.m_min if args.m_min is not None else args.n
    records = []
    for m in range(lo, args.m_max + 1):
        cat = covering.lgp_catalog(args.n, m, args.bound)
        records += covering.scan_conjecture_mu(cat, args.tol, threads=args.threads)
    lines = [dumps(r.to_json()) for r in records]
    out.write("".join(line + "\n" for line in lines))
    return None, any(r.result.budget_exceeded for r in records)


def cmd_threshold(args):
    u0 = parse_rational_list(args.u0, "u0")
    alpha = parse_direction(args.alpha)
    out = {}
    if args.route in ("time", "both"):
        inst = dynamics.MotionInstance(u0, alpha)
        out["time"] = gap_json(dynamics.obstruction_threshold_time_domain(inst))
    if args.route in ("zonotope", "both"):
        out["zonotope"] = gap_json(dynamics.obstruction_threshold_zonotope(alpha, u0))
    if args.route == "both":
        if out["time"]["epsilon_star"] != out["zonotope"]["epsilon_star"]:
            raise CrossCheckFailure(f"routes disagree: {out}")
        return out, False
    return out[args.route], False


def cmd_gap(args):
    return gap_json(dynamics.lonely_runner_gap(_ints(args.v, "v"))), False


def cmd_equiv(args):
    insts = dynamics.random_instances(args.count, args.m_max, args.den_max, args.seed)
    records, bad = dynamics.equivalence_harness(insts, args.threads)
    out = {"instances": len(records), "discrepancies": len(bad), "seed": args.seed,
           "details": [{"u0": vector_json(r.instance.u0), "alpha": vector_json(r.instance.alpha),
                        "time": gap_json(r.time_domain), "zonotope": gap_json(r.zonotope)}
                       for r in bad]}
    if bad:
        raise CrossCheckFailure(dumps(out))
    return out, False


def cmd_explore(args):
    table = dynamics.epsilon_explorer(args.n_max, args.m_max, args.bound, args.tol,
                                      args.max_instances, args.checkpoint, args.threads,
                                      covering.FlatnessConfig(args.flt_constant))
    entries = []
    for (n, m), e in sorted(table.entries.items()):
        entries.append({"n": n, "m": m, "eps_lower": frac(e.eps_lower), "eps_upper": frac(e.eps_upper),
                        "proven_upper": frac(e.proven_upper), "flatness_lower": frac(e.flatness_lower),
                        "conjectured": frac(e.conjectured), "partial": e.partial})
    return {"entries": entries, "partial": table.partial}, table.partial


def cmd_lrc(args):
    r = dynamics.zonotopal_lrc_check(_ints(args.v, "v"))
    return {"velocities": list(r.velocities), "n": r.n, "lambda1": frac(r.lambda1),
            "witness": vector_json(r.witness), "gap": frac(r.gap),
            "bound_schoenberg": frac(r.bound_schoenberg), "bound_conjectured": frac(r.bound_conjectured),
            "schoenberg_ok": r.schoenberg_ok, "conjecture_ok": r.conjecture_ok}, False


def cmd_zonotope(args):
    alpha = parse_direction(args.direction)
    ds = direction.build_direction_system(alpha)
    za, zp = direction.zonotope_pair(ds, strict=False)
    out = {"alpha": direction_to_json(ds.alpha), "m": ds.m, "n": ds.n,
           "dim_q": direction.dim_q(ds.alpha), "A": [list(r) for r in ds.A],
           "Aperp": [list(r) for r in ds.Aperp],
           "rationally_uniform": direction.is_rationally_uniform(ds.alpha)}
    for name, Z in (("Z_alpha", za), ("Z_perp", zp)):
        if Z is None:
            out[name] = None
            continue
        w = zonotope.lattice_width(Z)
        out[name] = {"generators": [list(g) for g in Z.generators], "lgp": zonotope.is_lgp(Z),
                     "width": w.value, "width_direction": list(w.direction),
                     "volume": zonotope.volume(Z)}
    return out, False


def cmd_plot(args, out):
    if args.kind == "mu-vs-bound":
        rows = []
        for g in args.generators:
            Z = zonotope.LatticeZonotope(parse_generators(g))
            r = covering.covering_radius(Z)
            mu = r.value if r.kind == "exact" else r.upper
            rows.append((Z.n, Z.m, mu, Fraction(Z.n, Z.m)))
        if args.input:
            with open(args.input) as fh:
                for line in fh:
                    if line.strip():
                        d = json.loads(line)
                        mu = d["mu"] if "mu" in d else d["interval"][1]
                        rows.append((d["n"], d["m"], Fraction(mu), Fraction(d["bound"])))
        out.write(emit_plot_data(rows, args.kind))
    elif args.kind in ("envelope", "trajectory"):
        inst = _motion(args)
        if args.kind == "envelope":
            out.write(emit_plot_data(dynamics.envelope_rows(inst), args.kind))
        else:
            out.write(emit_plot_data(dynamics.trajectory_rows(inst), args.kind, inst.m))
    else:
        emit_plot_data([], args.kind)
    return None, False


COMMANDS = {"mu": cmd_mu, "width": cmd_width, "lambda1": cmd_lambda1, "threshold": cmd_threshold,
            "gap": cmd_gap, "equiv-check": cmd_equiv, "explore-eps": cmd_explore,
            "lrc-zono": cmd_lrc, "zonotope": cmd_zonotope}
STREAMING = {"scan-mu": cmd_scan, "plot": cmd_plot}


def run(args, out):
    """Execute a parsed command, writing to ``out``; returns the exit status."""
    try:
        if args.command in STREAMING:
            _, partial = STREAMING[args.command](args, out)
        else:
            result, partial = COMMANDS[args.command](args)
            out.write(dumps(result) + "\n")
    except CrossCheckFailure as e:
        print(f"cross-check failure: {e}", file=sys.stderr)
        return 3
    except (ZonoError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 2 if partial else 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.output:
        with open(args.output, "w") as fh:
            return run(args, fh)
    return run(args, sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
